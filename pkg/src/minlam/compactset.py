"""Compact subsets of [0, 1] and their hierarchical separated nets.

A compact set is materialized as a sorted list of disjoint closed intervals
(isolated points are degenerate intervals).  On top of a materialized set we
build a hierarchy of levels: at level k a maximal subset of the set is chosen
whose points stay at least ``gamma**-k`` away from each other and from every
point admitted at earlier levels.  The construction is a deterministic greedy
left-to-right sweep, so rebuilding from the same specification is
bit-identical.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

_REL_TOL = 1e-12  # slack for >=-separation tests on binary-inexact endpoints


@dataclass(frozen=True)
class CompactSetSpec:
    """Declarative description of a compact subset of [0, 1].

    kind is one of ``points`` (finite sorted point list), ``intervals``
    (disjoint sorted closed intervals) or ``cantor`` (depth and ratio of a
    symmetric middle-removal construction).
    """

    kind: str
    points: tuple = ()
    intervals: tuple = ()
    depth: int = 0
    ratio: float = 0.0

    @staticmethod
    def from_points(pts) -> "CompactSetSpec":
        return CompactSetSpec(kind="points", points=tuple(float(p) for p in pts))

    @staticmethod
    def from_intervals(ivs) -> "CompactSetSpec":
        return CompactSetSpec(
            kind="intervals",
            intervals=tuple((float(a), float(b)) for a, b in ivs),
        )

    @staticmethod
    def cantor(depth: int, ratio: float = 1 / 3) -> "CompactSetSpec":
        return CompactSetSpec(kind="cantor", depth=int(depth), ratio=float(ratio))


class MaterializedSet:
    """Sorted disjoint closed intervals with O(log n) point-to-set distance."""

    def __init__(self, pieces):
        pieces = np.asarray(pieces, float).reshape(-1, 2)
        if pieces.size == 0:
            raise ValidationError("compact set is empty")
        if np.any(pieces[:, 0] > pieces[:, 1]):
            raise ValidationError("interval with lower bound above upper bound")
        order = np.argsort(pieces[:, 0], kind="stable")
        pieces = pieces[order]
        if np.any(pieces[1:, 0] <= pieces[:-1, 1]):
            raise ValidationError("intervals overlap or touch; they must be disjoint")
        if pieces[0, 0] < 0.0 or pieces[-1, 1] > 1.0:
            raise ValidationError("coordinates must lie in [0, 1]")
        self.pieces = pieces

    @property
    def hull(self):
        return float(self.pieces[0, 0]), float(self.pieces[-1, 1])

    def distance(self, x):
        """Distance from x (scalar or array) to the set."""
        x = np.asarray(x, float)
        lo, hi = self.pieces[:, 0], self.pieces[:, 1]
        i = np.searchsorted(lo, x, side="right") - 1
        i = np.clip(i, 0, len(lo) - 1)
        d_here = np.maximum(lo[i] - x, x - hi[i])
        j = np.clip(i + 1, 0, len(lo) - 1)
        d_next = np.maximum(lo[j] - x, x - hi[j])
        return np.maximum(np.minimum(d_here, d_next), 0.0)

    def sample(self, per_piece: int):
        """Deterministic sample: endpoints plus evenly spaced interior points."""
        out = []
        for lo, hi in self.pieces:
            if hi > lo:
                out.append(np.linspace(lo, hi, max(2, per_piece)))
            else:
                out.append(np.array([lo]))
        return np.unique(np.concatenate(out))


def materialize_set(spec: CompactSetSpec) -> MaterializedSet:
    """Turn a specification into sorted disjoint closed intervals."""
    if spec.kind == "points":
        pts = np.asarray(spec.points, float)
        if pts.size == 0:
            raise ValidationError("empty point list")
        if np.any(np.diff(pts) <= 0):
            raise ValidationError("point list must be strictly increasing")
        return MaterializedSet(np.column_stack([pts, pts]))
    if spec.kind == "intervals":
        return MaterializedSet(np.asarray(spec.intervals, float))
    if spec.kind == "cantor":
        if spec.depth < 1:
            raise ValidationError("cantor depth must be a positive integer")
        if not 0.0 < spec.ratio < 0.5:
            raise ValidationError("cantor ratio must lie in (0, 1/2)")
        pieces = [(0.0, 1.0)]
        for _ in range(spec.depth):
            r = spec.ratio
            pieces = [
                seg
                for a, b in pieces
                for seg in ((a, a + (b - a) * r), (b - (b - a) * r, b))
            ]
        return MaterializedSet(np.asarray(pieces))
    raise ValidationError(f"unknown set kind {spec.kind!r}")


@dataclass
class NetHierarchy:
    """Layered maximal separated subsets of a compact set.

    ``levels[k]`` holds the points admitted at level k (sorted);
    ``points``/``point_levels`` hold the cumulative set, globally sorted.
    """

    gamma: float
    levels: list = field(default_factory=list)
    points: np.ndarray = None
    point_levels: np.ndarray = None

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def cumulative(self, k: int):
        """Sorted points of all levels up to k, with their admission levels."""
        if not 0 <= k <= self.depth:
            raise ValidationError(f"level {k} outside built range 0..{self.depth}")
        mask = self.point_levels <= k
        return self.points[mask], self.point_levels[mask]

    def separation(self, k: int) -> float:
        return float(self.gamma) ** (-k)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_csv_text())

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("k,point,e\n")
        for p, e in zip(self.points, self.point_levels):
            buf.write(f"{int(e)},{p!r},{int(e)}\n")
        return buf.getvalue()


def build_nets(mat: MaterializedSet, gamma: float, K: int) -> NetHierarchy:
    """Greedy left-to-right construction of the net hierarchy.

    At every level the sweep admits the leftmost feasible point of each
    interval piece and then advances by the separation scale, skipping the
    exclusion zones of already admitted points.
    """
    if gamma <= 1:
        raise ValidationError("gamma must exceed 1")
    if K < 0:
        raise ValidationError("level count must be nonnegative")
    levels = []
    admitted = np.array([])  # sorted, all previous levels
    for k in range(K + 1):
        sep = float(gamma) ** (-k)
        new = []
        for lo, hi in mat.pieces:
            pos = lo
            while pos <= hi + _REL_TOL:
                nearest, dmin = None, np.inf
                if admitted.size:
                    i = np.searchsorted(admitted, pos)
                    for j in (i - 1, i):
                        if 0 <= j < admitted.size and abs(admitted[j] - pos) < dmin:
                            dmin = abs(admitted[j] - pos)
                            nearest = admitted[j]
                if new and abs(new[-1] - pos) < dmin:
                    dmin = abs(new[-1] - pos)
                    nearest = new[-1]
                if dmin >= sep * (1 - _REL_TOL):
                    new.append(min(pos, hi))
                    pos += sep
                else:
                    # jump past the blocking exclusion zone
                    pos = nearest + sep
        arr = np.asarray(new)
        levels.append(arr)
        if arr.size:
            admitted = np.sort(np.concatenate([admitted, arr]))
    pts = np.concatenate([l for l in levels if l.size] or [np.array([])])
    lev = np.concatenate(
        [np.full(l.size, k, dtype=np.int64) for k, l in enumerate(levels)]
        or [np.array([], dtype=np.int64)]
    )
    order = np.argsort(pts, kind="stable")
    return NetHierarchy(
        gamma=float(gamma),
        levels=levels,
        points=pts[order],
        point_levels=lev[order],
    )


def closest_net_point(net: NetHierarchy, k: int, x):
    """Closest cumulative net point at level k; two-way ties pick the smaller.

    Returns ``(p, e)`` where e is the admission level of p (e <= k).
    Vectorizes over x.
    """
    pts, lev = net.cumulative(k)
    x = np.asarray(x, float)
    scalar = x.ndim == 0
    xv = np.atleast_1d(x)
    i = np.searchsorted(pts, xv)
    left = np.clip(i - 1, 0, len(pts) - 1)
    right = np.clip(i, 0, len(pts) - 1)
    dl = np.abs(xv - pts[left])
    dr = np.abs(xv - pts[right])
    take_left = dl <= dr  # tie resolves to the smaller point
    idx = np.where(take_left, left, right)
    p, e = pts[idx], lev[idx]
    if scalar:
        return float(p[0]), int(e[0])
    return p, e


def audit_nets(net: NetHierarchy, mat: MaterializedSet, samples_per_piece: int = 64):
    """Check separation, cardinality, coverage and maximality per level.

    Returns a list of certificate dictionaries (claim, level, margin, passed,
    witness); the verification report consumes these directly.
    """
    entries = []
    gamma = net.gamma
    sample = mat.sample(samples_per_piece)
    for k in range(net.depth + 1):
        sep = net.separation(k)
        mk = net.levels[k]
        prev_pts, _ = net.cumulative(k - 1) if k > 0 else (np.array([]), None)

        # pairwise separation within the level and against earlier levels
        margin = np.inf
        witness = None
        if mk.size > 1:
            gaps = np.diff(mk)
            j = int(np.argmin(gaps))
            if gaps[j] - sep < margin:
                margin = gaps[j] - sep
                witness = (float(mk[j]), float(mk[j + 1]))
        if mk.size and prev_pts.size:
            d = np.abs(mk[:, None] - prev_pts[None, :])
            j, i = np.unravel_index(np.argmin(d), d.shape)
            if d[j, i] - sep < margin:
                margin = d[j, i] - sep
                witness = (float(mk[j]), float(prev_pts[i]))
        entries.append(
            dict(
                claim="net.separation",
                level=k,
                margin=float(margin) if np.isfinite(margin) else sep,
                passed=bool(margin >= -sep * _REL_TOL) if np.isfinite(margin) else True,
                witness=witness,
            )
        )

        bound = gamma**k + 1
        entries.append(
            dict(
                claim="net.cardinality",
                level=k,
                margin=float(bound - mk.size),
                passed=bool(mk.size <= bound + 1e-9),
                witness=int(mk.size),
            )
        )

        pts, _ = net.cumulative(k)
        d = np.min(np.abs(sample[:, None] - pts[None, :]), axis=1)
        j = int(np.argmax(d))
        entries.append(
            dict(
                claim="net.coverage",
                level=k,
                margin=float(sep - d[j]),
                passed=bool(d[j] < sep),
                witness=float(sample[j]),
            )
        )
        # maximality is the same predicate seen from the other side: a sample
        # point at distance >= sep from the whole level stack is admissible,
        # so the level was not maximal
        entries.append(
            dict(
                claim="net.maximality",
                level=k,
                margin=float(sep - d[j]),
                passed=bool(d[j] < sep * (1 + _REL_TOL)),
                witness=float(sample[j]) if d[j] >= sep else None,
            )
        )
    return entries
