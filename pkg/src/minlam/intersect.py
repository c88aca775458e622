"""Triangle-mesh self-intersection detection.

Broad phase: uniform spatial hash over triangle bounding boxes.  Narrow
phase: vectorized interval-overlap triangle-triangle test (plane-distance
signs, then projection of the two plane-crossing segments onto the
intersection line).  Pairs sharing a mesh vertex index are skipped, exact
single-point touching counts as separated, coplanar overlaps are resolved
by a 2-d separating-axis test.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


def tri_tri_intersections(t1, t2, eps=1e-12):
    """Pairwise intersection test of triangle arrays t1, t2: (n, 3, 3).

    Returns (hit, coplanar_overlap) boolean arrays of shape (n,).
    """
    t1 = np.asarray(t1, float)
    t2 = np.asarray(t2, float)
    n2 = np.cross(t2[:, 1] - t2[:, 0], t2[:, 2] - t2[:, 0])
    d2 = -np.einsum("ij,ij->i", n2, t2[:, 0])
    dv = np.einsum("ij,ikj->ik", n2, t1) + d2[:, None]
    sc = np.abs(dv).max(1) + 1e-300
    dv = np.where(np.abs(dv) < eps * sc[:, None], 0.0, dv)

    n1 = np.cross(t1[:, 1] - t1[:, 0], t1[:, 2] - t1[:, 0])
    d1 = -np.einsum("ij,ij->i", n1, t1[:, 0])
    du = np.einsum("ij,ikj->ik", n1, t2) + d1[:, None]
    sc = np.abs(du).max(1) + 1e-300
    du = np.where(np.abs(du) < eps * sc[:, None], 0.0, du)

    coplanar = np.all(dv == 0, 1)
    sep = (
        np.all(dv >= 0, 1) | np.all(dv <= 0, 1) | np.all(du >= 0, 1) | np.all(du <= 0, 1)
    ) & ~coplanar

    axis = np.argmax(np.abs(np.cross(n1, n2)), 1)
    pr1 = np.take_along_axis(t1, axis[:, None, None], 2)[:, :, 0]
    pr2 = np.take_along_axis(t2, axis[:, None, None], 2)[:, :, 0]

    def crossing_interval(pr, dist):
        # the vertex with the minority sign pins the two crossing edges
        npos = (dist > 0).sum(1)
        lone = np.where(npos == 1, np.argmax(dist > 0, 1), np.argmax(dist < 0, 1))
        order = np.stack([lone, (lone + 1) % 3, (lone + 2) % 3], 1)
        p = np.take_along_axis(pr, order, 1)
        d = np.take_along_axis(dist, order, 1)
        den1 = np.where(d[:, 0] == d[:, 1], 1e-300, d[:, 0] - d[:, 1])
        den2 = np.where(d[:, 0] == d[:, 2], 1e-300, d[:, 0] - d[:, 2])
        e1 = p[:, 0] + (p[:, 1] - p[:, 0]) * d[:, 0] / den1
        e2 = p[:, 0] + (p[:, 2] - p[:, 0]) * d[:, 0] / den2
        return np.minimum(e1, e2), np.maximum(e1, e2)

    a1, b1 = crossing_interval(pr1, dv)
    a2, b2 = crossing_interval(pr2, du)
    overlap = np.maximum(a1, a2) <= np.minimum(b1, b2)
    hit = ~sep & ~coplanar & overlap

    cop_hit = np.zeros(len(t1), bool)
    if coplanar.any():
        idx = np.flatnonzero(coplanar)
        cop_hit[idx] = _coplanar_overlap(t1[idx], t2[idx], n1[idx])
    return hit, cop_hit


def _coplanar_overlap(t1, t2, n):
    """2-d separating-axis test for coplanar triangle pairs."""
    drop = np.argmax(np.abs(n), 1)
    keep = np.stack([(drop + 1) % 3, (drop + 2) % 3], 1)
    a = np.take_along_axis(t1, keep[:, None, :], 2)
    b = np.take_along_axis(t2, keep[:, None, :], 2)
    out = np.ones(len(t1), bool)
    for tri_a, tri_b in ((a, b), (b, a)):
        for e in range(3):
            edge = tri_a[:, (e + 1) % 3] - tri_a[:, e]
            normal = np.stack([-edge[:, 1], edge[:, 0]], 1)
            ref = np.einsum("ij,ij->i", normal, tri_a[:, e])
            da = np.einsum("ij,ikj->ik", normal, tri_a) - ref[:, None]
            db = np.einsum("ij,ikj->ik", normal, tri_b) - ref[:, None]
            separated = (db.min(1) > da.max(1)) | (db.max(1) < da.min(1))
            out &= ~separated
    return out


class IntersectionScan(NamedTuple):
    n_intersections: int
    n_coplanar_overlaps: int
    n_candidate_pairs: int
    n_degenerate: int
    witness_pairs: np.ndarray  # (m, 2) first few offending triangle index pairs


def _within_bin_pairs(tid_sorted, starts, counts):
    """All unordered index pairs inside each hash bin, fully vectorized."""
    n = len(tid_sorted)
    binid = np.repeat(np.arange(len(starts)), counts)
    rank = np.arange(n) - starts[binid]
    total = int(rank.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    first = np.repeat(tid_sorted, rank)
    gpos = np.arange(n)
    seg_start = np.repeat(gpos - rank, rank)
    offset = np.arange(total) - np.repeat(np.concatenate([[0], np.cumsum(rank)[:-1]]), rank)
    second = tid_sorted[seg_start + offset]
    return first, second


def mesh_self_intersections(vertices, triangles, cell_quantile=0.9,
                            cell_scale=1.5, max_witness=16) -> IntersectionScan:
    """Scan a triangle mesh for intersecting non-adjacent triangle pairs.

    Degenerate (zero-area) triangles are excluded and counted.
    """
    v = np.asarray(vertices, float)
    t = np.asarray(triangles, np.int64)
    tv = v[t]
    areas = np.linalg.norm(np.cross(tv[:, 1] - tv[:, 0], tv[:, 2] - tv[:, 0]), axis=1)
    good = areas > 0
    n_degen = int((~good).sum())
    orig_index = np.flatnonzero(good)
    t = t[good]
    tv = tv[good]
    if len(t) < 2:
        return IntersectionScan(0, 0, 0, n_degen, np.zeros((0, 2), np.int64))

    bmin = tv.min(1)
    bmax = tv.max(1)
    ext = (bmax - bmin).max(1)
    cell = cell_scale * max(np.quantile(ext, cell_quantile), 1e-12)
    gmin = bmin.min(0)
    lo = np.floor((bmin - gmin) / cell).astype(np.int64)
    hi = np.floor((bmax - gmin) / cell).astype(np.int64)
    span = hi - lo + 1

    # expand each triangle into the cells its box covers, grouped by span
    blocks_cells = []
    blocks_ids = []
    uniq_spans = np.unique(span, axis=0)
    for sx, sy, sz in uniq_spans:
        m = (span[:, 0] == sx) & (span[:, 1] == sy) & (span[:, 2] == sz)
        ids = np.flatnonzero(m)
        offs = np.stack(
            np.meshgrid(np.arange(sx), np.arange(sy), np.arange(sz), indexing="ij"), -1
        ).reshape(-1, 3)
        blocks_cells.append((lo[ids][:, None, :] + offs[None, :, :]).reshape(-1, 3))
        blocks_ids.append(np.repeat(ids, len(offs)))
    cells = np.concatenate(blocks_cells)
    tri_ids = np.concatenate(blocks_ids)

    key = cells[:, 0] * 73856093 ^ cells[:, 1] * 19349663 ^ cells[:, 2] * 83492791
    order = np.argsort(key, kind="stable")
    key_s = key[order]
    tid_s = tri_ids[order]
    newbin = np.concatenate([[True], key_s[1:] != key_s[:-1]])
    starts = np.flatnonzero(newbin)
    counts = np.diff(np.concatenate([starts, [len(key_s)]]))

    first, second = _within_bin_pairs(tid_s, starts, counts)
    pa = np.minimum(first, second)
    pb = np.maximum(first, second)
    packed = np.unique(pa * np.int64(len(t)) + pb)
    pa = packed // len(t)
    pb = packed % len(t)

    share = np.zeros(len(pa), bool)
    for i in range(3):
        for j in range(3):
            share |= t[pa, i] == t[pb, j]
    pa, pb = pa[~share], pb[~share]

    boxes_meet = np.all(bmin[pa] <= bmax[pb], 1) & np.all(bmin[pb] <= bmax[pa], 1)
    pa, pb = pa[boxes_meet], pb[boxes_meet]
    n_candidates = len(pa)

    n_hit = n_cop = 0
    witness = []
    batch = 500_000
    for s in range(0, len(pa), batch):
        hit, cop = tri_tri_intersections(tv[pa[s : s + batch]], tv[pb[s : s + batch]])
        n_hit += int(hit.sum())
        n_cop += int(cop.sum())
        if (hit | cop).any() and len(witness) < max_witness:
            for i in np.flatnonzero(hit | cop)[: max_witness - len(witness)]:
                witness.append(
                    (int(orig_index[pa[s + i]]), int(orig_index[pb[s + i]]))
                )
    return IntersectionScan(
        n_intersections=n_hit,
        n_coplanar_overlaps=n_cop,
        n_candidate_pairs=n_candidates,
        n_degenerate=n_degen,
        witness_pairs=np.asarray(witness or np.zeros((0, 2)), np.int64).reshape(-1, 2),
    )
