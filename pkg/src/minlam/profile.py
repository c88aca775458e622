"""Scalar parameters and the pinched strip domains the immersions live on.

The strip at level k is ``{x + iy : |y| <= Y(x)}`` where the half-height
``Y(x) = eps * (d(x)^2 + a_k^2)^(5/4)`` pinches near the level-k net points
(d is the distance to the cumulative net).  ``Params`` carries every scalar
knob plus the derived constants used by the radius machinery; construction
validates the full constraint chain and names the first inequality that
fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log, sqrt

import numpy as np

from .compactset import NetHierarchy, closest_net_point
from .errors import GridError, ValidationError


def oscillation_constants(eps: float):
    """Sharp constants for the vertical/horizontal derivative bounds.

    c1 bounds the horizontal-component derivative, c2 the vertical one; both
    come from the real/imaginary split of the squared kernel denominator.
    """
    a = (1 - eps**2) ** 2 - 4 * eps**2
    if a <= 0:
        raise ValidationError("eps too large: (1-eps^2)^2 - 4 eps^2 must stay positive")
    return 4.0 / a**2, a / (1 + 16 * eps**2)


def growth_threshold(alpha: float, eps: float, c2: float) -> float:
    """Largest xi* <= 1 such that xi^(5/3) * exp(eps*c2/(2 xi)) >= xi^-alpha
    for every xi <= xi*.

    Computed by bisection on g(xi) = (5/3 + alpha) log xi + eps*c2/(2 xi);
    the threshold is the smaller root of g when g dips below zero.
    """
    b = 0.5 * eps * c2
    p = 5.0 / 3.0 + alpha
    g = lambda x: p * log(x) + b / x
    x_min = b / p
    if x_min >= 1.0 or g(x_min) >= 0:
        return 1.0
    lo = x_min
    while g(lo) < 0:
        lo /= 10.0
        if lo < 1e-300:
            raise ValidationError("growth threshold underflow")
    hi = x_min
    for _ in range(200):
        mid = sqrt(lo * hi)
        if g(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class Params:
    """All scalar parameters of a construction run, plus derived constants.

    The growth scale of the concentrator weights is mu; gamma sets the net
    separation; the pinch sequence is ``a_k = a_coeff * a_base**-k`` (with
    a_base defaulting to gamma, so a_k <= gamma**-k).
    """

    gamma: float = 2.0
    mu: float = 2.5
    sigma: float = 0.1
    alpha: float = 30.0
    eps: float = 0.05
    a_coeff: float = 0.5
    a_base: float = None
    check: bool = True

    # derived, filled in __post_init__
    c1: float = field(init=False, default=0.0)
    c2: float = field(init=False, default=0.0)
    c1prime: float = field(init=False, default=0.0)
    delta_alpha: float = field(init=False, default=0.0)
    c0: float = field(init=False, default=0.0)
    tau: float = field(init=False, default=0.0)

    def __post_init__(self):
        if self.a_base is None:
            object.__setattr__(self, "a_base", float(self.gamma))
        c1, c2 = oscillation_constants(self.eps)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        if self.mu > self.gamma and self.mu > 1:
            c1p = c1 * (self.mu / (self.mu - self.gamma) + self.mu / (self.mu - 1))
        else:
            c1p = float("inf")
        object.__setattr__(self, "c1prime", c1p)
        delta = growth_threshold(self.alpha, self.eps, c2)
        object.__setattr__(self, "delta_alpha", delta)
        object.__setattr__(self, "c0", delta ** (2.0 / 3.0) / sqrt(2.0))
        object.__setattr__(
            self, "tau", self.mu ** ((2.0 / 3.0) * (1 + self.sigma)) / self.gamma
        )
        if self.check:
            self.validate()

    def validate(self):
        g, m, s = self.gamma, self.mu, self.sigma
        if not g > 1:
            raise ValidationError("must satisfy gamma > 1")
        if not s > 0:
            raise ValidationError("must satisfy sigma > 0")
        if not (m ** (2 / 3) < m ** ((1 + s) * 2 / 3) < g < m < g**3):
            raise ValidationError(
                "must satisfy mu**(2/3) < mu**((1+sigma)*2/3) < gamma < mu < gamma**3"
            )
        if not self.alpha * s - 5.0 / 3.0 >= 1.0:
            raise ValidationError("must satisfy alpha*sigma - 5/3 >= 1")
        if not 0 < self.eps:
            raise ValidationError("must satisfy eps > 0")
        if not self.eps**2 * self.c1prime < 1:
            raise ValidationError("must satisfy eps**2 * c1prime < 1")
        if not (0 < self.a_coeff <= 1 and self.a_base >= g):
            raise ValidationError(
                "must satisfy 0 < a_coeff <= 1 and a_base >= gamma (so a_k <= gamma**-k)"
            )
        if not self.tau < 1:
            raise ValidationError("must satisfy tau = mu**(2/3*(1+sigma))/gamma < 1")

    def a(self, k: int) -> float:
        """Pinch half-width at level k."""
        return self.a_coeff * self.a_base ** (-float(k))

    def weight(self, level):
        """Concentrator weight mu**-level (vectorizes)."""
        return self.mu ** (-np.asarray(level, float))


def profile_height(p: float, a: float, eps: float, x):
    """Half-height contributed by one concentrator: eps*((x-p)^2 + a^2)^(5/4)."""
    if a <= 0 or eps <= 0:
        raise ValidationError("profile_height needs a > 0 and eps > 0")
    x = np.asarray(x, float)
    return eps * ((x - p) ** 2 + a * a) ** 1.25


@dataclass(frozen=True)
class DomainProfile:
    """Strip domain of one construction level: net + params + level index."""

    net: NetHierarchy
    params: Params
    k: int
    x_range: tuple = None

    def __post_init__(self):
        if not 0 <= self.k <= self.net.depth:
            raise ValidationError(f"level {self.k} not built (0..{self.net.depth})")
        if self.x_range is None:
            pad = 1.0 / self.net.gamma
            lo = float(self.net.points.min()) - pad
            hi = float(self.net.points.max()) + pad
            object.__setattr__(self, "x_range", (lo, hi))

    @property
    def a(self) -> float:
        return self.params.a(self.k)

    def level_points(self):
        """Cumulative net points and their weights mu**-e."""
        pts, lev = self.net.cumulative(self.k)
        return pts, self.params.weight(lev)


def strip_height(profile: DomainProfile, x):
    """Half-height of the strip at x: the minimum over all concentrator
    profiles, achieved at the nearest net point.

    Returns (height, achieving point, its admission level); vectorizes.
    """
    p, e = closest_net_point(profile.net, profile.k, x)
    x = np.asarray(x, float)
    a = profile.a
    y = profile.params.eps * ((x - p) ** 2 + a * a) ** 1.25
    return y, p, e


def domain_contains(profile: DomainProfile, z) -> np.ndarray:
    """Membership test |Im z| <= Y(Re z) (vectorizes; returns bool)."""
    z = np.asarray(z, complex)
    y, _, _ = strip_height(profile, z.real)
    return np.abs(z.imag) <= y


@dataclass(frozen=True)
class ParameterGrid:
    """Structured strip grid: column positions, row fractions, column heights.

    Row j of column i sits at ``x[i] + 1j*fractions[j]*heights[i]``.
    """

    xs: np.ndarray
    fractions: np.ndarray
    heights: np.ndarray

    @property
    def shape(self):
        return (len(self.fractions), len(self.xs))

    def points(self) -> np.ndarray:
        return self.xs[None, :] + 1j * self.fractions[:, None] * self.heights[None, :]

    def n_vertices(self) -> int:
        return len(self.fractions) * len(self.xs)


def _axis_derivative_magnitude(profile: DomainProfile, x):
    """|d/dz of the summed holomorphic data| on the real axis."""
    pts, wts = profile.level_points()
    a2 = profile.a ** 2
    x = np.asarray(x, float)
    return np.abs(
        ((x[:, None] - pts[None, :]) ** 2 + a2) ** -2.0 @ wts
    )


def sample_domain(
    profile: DomainProfile,
    nx: int,
    ny: int,
    kappa: float = None,
    max_points: int = 2_000_000,
    probe_resolution: int = 8192,
) -> ParameterGrid:
    """Column grid refined near the net points, rows at fixed height fractions.

    Columns are quantiles of the density max(1/base_spacing, |dH|/kappa), so
    the local spacing obeys ``dx <= min(base, kappa/|dH|)``.  Rows run from
    -Y(x) to +Y(x) in 2*ny+1 levels, so every node stays inside the strip.
    """
    if nx < 2 or ny < 1:
        raise GridError("need nx >= 2 and ny >= 1")
    lo, hi = profile.x_range
    base = (hi - lo) / (nx - 1)
    if kappa is None:
        xs = np.linspace(lo, hi, nx)
    else:
        probe = np.linspace(lo, hi, probe_resolution)
        dens = np.maximum(1.0 / base, _axis_derivative_magnitude(profile, probe) / kappa)
        cum = np.concatenate(
            [[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(probe))]
        )
        ncol = int(np.ceil(cum[-1])) + 1
        if ncol * (2 * ny + 1) > max_points:
            suggest = max_points // (2 * ny + 1)
            raise GridError(
                f"refinement needs {ncol} columns ({ncol*(2*ny+1)} nodes) "
                f"> max_points={max_points}; raise kappa or cap columns at ~{suggest}"
            )
        xs = np.interp(np.linspace(0.0, cum[-1], ncol), cum, probe)
    fractions = np.linspace(-1.0, 1.0, 2 * ny + 1)
    heights, _, _ = strip_height(profile, xs)
    return ParameterGrid(xs=xs, fractions=fractions, heights=heights)
