"""Holomorphic building blocks and the scalar radius machinery.

One concentrator at p with pinch width a contributes the antiderivative of
``((z-p)^2 + a^2)^-2`` (vanishing at p); the field of a construction level
sums these over all net points with weights ``mu**-level``.  The closed form
is the production path; an adaptive Gauss-Kronrod contour integral serves as
the independent oracle.  The radius machinery (offset scale, growth sum,
radius, recursion constants) quantifies how far each vertical fiber travels
before it can close up, which is what makes the immersions embeddings.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, log
from typing import NamedTuple

import numpy as np

from .compactset import NetHierarchy
from .errors import DomainError, ValidationError
from .profile import DomainProfile, Params, strip_height
from .quadrature import integrate_segments

_LOG_MAX = 709.0  # exp overflows above this


def kernel(a, z, dtype=np.complex128):
    """Field derivative of one concentrator: ((z)^2 + a^2)^-2 (offset applied
    by the caller)."""
    z = np.asarray(z, dtype)
    a = _real_like(a, dtype)
    return (z * z + a * a) ** -2.0


def _real_like(a, dtype):
    return np.clongdouble(a).real if dtype == np.clongdouble else float(a)


def _cut_guard(a, z, guard_tol):
    """True where z sits on (or indistinguishably close to) the vertical
    branch cuts {x = 0, |y| >= a} or the poles +-ia."""
    z = np.asarray(z, complex)
    return (np.abs(z.real) <= guard_tol * a) & (np.abs(z.imag) >= a * (1 - 1e-9))


def kernel_primitive(a, z, dtype=np.complex128, guard_tol=1e-12):
    """Closed-form antiderivative of ``(z^2+a^2)^-2`` vanishing at 0.

    Uses the principal branch of arctan; valid off the vertical cuts
    {it : |t| >= a}.  Verified against :func:`kernel_primitive_quadrature`.
    """
    if a <= 0:
        raise ValidationError("pinch width a must be positive")
    zc = np.asarray(z, complex)
    if np.any(_cut_guard(a, zc, guard_tol)):
        raise DomainError("evaluation point on or within tolerance of a branch cut or pole")
    z = np.asarray(z, dtype)
    ar = _real_like(a, dtype)
    w = z / ar
    return (w / (2 * (1 + w * w)) + np.arctan(w) / 2) / ar**3


def kernel_primitive_quadrature(a, z, tol=1e-13, dtype=np.clongdouble):
    """Contour-integral oracle for :func:`kernel_primitive`.

    Integrates the kernel along the canonical two-leg path (real axis first,
    then straight up), with adaptive Gauss-Kronrod refinement.  Extended
    precision by default: the closed form is checked below the double
    rounding floor.
    """
    if a <= 0:
        raise ValidationError("pinch width a must be positive")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype))
    zc = np.asarray(z, complex)
    if np.any(_cut_guard(a, zc, 1e-12)):
        raise DomainError("canonical path would run along a branch cut")
    ar = _real_like(a, dtype)

    def f(pts):
        return ((pts * pts + ar * ar) ** -2.0)[None, :]

    x = z.real.astype(dtype) + 0j
    legs0 = np.zeros_like(z)
    i1, _ = integrate_segments(f, legs0, x, tol=tol / 2, dtype=dtype)
    i2, _ = integrate_segments(f, x, z, tol=tol / 2, dtype=dtype)
    out = (i1 + i2)[0]
    return out[0] if scalar else out


def squared_denominator_parts(a, z):
    """Real part, imaginary part and squared modulus of ``(z^2+a^2)^2``.

    These drive the vertical-derivative bounds: du/dy = b/csq and
    dv/dy = d/csq for the single-concentrator field components.
    """
    z = np.asarray(z, complex)
    x, y = z.real, z.imag
    d = (x * x - y * y + a * a) ** 2 - 4 * x * x * y * y
    b = 4 * x * y * (x * x - y * y + a * a)
    return d, b, d * d + b * b


class HolomorphicField:
    """Summed concentrator field of one construction level.

    Evaluation returns both the field value (real on the real axis,
    positive imaginary part above it) and its complex derivative.
    """

    def __init__(self, net: NetHierarchy, params: Params, k: int, x_range=None):
        self.profile = DomainProfile(net=net, params=params, k=k, x_range=x_range)
        self.net = net
        self.params = params
        self.k = int(k)
        self.a = params.a(k)
        # per-level blocks, levels ascending, points ascending inside a level
        self.level_blocks = [
            (np.asarray(net.levels[l], float), params.weight(l))
            for l in range(k + 1)
            if net.levels[l].size
        ]
        pts, wts = self.profile.level_points()
        self.points = pts
        self.weights = wts
        # principal branch must be safe: the strip over each concentrator
        # stays strictly below the nearest cut start
        if not params.eps * self.a ** 1.5 < 1.0:
            raise ValidationError(
                "strip touches a branch cut: need eps * a**(3/2) < 1"
            )

    def eval(self, z, check_domain=True, dtype=np.complex128, compensated=True):
        """Field value and derivative at z (vectorizes; see field_eval)."""
        z = np.asarray(z, dtype)
        scalar = z.ndim == 0
        zv = np.atleast_1d(z)
        if check_domain:
            zc = np.asarray(zv, complex)
            y, _, _ = strip_height(self.profile, zc.real)
            bad = np.abs(zc.imag) > y * (1 + 1e-12)
            if bad.any():
                zb = zc[bad][0]
                raise DomainError(
                    f"point {zb} outside the level-{self.k} strip "
                    f"(|Im| > {y[bad][0]:.3e})"
                )
        ar = _real_like(self.a, dtype)
        h = np.zeros(zv.shape, dtype)
        dh = np.zeros(zv.shape, dtype)
        ch = np.zeros(zv.shape, dtype)
        cd = np.zeros(zv.shape, dtype)
        for pts, w in self.level_blocks:
            for p in pts:
                pz = zv - (np.clongdouble(p) if dtype == np.clongdouble else p)
                ww = pz / ar
                term = w * ((ww / (2 * (1 + ww * ww)) + np.arctan(ww) / 2) / ar**3)
                dterm = w * (pz * pz + ar * ar) ** -2.0
                if compensated:
                    h, ch = _kahan(h, ch, term)
                    dh, cd = _kahan(dh, cd, dterm)
                else:
                    h = h + term
                    dh = dh + dterm
        h = h + ch
        dh = dh + cd
        if scalar:
            return h[()], dh[()]
        return h, dh

    def axis_values(self, x, dtype=np.complex128):
        """Field value on the real axis (real there) and real derivative."""
        h, dh = self.eval(np.asarray(x, float) + 0j, check_domain=False, dtype=dtype)
        return np.real(h), np.real(dh)


def _kahan(s, c, v):
    t = s + v
    c = c + np.where(np.abs(s) >= np.abs(v), (s - t) + v, (v - t) + s)
    return t, c


def field_eval(field: HolomorphicField, z, check_domain=True, dtype=np.complex128):
    """Evaluate (H, dH) of the summed field at z."""
    return field.eval(z, check_domain=check_domain, dtype=dtype)


class OscillationBounds(NamedTuple):
    u_osc: np.ndarray      # max |U(x, y) - U(x, 0)| along the fiber
    v_min: np.ndarray      # min of V on the upper half of the fiber
    growth_sum: np.ndarray # the weighted sum driving the exponential growth


def oscillation_bounds(field: HolomorphicField, x, n_fiber=33) -> OscillationBounds:
    """Measured fiber oscillation/growth quantities at the columns x.

    The growth sum equals (Y(x)/eps) * dH(x) on the axis, which re-expresses
    the weighted concentrator sum of the vertical-derivative lower bound.
    """
    x = np.atleast_1d(np.asarray(x, float))
    y, _, _ = strip_height(field.profile, x)
    fr = np.linspace(0.0, 1.0, n_fiber)
    z = x[None, :] + 1j * fr[:, None] * y[None, :]
    h, _ = field.eval(z.reshape(-1), check_domain=False)
    h = h.reshape(z.shape)
    u_osc = np.abs(h.real - h.real[0]).max(axis=0)
    upper = fr >= 0.5
    v_min = h.imag[upper].min(axis=0)
    _, dax = field.axis_values(x)
    growth = y / field.params.eps * dax
    return OscillationBounds(u_osc=u_osc, v_min=v_min, growth_sum=growth)


class RadiusScalars(NamedTuple):
    offset_scale: np.ndarray  # ((x - p)^2 + a^2)^(3/4) for the nearest point p
    growth_sum: np.ndarray
    radius: np.ndarray        # (eps/2) * offset_scale^(5/3) * exp(...) ; inf on overflow
    log_radius: np.ndarray


def radius_scalars(field: HolomorphicField, x) -> RadiusScalars:
    """The three per-column scalars of the fiber-length lower bound.

    ``offset_scale**(5/3)`` equals the strip height divided by eps, so the
    radius is ``height/2 * exp(eps*c2/2 * growth_sum)``.  The log form is
    always finite and is what the dichotomy certificates compare.
    """
    pars = field.params
    x = np.atleast_1d(np.asarray(x, float))
    y, p, _ = strip_height(field.profile, x)
    a = field.a
    s = ((x - p) ** 2 + a * a) ** 0.75
    _, dax = field.axis_values(x)
    q = y / pars.eps * dax
    log_r = np.log(pars.eps / 2) + (5.0 / 3.0) * np.log(s) + 0.5 * pars.eps * pars.c2 * q
    r = np.where(log_r > _LOG_MAX, np.inf, np.exp(np.minimum(log_r, _LOG_MAX)))
    return RadiusScalars(offset_scale=s, growth_sum=q, radius=r, log_radius=log_r)


def log_growth_factor(params: Params, xi):
    """log of xi^(5/3) * exp(eps*c2/(2 xi)): the fiber growth factor."""
    xi = np.asarray(xi, float)
    return (5.0 / 3.0) * np.log(xi) + 0.5 * params.eps * params.c2 / xi


def growth_threshold_margin(params: Params, n=2000):
    """Min over a log grid below the threshold of log(growth) + alpha*log(xi).

    Nonnegative margin certifies the power-law domination on (0, delta].
    """
    d = params.delta_alpha
    xi = np.geomspace(d * 1e-6, d, n)
    g = log_growth_factor(params, xi) + params.alpha * np.log(xi)
    return float(g.min())


class RadiusRecursion(NamedTuple):
    thetas: np.ndarray             # exponents, k = 1..K
    log_factors: np.ndarray        # log c_k, k = 1..K
    log_partial_products: np.ndarray
    log_product: float             # log prod_{k<=K} c_k
    tail_bound: float              # bound on |sum_{k>K} log c_k|
    big_c: float                   # instantiated constant in 1-theta_k <= c*tau^k
    product: float                 # float value; 0.0 when it underflows


def radius_recursion(params: Params, K: int) -> RadiusRecursion:
    """Per-level recursion constants and the (log-space) infinite product.

    theta_k is the worst-case ratio of consecutive strip heights raised to
    5/4; c_k combines it with the penalty for the exponent deficit.  The
    partial products converge to a positive limit; at desk scale the value
    usually underflows double precision, so everything is kept in logs.
    """
    if params.tau >= 1:
        raise ValidationError("radius recursion needs tau < 1")
    if K < 1:
        raise ValidationError("need at least one level")
    tau, c0, g, mu = params.tau, params.c0, params.gamma, params.mu
    ks = np.arange(1, K + 1, dtype=float)
    a_fac = c0**-2 * g**-2
    b_fac = g / c0
    thetas = (
        1.0 / (1.0 + a_fac * tau ** (2 * (ks - 1)))
        / (1.0 + b_fac * tau**ks) ** 2
    ) ** 1.25
    big_c = float(np.max((1.0 - thetas) / tau**ks))
    log_base = (
        log(params.eps / 2)
        + 2.5 * log(c0)
        - (5.0 / 3.0) * (1 + params.sigma) * ks * log(mu)
    )
    log_factors = np.log(thetas) + big_c * tau**ks * log_base
    log_partials = np.cumsum(log_factors)
    # tail: |log theta_l| <= 5/4*(A tau^(2(l-1)) + 2B tau^l); exponent part
    # is c*tau^l*(|D| + E l) with D,E from log_base
    d_abs = abs(log(params.eps / 2) + 2.5 * log(c0))
    e_lin = (5.0 / 3.0) * (1 + params.sigma) * log(mu)
    t = tau
    tail = 1.25 * (a_fac * t ** (2 * K) / (1 - t * t) + 2 * b_fac * t ** (K + 1) / (1 - t))
    tail += big_c * (
        d_abs * t ** (K + 1) / (1 - t)
        + e_lin * t ** (K + 1) * ((K + 1) - K * t) / (1 - t) ** 2
    )
    log_product = float(log_partials[-1])
    product = exp(log_product) if log_product > -745 else 0.0
    return RadiusRecursion(
        thetas=thetas,
        log_factors=log_factors,
        log_partial_products=log_partials,
        log_product=log_product,
        tail_bound=float(tail),
        big_c=big_c,
        product=product,
    )
