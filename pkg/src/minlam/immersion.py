"""Weierstrass-representation engine: surfaces, frames, curvature, meshes.

A surface is given by a nonvanishing holomorphic Gauss map g and a height
one-form phi on a simply connected domain; the immersion is the real part of
the contour integral of ``(1/2(1/g - g), i/2(1/g + g), 1) * phi``.  The two
classical references (helicoid, catenoid) are built in; the main instance
uses ``g = exp(i*H)`` with H a summed concentrator field, for which the
integrand reduces to ``(-i sin H, i cos H, 1) dz`` and the third coordinate
is just Re z.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .analytic import HolomorphicField
from .errors import DomainError, ValidationError
from .profile import ParameterGrid, strip_height
from .quadrature import integrate_path, integrate_segments


@dataclass(frozen=True)
class WeierstrassSurface:
    """Immersion data: variant kind, optional concentrator field, base point."""

    kind: str                      # "helicoid" | "catenoid" | "field"
    field: HolomorphicField = None
    base_point: complex = 0j

    @staticmethod
    def helicoid(base_point=0j) -> "WeierstrassSurface":
        return WeierstrassSurface(kind="helicoid", base_point=complex(base_point))

    @staticmethod
    def catenoid(base_point=1 + 0j) -> "WeierstrassSurface":
        z0 = complex(base_point)
        if z0 == 0:
            raise ValidationError("catenoid base point must avoid the puncture at 0")
        return WeierstrassSurface(kind="catenoid", base_point=z0)

    @staticmethod
    def from_field(field: HolomorphicField, base_point=0j) -> "WeierstrassSurface":
        z0 = complex(base_point)
        if z0.imag != 0:
            raise ValidationError("field-surface base point must lie on the real axis")
        return WeierstrassSurface(kind="field", field=field, base_point=z0)

    def angle_data(self, z, check_domain=True):
        """(U, V) with g = exp(i(U+iV)); defined for unit-|g|-on-axis kinds."""
        if self.kind == "helicoid":
            z = np.asarray(z, complex)
            return z.real, z.imag
        if self.kind == "field":
            h, _ = self.field.eval(z, check_domain=check_domain)
            return np.real(h), np.imag(h)
        raise ValidationError(f"{self.kind} surface has no angle form")


def gauss_map(surface: WeierstrassSurface, z, check_domain=True):
    """(g, dg/dz, phi) at z for the generic normal/curvature formulas."""
    z = np.asarray(z, complex)
    if surface.kind == "helicoid":
        g = np.exp(1j * z)
        return g, 1j * g, np.ones_like(z)
    if surface.kind == "catenoid":
        if np.any(z == 0):
            raise DomainError("catenoid is punctured at 0")
        return z, np.ones_like(z), 1.0 / z
    if surface.kind == "field":
        h, dh = surface.field.eval(z, check_domain=check_domain)
        g = np.exp(1j * h)
        return g, 1j * dh * g, np.ones_like(z)
    raise ValidationError(f"unknown surface kind {surface.kind!r}")


def immersion_integrand(surface: WeierstrassSurface):
    """Vector integrand of the representation: f(z) -> (3, n) complex.

    The real part of its path integral is the immersion offset.
    """
    if surface.kind in ("helicoid", "field"):

        def f(z):
            if surface.kind == "helicoid":
                h = np.asarray(z, complex)
            else:
                h, _ = surface.field.eval(z, check_domain=False)
            return np.stack([-1j * np.sin(h), 1j * np.cos(h), np.ones_like(h)])

        return f

    if surface.kind == "catenoid":

        def f(z):
            z = np.asarray(z, complex)
            inv2 = z**-2.0
            return np.stack([0.5 * (inv2 - 1.0), 0.5j * (inv2 + 1.0), 1.0 / z])

        return f
    raise ValidationError(f"unknown surface kind {surface.kind!r}")


def _canonical_waypoints(surface: WeierstrassSurface, z: complex):
    z0 = surface.base_point
    corner = complex(z.real, z0.imag)
    if surface.kind == "catenoid":
        # both legs must avoid the puncture at 0
        reals = sorted([z0.real, z.real])
        if reals[0] <= 0 <= reals[1] and z0.imag == 0:
            raise DomainError(
                "canonical path crosses the catenoid puncture; "
                "keep Re z on the base-point side of 0"
            )
        if corner == 0 or z == 0:
            raise DomainError("catenoid is punctured at 0")
    if surface.kind == "field":
        # vertical leg stays inside by y-convexity of the strip; the real
        # axis is always interior, so only the endpoint needs checking
        y, _, _ = strip_height(surface.field.profile, np.array([z.real]))
        if abs(z.imag) > y[0] * (1 + 1e-12):
            raise DomainError(f"point {z} outside the level-{surface.field.k} strip")
    return [z0, corner, z]


def analytic_height(surface: WeierstrassSurface, z):
    """Closed-form third coordinate (relative to the base point)."""
    z = np.asarray(z, complex)
    z0 = surface.base_point
    if surface.kind in ("helicoid", "field"):
        return z.real - z0.real
    if surface.kind == "catenoid":
        return np.log(np.abs(z)) - np.log(abs(z0))
    raise ValidationError(f"unknown surface kind {surface.kind!r}")


def immerse_point(surface: WeierstrassSurface, z, tol=1e-10, quadrature_x3=False):
    """Immerse one parameter point along the canonical two-leg path.

    The third coordinate is short-circuited analytically unless
    ``quadrature_x3`` asks for the integrated value (cross-check mode).
    """
    z = complex(z)
    wps = _canonical_waypoints(surface, z)
    f = immersion_integrand(surface)
    vals, _ = integrate_path(f, wps, tol=tol)
    out = np.real(vals)
    if not quadrature_x3:
        out[2] = analytic_height(surface, z)
    return out


def tangent_frame(surface: WeierstrassSurface, z, check_domain=True):
    """Coordinate tangent vectors from the angle form.

    dF/dx = (sinh V cos U, sinh V sin U, 1); dF/dy = (cosh V sin U,
    -cosh V cos U, 0).  Vectorizes; returns two (..., 3) arrays.
    """
    u, v = surface.angle_data(z, check_domain=check_domain)
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    dx = np.stack([np.sinh(v) * np.cos(u), np.sinh(v) * np.sin(u), np.ones_like(u)], -1)
    dy = np.stack([np.cosh(v) * np.sin(u), -np.cosh(v) * np.cos(u), np.zeros_like(u)], -1)
    return dx, dy


def _sech2(v):
    """1/cosh(v)^2 without overflow."""
    e = np.exp(-2.0 * np.abs(v))
    return 4.0 * e / (1.0 + e) ** 2


def gauss_data(surface: WeierstrassSurface, z, check_domain=True):
    """Unit normal and Gauss curvature at z (vectorizes).

    The field variant uses the specialization K = -|dH|^2 / cosh(V)^4, which
    is stable for large V; others use the generic formula.
    """
    z = np.asarray(z, complex)
    if surface.kind == "field":
        h, dh = surface.field.eval(z, check_domain=check_domain)
        u, v = np.real(h), np.imag(h)
        g = np.exp(1j * h)
        k = -((np.abs(dh) * _sech2(v)) ** 2)
    else:
        g, dg, phi = gauss_map(surface, z, check_domain=check_domain)
        k = -((4 * np.abs(dg) * np.abs(g)) / (np.abs(phi) * (1 + np.abs(g) ** 2) ** 2)) ** 2
    g2 = np.abs(g) ** 2
    n = np.stack([2 * np.real(g), 2 * np.imag(g), g2 - 1], -1) / (g2 + 1)[..., None]
    return n, k


@dataclass
class SurfaceMesh:
    """Triangulated immersion sample with per-vertex attributes."""

    vertices: np.ndarray       # (V, 3) float64
    params: np.ndarray         # (V, 2) parameter (x, y) per vertex
    triangles: np.ndarray      # (T, 3) int64, consistent orientation
    normals: np.ndarray        # (V, 3)
    gauss_curvature: np.ndarray  # (V,)
    grid_shape: tuple = dc_field(default=None)

    @property
    def n_vertices(self) -> int:
        return 0 if self.vertices is None else len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return 0 if self.triangles is None else len(self.triangles)

    @staticmethod
    def empty() -> "SurfaceMesh":
        return SurfaceMesh(
            vertices=np.zeros((0, 3)),
            params=np.zeros((0, 2)),
            triangles=np.zeros((0, 3), np.int64),
            normals=np.zeros((0, 3)),
            gauss_curvature=np.zeros(0),
            grid_shape=(0, 0),
        )


def build_mesh(surface: WeierstrassSurface, grid: ParameterGrid, tol=1e-10) -> SurfaceMesh:
    """Immerse a strip grid and triangulate it.

    Fibers are integrated cumulatively from the axis row, batched across all
    columns; the axis row itself is analytic for unit-modulus Gauss maps
    (its horizontal components vanish) and integrated once for the catenoid.
    """
    xs = np.asarray(grid.xs, float)
    fr = np.asarray(grid.fractions, float)
    if xs.size == 0 or fr.size == 0:
        return SurfaceMesh.empty()
    ncol, nrow = len(xs), len(fr)
    heights = np.asarray(grid.heights, float)
    zgrid = xs[None, :] + 1j * fr[:, None] * heights[None, :]
    j0 = int(np.argmin(np.abs(fr)))  # start fibers at the row nearest the axis

    f = immersion_integrand(surface)
    pos = np.zeros((nrow, ncol, 3))
    pos[:, :, 2] = analytic_height(surface, zgrid)

    # axis row: exactly on the vertical axis for unit-|g| kinds
    if surface.kind == "catenoid":
        order = np.argsort(xs, kind="stable")
        z0s = np.concatenate([[surface.base_point], xs[order][:-1] + 0j])
        seg, _ = integrate_segments(f, z0s, xs[order] + 0j, tol=tol, dtype=np.complex128)
        cum = np.cumsum(seg, axis=1)
        base = np.zeros((ncol, 2))
        base[order, 0] = cum[0].real
        base[order, 1] = cum[1].real
        if np.any(fr[j0] != 0):
            raise ValidationError("catenoid meshes need a y=0 row in the grid")
    else:
        base = np.zeros((ncol, 2))

    pos[j0, :, 0] = base[:, 0]
    pos[j0, :, 1] = base[:, 1]
    seg_tol = tol / max(1, nrow - 1)

    def deposit(row, acc):
        # the -i / +i factors live inside the integrand, so the offset is
        # just the real part of the complex path integral
        pos[row, :, 0] = base[:, 0] + acc[0].real
        pos[row, :, 1] = base[:, 1] + acc[1].real

    acc = np.zeros((3, ncol), complex)
    for j in range(j0, nrow - 1):
        seg, _ = integrate_segments(f, zgrid[j], zgrid[j + 1], tol=seg_tol)
        acc = acc + seg
        deposit(j + 1, acc)
    acc = np.zeros((3, ncol), complex)
    for j in range(j0, 0, -1):
        seg, _ = integrate_segments(f, zgrid[j], zgrid[j - 1], tol=seg_tol)
        acc = acc + seg
        deposit(j - 1, acc)

    flat = zgrid.reshape(-1)
    normals, curv = gauss_data(surface, flat, check_domain=False)
    vid = np.arange(nrow * ncol).reshape(nrow, ncol)
    a = vid[:-1, :-1].ravel()
    b = vid[:-1, 1:].ravel()
    c = vid[1:, :-1].ravel()
    d = vid[1:, 1:].ravel()
    tris = np.concatenate([np.stack([a, b, d], 1), np.stack([a, d, c], 1)]).astype(np.int64)
    return SurfaceMesh(
        vertices=pos.reshape(-1, 3),
        params=np.column_stack([flat.real, flat.imag]),
        triangles=tris,
        normals=normals.reshape(-1, 3),
        gauss_curvature=np.asarray(curv).reshape(-1),
        grid_shape=(nrow, ncol),
    )


def discrete_mean_curvature(mesh: SurfaceMesh):
    """Cotangent-Laplacian mean-curvature magnitude per vertex.

    Boundary vertices get nan.  Intended for order-of-magnitude minimality
    checks under refinement, not for tight tolerances.
    """
    v = mesh.vertices
    t = mesh.triangles
    nv = len(v)
    lap = np.zeros_like(v)
    wsum = np.zeros(nv)
    area = np.zeros(nv)
    corners = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    p = [v[t[:, i]] for i in range(3)]
    tri_area = 0.5 * np.linalg.norm(np.cross(p[1] - p[0], p[2] - p[0]), axis=1)
    for i, j, k in corners:
        e1 = p[j] - p[i]
        e2 = p[k] - p[i]
        cross = np.linalg.norm(np.cross(e1, e2), axis=1)
        cot = np.einsum("ij,ij->i", e1, e2) / np.maximum(cross, 1e-300)
        # cot at corner i weights edge (j, k)
        for a_, b_ in ((j, k), (k, j)):
            np.add.at(lap, t[:, a_], 0.5 * cot[:, None] * (v[t[:, b_]] - v[t[:, a_]]))
            np.add.at(wsum, t[:, a_], 0.5 * np.abs(cot))
        np.add.at(area, t[:, i], tri_area / 3.0)
    hvec = np.zeros_like(v)
    ok = area > 0
    hvec[ok] = lap[ok] / (2.0 * area[ok, None])
    hmag = np.linalg.norm(hvec, axis=1)
    # boundary detection: interior vertices of a split quad grid touch 6 tris
    count = np.zeros(nv, int)
    np.add.at(count, t.reshape(-1), 1)
    hmag[count < 6] = np.nan
    return hmag
