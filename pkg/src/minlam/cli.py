"""Single entry point: config in, nets/meshes/traces/report out.

Subcommands: ``build`` makes meshes (plus net and trace tables), ``verify``
runs the selected certificates, ``sweep`` runs the scaling-law sweeps.  The
exit code of a verification run equals the number of failed certificates
(capped).  Config values can be overridden by MINLAM_* environment variables
and then by command-line flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import meshio, verify
from .analytic import HolomorphicField, radius_recursion, radius_scalars
from .compactset import (
    CompactSetSpec,
    audit_nets,
    build_nets,
    materialize_set,
)
from .errors import MinlamError, ValidationError
from .immersion import WeierstrassSurface, build_mesh
from .profile import Params, sample_domain

_ENV_PREFIX = "MINLAM_"
_DEFAULT_CERTIFICATES = ("nets", "planes", "fiber", "radius", "blowup", "bounded",
                         "spiral-endpoint", "embedding", "cauchy")
_EXIT_CAP = 100


@dataclass
class RunConfig:
    set_spec: CompactSetSpec
    params: Params
    levels: int = 2
    seed: int = 20260809
    out: str = "out"
    nx: int = 128
    ny: int = 8
    kappa: float = 0.5
    max_points: int = 2_000_000
    quad_tol: float = 1e-10
    plane_tol: float = 1e-9
    certificates: tuple = _DEFAULT_CERTIFICATES
    census_k: int = 12
    census_ladder: tuple = (3, 4, 5, 6, 7, 8)
    census_limit_endpoint: float = None
    cauchy_levels: tuple = (4, 5, 6, 7, 8)
    bounded_delta: float = 0.1
    blowup_a_values: tuple = (1e-1, 1e-2, 1e-3)
    radius_grid: int = 512
    radius_levels: int = None  # defaults to `levels`


def _load_set(table) -> CompactSetSpec:
    kind = table.get("kind")
    if kind == "points":
        return CompactSetSpec.from_points(table["points"])
    if kind == "intervals":
        return CompactSetSpec.from_intervals(table["intervals"])
    if kind == "cantor":
        return CompactSetSpec.cantor(table["depth"], table.get("ratio", 1 / 3))
    raise ValidationError(f"config [set] kind must be points/intervals/cantor, got {kind!r}")


def load_config(path, env=None) -> RunConfig:
    env = os.environ if env is None else env
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    spec = _load_set(doc.get("set", {}))
    pt = doc.get("params", {})
    params = Params(
        gamma=pt.get("gamma", 2.0),
        mu=pt.get("mu", 2.5),
        sigma=pt.get("sigma", 0.1),
        alpha=pt.get("alpha", 30.0),
        eps=pt.get("eps", 0.05),
        a_coeff=pt.get("a_coeff", 0.5),
        a_base=pt.get("a_base"),
    )
    run = doc.get("run", {})
    grid = doc.get("grid", {})
    tols = doc.get("tolerances", {})
    certs = doc.get("certificates", {})
    census = doc.get("census", {})
    cauchy = doc.get("cauchy", {})
    cfg = RunConfig(
        set_spec=spec,
        params=params,
        levels=int(run.get("levels", 2)),
        seed=int(run.get("seed", 20260809)),
        out=run.get("out", "out"),
        nx=int(grid.get("nx", 128)),
        ny=int(grid.get("ny", 8)),
        kappa=float(grid.get("kappa", 0.5)),
        max_points=int(grid.get("max_points", 2_000_000)),
        quad_tol=float(tols.get("quad_tol", 1e-10)),
        plane_tol=float(tols.get("plane_tol", 1e-9)),
        certificates=tuple(certs.get("run", _DEFAULT_CERTIFICATES)),
        census_k=int(census.get("k", 12)),
        census_ladder=tuple(census.get("ladder", (3, 4, 5, 6, 7, 8))),
        census_limit_endpoint=census.get("limit_endpoint"),
        cauchy_levels=tuple(cauchy.get("levels", (4, 5, 6, 7, 8))),
        bounded_delta=float(doc.get("bounded", {}).get("delta", 0.1)),
        blowup_a_values=tuple(doc.get("blowup", {}).get("a_values", (1e-1, 1e-2, 1e-3))),
        radius_grid=int(doc.get("radius", {}).get("grid", 512)),
        radius_levels=doc.get("radius", {}).get("levels"),
    )
    if _ENV_PREFIX + "SEED" in env:
        cfg.seed = int(env[_ENV_PREFIX + "SEED"])
    if _ENV_PREFIX + "OUT" in env:
        cfg.out = env[_ENV_PREFIX + "OUT"]
    if _ENV_PREFIX + "LEVELS" in env:
        cfg.levels = int(env[_ENV_PREFIX + "LEVELS"])
    if _ENV_PREFIX + "CERTIFICATES" in env:
        cfg.certificates = tuple(
            s for s in env[_ENV_PREFIX + "CERTIFICATES"].split(",") if s
        )
    return cfg


def export_mesh(mesh, fmt, path):
    """Write a mesh as OBJ, binary PLY or a CSV vertex dump."""
    fmt = fmt.lower()
    if fmt == "obj":
        meshio.write_obj(mesh, path)
    elif fmt == "ply":
        meshio.write_ply(mesh, path)
    elif fmt == "csv":
        meshio.write_mesh_csv(mesh, path)
    else:
        raise ValidationError(f"unknown mesh format {fmt!r} (obj/ply/csv)")


def _complement_intervals(mat, pad):
    """Bounded gaps of the set inside the padded hull, widest first."""
    gaps = []
    pieces = mat.pieces
    for a, b in zip(pieces[:-1, 1], pieces[1:, 0]):
        gaps.append((float(a), float(b)))
    lo, hi = mat.hull
    gaps.append((float(hi), float(hi + pad)))
    gaps.sort(key=lambda g: g[1] - g[0], reverse=True)
    return gaps


class Pipeline:
    """Builds the construction stack once and runs the requested stages."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.mat = materialize_set(config.set_spec)
        depth_needed = max(
            config.levels,
            config.census_k if self._wants("spiral-endpoint", "spiral-slabs") else 0,
            max(config.cauchy_levels) + 1 if self._wants("cauchy") else 0,
        )
        self.net = build_nets(self.mat, config.params.gamma, depth_needed)
        pad = 1.0 / config.params.gamma
        lo, hi = self.mat.hull
        self.x_range = (lo - pad, hi + pad)
        self.out = Path(config.out)

    def _wants(self, *names):
        return any(n in self.config.certificates for n in names)

    def field(self, k) -> HolomorphicField:
        return HolomorphicField(self.net, self.config.params, k, x_range=self.x_range)

    def surface(self, k) -> WeierstrassSurface:
        return WeierstrassSurface.from_field(self.field(k))

    def mesh(self, k):
        cfg = self.config
        fld = self.field(k)
        grid = sample_domain(
            fld.profile, cfg.nx, cfg.ny, kappa=cfg.kappa, max_points=cfg.max_points
        )
        return build_mesh(WeierstrassSurface.from_field(fld), grid, tol=cfg.quad_tol)

    # ---- artifact writers ----

    def write_nets(self):
        self.net.to_csv(self.out / "nets.csv")

    def write_traces(self):
        cfg = self.config
        xs = np.linspace(*self.x_range, 512)
        with open(self.out / "traces.csv", "w") as fh:
            fh.write("k,x,offset_scale,growth_sum,log_radius\n")
            for k in range(cfg.levels + 1):
                sc = radius_scalars(self.field(k), xs)
                for x, s, q, lr in zip(xs, sc.offset_scale, sc.growth_sum, sc.log_radius):
                    fh.write(f"{k},{x!r},{s!r},{q!r},{lr!r}\n")
        rec = radius_recursion(cfg.params, 40)
        with open(self.out / "recursion.csv", "w") as fh:
            fh.write("k,theta,log_factor,log_partial_product\n")
            for i, (t, lf, lp) in enumerate(
                zip(rec.thetas, rec.log_factors, rec.log_partial_products), start=1
            ):
                fh.write(f"{i},{t!r},{lf!r},{lp!r}\n")

    def write_meshes(self):
        written = []
        for k in range(self.config.levels + 1):
            mesh = self.mesh(k)
            for fmt in ("obj", "ply", "csv"):
                path = self.out / f"mesh_k{k}.{fmt}"
                export_mesh(mesh, fmt, path)
            written.append((k, mesh.n_vertices, mesh.n_triangles))
        return written

    # ---- certificates ----

    def run_certificates(self) -> verify.VerificationReport:
        cfg = self.config
        report = verify.VerificationReport()
        pbase = {
            "gamma": cfg.params.gamma, "mu": cfg.params.mu, "sigma": cfg.params.sigma,
            "alpha": cfg.params.alpha, "eps": cfg.params.eps, "seed": cfg.seed,
        }
        K = cfg.levels
        if "nets" in cfg.certificates:
            report.extend_dicts(audit_nets(self.net, self.mat), parameters=pbase)
        if "planes" in cfg.certificates:
            fld = self.field(K)
            grid = sample_domain(fld.profile, 64, 8)
            pts = grid.points().reshape(-1)[:: max(1, grid.n_vertices() // 1024)]
            report.extend_dicts(
                verify.check_level_planes(
                    self.surface(K), pts, tol=cfg.plane_tol,
                    quadrature_mode=True, quad_tol=cfg.quad_tol,
                ),
                parameters={**pbase, "k": K},
            )
        if "fiber" in cfg.certificates:
            xs = np.linspace(*self.x_range, 201)
            report.extend_dicts(
                verify.check_fiber_graphs(self.field(K), xs),
                parameters={**pbase, "k": K},
            )
        if "radius" in cfg.certificates:
            xs = np.linspace(*self.x_range, cfg.radius_grid)
            kr = cfg.radius_levels or K
            report.extend_dicts(
                verify.check_radius(self.net, cfg.params, xs, min(kr, self.net.depth),
                                    x_range=self.x_range),
                parameters={**pbase, "K": kr},
            )
        if "blowup" in cfg.certificates:
            p0 = float(self.net.levels[0][0])
            report.extend_dicts(
                verify.curvature_blowup_scan(
                    self.net, cfg.params, p0, cfg.blowup_a_values, k=K
                ),
                parameters={**pbase, "point": p0},
            )
        if "bounded" in cfg.certificates:
            report.extend_dicts(
                verify.bounded_curvature_scan(
                    self.net, cfg.params, self.mat, cfg.bounded_delta,
                    ks=range(K + 1), x_range=self.x_range,
                ),
                parameters={**pbase, "delta": cfg.bounded_delta},
            )
        if "spiral-endpoint" in cfg.certificates:
            pad = 1.0 / cfg.params.gamma
            t1, t2 = self.mat.hull[1], self.mat.hull[1] + pad
            ladder = [pad * 2.0 ** (-j) for j in cfg.census_ladder]
            report.extend_dicts(
                verify.spiral_census(
                    self.net, cfg.params, self.mat, (t1, t2 + pad),
                    "endpoint-in-net", k=self.net.depth, ladder=ladder,
                ),
                parameters={**pbase, "t1": t1},
            )
        if "spiral-slabs" in cfg.certificates:
            if cfg.census_limit_endpoint is None:
                raise ValidationError(
                    "spiral-slabs needs census.limit_endpoint in the config"
                )
            t1 = float(cfg.census_limit_endpoint)
            gaps = [g for g in _complement_intervals(self.mat, 1.0 / cfg.params.gamma)
                    if abs(g[0] - t1) < 1e-12]
            if not gaps:
                raise ValidationError(f"{t1} is not a left gap endpoint of the set")
            report.extend_dicts(
                verify.spiral_census(
                    self.net, cfg.params, self.mat, gaps[0], "endpoint-limit",
                    k=self.net.depth, ladder=cfg.census_ladder,
                ),
                parameters={**pbase, "t1": t1},
            )
        if "embedding" in cfg.certificates:
            report.extend_dicts(
                verify.mesh_embedding_scan(self.mesh(K)),
                parameters={**pbase, "k": K},
            )
        if "cauchy" in cfg.certificates:
            gap = _complement_intervals(self.mat, 1.0 / cfg.params.gamma)[0]
            report.extend_dicts(
                verify.check_cauchy_decay(
                    self.net, cfg.params, self.mat, gap, cfg.cauchy_levels,
                ),
                parameters={**pbase, "interval": list(gap)},
            )
        return report


def run_pipeline(config: RunConfig) -> int:
    """Full run: nets, traces, meshes, certificates, report; returns exit code."""
    pipe = Pipeline(config)
    pipe.out.mkdir(parents=True, exist_ok=True)
    pipe.write_nets()
    pipe.write_traces()
    written = pipe.write_meshes()
    for k, nv, nt in written:
        print(f"mesh k={k}: {nv} vertices, {nt} triangles")
    report = pipe.run_certificates()
    report.to_json(pipe.out / "report.json")
    with open(pipe.out / "report.csv", "w") as fh:
        fh.write(report.to_csv_text())
    print(report.summary())
    return min(report.n_failed, _EXIT_CAP)


def _apply_flags(cfg: RunConfig, args) -> RunConfig:
    if args.k is not None:
        cfg.levels = args.k
    if args.out is not None:
        cfg.out = args.out
    if args.seed is not None:
        cfg.seed = args.seed
    if args.certificates is not None:
        cfg.certificates = tuple(s for s in args.certificates.split(",") if s)
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="minlam",
        description="Build and verify minimal-disk constructions from a TOML config.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("build", "construct nets and meshes, write artifacts"),
        ("verify", "run certificates and write the report"),
        ("sweep", "run the scaling-law parameter sweeps"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="TOML config path")
        p.add_argument("--k", type=int, default=None, help="override level count")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument("--certificates", default=None,
                       help="comma-separated certificate list")
        p.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)
    try:
        cfg = _apply_flags(load_config(args.config), args)
        pipe = Pipeline(cfg)
        pipe.out.mkdir(parents=True, exist_ok=True)
        if args.command == "build":
            pipe.write_nets()
            pipe.write_traces()
            for k, nv, nt in pipe.write_meshes():
                print(f"mesh k={k}: {nv} vertices, {nt} triangles")
            return 0
        if args.command == "verify":
            report = pipe.run_certificates()
            report.to_json(pipe.out / "report.json")
            with open(pipe.out / "report.csv", "w") as fh:
                fh.write(report.to_csv_text())
            print(report.summary())
            return min(report.n_failed, _EXIT_CAP)
        if args.command == "sweep":
            return _sweep(pipe)
    except MinlamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CAP + 1
    return 0


def _sweep(pipe: Pipeline) -> int:
    """Scaling-law sweeps: curvature versus pinch width, winding versus offset."""
    cfg = pipe.config
    out = pipe.out
    p0 = float(pipe.net.levels[0][0])
    rows = verify.curvature_blowup_scan(
        pipe.net, cfg.params, p0, cfg.blowup_a_values, k=cfg.levels
    )
    with open(out / "sweep_blowup.csv", "w") as fh:
        fh.write("a,curvature_sq\n")
        for a, c in zip(rows[0]["a_values"], rows[0]["curvature"]):
            fh.write(f"{a!r},{c!r}\n")
    print(f"blowup slope: {rows[0]['slope']:+.4f} (target -8)")
    pad = 1.0 / cfg.params.gamma
    t1 = pipe.mat.hull[1]
    ladder = [pad * 2.0 ** (-j) for j in cfg.census_ladder]
    census = verify.spiral_census(
        pipe.net, cfg.params, pipe.mat, (t1, t1 + 2 * pad),
        "endpoint-in-net", k=pipe.net.depth, ladder=ladder,
    )
    with open(out / "sweep_spiral.csv", "w") as fh:
        fh.write("t,winding\n")
        for t, n in zip(census[0]["ladder"], census[0]["counts"]):
            fh.write(f"{t!r},{n!r}\n")
    print(f"spiral slope: {census[0]['slope']:+.4f} (target -3)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
