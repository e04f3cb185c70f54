"""Command-line surface: solve, branch, spectrum, evolve, compare-tanh,
validate.

Configuration comes from an optional key=value text file plus command-line
flags (flags win); the effective configuration is echoed into the header of
every output file so that any result can be reproduced from the file alone.
CSV files are comma-separated with '#'-prefixed header lines and 17
significant digits.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, acceptance, bvp, continuation, diagnostics
from . import evolve as evolve_mod
from . import newton, spectrum
from .bvp import FrontProfile
from .grid import Grid, make_grid

SCHEMA_VERSION = 1


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


@dataclass
class RunConfig:
    """Effective run parameters; file values overridden by CLI flags."""

    c: float = 0.0
    cmin: float = -1.0
    cmax: float = 1.0
    dc: float = 0.25
    eps: float = 1e-3
    delta: float = 0.1
    xmin: float | None = None
    xmax: float | None = None
    h: float = bvp.DEFAULT_H
    tol: float = 1e-10
    out: str | None = None
    spectrum: bool = False
    seed_file: str | None = None
    k: int = 5
    dt: float = 0.01
    t_end: float = 30.0
    scheme: str = "imex_cn"
    ramp: str = "linear"
    criteria: str | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        cfg = cls()
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            cfg.apply(key.strip(), value.strip())
        return cfg

    def apply(self, key: str, value: str) -> None:
        if key not in {f.name for f in dataclasses.fields(self)}:
            raise ValueError(f"unknown config key {key!r}")
        if key in ("out", "seed_file", "scheme", "ramp", "criteria"):
            setattr(self, key, value)
        elif key == "spectrum":
            setattr(self, key, value.lower() in ("1", "true", "yes", "on"))
        elif key == "k":
            setattr(self, key, int(value))
        else:
            setattr(self, key, float(value))

    def echo(self) -> list[str]:
        # everything that shapes the computed values; the output path does
        # not, and including it would break byte-level reproducibility
        items = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if v is None or f.name == "out":
                continue
            items.append(f"{f.name}={_fmt(v)}")
        return items


def write_csv(path: str | Path, kind: str, header: dict, columns: dict,
              cfg: RunConfig, trailing_comments: list[str] | None = None) -> None:
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[n])) for n in names]
    length = len(arrays[0])
    lines = [f"# schema_version={SCHEMA_VERSION}",
             f"# kind={kind}",
             f"# generated_by=quenchfront {__version__}"]
    lines += [f"# {k}={_fmt(v)}" for k, v in header.items()]
    lines.append("# config: " + " ".join(cfg.echo()))
    lines.append(",".join(names))
    for i in range(length):
        lines.append(",".join(_fmt(float(a[i])) for a in arrays))
    lines += trailing_comments or []
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path: str | Path) -> tuple[dict, dict]:
    """Read one of our CSV files; returns (header dict, column dict).
    Rejects files with a missing or unsupported schema version."""
    header: dict[str, str] = {}
    names: list[str] | None = None
    rows: list[list[float]] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body and not body.startswith("config:"):
                k, _, v = body.partition("=")
                header[k.strip()] = v.strip()
            continue
        if names is None:
            names = [t.strip() for t in line.split(",")]
        else:
            rows.append([float(t) for t in line.split(",")])
    if header.get("schema_version") != str(SCHEMA_VERSION):
        raise ValueError(f"{path}: missing or unsupported schema_version "
                         f"(want {SCHEMA_VERSION}, got {header.get('schema_version')!r})")
    if names is None:
        raise ValueError(f"{path}: no column header found")
    data = np.array(rows, dtype=float) if rows else np.empty((0, len(names)))
    return header, {n: data[:, j] for j, n in enumerate(names)}


def load_profile(path: str | Path) -> FrontProfile:
    header, cols = read_csv(path)
    if header.get("kind") != "profile":
        raise ValueError(f"{path}: not a profile file")
    x = cols["x"]
    g = Grid(x_min=float(x[0]), x_max=float(x[-1]), n=len(x))
    p = FrontProfile(c=float(header["c"]), grid=g, u=cols["u"].copy(),
                     residual_norm=float(header.get("residual_norm", "inf")),
                     converged=True)
    return p


class MarginError(ValueError):
    pass


def _grid_for(cfg: RunConfig, c: float) -> Grid:
    if cfg.xmin is None and cfg.xmax is None:
        return bvp.default_grid(c, cfg.h)
    lo, hi = bvp.default_domain(c)
    lo = cfg.xmin if cfg.xmin is not None else lo
    hi = cfg.xmax if cfg.xmax is not None else hi
    need_lo, need_hi = bvp.required_bounds(c)
    if lo > need_lo or hi < need_hi:
        raise MarginError(
            f"domain [{lo}, {hi}] too small for c={c}: front interface needs "
            f"[{need_lo:.2f}, {need_hi:.2f}] with {bvp.FRONT_MARGIN:g}-unit margins")
    return make_grid(lo, hi, cfg.h)


def _solve(cfg: RunConfig, c: float) -> FrontProfile:
    solver_cfg = newton.SolverConfig(tol_residual=cfg.tol)
    g = _grid_for(cfg, c)
    if cfg.seed_file:
        seed = continuation.reinterpolate(load_profile(cfg.seed_file), g)
        seed = FrontProfile(c=c, grid=g, u=seed.u)
        profile, _ = newton.solve(seed, cfg=solver_cfg)
        return profile
    return continuation.solve_front(c, grid=g, cfg=solver_cfg, h=cfg.h)


def _profile_header(cfg: RunConfig, p: FrontProfile) -> dict:
    fit = bvp.fit_tail_coefficients(p)
    roots = diagnostics.crossings(p)
    header = {
        "c": p.c, "h": p.grid.h, "xmin": p.grid.x_min, "xmax": p.grid.x_max,
        "n": p.grid.n, "residual_norm": p.residual_norm,
        "alpha_plus": fit.alpha_plus, "alpha_minus": fit.alpha_minus,
        "log_alpha_plus": fit.log_alpha_plus,
        "x_delta": diagnostics.front_position(p, cfg.delta),
        "delta": cfg.delta,
        "u_at_zero": diagnostics.u_at_zero(p),
        "crossing_count": len(roots),
        "crossing_points": ";".join(_fmt(r) for r in roots) or "none",
        "admissible": diagnostics.admissibility(p).admissible,
    }
    if cfg.spectrum:
        rep = spectrum.leading_eigenvalues(p, k=1)
        header["lambda0"] = float(rep.eigenvalues[0])
    return header


def cmd_solve(cfg: RunConfig) -> int:
    p = _solve(cfg, cfg.c)
    header = _profile_header(cfg, p)
    out = cfg.out or f"profile_c{cfg.c:g}.csv"
    write_csv(out, "profile", header,
              {"x": p.grid.nodes(), "u": p.u, "residual": bvp.residual(p)},
              cfg)
    print(f"wrote {out}: c={p.c:g} residual={p.residual_norm:.3e} "
          f"u(0)={header['u_at_zero']:.6g} x_delta={header['x_delta']:.6g}")
    return 0


def cmd_branch(cfg: RunConfig) -> int:
    if cfg.cmin >= cfg.cmax:
        raise ValueError(f"need cmin < cmax, got [{cfg.cmin}, {cfg.cmax}]")
    solver_cfg = newton.SolverConfig(tol_residual=cfg.tol)
    anchor = continuation.solve_front(0.0, cfg=solver_cfg, h=cfg.h)
    points: list[tuple[float, FrontProfile]] = []
    failures: list[tuple[float, str]] = []
    if cfg.cmin < 0:
        br = continuation.continue_branch(anchor, cfg.cmin, cfg.dc, solver_cfg, h=cfg.h)
        points += br.points
        failures += br.failures
    if cfg.cmax > 0:
        br = continuation.continue_branch(anchor, cfg.cmax, cfg.dc, solver_cfg, h=cfg.h)
        points += [(c, p) for c, p in br.points if c > 0]
        failures += br.failures
    if not (cfg.cmin <= 0 <= cfg.cmax):
        points = [(c, p) for c, p in points if cfg.cmin - 1e-12 <= c <= cfg.cmax + 1e-12]
    points.sort(key=lambda t: t[0])

    cs, u0s, xds, counts, lam0s, alphas = [], [], [], [], [], []
    for c, p in points:
        cs.append(c)
        u0s.append(diagnostics.u_at_zero(p))
        xds.append(diagnostics.front_position(p, cfg.delta))
        counts.append(len(diagnostics.crossings(p)))
        lam0s.append(float(spectrum.leading_eigenvalues(p, 1).eigenvalues[0]))
        alphas.append(bvp.fit_tail_coefficients(p).alpha_plus)
    out = cfg.out or f"branch_{cfg.cmin:g}_{cfg.cmax:g}.csv"
    header = {"cmin": cfg.cmin, "cmax": cfg.cmax, "delta": cfg.delta,
              "points": len(cs), "failures": len(failures)}
    write_csv(out, "branch", header,
              {"c": cs, "u_at_zero": u0s, "x_delta": xds,
               "crossing_count": counts, "lambda0": lam0s, "alpha_plus": alphas},
              cfg,
              trailing_comments=[f"# failure: c={_fmt(c)} {msg}" for c, msg in failures])
    print(f"wrote {out}: {len(cs)} branch points on [{cfg.cmin:g}, {cfg.cmax:g}], "
          f"{len(failures)} failures")
    return 0 if points else 2


def cmd_spectrum(cfg: RunConfig) -> int:
    p = _solve(cfg, cfg.c)
    rep = spectrum.leading_eigenvalues(p, k=cfg.k)
    out = cfg.out or f"spectrum_c{cfg.c:g}.csv"
    header = {"c": cfg.c, "k": cfg.k, "potential_min": rep.potential_min,
              "eigenvalues": ";".join(_fmt(float(v)) for v in rep.eigenvalues),
              "lambda0": float(rep.eigenvalues[0])}
    write_csv(out, "spectrum", header,
              {"x": p.grid.nodes(), "ground_state": rep.ground_state,
               "potential": spectrum.build_potential(p)}, cfg)
    print(f"wrote {out}: lambda0={rep.eigenvalues[0]:.6g}")
    return 0


def cmd_evolve(cfg: RunConfig) -> int:
    p = _solve(cfg, cfg.c)
    ecfg = evolve_mod.EvolveConfig(ramp=cfg.ramp, epsilon=cfg.eps, c=cfg.c,
                                   dt=cfg.dt, t_end=cfg.t_end, scheme=cfg.scheme)
    boundary = evolve_mod.boundary_from_closure(p.grid, ecfg)
    x = p.grid.nodes()
    bump = 1e-3 * np.exp(-(x - diagnostics.front_position(p, cfg.delta)) ** 2)
    result = evolve_mod.evolve(p.u + bump, p.grid, ecfg, boundary, reference=p.u)
    out = cfg.out or f"evolve_c{cfg.c:g}.csv"
    header = {"c": cfg.c, "dt": cfg.dt, "t_end": cfg.t_end, "scheme": cfg.scheme,
              "measured_rate": result.measured_rate,
              "final_deviation": result.deviation_history[-1][1]}
    write_csv(out, "evolve", header,
              {"t": [t for t, _ in result.deviation_history],
               "deviation": [d for _, d in result.deviation_history]}, cfg)
    print(f"wrote {out}: measured decay rate {result.measured_rate:.4g}")
    return 0


def cmd_compare_tanh(cfg: RunConfig) -> int:
    if not 0.0 < cfg.eps <= 0.1:
        raise ValueError(f"eps must lie in (0, 0.1], got {cfg.eps}")
    rep = evolve_mod.compare_inner_scaling(cfg.eps, cfg.c, delta=cfg.delta)
    out = cfg.out or f"compare_tanh_eps{cfg.eps:g}_c{cfg.c:g}.csv"
    header = {"eps": cfg.eps, "c": cfg.c, "c_scaled": rep.c_scaled,
              "delta": cfg.delta, "sup_gap": rep.sup_gap,
              "x_delta_tanh": rep.x_delta_tanh,
              "x_delta_inner_scaled": rep.x_delta_inner_scaled,
              "interface_gap": rep.interface_gap}
    summary = (f"# interface: x_delta_tanh={_fmt(rep.x_delta_tanh)} "
               f"x_delta_inner_scaled={_fmt(rep.x_delta_inner_scaled)} "
               f"gap={_fmt(rep.interface_gap)}")
    write_csv(out, "compare_tanh", header,
              {"x": rep.xs, "u_tanh": rep.u_tanh,
               "u_inner_scaled": rep.u_inner_scaled,
               "gap": rep.u_tanh - rep.u_inner_scaled},
              cfg, trailing_comments=[summary])
    print(f"wrote {out}: sup_gap={rep.sup_gap:.4g} interface_gap={rep.interface_gap:.4g}")
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    only = None
    if cfg.criteria:
        only = {int(t) for t in cfg.criteria.split(",")}
    results = acceptance.run_all(only=only)
    lines = [acceptance.format_result(r) for r in results]
    print("\n".join(lines))
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed")
    if cfg.out:
        Path(cfg.out).write_text("\n".join(lines) + "\n")
    return 0 if n_fail == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quenchfront",
        description="Monotone fronts of u'' + c u' - x u - u^3 = 0: "
                    "solve, continue in c, and validate")
    parser.add_argument("--config", help="key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, flags):
        p = sub.add_parser(name, help=help_)
        for flag, kw in flags.items():
            p.add_argument(flag, **kw)
        return p

    common = {
        "--h": dict(type=float, help="grid spacing (default 0.01)"),
        "--tol": dict(type=float, help="Newton residual tolerance"),
        "--out": dict(type=str, help="output CSV path"),
        "--delta": dict(type=float, help="front-interface level (default 0.1)"),
    }
    solve_flags = {
        "--c": dict(type=float, help="drift speed"),
        "--xmin": dict(type=float), "--xmax": dict(type=float),
        "--spectrum": dict(action="store_true", default=None,
                           help="also report lambda0 in the header"),
        "--seed-file": dict(type=str, dest="seed_file",
                            help="profile CSV to seed the solve"),
        **common,
    }
    add("solve", "solve one front, write profile CSV", solve_flags)
    add("branch", "continuation sweep, write branch CSV", {
        "--cmin": dict(type=float), "--cmax": dict(type=float),
        "--dc": dict(type=float, help="initial continuation step"),
        **common})
    add("spectrum", "leading eigenvalues of the linearization", {
        "--c": dict(type=float), "--k": dict(type=int, help="how many eigenvalues"),
        **common})
    add("evolve", "time-integrate a perturbed front, write deviation history", {
        "--c": dict(type=float), "--dt": dict(type=float),
        "--t-end": dict(type=float, dest="t_end"),
        "--scheme": dict(choices=["imex_euler", "imex_cn"]),
        "--ramp": dict(choices=["linear", "tanh"]),
        "--eps": dict(type=float), **common})
    add("compare-tanh", "overlay tanh-ramp front with rescaled inner front", {
        "--eps": dict(type=float), "--c": dict(type=float), **common})
    add("validate", "run the acceptance suite", {
        "--criteria": dict(type=str, help="comma-separated subset, e.g. 1,5,11"),
        "--out": dict(type=str)})
    return parser


_COMMANDS = {
    "solve": cmd_solve,
    "branch": cmd_branch,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "compare-tanh": cmd_compare_tanh,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
        for key, value in vars(args).items():
            if key in ("command", "config") or value is None:
                continue
            setattr(cfg, key, value)
        return _COMMANDS[args.command](cfg)
    except (ValueError, newton.SolverError, evolve_mod.BlowUpError,
            bvp.TailFitError, KeyError, OSError) as exc:
        print(f"error kind={type(exc).__name__} detail={exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
