"""Command-line front end.

Every subcommand writes ``<cmd>_report.json`` plus data files (CSV or JSON)
and a gnuplot ``.dat``/``.plt`` pair into ``--out``.  Exit codes: 0 pass,
1 invalid configuration, 2 check failure.  Outputs depend only on the
configuration, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .local_field import PAdicRational, is_prime

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2
COMMANDS = ("eigen", "planewave", "radon", "cauchy", "degeneracy", "norms", "fourier-selftest")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    p: int = 2
    n: int = 2
    alpha: float = 1.0
    N: int | None = None
    l: int | None = None
    seed: int = 0
    routes: tuple = ("radon", "direct", "spectral", "convolution")
    kappas: tuple = (1.25, 1.5)
    cases: int = 20
    targets: int = 30
    out: str = "."
    format: str = "csv"

    def validate(self, cmd: str) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ConfigError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ConfigError("alpha must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.cases < 1 or self.targets < 1:
            raise ConfigError("cases and targets must be positive")
        from .waves import ROUTES

        bad = [r for r in self.routes if r not in ROUTES]
        if bad:
            raise ConfigError(f"unknown routes: {', '.join(bad)}")
        if cmd == "cauchy" and self.n < 2:
            raise ConfigError("cauchy needs n >= 2")
        if self.N is not None and self.l is not None and self.N + self.l < 0:
            raise ConfigError("need N + l >= 0")


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for name in known:
        val = getattr(args, name, None)
        if val is not None:
            cfg[name] = val
    if isinstance(cfg.get("routes"), str):
        cfg["routes"] = tuple(r.strip() for r in cfg["routes"].split(",") if r.strip())
    for key in ("routes", "kappas"):
        if key in cfg:
            cfg[key] = tuple(cfg[key])
    try:
        return ExperimentConfig(**cfg)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


class Outputs:
    """Collects written files so a failed run can remove them."""

    def __init__(self, root: str):
        self.root = Path(root)
        self.written: list[Path] = []
        self.config: dict = {}

    def write(self, name: str, text: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / name
        path.write_text(text, encoding="utf-8", newline="\n")
        self.written.append(path)
        return path

    def report(self, cmd: str, payload: dict) -> None:
        payload = {"config": self.config, **payload}
        self.write(f"{cmd}_report.json", json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")

    def plot(self, stem: str, columns: list[str], rows: list, title: str, logy: bool = False) -> None:
        lines = ["# " + " ".join(columns)]
        lines += [" ".join(repr(float(v)) if not isinstance(v, str) else v for v in r) for r in rows]
        self.write(f"{stem}.dat", "\n".join(lines) + "\n")
        plt = [
            "set terminal pngcairo size 800,500",
            f"set output '{stem}.png'",
            f"set title '{title}'",
            f"set xlabel '{columns[0]}'",
        ]
        if logy:
            plt.append("set logscale y")
        series = ", ".join(
            f"'{stem}.dat' using 1:{i + 2} with linespoints title '{c}'" for i, c in enumerate(columns[1:])
        )
        plt.append(f"plot {series}")
        self.write(f"{stem}.plt", "\n".join(plt) + "\n")

    def cleanup(self) -> None:
        for path in self.written:
            path.unlink(missing_ok=True)
        self.written.clear()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _rng_points(rng, p: int, n: int, lo: int, hi: int, count: int) -> list[tuple]:
    """Random exact points with norm exponents in ``[lo, hi]`` (and some zeros)."""
    pts = []
    for _ in range(count):
        k = int(rng.integers(lo, hi + 1))
        coords = []
        for i in range(n):
            a = int(rng.integers(0, p**3))
            coords.append(PAdicRational(p, a, -k))
        pts.append(tuple(coords))
    return pts


# --------------------------------------------------------------------------
# commands


def cmd_eigen(cfg: ExperimentConfig, out: Outputs) -> int:
    from .local_field import PAdicRational as P
    from .vladimirov import EigenProfile, apply_D_alpha, eigen_residual, radial_nullspace_check, window_targets

    N = 0 if cfg.N is None else cfg.N
    window = list(range(-N - 2, -N + 4))
    res = eigen_residual(cfg.p, N, cfg.alpha, window)
    wM, wl = max(3, 3 - N), max(3, N + 3)
    ns = radial_nullspace_check(cfg.p, cfg.alpha, N, wM, wl)
    prof = EigenProfile.normalized(cfg.p, N, cfg.alpha)
    pts = window_targets(cfg.p, window)
    field = apply_D_alpha(prof.to_test_function(), cfg.alpha, pts)
    field.metadata["source"] = f"eigenprofile(N={N})"
    ok = res <= 1e-11 and ns.dimension == 1 and ns.match_error <= 1e-8
    out.report("eigen", {
        "p": cfg.p, "alpha": cfg.alpha, "N": N,
        "eigenvalue": prof.eigenvalue,
        "residual_max": res,
        "nullspace": {"dimension": ns.dimension, "match_error": ns.match_error,
                      "window_M": wM, "window_l": wl},
        "passed": ok,
    })
    if cfg.format == "csv":
        out.write("eigen_field.csv", field.to_csv())
    else:
        out.write("eigen_field.json", json.dumps(_jsonable({
            "points": [[c.serialize() for c in x] for x in field.points],
            "values": [complex(v) for v in field.values],
            "operator": "D^alpha", "alpha": cfg.alpha}), sort_keys=True) + "\n")
    rows = []
    for k in window:
        x = P(cfg.p, 1, -k)
        du = apply_D_alpha(prof.to_test_function(), cfg.alpha, [x]).values[0]
        rows.append((k, prof(x).real, (du / prof.eigenvalue).real))
    out.plot("eigen", ["log_q|x|", "u", "D^alpha_u/lambda"], rows, "radial eigenfunction")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_planewave(cfg: ExperimentConfig, out: Outputs) -> int:
    from .schwartz import random_test_function
    from .waves import PlaneWaveSpec, wave_residual

    p, n = cfg.p, cfg.n
    rng = np.random.default_rng(cfg.seed)
    N = 1 if cfg.N is None else cfg.N
    l = (1 if n >= 3 else 2) if cfg.l is None else cfg.l
    rows, worst = [], 0.0
    for case in range(cfg.cases):
        f = random_test_function(int(rng.integers(2**31)), p, 1, N, l)
        omega = [PAdicRational(p, int(rng.integers(0, p**3))) for _ in range(n)]
        omega[int(rng.integers(n))] = PAdicRational(p, 1 + p * int(rng.integers(0, p**2)))
        spec = PlaneWaveSpec(f, tuple(omega))
        pts = [(PAdicRational(p, int(rng.integers(0, p**3)), -int(rng.integers(-l, N + 2))), x)
               for x in _rng_points(rng, p, n, -l, N + 1, 5)]
        r = wave_residual(spec, cfg.alpha, pts)
        worst = max(worst, r)
        rows.append((case, r, ";".join(c.serialize() for c in spec.omega)))
    ok = worst <= 1e-9
    out.report("planewave", {"p": p, "n": n, "alpha": cfg.alpha, "seed": cfg.seed,
                             "cases": cfg.cases, "residual_max": worst, "passed": ok})
    if cfg.format == "csv":
        out.write("planewave_cases.csv", "case,residual,omega\n"
                  + "".join(f"{c},{r!r},{o}\n" for c, r, o in rows))
    else:
        out.write("planewave_cases.json", json.dumps(
            [{"case": c, "residual": r, "omega": o} for c, r, o in rows], sort_keys=True) + "\n")
    out.plot("planewave", ["case", "residual"], [(c, max(r, 1e-300)) for c, r, _ in rows],
             "plane-wave residual", logy=True)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_radon(cfg: ExperimentConfig, out: Outputs) -> int:
    from .radon import (
        fourier_slice_defect,
        homogeneity_defect,
        radon_forward,
        radon_inverse,
        radon_vanishing_check,
        required_resolution,
        slice_mass_spread,
    )
    from .schwartz import random_test_function

    p, n = cfg.p, cfg.n
    N = 1 if cfg.N is None else cfg.N
    l = (2 if n <= 2 else 1) if cfg.l is None else cfg.l
    rng = np.random.default_rng(cfg.seed)
    phi = random_test_function(int(rng.integers(2**31)), p, n, N, l)
    targets = _rng_points(rng, p, n, -l - 1, N + 1, cfg.targets)
    m = required_resolution(N, l, targets)
    table = radon_forward(phi, m)
    rec = radon_inverse(table, targets).values
    want = np.array([phi(x) for x in targets])
    err = float(np.max(np.abs(rec - want)))
    checks = {
        "roundtrip_max": err,
        "vanishing_max": radon_vanishing_check(table),
        "slice_mass_spread": slice_mass_spread(table),
        "homogeneity_defect": homogeneity_defect(phi, table),
        "fourier_slice_defect": fourier_slice_defect(phi, table),
    }
    ok = (err <= 1e-9 and checks["vanishing_max"] <= 1e-12 and checks["slice_mass_spread"] <= 1e-12
          and checks["homogeneity_defect"] <= 1e-12 and checks["fourier_slice_defect"] <= 1e-11)
    out.report("radon", {"p": p, "n": n, "N": N, "l": l, "m": m, "seed": cfg.seed, **checks, "passed": ok})
    if cfg.format == "csv":
        out.write("radon_table.csv", table.to_csv())
    else:
        out.write("radon_table.json", table.to_json() + "\n")
    out.plot("radon", ["target", "abs_error"],
             [(i, max(abs(a - b), 1e-300)) for i, (a, b) in enumerate(zip(rec, want))],
             "Radon roundtrip error", logy=True)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_cauchy(cfg: ExperimentConfig, out: Outputs) -> int:
    from .schwartz import random_test_function
    from .waves import cauchy_field, huygens_check, initial_condition_defects, route_deltas

    p, n = cfg.p, cfg.n
    N = 1 if cfg.N is None else cfg.N
    l = 1 if cfg.l is None else cfg.l
    rng = np.random.default_rng(cfg.seed)
    phi = random_test_function(int(rng.integers(2**31)), p, n, N, l, project_Phi=True)
    xs = _rng_points(rng, p, n, -l, N + 1, min(cfg.targets, 12))
    t_grid = (N + 2, l + 1)
    fields_ = {r: cauchy_field(r, phi, t_grid, xs) for r in cfg.routes}
    deltas = route_deltas(fields_)
    hv = huygens_check(phi, fields_[sorted(fields_)[0]])
    ic1, ic2 = initial_condition_defects(phi, xs)
    radial = {r: f.radial_defect() for r, f in fields_.items()}
    ok = (all(d <= 1e-8 for d in deltas.values()) and hv.passed and ic1 <= 1e-9 and ic2 <= 1e-9
          and all(v <= 1e-12 for v in radial.values()))
    out.report("cauchy", {
        "p": p, "n": n, "N": N, "l": l, "seed": cfg.seed, "t_grid": list(t_grid),
        "routes": sorted(fields_), "route_deltas": deltas,
        "huygens": hv.to_dict(),
        "initial_conditions": {"F1": ic1, "F2": ic2},
        "radial_defect": radial, "passed": ok,
    })
    if cfg.format == "csv":
        text = "".join(fields_[r].to_csv(header=(i == 0)) for i, r in enumerate(sorted(fields_)))
        out.write("cauchy_field.csv", text)
    else:
        out.write("cauchy_field.json", json.dumps(_jsonable({
            r: {"t": [t.serialize() for t in f.t_points],
                "x": [[c.serialize() for c in x] for x in f.x_points],
                "values": [[complex(v) for v in row] for row in f.values]}
            for r, f in sorted(fields_.items())}), sort_keys=True) + "\n")
    f0 = fields_[sorted(fields_)[0]]
    seen, rows = set(), []
    for t, k, row in zip(f0.t_points, f0.t_levels(), f0.values):
        if k in seen:
            continue
        seen.add(k)
        rows.append((-99 if k is None else k, float(np.max(np.abs(row)))))
    out.plot("cauchy", ["log_q|t|", "max_x|F2|"], sorted(rows), "F2 envelope")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_degeneracy(cfg: ExperimentConfig, out: Outputs) -> int:
    from .waves import symbol_degeneracy, symbol_degeneracy_closed_form

    p, n = cfg.p, cfg.n
    l = cfg.l
    if l is None:
        l = 1
        while p ** ((l + 1) * n) <= 200_000:
            l += 1
    if l < 1 or p ** (l * n) > 10**7:
        raise ConfigError("degeneracy resolution l out of range")
    frac = symbol_degeneracy(p, n, l, cfg.alpha)
    closed = symbol_degeneracy_closed_form(p, n)
    ok = frac == closed
    rows = [(k, float(symbol_degeneracy(p, n, k, cfg.alpha))) for k in range(1, l + 1)]
    out.report("degeneracy", {"p": p, "n": n, "l": l, "alpha": cfg.alpha,
                              "degeneracy_fraction": float(frac), "fraction_exact": frac,
                              "closed_form": closed, "passed": ok})
    if cfg.format == "csv":
        out.write("degeneracy.csv", "l,fraction\n" + "".join(f"{k},{v!r}\n" for k, v in rows))
    else:
        out.write("degeneracy.json", json.dumps([{"l": k, "fraction": v} for k, v in rows]) + "\n")
    out.plot("degeneracy", ["l", "fraction"], rows, "zero-set fraction of the symbol")
    return EXIT_OK if ok else EXIT_CHECK


def cmd_norms(cfg: ExperimentConfig, out: Outputs) -> int:
    from .schwartz import random_test_function
    from .waves import lambda_exponent, norm_report

    p, n = cfg.p, cfg.n
    N = 1 if cfg.N is None else cfg.N
    l = 1 if cfg.l is None else cfg.l
    if n >= 2:
        for k in cfg.kappas:
            try:
                lambda_exponent(n, k)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
    rng = np.random.default_rng(cfg.seed)
    phi = random_test_function(int(rng.integers(2**31)), p, n, N, l, project_Phi=True)
    levels = [None] + list(range(-l - 1, N + 3))
    routes = ("F1", "F2") if n >= 2 else ("F1",)
    rep = norm_report(phi, cfg.kappas, levels, routes)
    out.report("norms", {"p": p, "n": n, "N": N, "l": l, "seed": cfg.seed,
                         "norm_table": rep.to_dict()})
    cols = ["kappa", "t_exp", "F1_ratio", "lambda", "F2_ratio"]
    if cfg.format == "csv":
        lines = [",".join(cols)]
        for r in rep.rows:
            lines.append(",".join("" if r.get(c) is None else repr(r[c]) for c in cols))
        out.write("norms.csv", "\n".join(lines) + "\n")
    else:
        out.write("norms.json", json.dumps(_jsonable(rep.rows), sort_keys=True) + "\n")
    k0 = cfg.kappas[0]
    prow = [(r["t_exp"], r["F1_ratio"], r.get("F2_ratio", 0.0))
            for r in rep.rows if r["kappa"] == k0 and r["t_exp"] is not None]
    out.plot("norms", ["log_q|t|", "F1_ratio", "F2_ratio"], prow, f"norm ratios, kappa={k0}")
    return EXIT_OK


def cmd_fourier_selftest(cfg: ExperimentConfig, out: Outputs) -> int:
    from ._backend import BACKEND
    from .fourier import fourier, inverse_fourier, plancherel_defect
    from .schwartz import random_test_function

    rng = np.random.default_rng(cfg.seed)
    p, n = cfg.p, cfg.n
    N = 1 if cfg.N is None else cfg.N
    l = 1 if cfg.l is None else cfg.l
    rows = []
    for case in range(cfg.cases):
        f = random_test_function(int(rng.integers(2**31)), p, n, N, l)
        back = inverse_fourier(fourier(f))
        rt = float(np.max(np.abs(back.values - f.values)))
        pl = plancherel_defect(f)
        paths = float(np.max(np.abs(fourier(f, "direct").values - fourier(f, "digits").values)))
        rows.append((case, rt, pl, paths))
    worst = {"roundtrip_max": max(r[1] for r in rows), "plancherel_max": max(r[2] for r in rows),
             "path_delta_max": max(r[3] for r in rows)}
    ok = all(v <= 1e-12 for v in worst.values())
    out.report("fourier-selftest", {"p": p, "n": n, "N": N, "l": l, "seed": cfg.seed,
                                    "backend": BACKEND, **worst, "passed": ok})
    cols = ["case", "roundtrip", "plancherel", "path_delta"]
    if cfg.format == "csv":
        out.write("fourier_cases.csv", ",".join(cols) + "\n"
                  + "".join(",".join(repr(v) for v in r) + "\n" for r in rows))
    else:
        out.write("fourier_cases.json", json.dumps([dict(zip(cols, r)) for r in rows]) + "\n")
    out.plot("fourier", cols, [(r[0],) + tuple(max(v, 1e-300) for v in r[1:]) for r in rows],
             "Fourier self-test", logy=True)
    return EXIT_OK if ok else EXIT_CHECK


HANDLERS = {
    "eigen": cmd_eigen,
    "planewave": cmd_planewave,
    "radon": cmd_radon,
    "cauchy": cmd_cauchy,
    "degeneracy": cmd_degeneracy,
    "norms": cmd_norms,
    "fourier-selftest": cmd_fourier_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # invalid usage is a configuration error
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ultrawave", description="p-adic wave equation experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--N", type=int)
        sp.add_argument("--l", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--routes", type=str, help="comma-separated: radon,direct,spectral,convolution")
        sp.add_argument("--kappas", type=float, nargs="+")
        sp.add_argument("--cases", type=int)
        sp.add_argument("--targets", type=int)
        sp.add_argument("--out", type=str)
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--config", type=str, help="JSON file; flags override its values")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        cfg.validate(args.command)
    except ConfigError as exc:
        print(f"ultrawave: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Outputs(cfg.out)
    # the output directory is left out so reports do not depend on where they land
    out.config = {k: v for k, v in asdict(cfg).items() if k != "out"}
    try:
        code = HANDLERS[args.command](cfg, out)
    except ConfigError as exc:
        out.cleanup()
        print(f"ultrawave: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        out.cleanup()
        print(f"ultrawave: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception:
        out.cleanup()
        raise
    status = "passed" if code == EXIT_OK else "FAILED"
    print(f"{args.command}: {status} ({len(out.written)} files in {cfg.out})")
    return code


if __name__ == "__main__":
    sys.exit(main())
