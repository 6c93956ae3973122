"""Command-line front end.

Subcommands: ``theory`` (asymptotic constants and rate grids as JSON),
``simulate`` (trajectory or batch CSV), ``validate`` (seeded empirical and
deterministic checks with JSON reports and a CSV summary), ``recursion``
(tilt / expansion-table / scaled-MGF-curve dumps as CSV).

Exit codes: 0 success, 1 at least one validation failed, 2 usage or
configuration error, 3 model assumption violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import secrets
import sys
from dataclasses import dataclass

from .asymptotics import critical_tilt, ldp_rate, mdp_rate, theory_summary
from .errors import AssumptionViolation, ConfigError, EnumerationError
from .model import InarModel, model_from_spec, require_assumptions
from .montecarlo import validate_clt, validate_gamma, validate_lln, validate_mdp
from .oracle import enumerate_sum_distribution, oracle_log_mgf
from .recursions import MdpSchedule, cesaro_check, gbar_tables, log_mgf_exact, mdp_mgf_curve, tilt_recursion
from .simulate import RandomStream, simulate, simulate_batch

__all__ = ["main", "RunConfig"]

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG = 2
EXIT_ASSUMPTION = 3

ORACLE_THETA_GRID = (-1.0, -0.3, 0.0, 0.4, math.log(2.0))
ORACLE_TOL = 1e-10
CESARO_REL_TOL = 0.01
CHECK_NAMES = ("lln", "clt", "mdp", "gamma", "cesaro", "oracle")


@dataclass
class RunConfig:
    """Parsed command parameters plus the model they apply to."""

    model: InarModel
    n: int | None = None
    reps: int | None = None
    seed: int | None = None
    beta: float | None = None
    theta: float | None = None
    x: float | None = None
    x_grid: tuple = ()
    theta_grid: tuple = ()
    horizons: tuple = ()
    checks: tuple = ()
    what: str | None = None
    out: str | None = None
    fmt: str = "json"

    def resolved_seed(self) -> tuple:
        """(seed, drawn) where drawn marks a seed taken from system entropy."""
        if self.seed is not None:
            return self.seed, False
        return secrets.randbits(63), True


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_model(path: str) -> InarModel:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return model_from_spec(obj)


def _parse_floats(text: str, flag: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated numbers, got {text!r}") from exc


def _parse_ints(text: str, flag: str) -> tuple:
    vals = _parse_floats(text, flag)
    out = []
    for v in vals:
        if v != int(v):
            raise ConfigError(f"{flag} expects integers, got {v}")
        out.append(int(v))
    return tuple(out)


def _csv_text(header: list, rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_theory(cfg: RunConfig) -> int:
    summary = theory_summary(cfg.model)
    if cfg.x_grid:
        x_grid = cfg.x_grid
    else:
        mu = summary.mu
        base = mu if mu > 0 else 1.0
        x_grid = tuple(base * frac for frac in (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0))
    payload = {
        "mu": summary.mu,
        "sigma2": summary.sigma2,
        "theta_c": summary.theta_c,
        "theta_c_attained": summary.theta_c_attained,
        "offspring_mean_l1": summary.offspring_mean_l1,
        "offspring_var_l1": summary.offspring_var_l1,
        "I": [{"x": x, "value": ldp_rate(cfg.model, x)} for x in x_grid],
        "J": [{"x": x, "value": mdp_rate(cfg.model, x)} for x in x_grid],
    }
    _write_text(cfg.out, json.dumps(_jsonable(payload), indent=2) + "\n")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    require_assumptions(cfg.model, labels=("a", "c"))
    if cfg.n is None:
        raise ConfigError("simulate requires --n")
    seed, drawn = cfg.resolved_seed()
    if cfg.reps is None:
        traj = simulate(cfg.model, cfg.n, RandomStream(seed=seed))
        rows = [(t + 1, int(x)) for t, x in enumerate(traj.counts)]
        text = _csv_text(["t", "x"], rows)
    else:
        summaries = simulate_batch(cfg.model, cfg.n, cfg.reps, RandomStream(seed=seed))
        rows = [(s.rep, s.s_n, s.x_n, repr(s.m_n)) for s in summaries]
        text = _csv_text(["rep", "s_n", "x_n", "m_n"], rows)
    _write_text(cfg.out, text)
    origin = "drawn from system entropy" if drawn else "from --seed"
    print(f"seed: {seed} ({origin})", file=sys.stderr)
    return EXIT_OK


def _cesaro_report(cfg: RunConfig, n: int) -> dict:
    chk = cesaro_check(cfg.model, n)
    pairs = chk.pairs()
    rel = [abs(e - l) / abs(l) if l != 0.0 else abs(e) for e, l in pairs]
    return {
        "theorem": "cesaro",
        "model_fingerprint": cfg.model.fingerprint(),
        "n": n,
        "reps": 0,
        "seed": 0,
        "statistics": {
            "g1_mean": chk.g1_mean,
            "g1_sq_mean": chk.g1_sq_mean,
            "g2_mean": chk.g2_mean,
            "relative_errors": rel,
        },
        "targets": {
            "g1_limit": chk.g1_limit,
            "g1_sq_limit": chk.g1_sq_limit,
            "g2_limit": chk.g2_limit,
            "relative_tolerance": CESARO_REL_TOL,
        },
        "passed": bool(all(r < CESARO_REL_TOL for r in rel)),
        "runtime_seconds": 0.0,
        "notes": {},
    }


def _oracle_report(cfg: RunConfig, n_max: int, out_prefix: str | None) -> dict:
    points = []
    worst = 0.0
    for n in range(1, n_max + 1):
        for theta in ORACLE_THETA_GRID:
            a = oracle_log_mgf(cfg.model, theta, n)
            b = log_mgf_exact(cfg.model, theta, n)
            gap = abs(a - b)
            worst = max(worst, gap)
            points.append({"n": n, "theta": theta, "gap": gap})
    if out_prefix is not None:
        law = enumerate_sum_distribution(cfg.model, n_max)
        rows = sorted(law.probs.items())
        _write_text(f"{out_prefix}.oracle_law.csv", _csv_text(["s", "prob"], rows))
    return {
        "theorem": "oracle",
        "model_fingerprint": cfg.model.fingerprint(),
        "n": n_max,
        "reps": 0,
        "seed": 0,
        "statistics": {"worst_gap": worst, "points": points},
        "targets": {"tolerance": ORACLE_TOL},
        "passed": bool(worst < ORACLE_TOL),
        "runtime_seconds": 0.0,
        "notes": {},
    }


def cmd_validate(cfg: RunConfig) -> int:
    require_assumptions(cfg.model, labels=("a", "c"))
    checks = cfg.checks or ("lln",)
    for name in checks:
        if name not in CHECK_NAMES:
            raise ConfigError(f"unknown check {name!r}; choose from {', '.join(CHECK_NAMES)}")
    seed, drawn = cfg.resolved_seed()
    if drawn:
        print(f"seed: {seed} (drawn from system entropy)", file=sys.stderr)

    reports = []
    for name in checks:
        if name == "lln":
            rep = validate_lln(cfg.model, cfg.n or 5000, cfg.reps or 500, seed)
            reports.append(rep.to_dict())
        elif name == "clt":
            rep = validate_clt(cfg.model, cfg.n or 2000, cfg.reps or 2000, seed)
            reports.append(rep.to_dict())
        elif name == "mdp":
            rep = validate_mdp(
                cfg.model,
                x=cfg.x if cfg.x is not None else 1.0,
                beta=cfg.beta if cfg.beta is not None else 0.6,
                n=cfg.n or 10_000,
                reps=cfg.reps,
                seed=seed,
            )
            reports.append(rep.to_dict())
        elif name == "gamma":
            if cfg.theta_grid:
                grid = cfg.theta_grid
            else:
                tc, _ = critical_tilt(cfg.model)
                grid = tuple(0.5 * tc * frac for frac in (0.2, 0.5, 1.0))
            rep = validate_gamma(cfg.model, grid, cfg.n or 1000, cfg.reps or 2000, seed)
            reports.append(rep.to_dict())
        elif name == "cesaro":
            reports.append(_cesaro_report(cfg, cfg.n or 100_000))
        else:
            reports.append(_oracle_report(cfg, cfg.n or 4, cfg.out))

    prefix = cfg.out
    summary_rows = []
    for rep in reports:
        if prefix is not None:
            _write_text(
                f"{prefix}.{rep['theorem']}.json", json.dumps(_jsonable(rep), indent=2) + "\n"
            )
        summary_rows.append(
            (rep["theorem"], rep["n"], rep["reps"], rep["seed"], int(rep["passed"]))
        )
    summary_csv = _csv_text(["theorem", "n", "reps", "seed", "passed"], summary_rows)
    if prefix is not None:
        _write_text(f"{prefix}.summary.csv", summary_csv)
    if cfg.fmt == "csv":
        sys.stdout.write(summary_csv)
    else:
        sys.stdout.write(json.dumps(_jsonable(reports), indent=2) + "\n")
    for rep in reports:
        verdict = "PASS" if rep["passed"] else "FAIL"
        print(f"{rep['theorem']}: {verdict}", file=sys.stderr)
    return EXIT_OK if all(rep["passed"] for rep in reports) else EXIT_VALIDATION_FAILED


def cmd_recursion(cfg: RunConfig) -> int:
    require_assumptions(cfg.model, labels=("a", "c"))
    what = cfg.what or "tilt"
    theta = cfg.theta if cfg.theta is not None else 0.1
    if what == "tilt":
        rec = tilt_recursion(cfg.model, theta, cfg.n or 1000)
        rows = [(k + 1, repr(float(v))) for k, v in enumerate(rec.values)]
        text = _csv_text(["k", "f"], rows)
    elif what == "gbar":
        tables = gbar_tables(cfg.model, cfg.n or 1000)
        rows = [
            (k + 1, repr(float(g1)), repr(float(g2)))
            for k, (g1, g2) in enumerate(zip(tables.g1, tables.g2))
        ]
        text = _csv_text(["k", "g1", "g2"], rows)
    elif what == "mdp-curve":
        sched = MdpSchedule(
            beta=cfg.beta if cfg.beta is not None else 0.75,
            horizons=cfg.horizons or (10_000, 100_000),
        )
        points = mdp_mgf_curve(cfg.model, theta, sched)
        rows = [(p.n, repr(p.value), repr(p.limit)) for p in points]
        text = _csv_text(["n", "value", "limit"], rows)
    else:
        raise ConfigError(f"unknown recursion table {what!r}; choose tilt, gbar or mdp-curve")
    _write_text(cfg.out, text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inarlim",
        description="Simulate subcritical infinite-order INAR count processes and "
        "validate their limit theory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--model", required=True, help="path to a JSON model spec")
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--reps", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p_theory = sub.add_parser("theory", help="asymptotic constants and rate-function grids")
    add_common(p_theory)
    p_theory.add_argument("--x-grid", default=None, help="comma-separated grid for the rates")

    p_sim = sub.add_parser("simulate", help="one trajectory or a batch of replications")
    add_common(p_sim)

    p_val = sub.add_parser("validate", help="empirical and deterministic theorem checks")
    add_common(p_val)
    p_val.add_argument("--checks", default="lln", help=f"comma list from {','.join(CHECK_NAMES)}")
    p_val.add_argument("--beta", type=float, default=None)
    p_val.add_argument("--x", type=float, default=None)
    p_val.add_argument("--theta-grid", default=None, help="comma-separated tilt grid")
    p_val.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")

    p_rec = sub.add_parser("recursion", help="dump tilt / expansion / scaled-MGF tables")
    add_common(p_rec)
    p_rec.add_argument("--what", choices=("tilt", "gbar", "mdp-curve"), default="tilt")
    p_rec.add_argument("--theta", type=float, default=None)
    p_rec.add_argument("--beta", type=float, default=None)
    p_rec.add_argument("--horizons", default=None, help="comma-separated horizon grid")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    model = _load_model(args.model)
    cfg = RunConfig(
        model=model,
        n=args.n,
        reps=args.reps,
        seed=args.seed,
        out=args.out,
    )
    if getattr(args, "x_grid", None):
        cfg.x_grid = _parse_floats(args.x_grid, "--x-grid")
    if getattr(args, "theta_grid", None):
        cfg.theta_grid = _parse_floats(args.theta_grid, "--theta-grid")
    if getattr(args, "horizons", None):
        cfg.horizons = _parse_ints(args.horizons, "--horizons")
    if getattr(args, "checks", None):
        cfg.checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    cfg.beta = getattr(args, "beta", None)
    cfg.x = getattr(args, "x", None)
    cfg.theta = getattr(args, "theta", None)
    cfg.what = getattr(args, "what", None)
    cfg.fmt = getattr(args, "fmt", "json")
    return cfg


_DISPATCH = {
    "theory": cmd_theory,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
    "recursion": cmd_recursion,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _DISPATCH[args.command](cfg)
    except (ConfigError, EnumerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AssumptionViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION


if __name__ == "__main__":
    sys.exit(main())
