"""``maglab`` command line.

Exit codes: 0 success, 1 check failure, 2 input/parse error, 3 numerical
failure, 4 domain precondition violated.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

from maglab import experiments as ex
from maglab.cubes import CROSS_TOL, CubeUnionSpec, alphas, weight_measure
from maglab.errors import DomainError, InputError, NumericalError
from maglab.fixtures import run_checks
from maglab.io import load_points, to_csv, to_json, write_output
from maglab.metric import RESIDUAL_TOL, is_skew, skewness, weighting

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_NUMERIC, EXIT_DOMAIN = 0, 1, 2, 3, 4
ENV_RESIDUAL_TOL = "MAGLAB_RESIDUAL_TOL"


@dataclass
class RunConfig:
    points: Optional[str] = None
    out: Optional[str] = None
    format: str = "json"
    system: str = "auto"
    residual_tol: float = RESIDUAL_TOL
    cross_tol: float = CROSS_TOL
    seed: int = 0


def _default_residual_tol() -> float:
    raw = os.environ.get(ENV_RESIDUAL_TOL)
    if raw is None:
        return RESIDUAL_TOL
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"{ENV_RESIDUAL_TOL}={raw!r} is not a number") from None


def _emit(cfg: RunConfig, text: str):
    write_output(text, cfg.out, sys.stdout)


def cmd_magnitude(cfg: RunConfig) -> int:
    F = load_points(cfg.points)
    w = weighting(F, cfg.residual_tol)
    sk = skewness(F)
    if cfg.format == "csv":
        rows = [("magnitude", w.total), ("skewness", sk), ("is_skew", str(is_skew(F)).lower()), ("residual", w.residual)]
        rows += [(f"w[{i}]", v) for i, v in enumerate(w.values)]
        _emit(cfg, to_csv(["quantity", "value"], rows))
    else:
        _emit(cfg, to_json({
            "points": F.to_dict(),
            "magnitude": w.total,
            "weighting": w.values,
            "skewness": sk,
            "is_skew": is_skew(F),
            "residual": w.residual,
        }))
    return EXIT_OK


def cmd_cubes(cfg: RunConfig, r: float) -> int:
    F = load_points(cfg.points)
    spec = CubeUnionSpec(F, r)
    table = alphas(spec, cfg.system, tol=cfg.residual_tol, cross_tol=cfg.cross_tol)
    W = weight_measure(spec, table)
    if cfg.format == "csv":
        N = F.dim
        header = ["point_index", *[f"s{k + 1}" for k in range(N)], *[f"x{k + 1}" for k in range(N)], "alpha"]
        rows = [
            (i, *s, *v.tolist(), a)
            for (i, s), v, a in zip(spec.index(), spec.vertices(), table.values.tolist())
        ]
        text = to_csv(header, rows)
        text += f"# magnitude={W.total_mass!r} system={table.system_used} residual={table.residual!r} "
        text += f"cross_residual={table.cross_residual!r} condition={table.condition_estimate!r}\n"
        _emit(cfg, text)
    else:
        _emit(cfg, to_json({
            "points": F.to_dict(),
            "alpha_table": table.to_dict(),
            "magnitude": W.total_mass,
            "cross_residual": table.cross_residual,
            "condition_estimate": table.condition_estimate,
            "weight_measure": W.to_dict(),
        }))
    return EXIT_OK


def _check_range(r_start: float, r_end: float, steps: int, ordered: bool = True):
    if steps < 1:
        raise DomainError(f"steps must be positive, got {steps}")
    if not (r_start > 0 and r_end > 0):
        raise DomainError("radii must be positive")
    if ordered and steps > 1 and not r_start > r_end:
        raise DomainError(f"need r_start > r_end, got {r_start:g} <= {r_end:g}")


def cmd_sweep(cfg: RunConfig, r_start: float, r_end: float, steps: int, schedule: str = "geometric") -> int:
    F = load_points(cfg.points)
    _check_range(r_start, r_end, steps)
    make = ex.geometric_schedule if schedule == "geometric" else ex.linear_schedule
    rep = ex.convergence_sweep(F, make(r_start, r_end, steps), cfg.system)
    if cfg.format == "csv":
        rows = [(x.r, x.mg_cubes, rep.base_magnitude, x.gap) for x in rep.rows]
        _emit(cfg, to_csv(["r", "mg_cubes", "mg_F", "gap"], rows))
    else:
        _emit(cfg, to_json(rep.to_dict()))
    return EXIT_OK


def cmd_conjecture(cfg: RunConfig, r_start: float, r_end: float, steps: int) -> int:
    F = load_points(cfg.points)
    if steps < 4:
        raise DomainError(f"need >= 4 fit points, got steps = {steps}")
    _check_range(r_start, r_end, steps, ordered=False)
    rep = ex.conjecture_probe(F, ex.geometric_schedule(r_start, r_end, steps))
    if cfg.format == "csv":
        text = to_csv(["r", "logdet"], rep.rows)
        text += "\n" + to_csv(
            ["k_expected", "fitted_exponent", "fitted_log_coeff", "expected_log_coeff"],
            [(rep.k_expected, rep.fitted_exponent, rep.fitted_log_coefficient, rep.expected_log_coefficient)],
        )
        _emit(cfg, text)
    else:
        _emit(cfg, to_json(rep.to_dict()))
    print(
        f"informational: conjectured exponent k = {rep.k_expected}, fitted {rep.fitted_exponent:.6g} "
        f"(|diff| {rep.exponent_error():.3g})",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_perturb(cfg: RunConfig, scale: float, trials: int) -> int:
    F = load_points(cfg.points)
    pairs = ex.continuity_probe(F, scale, trials, cfg.seed)
    if cfg.format == "csv":
        _emit(cfg, to_csv(["trial", "d_H", "delta_mg"], [(i, d, g) for i, (d, g) in enumerate(pairs)]))
    else:
        _emit(cfg, to_json([{"trial": i, "d_H": d, "delta_mg": g} for i, (d, g) in enumerate(pairs)]))
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    results = run_checks()
    if cfg.format == "csv":
        text = to_csv(["fixture", "status", "observed", "expected"],
                      [(c.name, "pass" if c.passed else "FAIL", c.observed, c.expected) for c in results])
    elif cfg.format == "json":
        text = to_json([{"fixture": c.name, "passed": c.passed, "observed": c.observed, "expected": c.expected}
                        for c in results])
    else:
        lines = []
        for c in results:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status}  {c.name}"
            if not c.passed:
                line += f": observed {c.observed}, expected {c.expected}"
            lines.append(line)
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    failed = [c.name for c in results if not c.passed]
    if failed:
        print("failed fixtures: " + ", ".join(failed), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--out", default=None, help="write output here (atomically) instead of stdout")
    common.add_argument("--residual-tol", type=float, default=None)
    common.add_argument("--cross-tol", type=float, default=CROSS_TOL)

    pts = argparse.ArgumentParser(add_help=False)
    pts.add_argument("--points", required=True, help="point set file (.json or .csv)")

    p = argparse.ArgumentParser(prog="maglab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("magnitude", parents=[common, pts], help="magnitude and weighting of a finite set")

    c = sub.add_parser("cubes", parents=[common, pts], help="alpha table and magnitude of a cube union")
    c.add_argument("--r", type=float, required=True)
    c.add_argument("--system", choices=["vertex", "corner", "auto"], default="auto")

    s = sub.add_parser("sweep", parents=[common, pts], help="mg(cubes) - mg(F) along shrinking radii")
    s.add_argument("--r-start", type=float, required=True)
    s.add_argument("--r-end", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--schedule", choices=["geometric", "linear"], default="geometric")
    s.add_argument("--system", choices=["vertex", "corner", "auto"], default="auto")

    k = sub.add_parser("conjecture", parents=[common, pts], help="log-log fit of the vertex determinant")
    k.add_argument("--r-start", type=float, required=True)
    k.add_argument("--r-end", type=float, required=True)
    k.add_argument("--steps", type=int, required=True)

    t = sub.add_parser("perturb", parents=[common, pts], help="empirical continuity probe")
    t.add_argument("--scale", type=float, required=True)
    t.add_argument("--trials", type=int, required=True)
    t.add_argument("--seed", type=int, default=0)

    sub.add_parser("check", parents=[common], help="run the embedded reference fixtures")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            points=getattr(args, "points", None),
            out=args.out,
            format=args.format or ("text" if args.command == "check" else "json"),
            system=getattr(args, "system", "auto"),
            residual_tol=args.residual_tol if args.residual_tol is not None else _default_residual_tol(),
            cross_tol=args.cross_tol,
            seed=getattr(args, "seed", 0),
        )
        if args.command == "magnitude":
            return cmd_magnitude(cfg)
        if args.command == "cubes":
            return cmd_cubes(cfg, args.r)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.r_start, args.r_end, args.steps, args.schedule)
        if args.command == "conjecture":
            return cmd_conjecture(cfg, args.r_start, args.r_end, args.steps)
        if args.command == "perturb":
            return cmd_perturb(cfg, args.scale, args.trials)
        return cmd_check(cfg)
    except InputError as exc:
        print(f"maglab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"maglab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"maglab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
