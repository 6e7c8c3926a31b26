"""Command-line front end.

Verbs: compute, sweep, check-null, demo-discontinuity, dump-state.
Exit codes: 0 success, 2 usage error, 3 validation or numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from functools import partial

import numpy as np

from . import __version__
from .decompositions import gmqd_lower_bound
from .errors import MinCorrError
from .measures import (
    entropic_discord_two_sided,
    gmqd_one_sided,
    gmqd_two_sided,
    min_one_sided,
    min_two_sided,
)
from .nullity import is_zero_min_one_sided, is_zero_min_two_sided
from .optimize import OptimizerOptions
from .oracle import discontinuity_probe
from .states import (
    DensityMatrix,
    bell_diagonal,
    bell_state,
    cq_state,
    isotropic,
    load_state,
    max_entangled_mixed,
    pure_state,
    random_density,
    save_state,
    werner,
)

EXIT_USAGE = 2
EXIT_INVALID = 3

STATE_FAMILIES = ("bell", "werner", "isotropic", "bell-diagonal", "memes", "pure", "random",
                  "cq-witness")
SWEEP_FAMILIES = ("werner", "isotropic", "bell-diagonal")
MEASURES = ("n_a", "n_b", "n_ab", "d_g_a", "d_g_b", "d_g_ab", "d_ab_entropic", "bounds")


class UsageError(Exception):
    pass


def _floats(text: str | None, name: str) -> list[float]:
    if text is None:
        raise UsageError(f"--{name} is required for this state")
    try:
        return [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--{name} must be comma-separated numbers") from exc


def _need(value, name):
    if value is None:
        raise UsageError(f"--{name} is required for this state")
    return value


def build_state(args) -> tuple[DensityMatrix, dict]:
    """Construct the state named by ``--state`` and return it with a descriptor."""
    spec = args.state
    if spec.startswith("file:"):
        path = spec[5:]
        return load_state(path), {"file": path}
    desc = {"family": spec}
    if spec == "bell":
        return bell_state(), desc
    if spec in ("werner", "isotropic"):
        m, x = _need(args.m, "m"), _need(args.x, "x")
        desc.update(m=m, x=x)
        return (werner if spec == "werner" else isotropic)(m, x), desc
    if spec == "bell-diagonal":
        c = _floats(args.c, "c")
        if len(c) != 3:
            raise UsageError("--c needs three numbers")
        desc.update(c=c)
        return bell_diagonal(c), desc
    if spec == "memes":
        m, n, p = _need(args.m, "m"), _need(args.n, "n"), _floats(args.p, "p")
        desc.update(m=m, n=n, p=p)
        return max_entangled_mixed(m, n, p), desc
    if spec == "pure":
        m, n = _need(args.m, "m"), _need(args.n, "n")
        try:
            vec = [complex(t) for t in _need(args.vector, "vector").split(",")]
        except ValueError as exc:
            raise UsageError("--vector must be comma-separated complex numbers") from exc
        desc.update(m=m, n=n, vector=[[z.real, z.imag] for z in vec])
        return pure_state(vec, (m, n)).density(), desc
    if spec == "random":
        m, n = _need(args.m, "m"), _need(args.n, "n")
        desc.update(m=m, n=n, seed=args.seed)
        return random_density((m, n), seed=args.seed), desc
    if spec == "cq-witness":
        # equal weights, distinct conditionals: classical-looking but N_A > 0
        return cq_state([0.5, 0.5], [np.diag([0.8, 0.2]), np.diag([0.3, 0.7])]), desc
    raise UsageError(f"unknown state {spec!r}; choose from {STATE_FAMILIES} or file:PATH")


def _opts(args) -> OptimizerOptions:
    return OptimizerOptions(starts=args.starts, seed=args.seed,
                            degeneracy_tol=args.degeneracy_tol)


def evaluate(rho: DensityMatrix, measure: str, opts: OptimizerOptions) -> dict:
    """Flattened result payload for one measure."""
    if measure == "bounds":
        lb2 = gmqd_lower_bound(rho, "two_sided")
        lb1 = gmqd_lower_bound(rho, "one_sided_A")
        d_ab, n_ab, d_a = gmqd_two_sided(rho, opts), min_two_sided(rho, opts), gmqd_one_sided(rho, "A", opts)
        return {
            "value": lb2.value,
            "method": "theorem7",
            "bound": "lower",
            "lower_bound_two_sided": lb2.value,
            "lower_bound_one_sided_A": lb1.value,
            "lower_bound_vacuous": lb2.vacuous,
            "d_g_ab": d_ab.value,
            "d_g_ab_method": d_ab.method,
            "n_ab": n_ab.value,
            "n_ab_method": n_ab.method,
            "d_g_a": d_a.value,
            "d_g_a_method": d_a.method,
        }
    fn = {
        "n_a": partial(min_one_sided, side="A"),
        "n_b": partial(min_one_sided, side="B"),
        "n_ab": min_two_sided,
        "d_g_a": partial(gmqd_one_sided, side="A"),
        "d_g_b": partial(gmqd_one_sided, side="B"),
        "d_g_ab": gmqd_two_sided,
        "d_ab_entropic": entropic_discord_two_sided,
    }.get(measure)
    if fn is None:
        raise UsageError(f"unknown measure {measure!r}; choose from {MEASURES}")
    return fn(rho, opts=opts).to_dict()


def run_record(descriptor: dict, measure: str, payload: dict, seed: int) -> dict:
    rec = {"input": descriptor, "measure": measure}
    rec.update(payload)
    rec.update(version=__version__, seed=seed,
               timestamp=datetime.now(timezone.utc).isoformat())
    return rec


def _emit(obj: dict, out) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def cmd_compute(args, out) -> int:
    rho, desc = build_state(args)
    if args.dump_state:
        save_state(rho, args.dump_state)
    rec = run_record(desc, args.measure, evaluate(rho, args.measure, _opts(args)), args.seed)
    if args.format == "csv":
        flat = {k: v for k, v in rec.items() if not isinstance(v, (dict, list))}
        w = csv.DictWriter(out, fieldnames=sorted(flat), lineterminator="\n")
        w.writeheader()
        w.writerow(flat)
    else:
        _emit(rec, out)
    return 0


def null_point(family: str, m: int) -> float | None:
    return {"werner": 1.0 / m, "isotropic": 1.0 / m**2}.get(family)


def sweep_state(family: str, t: float, m: int = 2, direction=(0.0, 0.0, 1.0)) -> DensityMatrix:
    if family == "werner":
        return werner(m, t)
    if family == "isotropic":
        return isotropic(m, t)
    if family == "bell-diagonal":
        return bell_diagonal(t * np.asarray(direction, dtype=float))
    raise UsageError(f"sweep family must be one of {SWEEP_FAMILIES}, got {family!r}")


def _sweep_point(t, family, m, direction, measures, opts):
    rho = sweep_state(family, t, m, direction)
    row = {"param": t}
    for name in measures:
        res = evaluate(rho, name, opts)
        row[name] = res["value"]
        row[f"{name}_method"] = res["method"]
        row[f"{name}_bound"] = res["bound"]
    return row


def sweep_rows(family: str, params, measures, opts: OptimizerOptions, m: int = 2,
               direction=(0.0, 0.0, 1.0), jobs: int = 1) -> list[dict]:
    """Evaluate ``measures`` along a one-parameter family; rows in parameter order."""
    for name in measures:
        if name not in MEASURES or name == "bounds":
            raise UsageError(f"sweep measure must be one of {MEASURES[:-1]}, got {name!r}")
    params = [float(t) for t in params]
    work = partial(_sweep_point, family=family, m=m, direction=tuple(direction),
                   measures=tuple(measures), opts=opts)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(work, params))
    return [work(t) for t in params]


def sweep_params(family: str, start: float, stop: float, points: int, m: int,
                 include_null_point: bool) -> list[float]:
    params = list(np.linspace(start, stop, points))
    x0 = null_point(family, m)
    if include_null_point and x0 is not None and start <= x0 <= stop:
        if not any(abs(t - x0) < 1e-12 for t in params):
            params.append(x0)
    return sorted(params)


def cmd_sweep(args, out) -> int:
    if args.points < 1:
        raise UsageError("--points must be positive")
    direction = _floats(args.c, "c") if args.c else (0.0, 0.0, 1.0)
    measures = [s.strip() for s in args.measures.split(",") if s.strip()]
    params = sweep_params(args.family, args.start, args.stop, args.points, args.m,
                          args.include_null_point)
    rows = sweep_rows(args.family, params, measures, _opts(args), args.m, direction, args.jobs)
    if args.format == "json":
        for row in rows:
            _emit(row, out)
    else:
        w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return 0


def cmd_check_null(args, out) -> int:
    rho, desc = build_state(args)
    side = args.side.upper()
    if side == "AB":
        report = is_zero_min_two_sided(rho, args.tol, args.degeneracy_tol)
    else:
        report = is_zero_min_one_sided(rho, side, args.tol, args.degeneracy_tol)
    rec = {"input": desc, "report": report.to_dict(), "version": __version__,
           "seed": args.seed, "timestamp": datetime.now(timezone.utc).isoformat()}
    _emit(rec, out)
    return 0


def cmd_demo_discontinuity(args, out) -> int:
    rows = []
    for eps in args.epsilon:
        res = discontinuity_probe(args.m, args.x, eps, args.seed, args.degeneracy_tol)
        rows.append(res.to_dict())
    if args.format == "csv":
        w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        _emit({"m": args.m, "x": args.x, "seed": args.seed, "rows": rows,
               "version": __version__, "timestamp": datetime.now(timezone.utc).isoformat()}, out)
    return 0


def cmd_dump_state(args, out) -> int:
    rho, _ = build_state(args)
    if args.out:
        save_state(rho, args.out)
    else:
        out.write(json.dumps(rho.to_json()) + "\n")
    return 0


def _add_shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--degeneracy-tol", type=float, default=1e-8)
    p.add_argument("--format", choices=("json", "csv"), default=None)


def _add_state(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--state", required=required,
                   help="bell | werner | isotropic | bell-diagonal | memes | pure | random | "
                        "cq-witness | file:PATH")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--x", type=float)
    p.add_argument("--c", help="Bell-diagonal correlations c1,c2,c3")
    p.add_argument("--p", help="mixture weights for memes")
    p.add_argument("--vector", help="amplitudes for pure, e.g. 0.7071,0,0,0.7071")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mincorr",
                                     description="Measurement-induced nonlocality and geometric discord")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one measure on one state")
    _add_state(p)
    _add_shared(p)
    p.add_argument("--measure", required=True, choices=MEASURES)
    p.add_argument("--dump-state", metavar="PATH", help="also write the state as JSON")
    p.set_defaults(func=cmd_compute, default_format="json")

    p = sub.add_parser("sweep", help="CSV of measures along a state family")
    _add_shared(p)
    p.add_argument("--family", required=True, choices=SWEEP_FAMILIES)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--c", help="direction for bell-diagonal (default 0,0,1)")
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, default=1.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--measures", default="n_ab")
    p.add_argument("--include-null-point", action="store_true",
                   help="add the exact nullity parameter of the family to the grid")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep, default_format="csv")

    p = sub.add_parser("check-null", help="structural zero-MiN test")
    _add_state(p)
    _add_shared(p)
    p.add_argument("--side", choices=("A", "B", "AB", "a", "b", "ab"), default="AB")
    p.set_defaults(func=cmd_check_null, default_format="json")

    p = sub.add_parser("demo-discontinuity", help="gap of N_AB along two converging sequences")
    _add_shared(p)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--x", type=float, default=0.8)
    p.add_argument("--epsilon", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4])
    p.set_defaults(func=cmd_demo_discontinuity, default_format="json")

    p = sub.add_parser("dump-state", help="write a named state in the JSON state format")
    _add_state(p)
    _add_shared(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_dump_state, default_format="json")
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    if args.format is None:
        args.format = args.default_format
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MinCorrError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
