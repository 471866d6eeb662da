"""Command line entry point.

Body files are JSON objects with ``type`` "H" (normals, offsets) or "V"
(vertices); subspace files hold ``ambient``, ``dim``, ``basis`` (columns,
concatenated) and ``offset``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from ..core.bodies import HPolytope, VPolytope
from ..core.enumeration import facet_enumerate
from ..core.faces import surface_measure, volume
from ..core.io import body_to_dict, load_body, load_subspace
from ..core.ops import section
from ..errors import GeometryError, NotConverged
from ..functionals.montecarlo import gaussian_measure_mc, mean_width_mc, wills_mc
from ..positions.decomposition import fit_john_decomposition
from ..positions.john import contact_points, to_john_position, to_lowner_position
from ..positions.minsurf import isotropy_residual, min_surface_area_position
from .checkers import CHECKERS
from .experiment import emit_report, run_experiment
from .records import ExperimentConfig


def _as_h(P) -> HPolytope:
    return facet_enumerate(P) if isinstance(P, VPolytope) else P


def _as_v(P) -> VPolytope:
    return VPolytope(P.lattice.vertices) if isinstance(P, HPolytope) else P


def _map_dict(T) -> dict:
    return {"matrix": T.matrix.tolist(), "shift": T.shift.tolist()}


def _emit(payload: dict, out) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_john(args) -> int:
    K, T = to_john_position(_as_h(load_body(args.body)))
    dec = fit_john_decomposition(contact_points(K), symmetric=K.is_symmetric)
    _emit({"body": body_to_dict(K), "map": _map_dict(T), "decomposition": dec.to_dict()}, args.out)
    return 0


def cmd_lowner(args) -> int:
    K, T = to_lowner_position(_as_v(load_body(args.body)))
    _emit({"body": body_to_dict(K), "map": _map_dict(T)}, args.out)
    return 0


def cmd_minsurf(args) -> int:
    K, T = min_surface_area_position(_as_h(load_body(args.body)), tol=args.tol)
    sm = surface_measure(K)
    _emit({"body": body_to_dict(K), "map": _map_dict(T), "surface_area": sm.total,
           "isotropy_residual": isotropy_residual(K)}, args.out)
    return 0


def cmd_section(args) -> int:
    L = section(_as_h(load_body(args.body)), load_subspace(args.subspace))
    _emit({"body": body_to_dict(L), "volume": volume(L)}, args.out)
    return 0


def cmd_functional(args) -> int:
    P = load_body(args.body)
    if args.kind == "volume":
        payload = {"value": volume(P), "std_error": 0.0}
    elif args.kind == "meanwidth":
        payload = mean_width_mc(P, args.samples, args.seed).as_dict()
    elif args.kind == "wills":
        payload = wills_mc(_as_h(P), args.samples, args.seed).as_dict()
    else:
        payload = gaussian_measure_mc(_as_h(P), args.t, args.samples, args.seed).as_dict()
    payload["functional"] = args.kind
    _emit(payload, args.out)
    return 0


def cmd_check(args) -> int:
    ids = list(CHECKERS) if args.all else [args.theorem]
    failed = False
    for tid in ids:
        config = ExperimentConfig(
            theorem=tid, n=args.n, k=args.k, body_class=None if args.all else args.body_class,
            trials=args.trials, mc_samples=args.samples, seed=args.seed, d=args.d,
            lambda_grid=args.lambda_grid, max_n=args.max_n)
        start = time.perf_counter()
        report = run_experiment(config)
        if args.out:
            emit_report(report, args.out)
        c = report.counts()
        rate = report.pass_rate
        print(f"{tid:<14} passed {c['passed']:>4}  failed {c['failed']:>4}  skipped {c['skipped']:>4}"
              f"  pass rate {'n/a' if rate is None else f'{rate:.3f}'}  ({time.perf_counter() - start:.1f} s)")
        failed |= report.failed
    return 1 if failed else 0


def _grid(text: str) -> tuple:
    return tuple(float(x) for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="johnsections", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def body_cmd(name, func, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("body", help="body JSON file")
        s.add_argument("--out", help="write JSON here instead of stdout")
        s.set_defaults(func=func)
        return s

    body_cmd("john", cmd_john, "move a body to John position and fit its decomposition")
    body_cmd("lowner", cmd_lowner, "move a body to Löwner position")
    s = body_cmd("minsurf", cmd_minsurf, "move a body to minimal surface area position")
    s.add_argument("--tol", type=float, default=1e-6)
    s = body_cmd("section", cmd_section, "intersect a body with an affine subspace")
    s.add_argument("--subspace", required=True, help="subspace JSON file")

    s = sub.add_parser("functional", help="evaluate a functional of a body")
    s.add_argument("kind", choices=("volume", "meanwidth", "wills", "gauss"))
    s.add_argument("body")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--t", type=float, default=1.0, help="dilation for the Gaussian measure")
    s.add_argument("--out")
    s.set_defaults(func=cmd_functional)

    s = sub.add_parser("check", help="run inequality checkers")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--theorem", choices=list(CHECKERS))
    g.add_argument("--all", action="store_true", help="run every checker")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--d", type=float)
    s.add_argument("--lambda-grid", type=_grid, help="comma separated, e.g. 0.5,1,2")
    s.add_argument("--body-class")
    s.add_argument("--max-n", type=int, default=6)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="directory for <id>.json and <id>.csv")
    s.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GeometryError, NotConverged, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
