"""Command-line front end.

Exit status: 0 on success, 1 on parse or domain errors, 2 when a
verification suite fails.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import json
import math
import sys

import numpy as np

from . import __version__
from .capacity import countable_set_capacity_zero, point_capacity
from .cyclicity import cyclicity_report
from .dirichlet import (dirichlet_energy, dirichlet_energy_area, local_dirichlet_direct,
                        local_dirichlet_rs)
from .functions import StructuredFunction, h2_norm_sq
from .invariant import Polynomial, membership_report, polynomial_descriptor
from .measures import AtomicMeasure
from .parallel import worker_count
from .quadrature import QuadratureConfig


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# serialization ------------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _plain(obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    return text if any(ch in text for ch in ".en") else text + ".0"


def dumps(obj, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits."""

    def enc(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(x, level + 1)}" for k, x in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, list):
            if not v:
                return "[]"
            if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
                return "[" + ", ".join(enc(x, level) for x in v) + "]"
            return "[\n" + ",\n".join(pad + enc(x, level + 1) for x in v) + "\n" + end + "]"
        if isinstance(v, bool) or v is None:
            return json.dumps(v)
        if isinstance(v, float):
            return _fmt_float(v)
        if isinstance(v, int):
            return str(v)
        return json.dumps(v)

    return enc(_plain(obj), 0) + "\n"


# inputs -----------------------------------------------------------------------------

def _load_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValueError(f"--{what}: cannot read {path!r} ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"--{what}: {path!r} is not valid JSON ({exc.msg})") from exc


def _measure(path: str) -> AtomicMeasure:
    return AtomicMeasure.from_dict(_load_json(path, "measure"))


def _function(path: str, flag: str = "function") -> StructuredFunction:
    return StructuredFunction.from_dict(_load_json(path, flag))


def _config(args) -> QuadratureConfig:
    return QuadratureConfig(boundary_panels=args.panels, radial_nodes=args.radial_nodes,
                            angular_nodes=args.angular_nodes,
                            divergence_threshold=args.threshold)


def _energy(e) -> dict:
    return {"value": e.value, "error_estimate": e.error_estimate, "diverged": e.diverged}


def _metadata(args, cfg: QuadratureConfig, inputs: dict) -> dict:
    # output paths do not affect results and are left out for reproducibility
    resolved = {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "out", "csv")}
    return {"tool": "dmu", "version": __version__, "command": args.command,
            "arguments": resolved, "quadrature": dataclasses.asdict(cfg),
            "threads": worker_count(), "inputs": inputs}


def _emit(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# commands -----------------------------------------------------------------------------

def cmd_capacity(args, cfg):
    mu = _measure(args.measure)
    if mu.is_zero:
        raise ValueError("--measure: the zero measure has no capacity verdicts")
    if args.points_file:
        pts = _load_json(args.points_file, "points-file")
        if isinstance(pts, dict):
            pts = pts.get("points", [])
        try:
            pts = [float(p) for p in pts]
        except (TypeError, ValueError) as exc:
            raise ValueError("--points-file: expected a list of angles") from exc
        res = countable_set_capacity_zero(mu, pts)
        body = {"points": pts, "all_zero": res.all_zero,
                "verdicts": [v.to_dict() for v in res.verdicts]}
    elif args.point is not None:
        body = point_capacity(mu, args.point).to_dict()
    else:
        raise ValueError("--point or --points-file is required")
    return {**body, "metadata": _metadata(args, cfg, {"measure": mu.to_dict()})}, 0


def cmd_norm(args, cfg):
    mu = _measure(args.measure)
    f = _function(args.function)
    h2 = h2_norm_sq(f, cfg)
    d = dirichlet_energy(f, mu, cfg)
    body = {"h2_norm_sq": _energy(h2), "dirichlet_energy": _energy(d),
            "mu_norm_sq": _energy(h2 + d)}
    if args.area:
        body["dirichlet_energy_area"] = _energy(dirichlet_energy_area(f, mu, cfg))
    inputs = {"measure": mu.to_dict(), "function": f.to_dict()}
    return {**body, "metadata": _metadata(args, cfg, inputs)}, 0


def cmd_local(args, cfg):
    f = _function(args.function)
    body = {"point": args.point}
    if args.method in ("rs", "both"):
        body["rs"] = _energy(local_dirichlet_rs(f, args.point, cfg))
    if args.method in ("direct", "both"):
        body["direct"] = _energy(local_dirichlet_direct(f, args.point, cfg))
    return {**body, "metadata": _metadata(args, cfg, {"function": f.to_dict()})}, 0


def cmd_cyclicity(args, cfg):
    mu = _measure(args.measure)
    f = _function(args.function)
    if args.max_degree < 0:
        raise ValueError("--max-degree must be nonnegative")
    rep = cyclicity_report(f, mu, args.max_degree, cfg)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "d_n", "condition_number"])
            for n, (d, c) in enumerate(zip(rep.distances, rep.condition_numbers)):
                w.writerow([n, _fmt_float(d), _fmt_float(c)])
    inputs = {"measure": mu.to_dict(), "function": f.to_dict()}
    return {**rep.to_dict(), "metadata": _metadata(args, cfg, inputs)}, 0


def cmd_invariant(args, cfg):
    mu = _measure(args.measure)
    p = Polynomial.parse(args.poly)
    desc = polynomial_descriptor(p, mu)
    body = {"polynomial": [{"re": c.real, "im": c.imag} for c in p.coefficients],
            "descriptor": desc.to_dict()}
    inputs = {"measure": mu.to_dict()}
    if args.candidate:
        g = _function(args.candidate, "candidate")
        body["membership"] = membership_report(g, p, desc, mu, args.max_degree, cfg).to_dict()
        inputs["candidate"] = g.to_dict()
    return {**body, "metadata": _metadata(args, cfg, inputs)}, 0


def cmd_verify(args, cfg):
    from .verification import run_suites

    suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    results = run_suites(suites, seed=args.seed, cfg=cfg)
    width = max(len(r.name) for r in results)
    lines = [f"{'suite'.ljust(width)}  result"]
    lines += [f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL'}" for r in results]
    print("\n".join(lines), file=sys.stderr)
    ok = all(r.passed for r in results)
    body = {"passed": ok, "suites": [r.to_dict() for r in results]}
    return {**body, "metadata": _metadata(args, cfg, {})}, 0 if ok else 2


# parser --------------------------------------------------------------------------------

def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    q = common.add_argument_group("quadrature")
    q.add_argument("--panels", type=_positive_int, default=40)
    q.add_argument("--radial-nodes", type=_positive_int, default=256)
    q.add_argument("--angular-nodes", type=_positive_int, default=1024)
    q.add_argument("--threshold", type=_positive_float, default=1e12)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the JSON report here (default stdout)")

    parser = _Parser(prog="dmu", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dmu {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("capacity", parents=[common], help="point capacity verdicts")
    p.add_argument("--measure", required=True)
    p.add_argument("--point", type=float)
    p.add_argument("--points-file")
    p.set_defaults(handler=cmd_capacity)

    p = sub.add_parser("norm", parents=[common], help="H2 norm, Dirichlet energy, mu-norm")
    p.add_argument("--measure", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--area", action="store_true", help="also compute the area integral")
    p.set_defaults(handler=cmd_norm)

    p = sub.add_parser("local", parents=[common], help="local Dirichlet integral")
    p.add_argument("--function", required=True)
    p.add_argument("--point", type=float, required=True)
    p.add_argument("--method", choices=("rs", "direct", "both"), default="both")
    p.set_defaults(handler=cmd_local)

    p = sub.add_parser("cyclicity", parents=[common], help="distance sequence and certificate")
    p.add_argument("--measure", required=True)
    p.add_argument("--function", required=True)
    p.add_argument("--max-degree", type=int, default=50)
    p.add_argument("--csv")
    p.set_defaults(handler=cmd_cyclicity)

    p = sub.add_parser("invariant", parents=[common], help="invariant subspace descriptor")
    p.add_argument("--poly", required=True, help='ascending coefficients, e.g. "-1,1"')
    p.add_argument("--measure", required=True)
    p.add_argument("--candidate")
    p.add_argument("--max-degree", type=int, default=50)
    p.set_defaults(handler=cmd_invariant)

    p = sub.add_parser("verify", parents=[common], help="run the verification suites")
    p.add_argument("--suite", default="all")
    p.set_defaults(handler=cmd_verify)
    return parser


def _join_values(argv):
    """Glue ``--poly -1,1`` into ``--poly=-1,1`` so argparse accepts leading minus signs."""
    out, it = [], iter(argv)
    for a in it:
        if a in ("--poly", "--point"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        report, status = args.handler(args, cfg)
        _emit(report, args.out)
    except UsageError as exc:
        print(f"dmu: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"dmu: error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, TypeError) as exc:
        print(f"dmu: error: malformed input ({exc!r})", file=sys.stderr)
        return 1
    return status


if __name__ == "__main__":
    sys.exit(main())
