"""Command-line interface: ``eval``, ``verify`` and ``grid``.

Exit codes: 0 success, 1 failed verification, 2 usage error or unknown
function, 3 domain or pole error (also malformed grid axes), 4 convergence
error.  Errors are reported on stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence

import numpy as np

from . import frobenius as fb
from . import forms, group, special
from .errors import ConvergenceError, DomainError, JacobianSingular
from .jsonio import decode_complex, encode
from .verify import CHECKS, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3, 4

DOMAIN = ("u", "v0", "v2", "tau")
FLAT = ("t1", "t2", "t3", "t4")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Entry:
    fn: Callable
    params: tuple
    optional: tuple = ()


def _dp(a):
    return group.DomainPoint(a["u"], a["v0"], a["v2"], a["tau"])


def _fp(a):
    return fb.FlatPoint(a["t1"], a["t2"], a["t3"], a["t4"])


def _point_out(p):
    return list(p.as_tuple()) if isinstance(p, group.DomainPoint) else list(p.as_array())


REGISTRY: Dict[str, Entry] = {
    "theta1": Entry(lambda a, c: special.theta1(a["v"], a["tau"], c), ("v", "tau")),
    "theta1_dv": Entry(lambda a, c: special.theta1_dv(a["v"], a["tau"], int(a.get("order", 1)), c),
                       ("v", "tau"), ("order",)),
    "theta1_dtau": Entry(lambda a, c: special.theta1_dtau(a["v"], a["tau"], c), ("v", "tau")),
    "g1": Entry(lambda a, c: special.g1(a["tau"], c), ("tau",)),
    "eisenstein_e2": Entry(lambda a, c: special.eisenstein_e2(a["tau"], c), ("tau",)),
    "wp": Entry(lambda a, c: special.wp(a["v"], a["tau"], c), ("v", "tau")),
    "wp_dv": Entry(lambda a, c: special.wp_dv(a["v"], a["tau"], c), ("v", "tau")),
    "wzeta": Entry(lambda a, c: special.wzeta(a["v"], a["tau"], c), ("v", "tau")),
    "wsigma": Entry(lambda a, c: special.wsigma(a["v"], a["tau"], c), ("v", "tau")),
    "quadratic_form": Entry(lambda a, c: group.quadratic_form(a["v0"], a["v2"]), ("v0", "v2")),
    "act": Entry(lambda a, c: _point_out(group.act(a["g"], _dp(a))), ("g",) + DOMAIN),
    "conformal_factor": Entry(lambda a, c: group.conformal_factor(a["g"], _dp(a)), ("g",) + DOMAIN),
    "phi0": Entry(lambda a, c: forms.phi0(_dp(a), c), DOMAIN),
    "phi1": Entry(lambda a, c: forms.phi1(_dp(a), c), DOMAIN),
    "superpotential": Entry(lambda a, c: forms.superpotential(a["v"], _dp(a), c), ("v",) + DOMAIN),
    "invariance_residual": Entry(lambda a, c: forms.invariance_residual(a["g"], _dp(a), a["v"], c),
                                 ("g", "v") + DOMAIN),
    "generating_function": Entry(lambda a, c: forms.generating_function(a["z"], _dp(a), c), ("z",) + DOMAIN),
    "flat_from_domain": Entry(lambda a, c: _point_out(fb.flat_from_domain(_dp(a), c)), DOMAIN),
    "domain_from_flat": Entry(
        lambda a, c: _point_out(fb.domain_from_flat(
            _fp(a), group.DomainPoint(a["guess_u"], a["guess_v0"], a["t3"], a["t4"]), c)),
        FLAT + ("guess_u", "guess_v0")),
    "intersection_form_domain": Entry(lambda a, c: fb.intersection_form_domain(), ()),
    "intersection_form_flat": Entry(lambda a, c: fb.intersection_form_flat(_fp(a), c), FLAT),
    "intersection_form_pushforward": Entry(lambda a, c: fb.intersection_form_pushforward(_dp(a), c), DOMAIN),
    "saito_metric": Entry(lambda a, c: fb.saito_metric(), ()),
    "free_energy": Entry(lambda a, c: fb.free_energy(_fp(a), c), FLAT),
    "third_derivatives": Entry(lambda a, c: fb.third_derivatives(_fp(a), c), FLAT),
    "structure_constants": Entry(lambda a, c: fb.structure_constants(_fp(a), c), FLAT),
    "wdvv_residual": Entry(lambda a, c: fb.wdvv_residual(_fp(a), c), FLAT),
    "euler_residual": Entry(lambda a, c: fb.euler_residual(_fp(a), c), FLAT),
    "det_jacobian": Entry(lambda a, c: fb.det_jacobian(_dp(a), c), DOMAIN),
    "canonical_spectrum": Entry(lambda a, c: fb.canonical_spectrum(_fp(a), c), FLAT),
    "metric_potential_residual": Entry(lambda a, c: fb.metric_potential_residual(_fp(a), c), FLAT),
}


def _lookup(name: str) -> Entry:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UsageError(f"unknown function {name!r}; available: {', '.join(sorted(REGISTRY))}") from None


def parse_args(entry: Entry, point: dict) -> dict:
    """Validate point fields against the signature and decode their values."""
    if not isinstance(point, dict):
        raise UsageError("point must be a JSON object")
    allowed = set(entry.params) | set(entry.optional)
    missing = [p for p in entry.params if p not in point]
    extra = sorted(set(point) - allowed)
    if missing or extra:
        raise UsageError(f"expected fields {list(entry.params)} (optional {list(entry.optional)}); "
                         f"missing {missing}, unexpected {extra}")
    out = {}
    for k, v in point.items():
        if k in ("g", "order"):
            try:
                out[k] = group.GroupElement.from_dict(v) if k == "g" else int(v)
            except (AttributeError, KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"field {k!r}: {exc}") from None
        else:
            try:
                out[k] = decode_complex(v)
            except (TypeError, ValueError) as exc:
                raise UsageError(f"field {k!r}: {exc}") from None
    return out


def evaluate(name: str, point: dict, cfg: special.SeriesConfig | None = None):
    entry = _lookup(name)
    return entry.fn(parse_args(entry, point), cfg)


def _error(code: int, exc: BaseException, **extra) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    payload.update(extra)
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def _guarded(fn: Callable[[], int], function: str | None = None) -> int:
    extra = {} if function is None else {"function": function}
    try:
        return fn()
    except UsageError as exc:
        return _error(EXIT_USAGE, exc, **extra)
    except (DomainError, JacobianSingular) as exc:
        return _error(EXIT_DOMAIN, exc, **extra)
    except ConvergenceError as exc:
        return _error(EXIT_CONVERGENCE, exc, **extra)


def cmd_eval(args) -> int:
    def run():
        try:
            point = json.loads(args.point) if args.point else {}
        except json.JSONDecodeError as exc:
            raise UsageError(f"point is not valid JSON: {exc}") from None
        value = evaluate(args.function, point)
        print(json.dumps(encode(value)))
        return EXIT_OK
    return _guarded(run, args.function)


def _parse_tols(items: Sequence[str]) -> dict:
    tols = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        if name not in CHECKS:
            raise UsageError(f"unknown check {name!r} in --tol")
        try:
            tol = float(val)
        except ValueError:
            raise UsageError(f"--tol value for {name!r} is not a number") from None
        if not tol > 0:
            raise UsageError(f"--tol value for {name!r} must be positive")
        tols[name] = tol
    return tols


def cmd_verify(args) -> int:
    def run():
        if args.samples < 1:
            raise UsageError("--samples must be >= 1")
        cfg = SuiteConfig(seed=args.seed, samples=args.samples, tol_overrides=_parse_tols(args.tol),
                          out=args.out)
        report = run_suite(cfg)
        if args.json:
            print(report.to_json())
        else:
            for c in report.checks:
                res = "inf" if c.max_residual == float("inf") else f"{c.max_residual:.3e}"
                print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<30} n={c.samples:<4} "
                      f"residual={res:<10} tol={c.tolerance:.1e}")
            print(f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks passed "
                  f"(seed {report.seed}, {report.wall_time:.1f} s)")
        return EXIT_OK if report.passed else EXIT_FAIL
    return _guarded(run)


@dataclass(frozen=True)
class Axis:
    name: str
    start: complex
    stop: complex
    count: int

    def values(self) -> List[complex]:
        if self.count == 1:
            return [self.start]
        return [self.start + (self.stop - self.start) * k / (self.count - 1) for k in range(self.count)]


def parse_axis(spec: str) -> Axis:
    """Parse ``name=start:stop:count``; raises DomainError when malformed."""
    name, sep, rest = spec.partition("=")
    parts = rest.split(":")
    if not sep or not name or len(parts) != 3:
        raise DomainError(f"malformed axis spec {spec!r}; expected name=start:stop:count")
    try:
        start, stop = decode_complex(parts[0]), decode_complex(parts[1])
        count = int(parts[2])
    except ValueError:
        raise DomainError(f"malformed axis spec {spec!r}") from None
    if count < 1:
        raise DomainError(f"axis count must be >= 1 in {spec!r}")
    return Axis(name, start, stop, count)


def _flatten(value) -> list:
    arr = np.atleast_1d(np.asarray(value, dtype=complex))
    return list(arr.ravel())


def cmd_grid(args) -> int:
    def run():
        entry = _lookup(args.function)
        axes = [parse_axis(s) for s in args.axis]
        if not 1 <= len(axes) <= 2:
            raise DomainError("grid needs one or two --axis specs")
        for ax in axes:
            if ax.name not in entry.params or ax.name == "g":
                raise DomainError(f"axis {ax.name!r} is not a parameter of {args.function}")
        try:
            base = json.loads(args.point) if args.point else {}
        except json.JSONDecodeError as exc:
            raise UsageError(f"point is not valid JSON: {exc}") from None
        rows = []
        width = None
        grids = [ax.values() for ax in axes]
        mesh = [(a,) for a in grids[0]] if len(axes) == 1 else [(a, b) for a in grids[0] for b in grids[1]]
        for coords in mesh:
            point = dict(base)
            for ax, x in zip(axes, coords):
                point[ax.name] = [x.real, x.imag]
            try:
                vals = _flatten(evaluate(args.function, point))
                width = len(vals)
            except DomainError:
                vals = None
            rows.append((coords, vals))
        width = width or 1
        header = []
        for ax in axes:
            header += [f"{ax.name}_re", f"{ax.name}_im"]
        header += ["re", "im"] if width == 1 else [f"{p}_{i}" for i in range(width) for p in ("re", "im")]
        out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
        try:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(header)
            for coords, vals in rows:
                row = []
                for x in coords:
                    row += [repr(float(x.real)), repr(float(x.imag))]
                if vals is None:
                    row += [""] * (2 * width)
                else:
                    for v in vals:
                        row += [repr(float(v.real)), repr(float(v.imag))]
                w.writerow(row)
        finally:
            if args.out:
                out.close()
        return EXIT_OK
    return _guarded(run, args.function)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobi-orbit",
                                     description="Evaluate and verify the orbit-space construction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a function at a point")
    p.add_argument("function")
    p.add_argument("point", nargs="?", default="{}",
                   help='JSON object, complex values as [re, im], e.g. \'{"v": [0, 0], "tau": [0, 1.5]}\'')
    p.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run the seeded verification suite")
    p.add_argument("--seed", type=int, default=SuiteConfig.seed)
    p.add_argument("--samples", type=int, default=SuiteConfig.samples)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="override the tolerance of one check (repeatable)")
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a table")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grid", help="sweep a function over one or two axes and write CSV")
    p.add_argument("function")
    p.add_argument("--axis", action="append", default=[], metavar="NAME=START:STOP:COUNT")
    p.add_argument("--point", default="{}", help="JSON object with the fixed parameters")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
