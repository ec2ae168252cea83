"""Command-line front end.

Every command writes exactly one JSON document to stdout (floats at 17
significant digits, so identical invocations yield identical bytes) and
human-readable diagnostics to stderr.  Exit codes: 0 on success, 1 on
validation failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import _jsonio
from .cauchy_schwarz import (
    CS_DELTA_BOUND,
    InducedForm,
    bound_chain,
    cauchy_schwarz_check,
)
from .channels import random_unital_cpmap
from .cloning import ClonerSpec, cloning_bound, cloning_limit
from .coding import CodingScheme
from .delta import SearchConfig, delta_effect_form, delta_state_form
from .optimizer import DEFAULT_INNER, OptimizerConfig, optimize
from .schemes import SCHEME_NAMES, build_scheme


def _emit(obj) -> None:
    sys.stdout.write(_jsonio.dumps(obj) + "\n")


def _fail(kind: str, message: str) -> int:
    _emit({"error": {"kind": kind, "message": message}})
    return 1


def _load(path: str) -> CodingScheme:
    try:
        text = open(path, "r").read()
    except OSError as exc:
        raise ValueError(f"cannot read scheme file: {exc}") from None
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"scheme file is not valid JSON: {exc}") from None
    return CodingScheme.from_json_dict(payload)


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        grid_points=args.grid,
        restarts=args.restarts,
        seed=args.seed,
        tol=args.tol,
    )


def _add_search_options(sub) -> None:
    sub.add_argument("--grid", type=int, default=SearchConfig.grid_points)
    sub.add_argument("--restarts", type=int, default=SearchConfig.restarts)
    sub.add_argument("--seed", type=int, default=SearchConfig.seed)
    sub.add_argument("--tol", type=float, default=SearchConfig.tol)


def _cmd_validate(args) -> int:
    scheme = _load(args.scheme)
    _emit({"valid": True, "d": scheme.d, "n": scheme.n})
    return 0


def _cmd_delta(args) -> int:
    scheme = _load(args.scheme)
    cfg = _search_config(args)
    if args.form == "effect":
        _emit(delta_effect_form(scheme, cfg).to_json_dict())
    elif args.form == "state":
        _emit(delta_state_form(scheme, cfg).to_json_dict())
    else:
        eff = delta_effect_form(scheme, cfg)
        sta = delta_state_form(scheme, cfg)
        _emit(
            {
                "effect": eff.to_json_dict(),
                "state": sta.to_json_dict(),
                "residual": abs(eff.value - sta.value),
            }
        )
    return 0


def _cmd_bounds(args) -> int:
    scheme = _load(args.scheme)
    chain = bound_chain(scheme, _search_config(args))
    clone_floor = cloning_limit(scheme.d)
    cloning_pass = chain.delta_hat >= clone_floor - 5e-3
    _emit(
        {
            "d": scheme.d,
            "n": scheme.n,
            "delta_hat": chain.delta_hat,
            "cs": {
                "bound": float(CS_DELTA_BOUND),
                "disturbance_term": chain.disturbance_term,
                "form_term": chain.form_term,
                "chain_ok": chain.chain_ok,
                "pass": chain.bound_ok and chain.all_ok,
            },
            "cloning": {"bound": clone_floor, "pass": cloning_pass},
            "pass": chain.all_ok and cloning_pass,
        }
    )
    print(
        f"delta_hat={chain.delta_hat:.6f}  cs_bound={CS_DELTA_BOUND:.6f}  "
        f"cloning_bound={clone_floor:.6f}",
        file=sys.stderr,
    )
    return 0


def _cmd_cs_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    d = args.d
    failures = 0
    max_residual = -np.inf
    for trial in range(args.trials):
        t = random_unital_cpmap(d, kraus_count=int(rng.integers(1, 4)), seed=int(rng.integers(2**31)))
        form = InducedForm.of_cpmap(t)
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        check = cauchy_schwarz_check(form, a, b)
        max_residual = max(max_residual, check.residual)
        if not check.passed:
            failures += 1
    _emit({"trials": args.trials, "failures": failures, "max_residual": float(max_residual)})
    return 0 if failures == 0 else 1


def _cmd_clone(args) -> int:
    scheme = _load(args.scheme)
    cloner = ClonerSpec(scheme=scheme, copies=args.M)
    rng = np.random.default_rng(args.seed)
    residual = 0.0
    for _ in range(8):
        b = rng.standard_normal((scheme.d, scheme.d)) + 1j * rng.standard_normal(
            (scheme.d, scheme.d)
        )
        b = (b + b.conj().T) / 2
        for slot in range(cloner.copies):
            residual = max(residual, cloner.marginal_residual(b, slot))
    delta_hat = delta_effect_form(scheme).value
    _emit(
        {
            "M": cloner.copies,
            "kw_bound": cloning_bound(scheme.d, cloner.copies),
            "marginal_max_residual": residual,
            "delta_hat": delta_hat,
        }
    )
    return 0


def _cmd_scheme(args) -> int:
    scheme = build_scheme(args.name, d=args.d, n=args.n, seed=args.seed)
    scheme.save(args.out)
    _emit({"name": args.name, "d": scheme.d, "n": scheme.n, "out": args.out})
    return 0


def _cmd_optimize(args) -> int:
    cfg = OptimizerConfig(
        d=args.d,
        n=args.n,
        restarts=args.restarts,
        seed=args.seed,
        inner=DEFAULT_INNER,
        threads=args.threads,
    )
    result = optimize(cfg)
    if args.out:
        result.best_scheme.save(args.out)
    _emit(result.to_json_dict())
    print(f"delta_hat={result.delta_hat:.6f} after {len(result.history)} improvements", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdelta",
        description="Worst-case deviation of measure-and-prepare coding schemes.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("QDELTA_THREADS", os.cpu_count() or 1)),
        help="worker threads for parallel restarts (env: QDELTA_THREADS)",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="validate a scheme file")
    p.add_argument("scheme")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("delta", help="estimate the worst-case deviation")
    p.add_argument("scheme")
    p.add_argument("--form", choices=("effect", "state", "both"), default="effect")
    _add_search_options(p)
    p.set_defaults(handler=_cmd_delta)

    p = sub.add_parser("bounds", help="audit the two lower bounds for a scheme")
    p.add_argument("scheme")
    _add_search_options(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("cs-check", help="randomized Cauchy-Schwarz inequality suite")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_cs_check)

    p = sub.add_parser("clone", help="cloner marginals and the cloning floor")
    p.add_argument("scheme")
    p.add_argument("--M", type=int, required=True, choices=range(1, 9), metavar="M")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_clone)

    p = sub.add_parser("scheme", help="materialize a named scheme to a file")
    p.add_argument("--name", choices=SCHEME_NAMES, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_scheme)

    p = sub.add_parser("optimize", help="search for low-deviation schemes")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_optimize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        return _fail("validation", str(exc))
    except OSError as exc:
        return _fail("io", str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
