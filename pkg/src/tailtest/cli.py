"""Command-line interface.

Subcommands mirror the library workflows: ``sample`` (seeded draws to a
file), ``proxy`` (analytic curve per bucket as CSV), ``test`` (heavy or
light verdict as a JSON report), ``simulate`` (repeated runs aggregated
to CSV), and ``complexity`` (bucket and sample budgets).

Exit codes: 0 success, 1 domain or parse failure, 2 usage error; with
``--exit-verdict`` the ``test`` subcommand exits 3 for a heavy verdict
and 4 for light.  Output files are written atomically (temp file then
rename).  All output is byte-deterministic for a given seed; the
optional ``--threads`` flag is accepted for pipeline compatibility and
never affects results.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import distributions
from .distributions import TailParams, WellBehavedBounds, model_from_name
from .harness import (
    FileFormat,
    ReportFormat,
    load_samples,
    replicate,
    run_sampled_test,
    serialize_report,
)
from .proxy import proxy_curve
from .tester import (
    TestConfig,
    TestOutcome,
    Variant,
    Verdict,
    required_buckets,
    required_samples,
    run_full_test,
    run_weak_test,
)

__all__ = ["main", "run_cli"]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_HEAVY = 3
EXIT_LIGHT = 4


def _parse_params(spec: str) -> dict[str, float]:
    """Parse 'k=v[,k=v...]' parameter strings."""
    params: dict[str, float] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"parameter {item!r} is not of the form key=value")
        key, _, value = item.partition("=")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ValueError(f"parameter {key.strip()!r} has non-numeric value {value!r}") from None
    return params


def _atomic_write(path: str, payload: bytes) -> None:
    """Write via a temp file in the target directory, then rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _file_format(name: str) -> FileFormat:
    return FileFormat.TEXT if name == "text" else FileFormat.RAW_F64


def _add_dist_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--dist", required=required,
                   help="family: exponential | lomax | halfgaussian | stretchedexponential")
    p.add_argument("--params", default="",
                   help="comma-separated parameters; names are fixed per family: "
                        "exponential: lambda; lomax: a,lambda; halfgaussian: sigma; "
                        "stretchedexponential: gamma,m")


def _add_bounds_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, required=True,
                   help="hazard-rate drop magnitude (>0)")
    p.add_argument("--rho", type=float, required=True,
                   help="probability mass of the heavy region, in (0,1)")
    p.add_argument("--beta", type=float, required=True, help="density upper bound")
    p.add_argument("--b1", type=float, required=True,
                   help="Lipschitz bound on the quantile function's first derivative")
    p.add_argument("--b2", type=float, required=True,
                   help="Lipschitz bound on the quantile function's second derivative")
    p.add_argument("--zeta", type=float, default=None,
                   help="edge margin where the bounds hold (default: 1/(2k))")


def _add_variant_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weak", action="store_true",
                   help="single-split, single-granularity variant")
    p.add_argument("--c1", type=float, default=0.1,
                   help="weak variant: lower scan fraction (default 0.1)")
    p.add_argument("--c2", type=float, default=0.8,
                   help="weak variant: upper scan fraction (default 0.8)")
    p.add_argument("--noise-sigmas", type=float, default=4.0,
                   help="noise-floor multiplier for the decision boundary (default 4.0)")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="tailtest",
        description="Decide whether sampled data is light- or heavy-tailed.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw seeded samples to a file")
    _add_dist_args(p)
    p.add_argument("--n", type=int, required=True, help="number of samples")
    p.add_argument("--seed", type=int, required=True, help="64-bit generator seed")
    p.add_argument("--out", required=True, help="output path")
    p.add_argument("--format", choices=["text", "f64"], default="text",
                   help="text: one decimal per line; f64: packed little-endian doubles")
    p.add_argument("--threads", type=int, default=None, help="accepted; never affects output")

    p = sub.add_parser("proxy", help="analytic proxy curve per bucket as CSV")
    _add_dist_args(p)
    p.add_argument("--k", type=int, required=True, help="coarse bucket count")
    p.add_argument("--alpha", type=float, default=0.0, help="gap parameter (default 0: no gap)")
    p.add_argument("--beta", type=float, default=1.0, help="density bound for the gap")
    p.add_argument("--b1", type=float, default=1.0, help="smoothness bound for the gap")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--threads", type=int, default=None, help="accepted; never affects output")

    p = sub.add_parser("test", help="run the heavy/light decision, write a JSON report")
    p.add_argument("--input", default=None, help="sample file to test instead of --dist")
    p.add_argument("--format", choices=["text", "f64"], default="text",
                   help="input file format")
    _add_dist_args(p, required=False)
    p.add_argument("--n", type=int, default=None,
                   help="samples per split when drawing via --dist")
    p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    p.add_argument("--k", type=int, required=True, help="coarse bucket count")
    _add_bounds_args(p)
    _add_variant_args(p)
    p.add_argument("--reps", type=int, default=None,
                   help="repeat with seeds seed..seed+reps-1 and take the majority verdict")
    p.add_argument("--out", default=None, help="JSON report path (default: stdout)")
    p.add_argument("--exit-verdict", action="store_true",
                   help="exit 3 on heavy, 4 on light (otherwise always 0)")
    p.add_argument("--threads", type=int, default=None, help="accepted; never affects output")

    p = sub.add_parser("simulate", help="repeated runs aggregated per bucket as CSV")
    _add_dist_args(p)
    p.add_argument("--reps", type=int, required=True, help="number of repetitions (>=2)")
    p.add_argument("--k", type=int, required=True, help="coarse bucket count")
    p.add_argument("--n", type=int, required=True, help="samples per split and repetition")
    p.add_argument("--seed", type=int, required=True, help="base seed; rep r uses seed+r")
    _add_bounds_args(p)
    _add_variant_args(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--threads", type=int, default=None, help="accepted; never affects output")

    p = sub.add_parser("complexity", help="print bucket and sample budgets")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--b1", type=float, required=True)
    p.add_argument("--b2", type=float, required=True)
    p.add_argument("--ck", type=float, default=1.0, help="bucket-count constant (default 1)")
    p.add_argument("--cn", type=float, default=1.0, help="sample-count constant (default 1)")
    p.add_argument("--zeta", type=float, default=None,
                   help="edge margin recorded with the bounds (default 1/(2k))")

    return top


def _make_config(args, k: int) -> TestConfig:
    zeta = args.zeta if args.zeta is not None else 1.0 / (2 * k)
    return TestConfig(
        tail=TailParams(alpha=args.alpha, rho=args.rho),
        bounds=WellBehavedBounds(beta=args.beta, b1=args.b1, b2=args.b2, zeta=zeta),
        k=k,
        variant=Variant.WEAK if args.weak else Variant.FULL,
        weak_range=(args.c1, args.c2),
        noise_sigmas=args.noise_sigmas,
    )


def _cmd_sample(args) -> int:
    model = model_from_name(args.dist, _parse_params(args.params))
    values = distributions.sample(model, args.n, args.seed)
    if args.format == "text":
        payload = ("\n".join(repr(float(v)) for v in values) + "\n").encode("ascii")
    else:
        payload = np.asarray(values, dtype="<f8").tobytes()
    _atomic_write(args.out, payload)
    return EXIT_OK


def _cmd_proxy(args) -> int:
    model = model_from_name(args.dist, _parse_params(args.params))
    tail = TailParams(alpha=args.alpha, rho=0.5)
    bounds = WellBehavedBounds(beta=args.beta, b1=args.b1, b2=1.0,
                               zeta=1.0 / (2 * args.k))
    curve = proxy_curve(model, args.k, tail, bounds)
    lines = ["i,z,proxy_s,s_tilde,threshold,gap"]
    for i, p in zip(range(2, args.k - 1), curve.entries):
        lines.append(",".join([
            str(i), repr(p.z), repr(p.s), repr(p.s_tilde),
            repr(p.threshold), repr(p.gap),
        ]))
    _atomic_write(args.out, ("\n".join(lines) + "\n").encode("utf-8"))
    return EXIT_OK


def _cmd_test(args) -> int:
    if (args.input is None) == (args.dist is None):
        raise ValueError("provide exactly one of --input or --dist")
    config = _make_config(args, args.k)

    if args.input is not None:
        if args.reps is not None:
            raise ValueError("--reps only applies to --dist runs; file data is fixed")
        if config.variant is Variant.WEAK:
            split = load_samples(args.input, _file_format(args.format), split=False)
            outcome = run_weak_test(split, config, seed=None)
        else:
            splits = load_samples(args.input, _file_format(args.format), split=True)
            outcome = run_full_test(splits, config, seed=None)
    else:
        if args.n is None:
            raise ValueError("--n is required with --dist")
        model = model_from_name(args.dist, _parse_params(args.params))
        if args.reps is not None:
            if args.reps < 1:
                raise ValueError("--reps must be >= 1")
            outcomes = [run_sampled_test(model, args.n, args.seed + r, config)
                        for r in range(args.reps)]
            heavies = sum(o.verdict is Verdict.HEAVY for o in outcomes)
            voted = Verdict.HEAVY if 2 * heavies > args.reps else Verdict.LIGHT
            first = outcomes[0]
            outcome = TestOutcome(verdict=voted, records=first.records,
                                  k=first.k, n=first.n, seed=args.seed,
                                  config=config)
        else:
            outcome = run_sampled_test(model, args.n, args.seed, config)

    payload = serialize_report(outcome, ReportFormat.JSON)
    if args.out is not None:
        _atomic_write(args.out, payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
    if args.exit_verdict:
        return EXIT_HEAVY if outcome.verdict is Verdict.HEAVY else EXIT_LIGHT
    return EXIT_OK


def _cmd_simulate(args) -> int:
    model = model_from_name(args.dist, _parse_params(args.params))
    config = _make_config(args, args.k)
    report = replicate(model, args.reps, args.n, config, args.seed)
    _atomic_write(args.out, serialize_report(report, ReportFormat.CSV))
    return EXIT_OK


def _cmd_complexity(args) -> int:
    tail = TailParams(alpha=args.alpha, rho=args.rho)
    k = required_buckets(tail, WellBehavedBounds(
        beta=args.beta, b1=args.b1, b2=args.b2, zeta=args.zeta or 0.5), c_k=args.ck)
    zeta = args.zeta if args.zeta is not None else 1.0 / (2 * k)
    bounds = WellBehavedBounds(beta=args.beta, b1=args.b1, b2=args.b2, zeta=zeta)
    n = required_samples(k, tail, bounds, c_n=args.cn)
    print(f"k={k}")
    print(f"n={n}")
    return EXIT_OK


_HANDLERS = {
    "sample": _cmd_sample,
    "proxy": _cmd_proxy,
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "complexity": _cmd_complexity,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()
