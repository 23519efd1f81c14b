"""Command-line entry point: ``emoframe run | metrics | compare``.

Exit codes: 0 success, 2 configuration/parse/argument error, 3 runtime
error inside the optimizer, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .config import EXTERNAL_ARCHIVE, ConfigError, load_config
from .dominance import ObjectiveSpace
from .engine import RunError, run
from .frontfile import FrontFormatError, format_value, read_front, write_front
from .indicators import DEFAULT_SAMPLES, binary_hypervolume, contribution, epsilon_indicator, hypervolume
from .problems import InstanceFormatError

__all__ = ["main", "EXIT_OK", "EXIT_CONFIG", "EXIT_RUNTIME", "EXIT_IO"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4

BINARY_INDICATORS = ("eps+", "epsx", "hvd", "contribution")


class _UsageError(Exception):
    pass


def _parse_ref(text: Optional[str], n: int) -> Optional[tuple[float, ...]]:
    if text is None:
        return None
    try:
        ref = tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise _UsageError(f"--ref-point: cannot parse {text!r}") from None
    if len(ref) != n:
        raise _UsageError(f"--ref-point: expected {n} values, got {len(ref)}")
    return ref


def _load_front(path: str) -> tuple[np.ndarray, ObjectiveSpace]:
    points, space = read_front(path)
    if space is None:
        space = ObjectiveSpace.minimize(points.shape[1])
    return points, space


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.with_values(seed=args.seed)
    resolved = config.resolved()
    out = args.out if args.out is not None else resolved["output_dir"]
    if args.out is not None:
        resolved = resolved.with_values(output_dir=out)
    run_config = resolved.build(out)
    os.makedirs(out, exist_ok=True)
    # written first so a failed run still documents what was attempted
    with open(os.path.join(out, "resolved-config"), "w", encoding="utf-8") as fh:
        fh.write(resolved.serialize())
    result = run(run_config)
    if EXTERNAL_ARCHIVE in result.archives:
        front = result.archives[EXTERNAL_ARCHIVE].objectives()
    else:
        front = result.front
    write_front(os.path.join(out, "final.front"), front, result.space)
    with open(os.path.join(out, "progress.tsv"), "w", encoding="utf-8") as fh:
        fh.write(result.progress_tsv())
    print(f"generations={result.generations} evaluations={result.evaluations} "
          f"front_size={len(front)} out={out}")
    return EXIT_OK


def _estimate_suffix(value) -> str:
    if getattr(value, "estimate", False):
        return f" estimate=true samples={value.samples}"
    return ""


def _cmd_metrics(args) -> int:
    points, space = _load_front(args.front)
    if args.indicator == "size":
        print(f"indicator=size value={len(points)}")
        return EXIT_OK
    ref = _parse_ref(args.ref_point, space.n_objectives)
    if ref is None:
        raise _UsageError("hypervolume needs --ref-point")
    value = hypervolume(points, ref, space, samples=args.samples, seed=args.seed)
    print(f"indicator=hypervolume value={format_value(value)}{_estimate_suffix(value)}")
    return EXIT_OK


def _binary(name: str, a, b, space, ref, samples: int, seed: int) -> float:
    if name == "eps+":
        return epsilon_indicator(a, b, "additive", space)
    if name == "epsx":
        return epsilon_indicator(a, b, "multiplicative", space)
    if name == "contribution":
        return contribution(a, b, space)
    return binary_hypervolume(a, b, ref, space, samples=samples, seed=seed)


def _cmd_compare(args) -> int:
    a, space_a = _load_front(args.a)
    b, space_b = _load_front(args.b)
    if space_a != space_b:
        raise _UsageError("the two fronts live in different objective spaces")
    ref = _parse_ref(args.ref_point, space_a.n_objectives)
    if args.indicator == "hvd" and ref is None:
        raise _UsageError("hvd needs --ref-point")
    forward = _binary(args.indicator, a, b, space_a, ref, args.samples, args.seed)
    reverse = _binary(args.indicator, b, a, space_a, ref, args.samples, args.seed)
    suffix = ""
    if args.indicator == "hvd" and space_a.n_objectives > 2:
        suffix = f" estimate=true samples={args.samples}"
    print(f"indicator={args.indicator} value={format_value(forward)} reverse={format_value(reverse)}{suffix}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emoframe", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log hook failures and progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment described by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("metrics", help="unary indicator of a front file")
    p.add_argument("--front", required=True)
    p.add_argument("--indicator", choices=("hypervolume", "size"), default="hypervolume")
    p.add_argument("--ref-point", default=None, help="comma-separated reference point")
    p.add_argument("--seed", type=int, default=0, help="seed of the Monte Carlo estimator")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("compare", help="binary indicator between two front files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--indicator", choices=BINARY_INDICATORS, required=True)
    p.add_argument("--ref-point", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except RunError as exc:
        print(f"error: run failed at {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ConfigError, FrontFormatError, InstanceFormatError, _UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
