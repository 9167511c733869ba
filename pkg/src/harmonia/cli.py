"""Command-line front end: ``harmonia {cubature,decompose,kernel,bound}``."""
import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

from .cubature import (
    cached_product_cubature,
    format_rule_csv,
    verify_exactness,
    write_rule_csv,
)
from .errors import HarmoniaError
from .harmonic import harmonic_decompose
from .hierarchy import SweepError, sweep
from .kernel import fang_fawzi_kernel, power_kernel
from .polynomial import HomogeneousPolynomial

EXIT_OK = 0
EXIT_NUMERIC = 2
EXIT_IO = 3

CACHE_ENV = "HARMONIA_CACHE_DIR"
CSV_HEADER = ["s", "kernel", "tau", "lower", "upper", "cubature_size", "elapsed_ms"]
BUILTINS = ("motzkin", "robinson")


class ConfigError(ValueError):
    """Invalid command line or configuration (reported with exit code 3)."""


def builtin_polynomial(name):
    """The Motzkin (n=3, degree 6) or Robinson (n=4, degree 4) form."""
    if name == "motzkin":
        return HomogeneousPolynomial(
            3, 6, {(2, 4, 0): 1, (4, 2, 0): 1, (0, 0, 6): 1, (2, 2, 2): -3}
        )
    if name == "robinson":
        x1, x2, x3, x4 = (HomogeneousPolynomial.variable(4, i) for i in range(4))
        return (
            x1 * x1 * (x1 - x4) ** 2
            + x2 * x2 * (x2 - x4) ** 2
            + x3 * x3 * (x3 - x4) ** 2
            + 2 * x1 * x2 * x3 * (x1 + x2 + x3 - 2 * x4)
        )
    raise ConfigError(f"unknown builtin polynomial {name!r} (choose from {', '.join(BUILTINS)})")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    poly_path: str = None
    builtin: str = None
    n: int = None
    k: int = None
    t: int = None
    s: int = None
    s_min: int = None
    s_max: int = None
    kernel: str = "power"
    out: str = None
    fmt: str = "csv"
    verify: bool = False
    shared_rule: bool = True
    timings: bool = False

    def validate(self):
        if self.subcommand in ("decompose", "bound"):
            if (self.poly_path is None) == (self.builtin is None):
                raise ConfigError("give exactly one of --poly or --builtin")
        if self.subcommand == "bound" and self.s_min > self.s_max:
            raise ConfigError(f"--s-min {self.s_min} exceeds --s-max {self.s_max}")
        if self.subcommand == "cubature" and (self.n < 2 or self.t < 0):
            raise ConfigError("cubature needs --n >= 2 and --t >= 0")
        if self.subcommand == "kernel" and (self.n < 3 or self.s < 0 or self.k < 1):
            raise ConfigError("kernel needs --n >= 3, --k >= 1 and --s >= 0")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="harmonia", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("cubature", help="build a product cubature rule on S^(n-1)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True, help="rule has algebraic degree 2t")
    p.add_argument("--verify", action="store_true", help="print the max exactness residual")
    p.add_argument("--out", help="CSV file for nodes and weights (default: stdout)")

    p = sub.add_parser("decompose", help="harmonic decomposition of an even form")
    _add_poly_source(p)
    p.add_argument("--out", help="JSON file for the components (default: stdout)")

    p = sub.add_parser("kernel", help="Gegenbauer coefficients of an averaging kernel")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--kind", dest="kernel", choices=("power", "fangfawzi"), default="power")
    p.add_argument("--out")

    p = sub.add_parser("bound", help="lower/upper bounds over a range of kernel degrees")
    _add_poly_source(p)
    p.add_argument("--kernel", choices=("power", "fangfawzi"), default="power")
    p.add_argument("--s-min", type=int, required=True)
    p.add_argument("--s-max", type=int, required=True)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.add_argument(
        "--per-level-rules",
        dest="shared_rule",
        action="store_false",
        help="evaluate each level on its own rule instead of the largest one",
    )
    p.add_argument(
        "--timings",
        action="store_true",
        help="fill elapsed_ms (otherwise left empty so output is reproducible)",
    )
    return parser


def _add_poly_source(p):
    p.add_argument("--poly", dest="poly_path", help="polynomial JSON file")
    p.add_argument("--builtin", choices=BUILTINS)


def parse_args(argv):
    ns = build_parser().parse_args(argv)
    config = RunConfig(**{k: v for k, v in vars(ns).items() if v is not None})
    config.validate()
    return config


def _load_polynomial(config):
    if config.builtin:
        return builtin_polynomial(config.builtin)
    with open(config.poly_path) as fh:
        data = json.load(fh)
    return HomogeneousPolynomial.from_dict(data)


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x):
    return "" if math.isnan(x) else format(x, ".17g")


def _json_float(x):
    return None if math.isnan(x) else x


def _run_cubature(config):
    cache = os.environ.get(CACHE_ENV) or None
    rule = cached_product_cubature(config.n, config.t, cache)
    if config.out:
        write_rule_csv(rule, config.out)
    if config.verify:
        residual = max(verify_exactness(rule, d) for d in range(rule.algebraic_degree + 1))
        print(
            f"n={rule.n} t={config.t} nodes={len(rule)} degree={rule.algebraic_degree} "
            f"max_residual={residual:.3e}"
        )
    elif not config.out:
        sys.stdout.write(format_rule_csv(rule))


def _run_decompose(config):
    f = _load_polynomial(config)
    expansion = harmonic_decompose(f)
    text = json.dumps([c.to_dict() for c in expansion.components], indent=1) + "\n"
    _emit(text, config.out)


def _run_kernel(config):
    if config.kernel == "power":
        kernel = power_kernel(config.n, config.s)
    else:
        if config.s < config.k:
            raise ArithmeticError(f"fangfawzi kernels need s >= k = {config.k} (got --s {config.s})")
        kernel = fang_fawzi_kernel(config.n, config.k, config.s).kernel
    _emit(json.dumps(kernel.to_dict()) + "\n", config.out)


def _run_bound(config):
    f = _load_polynomial(config)
    if config.kernel == "fangfawzi" and 2 * config.s_min < f.degree:
        raise ArithmeticError(
            f"fangfawzi kernels need s >= k = {f.degree // 2} (got --s-min {config.s_min})"
        )
    cache = os.environ.get(CACHE_ENV) or None
    failure = None
    try:
        results = sweep(
            f,
            config.kernel,
            range(config.s_min, config.s_max + 1),
            shared_rule=config.shared_rule,
            cache_dir=cache,
        )
    except SweepError as exc:
        # still write the levels we have; failed ones carry empty tau/lower
        failure = exc
        results = exc.results
    if config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in results:
            writer.writerow(
                [
                    r.s,
                    r.kernel_kind,
                    _fmt(r.tau),
                    _fmt(r.lower),
                    _fmt(r.upper),
                    r.cubature_size,
                    _fmt(r.elapsed) if config.timings else "",
                ]
            )
        text = buf.getvalue()
    else:
        rows = [
            {
                "s": r.s,
                "kernel": r.kernel_kind,
                "tau": _json_float(r.tau),
                "lower": _json_float(r.lower),
                "upper": r.upper,
                "cubature_size": r.cubature_size,
                "elapsed_ms": r.elapsed if config.timings else None,
            }
            for r in results
        ]
        text = json.dumps(rows, indent=1) + "\n"
    _emit(text, config.out)
    if failure is not None:
        raise failure


_COMMANDS = {
    "cubature": _run_cubature,
    "decompose": _run_decompose,
    "kernel": _run_kernel,
    "bound": _run_bound,
}


def run(config):
    """Execute ``config``; returns the process exit code."""
    try:
        _COMMANDS[config.subcommand](config)
    except (SweepError, ArithmeticError) as exc:
        print(f"harmonia: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"harmonia: input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HarmoniaError as exc:
        print(f"harmonia: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None):
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"harmonia: {exc}", file=sys.stderr)
        return EXIT_IO
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
