"""Batch command-line front end.

Exit status: 0 on success, 1 on I/O or schema errors, 2 when the requested
composition (or inverse) does not exist.
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import logging
import sys
from dataclasses import dataclass, field

from . import io as fio
from .applications import (
    invert_series_explicit,
    invert_series_recursive,
    monomial_shift_coeffs,
    ode_epsilon_solution,
)
from .miller import miller_recursive
from .multivar import MultiSeries, axis_discrepancy, multivar_miller_recursive
from .series import CompositionError, Series
from .trudi import (
    DEFAULT_EXPLICIT_MAX_ORDER,
    HessenbergMatrix,
    miller_explicit,
    trudi_det,
)

log = logging.getLogger("millerfps")

MULTI_MAX_Q = 4
MULTI_MAX_ORDER = 16


class Subcommand(enum.Enum):
    ComposeBinomial = "compose-binomial"
    ComposeBinomialMulti = "compose-binomial-multi"
    Invert = "invert"
    DetHessenberg = "det-hessenberg"
    MonomialShift = "monomial-shift"
    OdeDemo = "ode-demo"


@dataclass
class CliConfig:
    subcommand: Subcommand
    order: int | None = None
    exponent: complex = 0j
    input: str | None = None
    output: str | None = None
    format: str = "json"
    explicit_path: bool = False
    digits: int = 16
    # subcommand-specific knobs
    b0: complex = 0j
    nbar: int = 2
    step: float = 0.01
    x_max: float = 1.0
    table: str = "both"
    check_axes: bool = False
    max_order: int = DEFAULT_EXPLICIT_MAX_ORDER
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.order is not None and self.order < 0:
            raise ValueError("order must be >= 0")
        needs_input = {
            Subcommand.ComposeBinomial,
            Subcommand.ComposeBinomialMulti,
            Subcommand.Invert,
            Subcommand.DetHessenberg,
        }
        if self.subcommand in needs_input and not self.input:
            raise ValueError(f"{self.subcommand.value} needs --input")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _series_out(f: Series, cfg: CliConfig) -> str:
    if cfg.format == "csv":
        return fio.series_csv(f, cfg.digits)
    return fio.dump_json(fio.series_to_json(f))


def _ode_csv(cfg: CliConfig) -> str:
    sol = ode_epsilon_solution(cfg.order, cfg.step, cfg.x_max)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if cfg.table in ("both", "coefficients"):
        w.writerow(["n", "c_n", "a_n"])
        for n, cn, an in sol.coefficient_rows():
            w.writerow([n, fio.format_fixed(cn), fio.format_fixed(an)])
    if cfg.table == "both":
        w.writerow([])
    if cfg.table in ("both", "grid"):
        w.writerow(["x", "y_N(x)", "difference"])
        for x, y, r in sol.grid:
            w.writerow([fio.format_fixed(x, 2), fio.format_fixed(y, 14), fio.format_fixed(r)])
    return buf.getvalue()


def _ode_json(cfg: CliConfig) -> str:
    sol = ode_epsilon_solution(cfg.order, cfg.step, cfg.x_max)
    return fio.dump_json(
        {
            "degree": sol.degree,
            "c": fio.series_to_json(sol.c_coeffs),
            "a": fio.series_to_json(sol.a_coeffs),
            "grid": [{"x": x, "y": y, "difference": r} for x, y, r in sol.grid],
        }
    )


def run(cfg: CliConfig) -> int:
    """Execute one configured subcommand; returns the process exit status."""
    try:
        cmd = cfg.subcommand
        if cmd is Subcommand.ComposeBinomial:
            f = fio.series_from_json(fio.load_json(cfg.input))
            if cfg.order is not None:
                f = f.truncate(cfg.order)
            if cfg.explicit_path:
                g = miller_explicit(f, cfg.exponent, max_order=cfg.max_order)
            else:
                g = miller_recursive(f, cfg.exponent)
            _emit(_series_out(g, cfg), cfg.output)
        elif cmd is Subcommand.ComposeBinomialMulti:
            f = fio.multiseries_from_json(fio.load_json(cfg.input))
            if cfg.order is not None:
                f = f.truncate(cfg.order)
            if f.q > MULTI_MAX_Q or f.order > MULTI_MAX_ORDER:
                raise ValueError(
                    f"multi-series limited to q <= {MULTI_MAX_Q}, N <= {MULTI_MAX_ORDER}"
                )
            h = multivar_miller_recursive(f, cfg.exponent)
            if cfg.check_axes:
                log.info("axis discrepancy %.3e", axis_discrepancy(f, cfg.exponent, h))
            if cfg.format == "csv":
                text = fio.multiseries_csv(h, cfg.digits)
            else:
                text = fio.dump_json(fio.multiseries_to_json(h))
            _emit(text, cfg.output)
        elif cmd is Subcommand.Invert:
            f = fio.series_from_json(fio.load_json(cfg.input))
            if cfg.order is not None:
                f = f.truncate(cfg.order)
            if cfg.explicit_path:
                b0 = f.coeffs[0]
                if b0 == 0:
                    raise ZeroDivisionError("series with zero constant term is not invertible")
                g = invert_series_explicit(f * (1 / b0)) * (1 / b0)
            else:
                g = invert_series_recursive(f)
            _emit(_series_out(g, cfg), cfg.output)
        elif cmd is Subcommand.DetHessenberg:
            A = HessenbergMatrix(fio.matrix_from_json(fio.load_json(cfg.input)))
            det = trudi_det(A)
            if cfg.format == "csv":
                text = "re,im\n{},{}\n".format(
                    fio.format_sig(det.real, cfg.digits), fio.format_sig(det.imag, cfg.digits)
                )
            else:
                text = fio.dump_json({"n": A.n, "det": [det.real, det.imag], "terms": 2 ** (A.n - 1)})
            _emit(text, cfg.output)
        elif cmd is Subcommand.MonomialShift:
            order = 10 if cfg.order is None else cfg.order
            g = monomial_shift_coeffs(cfg.b0, cfg.nbar, cfg.exponent, order)
            _emit(_series_out(g, cfg), cfg.output)
        elif cmd is Subcommand.OdeDemo:
            if cfg.order is None:
                cfg.order = 20
            _emit(_ode_csv(cfg) if cfg.format == "csv" else _ode_json(cfg), cfg.output)
    except CompositionError as exc:
        print(f"error: {exc} (existence condition |b0| < 1 violated)", file=sys.stderr)
        return 2
    except ZeroDivisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _add_common(p: argparse.ArgumentParser, with_input: bool = True) -> None:
    if with_input:
        p.add_argument("--input", required=True, help="input JSON file")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--digits", type=int, default=16, help="significant digits in CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="millerfps", description="Truncated power series via the generalized Miller formula."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("compose-binomial", help="coefficients of B_a o f")
    _add_common(p)
    p.add_argument("--a-re", type=float, required=True)
    p.add_argument("--a-im", type=float, default=0.0)
    p.add_argument("--order", type=int)
    p.add_argument("--explicit", action="store_true", help="use the closed-form subset sums")
    p.add_argument("--max-order", type=int, default=DEFAULT_EXPLICIT_MAX_ORDER)

    p = sub.add_parser("compose-binomial-multi", help="coefficients of B_r o f, f in q variables")
    _add_common(p)
    p.add_argument("--r-re", type=float, required=True)
    p.add_argument("--r-im", type=float, default=0.0)
    p.add_argument("--order", type=int)
    p.add_argument("--check-axes", action="store_true")

    p = sub.add_parser("invert", help="multiplicative inverse 1/f")
    _add_common(p)
    p.add_argument("--order", type=int)
    p.add_argument("--explicit", action="store_true", help="sum over integer partitions")

    p = sub.add_parser("det-hessenberg", help="Hessenberg determinant via subset expansion")
    _add_common(p)

    p = sub.add_parser("monomial-shift", help="closed form for B_a o (b0 + z**nbar)")
    _add_common(p, with_input=False)
    p.add_argument("--b0-re", type=float, required=True)
    p.add_argument("--b0-im", type=float, default=0.0)
    p.add_argument("--nbar", type=int, required=True)
    p.add_argument("--a-re", type=float, required=True)
    p.add_argument("--a-im", type=float, default=0.0)
    p.add_argument("--order", type=int, default=10)

    p = sub.add_parser("ode-demo", help="Taylor epsilon-solution of y' = sqrt(1 + e^{x^2}/2) y")
    _add_common(p, with_input=False)
    p.add_argument("--degree", type=int, default=20)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--table", choices=("both", "coefficients", "grid"), default="both")
    return parser


def config_from_args(ns: argparse.Namespace) -> CliConfig:
    cmd = Subcommand(ns.subcommand)
    kw = dict(
        subcommand=cmd,
        input=getattr(ns, "input", None),
        output=ns.output,
        format=ns.format,
        digits=ns.digits,
        explicit_path=getattr(ns, "explicit", False),
    )
    if cmd is Subcommand.ComposeBinomial:
        kw.update(order=ns.order, exponent=complex(ns.a_re, ns.a_im), max_order=ns.max_order)
    elif cmd is Subcommand.ComposeBinomialMulti:
        kw.update(order=ns.order, exponent=complex(ns.r_re, ns.r_im), check_axes=ns.check_axes)
    elif cmd is Subcommand.Invert:
        kw.update(order=ns.order)
    elif cmd is Subcommand.MonomialShift:
        kw.update(
            order=ns.order,
            b0=complex(ns.b0_re, ns.b0_im),
            nbar=ns.nbar,
            exponent=complex(ns.a_re, ns.a_im),
        )
    elif cmd is Subcommand.OdeDemo:
        kw.update(order=ns.degree, step=ns.step, x_max=ns.x_max, table=ns.table)
    return CliConfig(**kw)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING)
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
