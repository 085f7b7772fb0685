"""Command-line front end: ``wentangle pmax|sweep|nearest|verify``."""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import closed_form as cf
from . import oracle, verification
from .qstate import ProductState, PureState, StateError, WParams, parse_state, w_state

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DISAGREE = 2


def fmt(x: float) -> str:
    return format(float(x), ".12g")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _state_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--wn", nargs=2, metavar=("N", "Q"), help="one-parameter W_n state")
    g.add_argument("--w4", nargs=2, type=float, metavar=("A", "B"), help="two-parameter W_4 state")
    g.add_argument("--w3", nargs=3, type=float, metavar=("A1", "A2", "A3"), help="three-qubit W state")
    g.add_argument("--state", type=Path, metavar="FILE", help="state file ('bits real [imag]' lines)")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-6, help="allowed closed/oracle disagreement")
    p.add_argument("--starts", type=int, default=oracle.DEFAULT_STARTS)
    p.add_argument("--out", default="-", help="output path, '-' for standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wentangle", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pmax", help="maximal product-state overlap of one state")
    _state_args(p)
    p.add_argument("--method", choices=("closed", "oracle", "both"), default=None)
    p.add_argument("--nearest", action="store_true", help="also print the nearest product state")
    _common(p)

    p = sub.add_parser("sweep", help="CSV sweep over a W-state family")
    p.add_argument("--family", choices=("wn", "w4"), required=True)
    p.add_argument("--n", type=int, default=4, help="qubit count for the wn family")
    p.add_argument("--q-min", type=float, default=0.0)
    p.add_argument("--q-max", type=float, default=0.99)
    p.add_argument("--a-min", type=float, default=0.0)
    p.add_argument("--a-max", type=float, default=0.975)
    p.add_argument("--b-min", type=float, default=0.0)
    p.add_argument("--b-max", type=float, default=0.975)
    p.add_argument("--steps", type=int, default=None, help="points per axis (wn: 100, w4: 40)")
    p.add_argument("--methods", default="closed,oracle", help="comma-separated subset of closed,oracle")
    _common(p)

    p = sub.add_parser("nearest", help="print the nearest product state")
    _state_args(p)
    p.add_argument("--phase", type=float, default=0.0, help="free phase of the --wn closed form")
    _common(p)

    p = sub.add_parser("verify", help="run the numerical verification suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=42)
    return parser


@contextlib.contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _w_params_of(psi: PureState) -> Optional[WParams]:
    """Moduli of a W-type state's coefficients, or None for other states."""
    n = psi.qubit_count
    coeffs = [0.0] * n
    for label, amp in psi.amplitudes.items():
        if amp == 0:
            continue
        if label.count("1") != 1:
            return None
        coeffs[label.index("1")] = abs(amp)
    try:
        return WParams(tuple(coeffs))
    except StateError:
        return None


def resolve_target(args) -> tuple[PureState, Optional[cf.OverlapResult]]:
    """The state named on the command line and its closed form, if one applies."""
    if args.wn is not None:
        n, q = int(args.wn[0]), float(args.wn[1])
        closed = cf.pmax_wn_one_param(n, q)
        return w_state(WParams.one_param(n, q)), closed
    if args.w4 is not None:
        a, b = args.w4
        closed = cf.pmax_w4_two_param(a, b)
        return w_state(cf.w4_two_param_params(a, b)), closed
    if args.w3 is not None:
        if not _close_to_unit(args.w3):
            raise StateError(f"coefficients {args.w3} are not normalized")
        params = WParams.normalized(args.w3)
        return w_state(params), cf.pmax_w3(params)
    psi = parse_state(args.state.read_text(encoding="utf-8"))
    if psi.qubit_count == 2:
        return psi, cf.pmax_two_qubit(psi)
    params = _w_params_of(psi)
    return psi, cf.pmax_w(params) if params is not None else None


def _close_to_unit(values, tol=1e-6) -> bool:
    # six printed decimals such as 0.577350 are accepted and renormalized
    return abs(math.fsum(v * v for v in values) - 1.0) <= tol


def _format_factors(prod: ProductState) -> list[str]:
    return [
        f"q{k} {fmt(c0.real)} {fmt(c0.imag)} {fmt(c1.real)} {fmt(c1.imag)}"
        for k, (c0, c1) in enumerate(prod.factors, 1)
    ]


def cmd_pmax(args) -> int:
    psi, closed = resolve_target(args)
    method = args.method or ("both" if closed is not None else "oracle")
    if method in ("closed", "both") and closed is None:
        print("no closed form covers this state; use --method oracle", file=sys.stderr)
        return EXIT_ERROR
    num = None
    if method in ("oracle", "both"):
        num = oracle.alternating_maximize(psi, starts=args.starts, seed=args.seed)
    lines = []
    if closed is not None and method != "oracle":
        lines.append(f"closed {fmt(closed.pmax)}")
    if num is not None:
        lines.append(f"oracle {fmt(num.pmax)}")
    if closed is not None and method != "oracle":
        lines.append(f"regime {closed.regime}")
        lines.append(f"formula {closed.method}")
        if closed.circumradius is not None:
            lines.append(f"circumradius {fmt(closed.circumradius)}")
    status = EXIT_OK
    if num is not None and closed is not None and method == "both":
        diff = abs(closed.pmax - num.pmax)
        lines.append(f"abs_diff {fmt(diff)}")
        if diff > args.tol:
            lines.append(f"DISAGREE beyond tol {fmt(args.tol)}")
            status = EXIT_DISAGREE
    if args.nearest:
        prod = closed.nearest if (closed is not None and closed.nearest is not None and method != "oracle") else None
        if prod is None:
            prod = (num or oracle.alternating_maximize(psi, starts=args.starts, seed=args.seed)).nearest
        lines.append("nearest")
        lines.extend(_format_factors(prod))
    with _output(args.out) as fh:
        fh.write("\n".join(lines) + "\n")
    return status


def _methods(text: str) -> set[str]:
    methods = {m.strip() for m in text.split(",") if m.strip()}
    if not methods or methods - {"closed", "oracle"}:
        raise StateError(f"--methods must be a subset of closed,oracle, got {text!r}")
    return methods


def sweep_rows(args) -> tuple[list[str], list[str], list[list[str]]]:
    """(comment lines, header, rows) for a sweep, in ascending parameter order."""
    methods = _methods(args.methods)
    steps = args.steps if args.steps is not None else (100 if args.family == "wn" else 40)
    if steps < 2:
        raise StateError("--steps must be at least 2")
    comments = [f"# family={args.family} steps={steps} methods={','.join(sorted(methods))} seed={args.seed}"]
    rows = []

    def evaluate(params: WParams, closed_fn):
        closed = closed_fn() if "closed" in methods else None
        num = None
        if "oracle" in methods:
            num = oracle.alternating_maximize(w_state(params), starts=args.starts, seed=args.seed).pmax
        c = fmt(closed.pmax) if closed is not None else ""
        o = fmt(num) if num is not None else ""
        # difference of the printed values, so the row is self-consistent as written
        d = fmt(abs(float(c) - float(o))) if c and o else ""
        return [c, o, closed.regime if closed is not None else "", d]

    if args.family == "wn":
        if args.n < 3:
            raise StateError("--n must be at least 3")
        if not 0.0 <= args.q_min <= args.q_max <= 1.0:
            raise StateError("q range must lie within [0, 1]")
        comments[0] += f" n={args.n}"
        header = ["q", "closed", "oracle", "regime", "abs_diff"]
        for q in np.linspace(args.q_min, args.q_max, steps):
            q = float(q)
            rows.append([fmt(q)] + evaluate(WParams.one_param(args.n, q),
                                            lambda: cf.pmax_wn_one_param(args.n, q)))
    else:
        for lo, hi, name in ((args.a_min, args.a_max, "a"), (args.b_min, args.b_max, "b")):
            if not 0.0 <= lo <= hi <= 1.0:
                raise StateError(f"{name} range must lie within [0, 1]")
        header = ["a", "b", "q", "closed", "oracle", "regime", "abs_diff"]
        for a in np.linspace(args.a_min, args.a_max, steps):
            for b in np.linspace(args.b_min, args.b_max, steps):
                a, b = float(a), float(b)
                if a * a + b * b > 1.0:
                    comments.append(f"# skipped a={fmt(a)} b={fmt(b)}: a^2+b^2>1")
                    continue
                params = cf.w4_two_param_params(a, b)
                rows.append([fmt(a), fmt(b), fmt(params.coefficients[2])]
                            + evaluate(params, lambda: cf.pmax_w4_two_param(a, b)))
    return comments, header, rows


def cmd_sweep(args) -> int:
    comments, header, rows = sweep_rows(args)
    buf = io.StringIO()
    for line in comments:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    try:
        with _output(args.out) as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_nearest(args) -> int:
    if args.wn is not None:
        n, q = int(args.wn[0]), float(args.wn[1])
        result = cf.pmax_wn_one_param(n, q)
        prod = cf.nearest_wn_one_param(n, q, args.phase) if result.regime != cf.SLIGHTLY else result.nearest
        pmax = result.pmax
    else:
        psi, _ = resolve_target(args)
        num = oracle.alternating_maximize(psi, starts=args.starts, seed=args.seed)
        prod, pmax = num.nearest, num.pmax
    with _output(args.out) as fh:
        fh.write(f"pmax {fmt(pmax)}\n" + "\n".join(_format_factors(prod)) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verification.run_checks(args.level, args.seed)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_ERROR


COMMANDS = {"pmax": cmd_pmax, "sweep": cmd_sweep, "nearest": cmd_nearest, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (StateError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
