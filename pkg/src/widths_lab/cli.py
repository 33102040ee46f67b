"""Command-line front end: ``widths-lab <subcommand> [options]``.

Exit codes
    0  success
    2  unparseable input (bad domain / sequence / threshold / option)
    3  numeric domain violation (n < 1, eps <= 0, budget exceeded, ...)
    4  operation not supported for this family or parameters
"""

from __future__ import annotations

import argparse
import re
import sys

from . import output
from .asymptotics import (
    check_strong_equivalence,
    envelope,
    envelope_ratio,
    log_spaced_indices,
    regime_of,
    scaled_series,
)
from .complexity import ErrorCriterion, info_complexity
from .dims import cumulative_dim, degree_for_index, parse_domain
from .errors import ParameterError, SpecSyntaxError, UnsupportedError
from .logvalue import LogValue, get_precision, set_precision
from .multipliers import parse_sequence
from .tractability import classify
from .widths import CSV_HEADER, approx_number, staircase

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_UNSUPPORTED = 0, 2, 3, 4
DEFAULT_BUDGET = 10**6
DEFAULT_DOMAIN = "sphere:d=2"

_EXP_RE = re.compile(r"^e\^\(?(-?)([0-9]*\.?[0-9]+(?:[eE][-+]?\d+)?)\)?$")
_DEC_RE = re.compile(r"^[+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?$")
_RANGE_RE = re.compile(r"^(\d+)(?::|\.\.)(\d+)$")


def parse_threshold(text: str) -> LogValue:
    """Threshold in decimal (``0.5``, ``1e-3``) or exponential (``e^-20``) notation."""
    t = text.strip()
    m = _EXP_RE.match(t)
    if m:
        x = m.group(2)
        return LogValue.from_log(f"-{x}" if m.group(1) else x)
    if _DEC_RE.match(t):
        return LogValue.from_value(t)
    raise SpecSyntaxError(f"bad threshold {text!r}; use a decimal or e^-X", token=text)


def _parse_range(text: str) -> tuple[int, int]:
    m = _RANGE_RE.match(text.strip())
    if m is None:
        raise SpecSyntaxError(f"bad range {text!r}; expected A:B", token=text)
    return int(m.group(1)), int(m.group(2))


def _check_budget(args, count: int, what: str):
    if count > args.budget:
        raise ParameterError(f"{what} needs {count} evaluations, above --budget {args.budget}")


def _spec(args):
    dom = parse_domain(args.domain)
    return parse_sequence(args.seq, dom)


def _value_fields(v: LogValue, digits) -> dict:
    return {"log_value": v.log_str(digits), "value": v.value_if_representable()}


# -- subcommands --------------------------------------------------------------------


def cmd_an(args):
    seq = _spec(args)
    digits = args.precision
    if args.n is not None and args.n_range is not None:
        raise SpecSyntaxError("give either --n or --n-range", token="--n-range")
    if args.n_range is not None:
        lo, hi = _parse_range(args.n_range)
        if lo < 1:
            raise ParameterError("n must be ≥ 1")
        if hi < lo:
            raise ParameterError(f"empty range {lo}:{hi}")
        if args.breakpoints_only:
            k_lo, k_hi = degree_for_index(seq.dom, lo), degree_for_index(seq.dom, hi)
            _check_budget(args, k_hi - k_lo + 1, "breakpoint range")
            ns = [cumulative_dim(seq.dom, k) for k in range(k_lo, k_hi + 1)]
            ns = [n for n in ns if lo <= n <= hi]
        else:
            _check_budget(args, hi - lo + 1, "index range")
            ns = range(lo, hi + 1)
    else:
        n = 1 if args.n is None else args.n
        if n < 1:
            raise ParameterError("n must be ≥ 1")
        ns = [n]
    rows = []
    for n in ns:
        rows.append({"n": n, "degree": degree_for_index(seq.dom, n), **_value_fields(approx_number(seq, n), digits)})
    meta = {"domain": str(seq.dom), "sequence": seq.spec_string()}
    return output.render(args.format, rows, ["n", "degree", "log_value", "value"], meta)


def cmd_complexity(args):
    seq = _spec(args)
    crit = ErrorCriterion(args.criterion)
    eps_list = [e for chunk in args.eps for e in chunk.split(",") if e.strip()]
    if not eps_list:
        raise SpecSyntaxError("no threshold given", token="--eps")
    _check_budget(args, len(eps_list), "threshold list")
    rows = []
    for text in eps_list:
        eps = parse_threshold(text)
        if eps.is_zero:
            raise ParameterError("eps must be > 0")
        rows.append({"eps": text.strip(), "log_eps": eps.log_str(args.precision),
                     "n": info_complexity(seq, eps, crit)})
    meta = {"domain": str(seq.dom), "sequence": seq.spec_string(), "criterion": crit.value}
    return output.render(args.format, rows, ["eps", "log_eps", "n"], meta)


def cmd_limits(args):
    seq = _spec(args)
    if args.kmax < 1:
        raise ParameterError("kmax must be ≥ 1")
    ks = log_spaced_indices(args.kmax, args.per_octave)
    _check_budget(args, len(ks), "k schedule")
    rep = check_strong_equivalence(seq, ks, rtol=args.rtol)
    rows = [{"k": k, "endpoint": end, **_value_fields(v, args.precision)} for k, end, v in rep.samples]
    meta = {
        "domain": str(seq.dom),
        "sequence": seq.spec_string(),
        "limit_target": float(rep.limit_target),
        "limit_target_log": rep.limit_target.log_str(args.precision),
        "max_rel_dev_tail": rep.max_rel_dev_tail,
        "rtol": rep.rtol,
        "converged": rep.converged,
    }
    return output.render(args.format, rows, ["k", "endpoint", "log_value", "value"], meta)


def _index_list(args, d):
    if args.n_range is not None:
        lo, hi = _parse_range(args.n_range)
        if lo < 1:
            raise ParameterError("n must be ≥ 1")
        ns = [n for n in log_spaced_indices(hi, args.per_octave) if n >= lo]
    else:
        n_max = args.n_max if args.n_max is not None else 2 ** (d + 4)
        if n_max < 1:
            raise ParameterError("n-max must be ≥ 1")
        ns = log_spaced_indices(n_max, args.per_octave)
    _check_budget(args, len(ns), "index list")
    return ns


def cmd_preasym(args):
    seq = _spec(args)
    rows = []
    for n in _index_list(args, seq.d):
        env = envelope(seq, n)
        rows.append({
            "n": n,
            "regime": regime_of(n, seq.d).value,
            "degree": degree_for_index(seq.dom, n),
            "log_a_n": approx_number(seq, n).log_str(args.precision),
            "log_envelope": env.value.log_str(args.precision),
            "ratio": envelope_ratio(seq, n),
        })
    meta = {
        "domain": str(seq.dom),
        "sequence": seq.spec_string(),
        "envelope_of": "a_n" if seq.family.is_sobolev else "-ln a_n",
    }
    return output.render(args.format, rows, list(rows[0]), meta)


def cmd_tract(args):
    seq = _spec(args)
    rep = classify(seq, ErrorCriterion(args.criterion))
    doc = rep.to_dict()
    if args.s is not None or args.t is not None:
        if args.s is None or args.t is None:
            raise SpecSyntaxError("--s and --t go together", token="--s" if args.s is None else "--t")
        doc["st_weak"] = {"s": args.s, "t": args.t, "status": rep.st_weak(args.s, args.t).value}
        doc["ec_weak"] = {"s": args.s, "t": args.t, "status": rep.ec_weak(args.s, args.t).value}
    fmt = args.format or "json"
    if fmt == "json":
        return output.to_json(doc)
    flat = [{"field": k, "value": v} for k, v in output.flatten(doc)]
    if fmt == "csv":
        return output.rows_to_csv(flat, ["field", "value"])
    return output.mapping_to_table(doc)


def cmd_sweep(args):
    seq = _spec(args)
    fmt = args.format
    if args.kind == "staircase":
        _check_budget(args, args.kmax + 1, "staircase")
        table = staircase(seq, args.kmax)
        if fmt == "csv":
            return table.to_csv(digits=args.precision)
        rows = [
            {"degree": r.degree, "cum_dim": r.cum_dim, "log_value": r.value.log_str(args.precision),
             "value_if_representable": r.value.value_if_representable()}
            for r in table.rows
        ]
        return output.render(fmt, rows, list(CSV_HEADER))
    if args.kind == "scaled":
        if args.kmax < 1:
            raise ParameterError("kmax must be ≥ 1")
        _check_budget(args, args.kmax, "scaled sweep")
        ks, lo, hi = scaled_series(seq, args.kmax)
        ys = hi if args.endpoint == "upper" else lo
        rows = [{"x": int(k), "y": float(y)} for k, y in zip(ks, ys)]
    else:
        ns = _index_list(args, seq.d)
        rows = [{"x": n, "y": envelope_ratio(seq, n)} for n in ns]
    return output.render(fmt, rows, ["x", "y"])


# -- parser ----------------------------------------------------------------------------


def _global_options(parser, suppress: bool):
    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--format", choices=output.FORMATS, default=dflt(None),
                        help="output format (default: table; json for tract)")
    parser.add_argument("--out", default=dflt(None), metavar="PATH", help="write output to PATH")
    parser.add_argument("--precision", type=int, default=dflt(None), metavar="N",
                        help="significant digits for log arithmetic (>= 30)")
    parser.add_argument("--budget", type=int, default=dflt(DEFAULT_BUDGET), metavar="N",
                        help="maximum number of evaluations per sweep")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="widths-lab", description=__doc__.splitlines()[0])
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        _global_options(sp, suppress=True)
        sp.add_argument("--domain", default=DEFAULT_DOMAIN, help="sphere:d=N or ball:d=N")
        sp.add_argument("--seq", required=True, help="e.g. sobolev-star:r=1 or gevrey:alpha=1,beta=2")
        sp.set_defaults(func=fn)
        return sp

    sp = add("an", cmd_an, "approximation numbers a_n")
    sp.add_argument("--n", type=int)
    sp.add_argument("--n-range", metavar="A:B")
    sp.add_argument("--breakpoints-only", action="store_true",
                    help="in range mode, emit only n = cumulative_dim(k)")

    sp = add("complexity", cmd_complexity, "information complexity n(eps, d)")
    sp.add_argument("--eps", action="append", required=True,
                    help="threshold(s), decimal or e^-X; repeat or comma-separate")
    sp.add_argument("--criterion", choices=[c.value for c in ErrorCriterion], default="absolute")

    sp = add("limits", cmd_limits, "strong-equivalence limit check")
    sp.add_argument("--kmax", type=int, default=10**4)
    sp.add_argument("--per-octave", type=int, default=4)
    sp.add_argument("--rtol", type=float)

    sp = add("preasym", cmd_preasym, "preasymptotic envelopes and ratios")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--n-range", metavar="A:B")
    sp.add_argument("--per-octave", type=int, default=2)

    sp = add("tract", cmd_tract, "tractability report")
    sp.add_argument("--criterion", choices=[c.value for c in ErrorCriterion], default="absolute")
    sp.add_argument("--s", type=float)
    sp.add_argument("--t", type=float)

    sp = add("sweep", cmd_sweep, "plot-ready (x, y) series or the breakpoint staircase")
    sp.add_argument("--kind", choices=("scaled", "envelope-ratio", "staircase"), required=True)
    sp.add_argument("--kmax", type=int, default=100)
    sp.add_argument("--endpoint", choices=("lower", "upper"), default="upper")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--n-range", metavar="A:B")
    sp.add_argument("--per-octave", type=int, default=2)
    return p


def run(argv=None) -> tuple[int, str, str]:
    """Execute a command line; returns ``(exit_code, stdout_text, stderr_text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    if args.command != "tract" and args.format is None:
        args.format = "table"
    saved = get_precision()
    try:
        if args.precision is not None:
            set_precision(args.precision)
        text = args.func(args)
    except SpecSyntaxError as exc:
        tok = f" (offending token: {exc.token!r})" if exc.token is not None else ""
        return EXIT_PARSE, "", f"error: {exc}{tok}\n"
    except UnsupportedError as exc:
        return EXIT_UNSUPPORTED, "", f"error: unsupported: {exc}\n"
    except ParameterError as exc:
        return EXIT_DOMAIN, "", f"error: {exc}\n"
    finally:
        set_precision(saved)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return EXIT_OK, "", ""
    return EXIT_OK, text, ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
