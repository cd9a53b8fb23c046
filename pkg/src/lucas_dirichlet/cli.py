"""Command-line front end.

Exit codes: 0 success, 1 evaluation error, 2 identity-suite failure, 64 usage
error (diagnostic JSON on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath
from mpmath import libmp, mp

from . import suites as suite_mod
from .characters import (
    AdditiveTuple,
    enumerate_characters,
    euler_phi,
    parse_additive,
    parse_character,
    unit_group,
)
from .continuation import TruncationPolicy, additive_L_cont, dirichlet_L_cont, shifted_zeta_cont
from .direct import direct_additive_L, direct_dirichlet_L, direct_shifted_zeta, domain_margin
from .errors import LucasError
from .lucas import validate_params
from .points import EvalResult, MultiComplexPoint, ShiftSpec, to_mpc
from .poles import (
    enumerate_poles_additive,
    enumerate_poles_zeta,
    residue_additive_inner,
    residue_additive_last,
    residue_dirichlet_inner,
    residue_dirichlet_last,
)
from .quadfield import format_rational
from .special import (
    NegIntPoint,
    galois_audit,
    holomorphic_at_neg,
    special_additive_exact,
    special_L_quadratic,
    symmetrized_special_zeta,
)

EXIT_OK = 0
EXIT_EVAL = 1
EXIT_SUITE = 2
EXIT_USAGE = 64
PREC_ENV = "LUCAS_PREC"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialization ------------------------------------------------------------


def real_to_str(x, prec: int) -> str:
    """Decimal string with enough digits to round-trip at ``prec`` bits."""
    with mp.workprec(prec):
        x = mpmath.mpf(x)
        return libmp.to_str(x._mpf_, libmp.repr_dps(prec))


def complex_to_json(z, prec: int) -> dict:
    z = mpmath.mpc(z)
    return {"re": real_to_str(z.real, prec), "im": real_to_str(z.imag, prec), "prec": prec}


def complex_from_json(obj: dict) -> mpmath.mpc:
    with mp.workprec(int(obj["prec"])):
        return mpmath.mpc(mpmath.mpf(obj["re"]), mpmath.mpf(obj["im"]))


def _bound_to_str(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 6) if mpmath.isfinite(x) else "inf"


def _jsonable(value, prec: int):
    if isinstance(value, mpmath.mpc):
        return complex_to_json(value, prec)
    if isinstance(value, mpmath.mpf):
        return real_to_str(value, prec)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v, prec) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, prec) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


# -- argument helpers -------------------------------------------------------------


def _split_list(values) -> list[str]:
    out = []
    for v in values or []:
        out.extend(x for x in v.split(",") if x)
    return out


def _default_prec() -> int:
    text = os.environ.get(PREC_ENV)
    if not text:
        return 128
    try:
        return int(text)
    except ValueError as exc:
        raise UsageError(f"{PREC_ENV} must be an integer, got {text!r}") from exc


def _common(p: argparse.ArgumentParser, params: bool = True) -> None:
    if params:
        p.add_argument("--P", dest="P", required=True, help="rational P, e.g. 1 or 3/2")
        p.add_argument("--Q", dest="Q", required=True, help="rational Q, e.g. -1")
    p.add_argument("--prec", type=int, default=None, help=f"working precision in bits (env {PREC_ENV})")
    p.add_argument("--eps", default="1e-20", help="target absolute accuracy")
    p.add_argument("--format", choices=["json", "csv"], default="json")


def _policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--initial-cutoff", type=int, default=16)
    p.add_argument("--max-cutoff", type=int, default=4096)
    p.add_argument("--growth", type=int, default=2)
    p.add_argument("--rho-guard", default="1e-6")
    p.add_argument("--method", choices=["auto", "direct", "cont"], default="auto",
                   help="direct summation, continuation, or direct when inside the domain")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lucas-dirichlet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval-zeta", help="shifted (or plain, q=1) multiple Lucas zeta")
    _common(p)
    _policy_flags(p)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--r", nargs="+", help="residues r_1..r_d (default all 1)")
    p.add_argument("--s", nargs="+", required=True, help="complex coordinates, e.g. 2 or 0.5+1i")

    p = sub.add_parser("eval-L", help="multiple Lucas L-function with Dirichlet characters")
    _common(p)
    _policy_flags(p)
    p.add_argument("--chi", nargs="+", required=True, help="characters as q:index or q:quadratic")
    p.add_argument("--s", nargs="+", required=True)

    p = sub.add_parser("eval-additive", help="multiple Lucas L-function with additive characters")
    _common(p)
    _policy_flags(p)
    p.add_argument("--f", nargs="+", required=True, help="values f_i(1), e.g. -1 1/2 i")
    p.add_argument("--s", nargs="+", required=True)

    p = sub.add_parser("poles", help="list pole hyperplanes")
    _common(p)
    p.add_argument("--variant", choices=["zeta", "additive"], default="zeta")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--f", nargs="+", help="additive characters (variant additive)")
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--k-bound", type=int, default=3)
    p.add_argument("--n-bound", type=int, default=3)
    p.add_argument("--window", metavar="RE_MIN,RE_MAX,IM_MIN,IM_MAX",
                   help="comma-separated; write --window=-5,1,-0.1,0.1 for negative bounds")

    p = sub.add_parser("residue", help="closed-form residue with contour check")
    _common(p)
    p.add_argument("--kind", choices=["dirichlet-last", "dirichlet-inner", "additive-last",
                                      "additive-inner"], required=True)
    p.add_argument("--chi", nargs="+")
    p.add_argument("--f", nargs="+")
    p.add_argument("--j", type=int)
    p.add_argument("--k", nargs="+", default=["0"], help="k' (last) or k_j..k_d (inner)")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--at", nargs="*", default=[], help="the fixed coordinates")
    p.add_argument("--no-numeric", action="store_true", help="skip the contour check")

    p = sub.add_parser("special", help="exact value at s = -m")
    _common(p)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--r", nargs="+")
    p.add_argument("--chi", nargs="+", help="real characters: Dirichlet L value")
    p.add_argument("--f", nargs="+", help="rational additive characters")
    p.add_argument("--m", nargs="+", required=True)

    p = sub.add_parser("characters", help="list the characters mod q")
    _common(p, params=False)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("verify", help="run identity suites")
    _common(p, params=False)
    p.add_argument("--suite", choices=["all", *suite_mod.SUITES], default="all")
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--samples", type=int, default=100, help="random samples for the oracle suite")
    return parser


# -- commands ---------------------------------------------------------------------


def _policy(args) -> TruncationPolicy:
    try:
        return TruncationPolicy(
            initial_cutoff=args.initial_cutoff,
            growth=args.growth,
            max_cutoff=args.max_cutoff,
            eps=mpmath.mpf(args.eps),
            rho_guard=mpmath.mpf(args.rho_guard),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _point(values) -> MultiComplexPoint:
    try:
        return MultiComplexPoint([to_mpc(v) for v in _split_list(values)])
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse point: {exc}") from exc


def _params(args):
    try:
        return validate_params(Fraction(args.P), Fraction(args.Q))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, LucasError):
            raise
        raise UsageError(f"P and Q must be rationals: {exc}") from exc


def _ints(values, name) -> list[int]:
    try:
        return [int(v) for v in _split_list(values)]
    except ValueError as exc:
        raise UsageError(f"{name} must be integers") from exc


def _characters(values):
    try:
        return [parse_character(v) for v in _split_list(values)]
    except (ValueError, IndexError, KeyError) as exc:
        raise UsageError(f"bad character spec: {exc}") from exc


def _additive(values) -> AdditiveTuple:
    try:
        return AdditiveTuple([parse_additive(v) for v in _split_list(values)])
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, LucasError):
            raise
        raise UsageError(f"bad additive character: {exc}") from exc


def _eval_report(target, inputs, method, result: EvalResult, prec) -> dict:
    return {
        "target": target,
        "inputs": inputs,
        "method": method,
        "value": complex_to_json(result.value, prec),
        "tail_bound": _bound_to_str(result.truncation_tail_bound),
        "rounding_bound": _bound_to_str(result.rounding_bound),
        "terms_used": result.terms_used,
        "status": "ok",
    }


def _choose(args, s: MultiComplexPoint) -> str:
    if args.method != "auto":
        return args.method
    return "direct" if domain_margin(s) > 0 else "cont"


def cmd_eval_zeta(args, prec):
    params = _params(args)
    s = _point(args.s)
    residues = _ints(args.r, "--r") if args.r else [1] * s.depth
    shift = ShiftSpec(args.q, residues)
    method = _choose(args, s)
    if method == "direct":
        result = direct_shifted_zeta(params, shift, s, mpmath.mpf(args.eps), prec)
    else:
        result = shifted_zeta_cont(params, shift, s, _policy(args), prec)
    inputs = {"P": args.P, "Q": args.Q, "q": args.q, "r": residues,
              "s": [complex_to_json(z, prec) for z in s.coords]}
    return _eval_report("zeta", inputs, method, result, prec)


def cmd_eval_l(args, prec):
    params = _params(args)
    s = _point(args.s)
    chis = _characters(args.chi)
    method = _choose(args, s)
    if method == "direct":
        result = direct_dirichlet_L(params, chis, s, mpmath.mpf(args.eps), prec)
    else:
        result = dirichlet_L_cont(params, chis, s, _policy(args), prec)
    inputs = {"P": args.P, "Q": args.Q, "chi": [c.label() for c in chis],
              "s": [complex_to_json(z, prec) for z in s.coords]}
    return _eval_report("L", inputs, method, result, prec)


def cmd_eval_additive(args, prec):
    params = _params(args)
    s = _point(args.s)
    fs = _additive(args.f)
    method = _choose(args, s)
    if method == "direct":
        result = direct_additive_L(params, fs, s, mpmath.mpf(args.eps), prec)
    else:
        result = additive_L_cont(params, fs, s, _policy(args), prec)
    inputs = {"P": args.P, "Q": args.Q, "f": [str(f) for f in fs.characters],
              "s": [complex_to_json(z, prec) for z in s.coords]}
    return _eval_report("additive", inputs, method, result, prec)


def cmd_poles(args, prec):
    params = _params(args)
    window = None
    if args.window:
        try:
            window = [mpmath.mpf(w) for w in args.window.split(",")]
        except ValueError as exc:
            raise UsageError(f"bad window: {exc}") from exc
        if len(window) != 4:
            raise UsageError("window needs four comma-separated numbers")
    if args.variant == "zeta":
        poles = enumerate_poles_zeta(params, args.q, args.j, args.k_bound, args.n_bound, window, prec)
    else:
        if not args.f:
            raise UsageError("--f is required for additive poles")
        fs = _additive(args.f)
        poles = enumerate_poles_additive(params, fs, args.j, args.k_bound, args.n_bound, window, prec)
    return {
        "target": "poles",
        "inputs": {"P": args.P, "Q": args.Q, "variant": args.variant, "q": args.q, "j": args.j},
        "hyperplanes": [_jsonable(p.as_dict(), prec) for p in poles],
        "status": "ok",
    }


def cmd_residue(args, prec):
    params = _params(args)
    at = [to_mpc(v) for v in _split_list(args.at)]
    ks = _ints(args.k, "--k")
    numeric = not args.no_numeric
    kind = args.kind
    if kind.startswith("dirichlet"):
        if not args.chi:
            raise UsageError("--chi is required")
        chis = _characters(args.chi)
        if kind == "dirichlet-last":
            value = residue_dirichlet_last(params, chis, at, ks[0], args.n, prec, numeric)
        else:
            value = residue_dirichlet_inner(params, chis, args.j or 1, ks, args.n, at, prec, numeric)
    else:
        if not args.f:
            raise UsageError("--f is required")
        fs = _additive(args.f)
        if kind == "additive-last":
            value = residue_additive_last(params, fs, at, ks[0], args.n, prec, numeric)
        else:
            value = residue_additive_inner(params, fs, args.j or 1, ks, args.n, at, prec, numeric)
    return {
        "target": "residue",
        "inputs": {"P": args.P, "Q": args.Q, "kind": kind, "k": ks, "n": args.n,
                   "at": [complex_to_json(z, prec) for z in at]},
        "location": complex_to_json(value.location, prec),
        "closed_form": complex_to_json(value.closed_form, prec),
        "numeric_check": None if value.numeric_check is None else complex_to_json(value.numeric_check, prec),
        "rel_error": None if value.rel_error is None else _bound_to_str(value.rel_error),
        "status": "ok",
    }


def _value_str(v) -> str:
    return format_rational(v.rational) if v.is_rational() else str(v)


def cmd_special(args, prec):
    params = _params(args)
    m = NegIntPoint(_ints(args.m, "--m"))
    inputs = {"P": args.P, "Q": args.Q, "m": list(m.ms)}
    if args.chi:
        chis = _characters(args.chi)
        q = chis[0].modulus
        inputs["chi"] = [c.label() for c in chis]
        holo = holomorphic_at_neg(params, q, m)
        value = special_L_quadratic(params, chis, m)
        return {"target": "special-L", "inputs": inputs, "value": format_rational(value),
                "rational": True, "holomorphic": holo, "status": "ok"}
    if args.f:
        fs = _additive(args.f)
        inputs["f"] = [str(f) for f in fs.characters]
        result = special_additive_exact(params, fs, m)
        report = {"target": "special-additive", "inputs": inputs, "singular": result.singular}
        if not result.singular:
            report.update(value=_value_str(result.value), rational=result.is_rational)
        report["status"] = "ok"
        return report
    residues = _ints(args.r, "--r") if args.r else [1] * m.depth
    shift = ShiftSpec(args.q, residues)
    inputs.update(q=args.q, r=residues)
    result, terms = symmetrized_special_zeta(params, shift, m)
    report = {
        "target": "special-zeta",
        "inputs": inputs,
        "holomorphic": holomorphic_at_neg(params, args.q, m),
        "singular": result.singular,
    }
    if not result.singular:
        report.update(
            value=_value_str(result.value),
            rational=result.is_rational,
            galois_ok=galois_audit(terms, m),
            square_discriminant=params.d_is_square,
        )
    report["status"] = "ok"
    return report


def cmd_characters(args, prec):
    q = args.q
    if q < 2:
        raise UsageError("--q must be at least 2")
    group = unit_group(q)
    order = euler_phi(q)
    chars = []
    for idx, chi in enumerate(enumerate_characters(q)):
        table = {str(x): (None if k is None else f"zeta_{order}^{k}") for x, k in enumerate(chi.table)}
        chars.append({
            "label": f"{q}:{idx}",
            "exponents": list(chi.exponents),
            "principal": chi.is_principal,
            "real": chi.is_real,
            "values": table,
        })
    return {
        "target": "characters",
        "inputs": {"q": q},
        "unit_group": [{"generator": g, "order": o} for g, o in group.factors],
        "characters": chars,
        "status": "ok",
    }


def cmd_verify(args, prec):
    names = list(suite_mod.SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        fn = suite_mod.SUITES[name]
        kwargs = {}
        if name == "oracle":
            kwargs.update(samples=args.samples, seed=args.seed, prec=prec)
        if name in ("characters", "residues", "classical"):
            kwargs["prec"] = prec
        if args.max_depth is not None and name in ("oracle", "characters", "residues",
                                                   "rationality", "symmetrization", "predicate"):
            kwargs["max_depth"] = args.max_depth
        result = fn(**kwargs)
        results.append(result)
        print(result.summary(), file=sys.stderr)
    return {
        "target": "verify",
        "suites": [
            {
                "name": r.name,
                "description": r.description,
                "passed": r.ok,
                "checks": [{"label": c.label, "ok": c.ok, **_jsonable(c.detail, 64)} for c in r.checks],
            }
            for r in results
        ],
        "status": "ok" if all(r.ok for r in results) else "failed",
    }


COMMANDS = {
    "eval-zeta": cmd_eval_zeta,
    "eval-L": cmd_eval_l,
    "eval-additive": cmd_eval_additive,
    "poles": cmd_poles,
    "residue": cmd_residue,
    "special": cmd_special,
    "characters": cmd_characters,
    "verify": cmd_verify,
}


def _csv_rows(report: dict) -> list[dict]:
    inputs = json.dumps(report.get("inputs", {}), sort_keys=True)
    status = report.get("status", "")
    target = report.get("target", "")
    value = report.get("value") or report.get("closed_form")
    if isinstance(value, dict):
        re, im = value["re"], value["im"]
    elif value is None:
        re = im = ""
    else:
        re, im = value, "0"
    bound = report.get("tail_bound") or report.get("rel_error") or ""
    if target == "verify":
        return [{"target": f"verify:{s['name']}", "inputs": inputs, "value_re": "", "value_im": "",
                 "bound": "", "status": "passed" if s["passed"] else "failed"}
                for s in report["suites"]]
    if target == "poles":
        return [{"target": "pole", "inputs": json.dumps([h["k_sum"], h["n"]]),
                 "value_re": h["location"]["re"], "value_im": h["location"]["im"],
                 "bound": "", "status": status} for h in report["hyperplanes"]]
    return [{"target": target, "inputs": inputs, "value_re": re, "value_im": im,
             "bound": bound, "status": status}]


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["target", "inputs", "value_re", "value_im",
                                                 "bound", "status"], lineterminator="\n")
        writer.writeheader()
        for row in _csv_rows(report):
            writer.writerow(row)
        stream.write(buf.getvalue())
    else:
        stream.write(json.dumps(report, indent=2) + "\n")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        prec = args.prec if args.prec is not None else _default_prec()
        if prec < 32:
            raise UsageError("precision must be at least 32 bits")
        try:
            if not mpmath.mpf(args.eps) > 0:
                raise UsageError("--eps must be positive")
        except ValueError as exc:
            raise UsageError(f"bad --eps: {exc}") from exc
        with mp.workprec(prec):
            report = COMMANDS[args.command](args, prec)
    except UsageError as exc:
        sys.stderr.write(json.dumps({"status": "usage-error", "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except LucasError as exc:
        emit({"status": "error", "error": type(exc).__name__, "message": str(exc)}, "json")
        return EXIT_EVAL
    emit(report, args.format)
    if report.get("status") == "failed":
        return EXIT_SUITE
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
