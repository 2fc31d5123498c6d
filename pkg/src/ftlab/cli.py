"""Command-line entry point: ``ftlab verify|limits|eval``.

Exit codes are a stable contract: 0 when every gating check passes, 1 when a
check fails, 2 for usage errors.  Conjecture and excluded rows are reported
but never gate.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, _numeric, bailey, falsetheta, hecke, limits, modular, mzv, qseries
from ._precision import ENV_DIGITS, context_from_env, make_context

SCHEMA = "ftlab.report/1"
DEFAULT_ORDER = 60
DEFAULT_DIGITS = 50
THEOREM_TOL = 1e-8
S1D_TOL = 1e-6
S2D_TOL = 1e-5


class UsageError(Exception):
    pass


@dataclass
class Check:
    name: str
    params: dict
    status: str            # PASS, FAIL, CONJECTURE, EXCLUDED
    detail: dict = field(default_factory=dict)

    @property
    def gating(self) -> bool:
        return self.status in ("PASS", "FAIL")

    def as_dict(self):
        return {"name": self.name, "params": self.params, "status": self.status, "detail": self.detail}


# -- argument helpers ------------------------------------------------------

def int_list(text: str) -> list[int]:
    """'1,2,5' or '1..5' or a mix such as '1..3,7'."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty integer list")
    return out


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _digits(args) -> int:
    if args.digits is not None:
        if args.digits < 15:
            raise UsageError("digits must be at least 15")
        return args.digits
    return context_from_env().dps


def _ctx(args):
    return make_context(_digits(args))


def _first_term(series: qseries.QExpansion):
    items = series.items()
    if not items:
        return None
    e, c = items[0]
    return {"exponent": str(e), "coefficient": str(Fraction(c))}


def _series_check(name, params, difference: qseries.QExpansion, status=None) -> Check:
    ok = difference.is_zero()
    detail = {} if ok else {"first_difference": _first_term(difference)}
    return Check(name, params, status or ("PASS" if ok else "FAIL"), detail)


def _bool_check(name, params, ok: bool) -> Check:
    return Check(name, params, "PASS" if ok else "FAIL")


def _residual_check(name, params, residual: float, tol: float) -> Check:
    return Check(name, params, "PASS" if residual < tol else "FAIL",
                 {"residual": float(residual), "tolerance": tol})


# -- verify ----------------------------------------------------------------

def _verify_hecke(args):
    for p in args.p:
        for k in args.k:
            d = hecke.verify_hecke_expansion(p, k, args.order).difference
            yield _series_check("hecke", {"p": p, "k": k, "order": args.order}, d)


def _verify_decomposition(args):
    c_list = [args.c] if args.c else [1, 2]
    for p in args.p:
        mu = falsetheta.MuVector(p, args.m1, args.m2)
        for c in c_list:
            lat = falsetheta.LatticeData(p, c)
            params = {"p": p, "m1": args.m1, "m2": args.m2, "c": c, "order": args.order}
            for capital in (False, True):
                lhs = (falsetheta.false_theta_2d_capital if capital else falsetheta.false_theta_2d)(
                    lat, mu, args.order)
                d = lhs.difference(falsetheta.decomposition_rhs(lat, mu, args.order, capital=capital))
                yield _series_check("decomposition-capital" if capital else "decomposition", params, d)


def _verify_habiro_false(args):
    for p in args.p:
        for k in args.k:
            fam = hecke.HabiroFamily(p, k)
            d = falsetheta.verify_habiro_false(p, k, args.order).difference
            yield _series_check("habiro-false", {"p": p, "k": k, "order": args.order}, d,
                                status="EXCLUDED" if fam.excluded else None)
            if not fam.excluded:
                m1, m2 = fam.m
                inside = all(0 < x < 1 for x in falsetheta.MuVector(p, m1, m2).mu)
                ok = falsetheta.verify_hecke_false_bridge(p, m1, m2, args.order, strict=False)
                check = _bool_check("hecke-false-bridge", {"p": p, "m1": m1, "m2": m2, "order": args.order}, ok)
                check.detail["mu_in_unit_square"] = inside
                yield check


def _verify_bailey(args):
    n = args.n
    for p in args.p:
        for kind in (1, 2):
            yield _bool_check("chain", {"kind": kind, "p": p, "n": n, "order": args.order},
                              bailey.verify_chain_identity(kind, p, n, args.order))
        for which in (1, 2, 3):
            yield _bool_check("auxiliary", {"which": which, "p": p, "n": n, "order": args.order},
                              bailey.verify_auxiliary(which, p, n, args.order))
    for base in bailey.Base:
        pair = bailey.unit_pair(base, n, args.order)
        yield _bool_check("unit-pair", {"base": base.name, "n": n, "order": args.order},
                          bailey.verify_bailey_pair(pair))


def _verify_rr(args):
    yield _bool_check("rogers-ramanujan", {"order": args.order}, bailey.verify_rogers_ramanujan(args.order))
    yield _bool_check("pentagonal", {"order": args.order}, qseries.pentagonal_check(args.order))
    for m in range(1, 6):
        yield _bool_check("jacobi-triple", {"order": min(args.order, 50), "m": m},
                          qseries.jacobi_triple_check(min(args.order, 50), m))


def _verify_fine(args):
    for c in args.c_list:
        yield _bool_check("fine", {"c": c, "order": args.order}, bailey.fine_sum_check(c, args.order))


def _verify_s1d(args):
    ctx = _ctx(args)
    for tau in args.tau or [complex(1 / 3, 0.2), complex(-1 / 3, 0.2)]:
        r = modular.s_transform_1d_residual(args.M, args.mu, tau, ctx)
        yield _residual_check("s-transform-1d", {"M": args.M, "mu": args.mu, "tau": str(tau)},
                              r, S1D_TOL)


def _verify_s2d(args):
    for p in args.p:
        mu = falsetheta.MuVector(p, args.m1, args.m2)
        lat = falsetheta.LatticeData(p, args.c or 1)
        base = {"p": p, "m1": args.m1, "m2": args.m2, "c": lat.c_index}
        yield _residual_check("modular-g", dict(base, tau="0.5j", z="0.5j"),
                              modular.modular_g_residual(lat, mu, 0.5j, 0.5j), S1D_TOL)
        for tau in args.tau or [complex(1 / 3, 0.25)]:
            for cor in (False, True):
                r = modular.verify_s_transform_2d(lat, mu, tau, corollary=cor)
                yield _residual_check("s-transform-2d-corollary" if cor else "s-transform-2d",
                                      dict(base, tau=str(tau)), r, S2D_TOL)


def _verify_mzv(args):
    ctx = _ctx(args)
    ok = True
    for m in range(1, 9):
        for n in range(0, 9):
            g, partial = mzv.telescoping_pair_check(m, n, 200)
            ok &= partial == g - mzv.gamma_term(m, n + 200)
    yield _bool_check("telescoping", {"m": "1..8", "n": "0..8", "tail": 200}, ok)
    cut = args.cutoff
    d1 = mzv.sum_formula_check(2, cut // 2, ctx)
    d2 = mzv.sum_formula_check(2, cut, ctx)
    yield Check("sum-formula", {"p": 2, "cutoff": cut},
                "PASS" if (d2 < d1 and d2 < args.tol) else "FAIL",
                {"defect": float(d2), "defect_half_cutoff": float(d1), "tolerance": args.tol})


_VERIFIERS = {
    "hecke": _verify_hecke,
    "decomposition": _verify_decomposition,
    "habiro-false": _verify_habiro_false,
    "bailey": _verify_bailey,
    "rr": _verify_rr,
    "fine": _verify_fine,
    "s1d": _verify_s1d,
    "s2d": _verify_s2d,
    "mzv": _verify_mzv,
}


def _report(command: str, target: str | None, checks: list[Check]) -> dict:
    gating = [c for c in checks if c.gating]
    failures = [c for c in gating if c.status == "FAIL"]
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "target": target,
        "passed": not failures,
        "checks": [c.as_dict() for c in checks],
        "first_failure": failures[0].as_dict() if failures else None,
    }


def _emit(report: dict, fmt: str, out=None) -> None:
    stream = out or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return
    for c in report["checks"]:
        params = " ".join(f"{k}={v}" for k, v in c["params"].items())
        extra = ""
        if c["detail"]:
            extra = "  " + " ".join(f"{k}={v}" for k, v in c["detail"].items())
        stream.write(f"{c['status']:<10} {c['name']} {params}{extra}\n")
    stream.write(("PASSED" if report["passed"] else "FAILED") + "\n")


def cmd_verify(args) -> int:
    checks = list(_VERIFIERS[args.target](args))
    report = _report("verify", args.target, checks)
    _emit(report, args.format)
    return 0 if report["passed"] else 1


# -- limits ----------------------------------------------------------------

def cmd_limits(args) -> int:
    ctx = _ctx(args)
    rows = limits.main_theorem_table(args.p, args.k, args.N, ctx)
    bad = [r for r in rows if r.status is limits.Status.THEOREM and r.abs_diff >= THEOREM_TOL]
    fmt = args.format
    if fmt == "csv":
        text = limits.reports_to_csv(rows)
    elif fmt == "json":
        text = json.dumps({"schema": SCHEMA, "version": __version__, "command": "limits",
                           "tolerance": THEOREM_TOL, "passed": not bad,
                           "rows": [r.as_dict() for r in rows]}, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"{'N':>3} {'p':>3} {'k':>3}  {'value at root':>42}  {'abs diff':>9}  status"]
        for r in rows:
            v = r.value_at_root
            lines.append(f"{r.N:>3} {r.p:>3} {r.k:>3}  {v.real:>20.15g} {v.imag:>+20.15g}i  "
                         f"{r.abs_diff:9.2e}  {r.status.value}")
        text = "\n".join(lines) + "\n"
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"ftlab: cannot write report: {exc}", file=sys.stderr)
        return 1
    return 1 if bad else 0


# -- eval ------------------------------------------------------------------

def format_complex(z, digits: int = 15) -> str:
    z = complex(z)
    tiny = 10.0 ** (-digits + 2)
    re = 0.0 if abs(z.real) < tiny else z.real
    im = 0.0 if abs(z.imag) < tiny else z.imag
    if im == 0:
        return f"{re:.{digits}g}"
    if re == 0:
        return f"{im:.{digits}g}i"
    return f"{re:.{digits}g}{im:+.{digits}g}i"


def cmd_eval(args) -> int:
    obj = args.object
    if obj == "habiro":
        if args.root:
            print(format_complex(limits.habiro_at_root(args.p, args.k, args.root, _ctx(args))))
        else:
            sys.stdout.write(hecke.habiro_series(args.p, args.k, args.order).dumps())
        return 0
    if obj == "phi":
        chi = falsetheta.chi_periodic(tuple(args.p_vec), tuple(args.l_vec))
        if args.root:
            print(format_complex(limits.phi_limit(chi, args.root, _ctx(args))))
        else:
            sys.stdout.write(falsetheta.phi_tilde(chi, args.order).dumps())
        return 0
    if obj == "falsetheta1d":
        if args.root:
            print(format_complex(limits.false_theta_limit_1d(args.M, args.mu, args.root, _ctx(args))))
        elif args.tau is not None:
            print(format_complex(_numeric.false_theta_value(_ctx(args), args.M, args.mu, args.tau)))
        else:
            sys.stdout.write(falsetheta.false_theta_1d(args.M, args.mu, args.order).dumps())
        return 0
    if obj == "falsetheta2d":
        lat = falsetheta.LatticeData(args.p, args.c or 1)
        mu = falsetheta.MuVector(args.p, args.m1, args.m2)
        if args.tau is not None:
            print(format_complex(modular.false_theta_2d_value(lat, mu, args.tau)))
        else:
            sys.stdout.write(falsetheta.false_theta_2d(lat, mu, args.order).dumps())
        return 0
    if obj == "eta":
        if args.tau is not None:
            print(format_complex(_numeric.eta_value(_ctx(args), args.tau)))
        else:
            sys.stdout.write(qseries.eta_series(args.order).dumps())
        return 0
    raise UsageError(f"unknown object {obj}")


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftlab",
        description="q-series, false theta functions and their limits at roots of unity.",
        epilog=f"Precision defaults to {DEFAULT_DIGITS} digits; set {ENV_DIGITS} to override.")
    parser.add_argument("--version", action="version", version=f"ftlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, order=DEFAULT_ORDER):
        sp.add_argument("--order", type=positive_int, default=order,
                        help=f"truncation order (default {order})")
        sp.add_argument("--digits", type=int, default=None,
                        help=f"working precision in digits (default {DEFAULT_DIGITS})")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("target", choices=sorted(_VERIFIERS))
    common(v)
    v.add_argument("--p", type=int_list, default=[1])
    v.add_argument("--k", type=int_list, default=[1, 2, 3, 4, 5])
    v.add_argument("--m1", type=int, default=1)
    v.add_argument("--m2", type=int, default=1)
    v.add_argument("--c", type=int, choices=(1, 2), default=None)
    v.add_argument("--c-list", type=int_list, default=[0, 1, 2, 3, 4, 5], help="fine: values of c")
    v.add_argument("--n", type=int, default=6, help="bailey: largest index n")
    v.add_argument("--M", type=positive_int, default=12)
    v.add_argument("--mu", type=int, default=1)
    v.add_argument("--tau", type=complex_arg, action="append", help="evaluation point (repeatable)")
    v.add_argument("--cutoff", type=positive_int, default=2000, help="mzv: outer cutoff")
    v.add_argument("--tol", type=float, default=1e-3, help="mzv: sum-formula tolerance")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    lim = sub.add_parser("limits", help="values at roots of unity against limits of the convergent part")
    lim.add_argument("--p", type=int_list, default=[1, 2])
    lim.add_argument("--k", type=int_list, default=[1, 2, 3, 4, 5])
    lim.add_argument("--N", type=int_list, default=[1, 2, 3, 4, 5, 6])
    lim.add_argument("--out", default=None)
    lim.add_argument("--format", choices=("text", "csv", "json"), default=None,
                     help="default: csv when --out ends in .csv, json for .json, else text")
    lim.add_argument("--digits", type=int, default=None)
    lim.set_defaults(func=cmd_limits)

    ev = sub.add_parser("eval", help="dump a series or evaluate a value")
    ev.add_argument("object", choices=("habiro", "phi", "falsetheta1d", "falsetheta2d", "eta"))
    common(ev)
    ev.add_argument("--p", type=int, default=1)
    ev.add_argument("--k", type=int, default=1)
    ev.add_argument("--m1", type=int, default=1)
    ev.add_argument("--m2", type=int, default=1)
    ev.add_argument("--c", type=int, choices=(1, 2), default=None)
    ev.add_argument("--M", type=positive_int, default=12)
    ev.add_argument("--mu", type=int, default=1)
    ev.add_argument("--p-vec", type=int_list, default=[2, 3, 5])
    ev.add_argument("--l-vec", type=int_list, default=[1, 1, 1])
    ev.add_argument("--root", type=positive_int, default=None,
                    help="evaluate at (or take the limit towards) q = e^(2 pi i/N)")
    ev.add_argument("--tau", type=complex_arg, default=None, help="evaluate at a point of the upper half-plane")
    ev.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "limits" and args.format is None:
        out = (args.out or "").lower()
        args.format = "csv" if out.endswith(".csv") else "json" if out.endswith(".json") else "text"
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, falsetheta.PreconditionError) as exc:
        print(f"ftlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
