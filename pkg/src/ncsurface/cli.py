"""Command-line front end: reproducible experiments with JSON/CSV artifacts.

Exit codes: 0 success, 1 verification failure (a residual above tolerance or
an unresolvable ambiguity), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction

import numpy as np

from . import berezin, free_algebra, representations, spectra, surface

USAGE_ERROR = 2
VERIFY_ERROR = 1


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+|\.\d+)?)|(?P<var>[xyz])"
                    r"|(?P<op>[-+*^()])|(?P<end>$))")


def parse_poly3(text: str) -> surface.CommPolynomial3:
    """Tiny polynomial parser: terms like '2*x^2*y - z + 1/2'."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        if m.group("num"):
            tokens.append(("num", m.group("num")))
        elif m.group("var"):
            tokens.append(("var", m.group("var")))
        elif m.group("op"):
            tokens.append(("op", m.group("op")))
        pos = m.end()
    tokens.append(("end", ""))

    poly = surface.CommPolynomial3()
    sign = 1
    coeff = Fraction(1)
    expo = [0, 0, 0]
    has_term = False

    def flush():
        nonlocal poly, sign, coeff, expo, has_term
        if has_term:
            poly = poly + surface.CommPolynomial3({tuple(expo): sign * coeff})
        sign, coeff, expo, has_term = 1, Fraction(1), [0, 0, 0], False

    i = 0
    while i < len(tokens):
        kind, value = tokens[i]
        if kind == "num":
            coeff *= Fraction(value)
            has_term = True
        elif kind == "var":
            axis = "xyz".index(value)
            power = 1
            if tokens[i + 1] == ("op", "^"):
                pkind, pval = tokens[i + 2]
                if pkind != "num" or not pval.isdigit():
                    raise ValueError("exponent must be a nonnegative integer")
                power = int(pval)
                i += 2
            expo[axis] += power
            has_term = True
        elif kind == "op" and value in "+-":
            if has_term:
                flush()
            if value == "-":
                sign = -sign
        elif kind == "op" and value == "*":
            if not has_term or tokens[i + 1][0] not in ("num", "var"):
                raise ValueError("'*' must sit between factors")
        elif kind == "end":
            flush()
        else:
            raise ValueError(f"unsupported token {value!r}")
        i += 1
    return poly


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _matrix_to_json(W: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in W]


def _matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re_, im_) for re_, im_ in row] for row in data])


def _verification_dict(report: representations.VerificationReport) -> dict:
    return {
        "residual_wwd": report.residual_wwd,
        "residual_casimir": report.residual_casimir,
        "c_estimate": report.c_estimate,
        "intertwine_residual": report.intertwine_residual,
        "residual_yz": report.residual_yz,
        "residual_zx": report.residual_zx,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_genus(args) -> int:
    spec = surface.build_genus_polynomial(args.g, args.mu, args.alpha)
    data = surface.euler_characteristic(spec)
    _print_json({
        "chi": data.chi,
        "genus": data.genus,
        "n_plus": data.n_plus,
        "n_minus": data.n_minus,
        "critical_x": list(data.critical_x_values),
    })
    return 0


def cmd_confluence(args) -> int:
    params = free_algebra.AlgebraParams(args.mu, args.hbar2)
    system = free_algebra.build_torus_system(params)
    check = free_algebra.check_overlap_resolvable(system, args.word)
    if args.json:
        _print_json({"word": args.word,
                     "resolvable": check.resolvable,
                     "witness": str(check.witness)})
    else:
        print(f"resolvable: {'true' if check.resolvable else 'false'}, "
              f"witness: {check.witness}")
    return 0 if check.resolvable else VERIFY_ERROR


def _build_rep(args) -> representations.Representation:
    if args.kind == "loop":
        spec = representations.LoopSpec(n=args.n, k=args.k, beta=args.beta,
                                        phases=args.phases)
        return representations.construct_loop_rep(spec, float(args.mu), float(args.c))
    if args.kind == "string":
        mu, c = float(args.mu), float(args.c)
        theta = args.theta if args.theta is not None else \
            representations.solve_string_theta(args.n, mu, c)
        spec = representations.StringSpec(n=args.n, theta=theta, mu=mu,
                                          phases=args.phases, c=c)
        return representations.construct_string_rep(spec)
    if args.kind == "degenerate":
        return representations.construct_degenerate_rep(float(args.mu), np.eye(args.n))
    raise ValueError(f"unknown kind {args.kind!r}")


def cmd_rep_construct(args) -> int:
    rep = _build_rep(args)
    report = representations.verify_relations(rep)
    payload = {
        "kind": args.kind,
        "n": rep.n,
        "mu": rep.params.mu,
        "c": rep.params.c,
        "theta": rep.params.theta,
        "regime": rep.regime.value,
        "w": _matrix_to_json(rep.W),
        "verification": _verification_dict(report),
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.ok(args.tol) else VERIFY_ERROR


def cmd_rep_verify(args) -> int:
    with open(getattr(args, "in")) as fh:
        payload = json.load(fh)
    W = _matrix_from_json(payload["w"])
    params = representations.RepParams(payload["mu"], payload["c"], payload["theta"])
    regime = representations.Regime(payload.get("regime", "toral"))
    rep = representations.Representation(W, params, regime)
    report = representations.verify_relations(rep)
    _print_json(_verification_dict(report))
    return 0 if report.ok(args.tol) else VERIFY_ERROR


def cmd_rep_classify(args) -> int:
    regime = representations.classify_regime(args.mu, args.c, args.theta)
    _print_json({"mu": args.mu, "c": args.c, "theta": args.theta,
                 "regime": regime.value})
    return 0


def cmd_spectrum(args) -> int:
    if args.kind == "auto":
        rep = spectra.build_figure_rep(float(args.mu), float(args.c), args.n, args.beta)
    else:
        rep = _build_rep(args)
    report = spectra.position_spectrum(rep, args.ratio)
    rows = spectra.spectrum_rows(report)
    text = spectra.sweep_rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        spectra.write_spectrum_svg(report, args.svg)
    return 0


def cmd_sweep(args) -> int:
    rows = spectra.sweep_mu(args.mu, float(args.c), args.n, args.beta, args.ratio)
    text = spectra.sweep_rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        stem, dot, ext = args.svg.rpartition(".")
        for mu in args.mu:
            try:
                report = spectra.position_spectrum(
                    spectra.build_figure_rep(mu, float(args.c), args.n, args.beta),
                    args.ratio)
            except Exception:
                continue
            path = f"{stem}-mu{mu:g}{dot}{ext}" if dot else f"{args.svg}-mu{mu:g}"
            spectra.write_spectrum_svg(report, path)
    failures = [r for r in rows if isinstance(r.branches, str)]
    return VERIFY_ERROR if failures else 0


def cmd_bt(args) -> int:
    nu = 1 / math.cos(math.pi / args.n) if args.nu == "auto" else float(args.nu)
    spec = berezin.BTSpec(float(args.mu), nu, args.n)
    X, Y, Z = berezin.bt_matrices(spec)
    report = berezin.verify_bt_relations(X, Y, Z, spec)
    comparison = berezin.compare_with_loop_rep(spec)
    surface_cmp = berezin.compare_with_loop_rep(spec, c_loop=nu * nu)
    payload = {
        "n": args.n,
        "mu": float(args.mu),
        "nu": nu,
        "hbar": spec.hbar,
        "residuals": list(report.residuals()),
        "loop_comparison": {
            "max_entry_diff": comparison.max_entry_diff,
            "c": comparison.c,
            "equivalent": comparison.equivalent,
        },
        "surface_comparison": {
            "max_entry_diff": surface_cmp.max_entry_diff,
            "c": surface_cmp.c,
            "equivalent": surface_cmp.equivalent,
        },
    }
    _print_json(payload)
    ok = report.ok(1e-12 * args.n) and comparison.equivalent
    return 0 if ok else VERIFY_ERROR


def cmd_converge(args) -> int:
    f = parse_poly3(args.f)
    g = parse_poly3(args.g)
    mu, c = args.mu, args.c
    reps = [representations.construct_loop_rep(
        representations.LoopSpec(n=n, k=1, beta=args.beta), float(mu), float(c))
        for n in args.n]
    errors = spectra.commutator_vs_bracket(f, g, reps, mu, c)
    _print_json({"f": args.f, "g": args.g,
                 "mu": str(mu), "c": str(c),
                 "errors": [{"n": n, "error": e} for n, e in errors]})
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncsurface",
        description="Noncommutative C-algebras of Riemann surfaces: exact "
                    "rewriting, representations, spectra, Berezin-Toeplitz.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genus", help="genus-g constraint surface and Morse count")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--mu", type=_fraction, required=True)
    p.add_argument("--alpha", type=_fraction, required=True)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("confluence", help="diamond-lemma overlap check")
    p.add_argument("--mu", type=_fraction, required=True)
    p.add_argument("--hbar2", type=_fraction, required=True)
    p.add_argument("--word", default="WWVV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_confluence)

    p = sub.add_parser("rep", help="construct/verify/classify representations")
    rep_sub = p.add_subparsers(dest="rep_command", required=True)

    pc = rep_sub.add_parser("construct")
    pc.add_argument("--kind", choices=["loop", "string", "degenerate"], required=True)
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--k", type=int, default=1)
    pc.add_argument("--mu", type=_fraction, required=True)
    pc.add_argument("--c", type=_fraction, default=Fraction(1))
    pc.add_argument("--beta", type=float, default=0.0)
    pc.add_argument("--theta", type=float, default=None)
    pc.add_argument("--phases", type=_float_list, default=None)
    pc.add_argument("--out", default=None)
    pc.add_argument("--tol", type=float, default=1e-10)
    pc.set_defaults(func=cmd_rep_construct)

    pv = rep_sub.add_parser("verify")
    pv.add_argument("--in", required=True)
    pv.add_argument("--tol", type=float, default=1e-10)
    pv.set_defaults(func=cmd_rep_verify)

    pk = rep_sub.add_parser("classify")
    pk.add_argument("--mu", type=float, required=True)
    pk.add_argument("--c", type=float, required=True)
    pk.add_argument("--theta", type=float, required=True)
    pk.set_defaults(func=cmd_rep_classify)

    p = sub.add_parser("spectrum", help="spectrum of phi(X) with branch detection")
    p.add_argument("--kind", choices=["auto", "loop", "string", "degenerate"],
                   default="auto")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mu", type=_fraction, required=True)
    p.add_argument("--c", type=_fraction, default=Fraction(1))
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--phases", type=_float_list, default=None)
    p.add_argument("--ratio", type=float, default=spectra.BRANCH_RATIO)
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="mu sweep of eigenvalue spectra")
    p.add_argument("--mu", type=_float_list, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=_fraction, default=Fraction(1))
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--ratio", type=float, default=spectra.BRANCH_RATIO)
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bt", help="Berezin-Toeplitz matrices and loop comparison")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", type=_fraction, required=True)
    p.add_argument("--nu", default="auto",
                   help="'auto' for 1/cos(pi/N), else a number")
    p.set_defaults(func=cmd_bt)

    p = sub.add_parser("converge", help="commutator vs Poisson bracket errors")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--mu", type=_fraction, required=True)
    p.add_argument("--c", type=_fraction, default=Fraction(1))
    p.add_argument("--beta", type=float, default=0.0)
    p.set_defaults(func=cmd_converge)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
