"""Command-line front end.

    eigpert analyze        --input FAMILY.json [--select ...]
    eigpert verify         --input FAMILY.json | --seed N [--dim N] [--scheme n0] ...
    eigpert defective-demo --example {1,2} [--grid 1e-1:1e-5:9]
    eigpert contour-check  --input FAMILY.json [--radius R] [--nodes N]

Reports are JSON on standard output (or ``--output``). Exit codes:
0 ok, 2 bad input, 3 eigenvalue not simple, 4 numerical failure,
5 normalization scheme unusable. Errors are also written to standard error
as a JSON object.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .derivatives import sensitivity
from .documents import (
    ParseError,
    cplx,
    dumps,
    family_document_from_family,
    loads,
    matrix_to_json,
    parse_family_document,
    parse_selector,
    scheme_from_spec,
    vector_to_json,
)
from .eigentriple import DEFAULT_SIMPLICITY_TOL, extract_triple
from .errors import (
    EigPertError,
    InputError,
    NearOrthogonalPair,
    NotSimple,
    NumericalError,
    SchemeError,
)
from .family import eval_derivative, random_linear_family
from .linalg_core import norm2
from .normalizations import apply_normalization
from .spectral import build_structure, derivative_bound, gap_form_bound
from .verify import (
    DEFAULT_DEMO_GRID,
    CHI_WARNING,
    ContourSpec,
    SweepConfig,
    contour_for,
    contour_oracle,
    count_eigs_in_disk,
    defective_demo,
    projector_via_contour,
    verify_family,
)

EXIT_OK, EXIT_PARSE, EXIT_NOT_SIMPLE, EXIT_NUMERICAL, EXIT_SCHEME = 0, 2, 3, 4, 5


def exit_code_for(exc):
    if isinstance(exc, (NotSimple, NearOrthogonalPair)):
        return EXIT_NOT_SIMPLE
    if isinstance(exc, SchemeError):
        return EXIT_SCHEME
    if isinstance(exc, InputError):
        return EXIT_PARSE
    if isinstance(exc, NumericalError):
        return EXIT_NUMERICAL
    return EXIT_NUMERICAL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


# -- flag parsing ------------------------------------------------------------


def _parse_steps(text):
    try:
        if ":" in text:
            a, b = (float(p) for p in text.split(":"))
            k0, k1 = np.log10(a), np.log10(b)
            count = int(round(k0 - k1)) + 1
            if count < 2 or abs((k0 - k1) - round(k0 - k1)) > 1e-9:
                raise ValueError
            return tuple(float(v) for v in np.logspace(k0, k1, count))
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ParseError(f"bad --steps {text!r}; use e.g. 1e-1:1e-12 or a comma list") from None


def _parse_grid(text):
    try:
        if ":" in text:
            a, b, m = text.split(":")
            return tuple(float(v) for v in np.logspace(np.log10(float(a)), np.log10(float(b)), int(m)))
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ParseError(f"bad --grid {text!r}; use START:STOP:COUNT or a comma list") from None


def _parse_complex(text, what):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise ParseError(f"bad {what} {text!r}") from None
    if len(parts) not in (1, 2):
        raise ParseError(f"bad {what} {text!r}")
    return complex(parts[0], parts[1] if len(parts) == 2 else 0.0)


def _load_input(args):
    """Return ``(document, family)`` from --input or a seeded random family."""
    if args.input is not None:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.input}: {exc}") from exc
        doc = parse_family_document(loads(text))
        return doc, doc.to_family()
    if getattr(args, "seed", None) is None:
        raise ParseError("give --input PATH or --seed N")
    if args.dim < 1:
        raise ParseError("--dim must be positive")
    F = random_linear_family(args.dim, args.seed)
    return family_document_from_family(F), F


def _selector(args, doc):
    if args.select is not None:
        return parse_selector(args.select)
    return doc.to_selector()


def _scheme(args, doc):
    if args.scheme is not None:
        return scheme_from_spec(args.scheme, args.pin_j, args.pin_k)
    s = doc.to_scheme()
    if s is None:
        return scheme_from_spec("n0")
    return s


# -- report pieces -----------------------------------------------------------


def _triple_json(t):
    return {
        "lambda0": cplx(t.lambda0),
        "x0": vector_to_json(t.x0),
        "y0": vector_to_json(t.y0),
        "chi": t.chi,
        "gap": t.gap,
        "residuals": list(t.residuals),
    }


def _pair_json(scheme, p):
    out = {
        "scheme": scheme.kind,
        "pin_j": None if p.j is None else p.j + 1,
        "pin_k": None if p.k is None else p.k + 1,
        "sign": p.sign,
        "x_hat": vector_to_json(p.x_hat),
        "y_hat": vector_to_json(p.y_hat),
        "alpha": cplx(p.alpha0),
        "beta_star": cplx(p.beta_star0),
        "unique": p.unique,
    }
    if p.x_hat_prime is not None:
        out["alpha_prime"] = cplx(p.alpha_prime0)
        out["beta_star_prime"] = cplx(p.beta_star_prime0)
        out["x_hat_prime"] = vector_to_json(p.x_hat_prime)
        out["y_hat_star_prime"] = vector_to_json(p.y_hat_star_prime)
    return out


def _sweep_json(s):
    recs = []
    for r in s.records:
        rec = {"step": r.step, "abs_error": r.abs_error, "rel_error": r.rel_error}
        if np.ndim(r.fd) == 0:
            rec["fd"] = cplx(r.fd)
        recs.append(rec)
    return {
        "best_step": s.best_step,
        "best_error": s.best_error,
        "truncation_slope": None if s.floor_dominated else s.truncation_slope,
        "floor_dominated": s.floor_dominated,
        "records": recs,
        "dropped": [{"step": h, "reason": why} for h, why in s.dropped],
    }


def _analysis(doc, F, selector, tol):
    dev = eval_derivative(F, F.tau0)
    t = extract_triple(dev.A_at, selector, tol)
    ss = build_structure(dev.A_at, t)
    sens = sensitivity(ss, dev.Aprime_at)
    warnings = []
    if t.chi > CHI_WARNING:
        warnings.append(f"condition number {t.chi:.3e} exceeds {CHI_WARNING:g}")
    gap_form = gap_form_bound(ss, dev.Aprime_at)
    nx = float(np.linalg.norm(t.x0))
    ny = float(np.linalg.norm(t.y0))
    report = {
        "triple": _triple_json(t),
        "structure": {
            "kappaX": ss.kappaX,
            "resolvent_norm": ss.resolvent_norm,
            "S_norm": norm2(ss.S),
            "Pi0_norm": norm2(ss.Pi0),
        },
        "derivatives": {
            "lambda_prime": cplx(sens.lambda_prime),
            "lambda_prime_trace": cplx(sens.lambda_prime_trace_form),
            "x_prime": vector_to_json(sens.x_prime),
            "ystar_prime": vector_to_json(sens.ystar_prime),
            "pi_prime": matrix_to_json(sens.pi_prime),
        },
        "bounds": {
            "eigenvector_bound": derivative_bound(ss, dev.Aprime_at),
            "gap_form_bound": gap_form,
            "x_prime_ratio": float(np.linalg.norm(sens.x_prime)) / nx,
            "ystar_prime_ratio": float(np.linalg.norm(sens.ystar_prime)) / ny,
            "chi_times_normAprime": sens.chi_times_normAprime,
        },
    }
    return report, ss, sens, warnings


# -- commands ----------------------------------------------------------------


def cmd_analyze(args):
    doc, F = _load_input(args)
    selector = _selector(args, doc)
    report, ss, sens, warnings = _analysis(doc, F, selector, args.simplicity_tol)
    out = {"command": "analyze", "input": _echo(args, doc, selector)}
    out.update(report)
    scheme = doc.to_scheme() if args.scheme is None else _scheme(args, doc)
    if scheme is not None:
        pair = apply_normalization(scheme, ss, sens.x_prime, sens.ystar_prime)
        out["normalization"] = _pair_json(scheme, pair)
    out["warnings"] = warnings
    return out


def cmd_verify(args):
    doc, F = _load_input(args)
    selector = _selector(args, doc)
    scheme = _scheme(args, doc)
    cfg = SweepConfig(
        direction=_parse_complex(args.direction, "--direction"),
        steps=_parse_steps(args.steps),
        selector=selector,
        simplicity_tol=args.simplicity_tol,
    )
    rep = verify_family(F, cfg, scheme, nodes=args.nodes)
    out = {"command": "verify", "input": _echo(args, doc, selector)}
    out["input"]["scheme"] = scheme.kind
    out["input"]["steps"] = list(cfg.steps)
    out["input"]["direction"] = cplx(cfg.direction)
    out["triple"] = _triple_json(rep.triple)
    out["derivatives"] = {
        "lambda_prime": cplx(rep.sensitivity.lambda_prime),
        "pi_prime_norm": norm2(rep.sensitivity.pi_prime),
        "x_prime_norm": float(np.linalg.norm(rep.sensitivity.x_prime)),
    }
    out["sweeps"] = {q: _sweep_json(s) for q, s in rep.sweeps.items()}
    out["contour"] = rep.contour
    out["verdicts"] = rep.verdicts
    out["verdict"] = "pass" if all(rep.verdicts.values()) else "fail"
    out["warnings"] = rep.warnings
    return out


def cmd_defective_demo(args):
    grid = DEFAULT_DEMO_GRID if args.grid is None else _parse_grid(args.grid)
    demo = defective_demo(args.example, grid)
    return {
        "command": "defective-demo",
        "input": {"example": args.example, "grid": list(grid)},
        "fits": [
            {
                "quantity": f.quantity,
                "fitted_exponent": f.fitted_exponent,
                "expected_exponent": f.expected_exponent,
                "fit_residual": f.fit_residual,
            }
            for f in demo.fits
        ],
        "tau0_error": demo.tau0_error,
        "warnings": [],
    }


def cmd_contour_check(args):
    doc, F = _load_input(args)
    selector = _selector(args, doc)
    A0 = eval_derivative(F, F.tau0).A_at
    t = extract_triple(A0, selector, args.simplicity_tol)
    spec = contour_for(t, args.radius, args.nodes)
    P = projector_via_contour(A0, spec)
    oracle = contour_oracle(A0, t, args.nodes, args.radius)
    return {
        "command": "contour-check",
        "input": _echo(args, doc, selector),
        "triple": _triple_json(t),
        "contour": {"center": cplx(spec.center), "radius": spec.radius, "nodes": spec.nodes},
        "projector": matrix_to_json(P),
        "count": count_eigs_in_disk(A0, ContourSpec(spec.center, spec.radius, spec.nodes)),
        "oracle": oracle,
        "warnings": [],
    }


def _echo(args, doc, selector):
    return {
        "family": doc.to_json(),
        "selector": None if selector is None else selector.describe(),
        "seed": getattr(args, "seed", None) if args.input is None else None,
    }


# -- entry point -------------------------------------------------------------


def build_parser():
    p = _Parser(prog="eigpert", description="First-order eigenvalue/eigenvector perturbation toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, family=True):
        if family:
            sp.add_argument("--input", metavar="PATH")
            sp.add_argument("--seed", type=int, help="use a seeded random linear family instead of --input")
            sp.add_argument("--dim", type=int, default=8, help="dimension of the seeded family (default 8)")
            sp.add_argument("--select", help="closest=RE,IM | largest-real | largest-modulus | index=K")
            sp.add_argument("--simplicity-tol", type=float, default=DEFAULT_SIMPLICITY_TOL)
        sp.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")

    a = sub.add_parser("analyze", help="derivatives, structure and bounds at tau0")
    common(a)
    a.add_argument("--scheme", choices=["n0", "n1", "n2", "n3", "n4"])
    a.add_argument("--pin-j", type=int)
    a.add_argument("--pin-k", type=int)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="finite-difference sweeps and contour oracle")
    common(v)
    v.add_argument("--scheme", choices=["n0", "n1", "n2", "n3", "n4"])
    v.add_argument("--pin-j", type=int)
    v.add_argument("--pin-k", type=int)
    v.add_argument("--steps", default="1e-1:1e-12")
    v.add_argument("--direction", default="1,0")
    v.add_argument("--nodes", type=int, default=64)
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("defective-demo", help="fractional-power splitting of a multiple eigenvalue")
    common(d, family=False)
    d.add_argument("--example", type=int, choices=[1, 2], required=True)
    d.add_argument("--grid", help="START:STOP:COUNT (log-spaced) or comma list")
    d.set_defaults(func=cmd_defective_demo)

    c = sub.add_parser("contour-check", help="resolvent contour projector and eigenvalue count")
    common(c)
    c.add_argument("--radius", type=float)
    c.add_argument("--nodes", type=int, default=64)
    c.set_defaults(func=cmd_contour_check)
    return p


def _fail(exc, stderr):
    code = exit_code_for(exc)
    stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except ParseError as exc:
        return _fail(exc, stderr)
    try:
        report = args.func(args)
    except EigPertError as exc:
        return _fail(exc, stderr)
    text = dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
