"""``nearassoc`` command-line front end.

Exit codes: 0 when a check holds or a construction succeeds, 1 when a check
fails or a construction is mathematically impossible, 2 for invalid input.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import io
from .algebra import (
    HomAlgebra,
    IdentityId,
    LinearMap,
    as_hom,
    check_identity,
    commutator_algebra,
    is_hom_lie_admissible,
)
from .bialgebra import manin_double
from .bimodules import check_left_invariant, dual_bimodule, semidirect
from .classify2d import (
    FamilyParams,
    classify_report_fp,
    enumerate_indices_fp,
    family,
    tables_from_indices,
)
from .errors import (
    AlgebraError,
    CharTwoFamilyIII,
    ContextMismatch,
    DimensionMismatch,
    InvalidParams,
    NoSquareRoot,
    ParseError,
    SearchSpaceTooLarge,
    UnsupportedHomCase,
)
from .matched_pairs import double
from .scalars import PrimeField, QuadraticField, Rationals

INPUT_ERRORS = (
    ParseError,
    DimensionMismatch,
    ContextMismatch,
    SearchSpaceTooLarge,
    InvalidParams,
    NoSquareRoot,
    CharTwoFamilyIII,
    UnsupportedHomCase,
)


class UsageError(Exception):
    pass


def _write(text: str, out: str | None):
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _witness_json(ctx, w):
    if w is None:
        return None
    fmt = lambda v: ctx.format_array(np.asarray(v))  # noqa: E731
    out = {"indices": list(w.indices), "lhs": fmt(w.lhs), "rhs": fmt(w.rhs)}
    if w.equation:
        out["equation"] = w.equation
    if w.args:
        out["args"] = [fmt(a) for a in w.args]
    return out


def _details_json(details):
    return {k: (bool(v) if isinstance(v, (bool, np.bool_)) else v) for k, v in details.items()}


def _field_arg(text: str):
    """``rational``, ``quadratic:D`` or ``prime:P``."""
    kind, _, arg = text.partition(":")
    try:
        if kind == "rational" and not arg:
            return Rationals()
        if kind == "quadratic":
            return QuadraticField(int(arg))
        if kind == "prime":
            return PrimeField(int(arg))
    except ValueError as exc:
        raise ParseError(f"bad field {text!r}: {exc}") from None
    raise ParseError(f"bad field {text!r}; use rational, quadratic:D or prime:P")


# --- subcommands ----------------------------------------------------------------------


def cmd_check(args):
    h = io.load_file(args.file)
    if not isinstance(h, HomAlgebra):
        raise ParseError("check expects an algebra or hom-algebra document")
    ctx = h.ctx
    if args.alpha:
        text = io.read_text(args.alpha)
        try:
            import json

            data = json.loads(text)
        except ValueError as exc:
            raise ParseError(f"invalid alpha file: {exc}") from None
        h = HomAlgebra(h.alg, io.parse_matrix(ctx, data, h.n))
    if args.identity == "hom-lie-admissible":
        rep = is_hom_lie_admissible(h)
        name = "hom-lie-admissible"
    else:
        try:
            ident = IdentityId.parse(args.identity)
        except ValueError:
            raise ParseError(f"unknown identity {args.identity!r}") from None
        rep = check_identity(h, ident)
        name = ident.value
    report = {
        "kind": "check",
        "identity": name,
        "holds": rep.holds,
        "witness": _witness_json(ctx, rep.witness),
        "details": _details_json(rep.details),
    }
    return io.report_doc(ctx, report), (0 if rep.holds else 1)


def cmd_semidirect(args):
    b = io.load_file(args.file)
    if io.to_document(b)["schema"] != "bimodule":
        raise ParseError("semidirect expects a bimodule document")
    return io.to_document(semidirect(b)), 0


def cmd_double(args):
    mp = io.load_file(args.file)
    if io.to_document(mp)["schema"] != "matched-pair":
        raise ParseError("double expects a matched-pair document")
    return io.to_document(double(mp)), 0


def cmd_manin(args):
    A = io.load_file(args.algebra)
    cp = io.load_file(args.coproduct)
    if not isinstance(A, HomAlgebra) or io.to_document(cp)["schema"] != "coproduct":
        raise ParseError("manin expects an algebra document and a coproduct document")
    if A.ctx != cp.ctx:
        raise ContextMismatch("algebra and coproduct live over different fields")
    h, form = manin_double(A.alg, cp)
    alg_doc, form_doc = io.to_document(h), io.to_document(form)
    if args.algebra_out:
        _write(io.dumps(alg_doc), args.algebra_out)
    if args.form_out:
        _write(io.dumps(form_doc), args.form_out)
    report = {
        "kind": "manin",
        "algebra": alg_doc,
        "form": form_doc,
        "left_invariant": check_left_invariant(h, form).holds,
    }
    return io.report_doc(A.ctx, report), 0


def cmd_invariant(args):
    A = io.load_file(args.algebra)
    form = io.load_file(args.form)
    if not isinstance(A, HomAlgebra) or io.to_document(form)["schema"] != "form":
        raise ParseError("invariant expects an algebra document and a form document")
    rep = check_left_invariant(A.alg, form)
    report = {"kind": "left-invariant", "holds": rep.holds, "witness": _witness_json(A.ctx, rep.witness)}
    return io.report_doc(A.ctx, report), (0 if rep.holds else 1)


def cmd_dual_bimodule(args):
    b = io.load_file(args.file)
    if io.to_document(b)["schema"] != "bimodule":
        raise ParseError("dual-bimodule expects a bimodule document")
    return io.to_document(dual_bimodule(b, args.order)), 0


def cmd_commutator(args):
    h = io.load_file(args.file)
    if not isinstance(h, HomAlgebra):
        raise ParseError("commutator expects an algebra document")
    return io.to_document(HomAlgebra(commutator_algebra(h.alg), h.alpha)), 0


def cmd_family(args):
    ctx = _field_arg(args.field)
    name = args.name.upper()
    if name in ("I", "II"):
        if args.alpha is None or args.beta is None:
            raise InvalidParams(f"family {name} needs --alpha and --beta")
        params = (ctx.parse(args.alpha), ctx.parse(args.beta))
        fp = FamilyParams(name, params)
    elif name == "III":
        if None in (args.alpha, args.beta, args.gamma):
            raise InvalidParams("family III needs --alpha, --beta and --gamma")
        a, b, g = (ctx.parse(v) for v in (args.alpha, args.beta, args.gamma))
        if ctx.characteristic == 2:
            raise CharTwoFamilyIII("family III divides by 2")
        if args.delta is not None:
            fp = FamilyParams("III", (a, b, g, ctx.parse(args.delta)))
        else:
            fp = FamilyParams.family_iii(ctx, a, b, g)
    else:
        raise InvalidParams(f"unknown family {args.name!r}")
    return io.to_document(family(fp, ctx)), 0


def _label_table(ctx, c) -> list:
    """Nonzero products as ``e1*e2 = ...`` strings with 1-based labels."""
    n = c.shape[0]
    lines = []
    for i in range(n):
        for j in range(n):
            terms = []
            for k in range(n):
                v = ctx.format(c[i, j, k])
                if v != "0":
                    terms.append(f"e{k + 1}" if v == "1" else f"{v}*e{k + 1}")
            if terms:
                lines.append(f"e{i + 1}*e{j + 1} = " + " + ".join(terms))
    return lines


def cmd_enumerate(args):
    try:
        ident = IdentityId.parse(args.identity)
    except ValueError:
        raise ParseError(f"unknown identity {args.identity!r}") from None
    ctx = PrimeField(args.prime) if args.prime else None
    if ctx is None:
        raise ParseError("--prime is required")
    start = time.perf_counter()
    if args.classify:
        if args.dim != 2 or ident is not IdentityId.NEARLY_ASSOCIATIVE:
            raise ParseError("--classify is available for --dim 2 --identity nearly-associative")
        report = classify_report_fp(args.prime, args.threads)
        report["kind"] = "classification"
    else:
        idx = enumerate_indices_fp(args.dim, args.prime, ident, args.threads)
        report = {
            "kind": "enumeration",
            "dimension": args.dim,
            "prime": args.prime,
            "identity": ident.value,
            "count": int(len(idx)),
            "indices": [int(v) for v in idx],
        }
        if args.tables:
            report["tables"] = [ctx.format_array(t) for t in tables_from_indices(idx, args.dim, args.prime)]
    sidecar = {"seconds": round(time.perf_counter() - start, 6)} if args.timing else None
    doc = io.report_doc(ctx, report, sidecar)
    if args.text:
        return _enumeration_text(ctx, report), 0
    return doc, 0


def _enumeration_text(ctx, report) -> str:
    lines = [f"{report['identity']} algebras of dimension {report.get('dimension', 2)} over F_{report['prime']}: {report['count']}"]
    for cl in report.get("classes", []):
        c = ctx.array(cl["representative"])
        fams = ", ".join(f"{f['family']}({', '.join(f['params'])})" for f in cl["families"][:4])
        more = len(cl["families"]) - 4
        if more > 0:
            fams += f", ... (+{more})"
        lines.append(f"class {cl['class'] + 1}: size {cl['size']}, families: {fams or 'none'}")
        for prod in _label_table(ctx, c) or ["(zero product)"]:
            lines.append(f"    {prod}")
        if cl["family_gap"]:
            lines.append(f"    {cl['note']}")
    return "\n".join(lines) + "\n"


# --- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nearassoc", description="Exact checks for nearly associative algebras.")
    parser.add_argument("--out", "-o", help="write the output document here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check an identity on an algebra")
    p.add_argument("file")
    p.add_argument("--identity", default="nearly-associative")
    p.add_argument("--alpha", help="JSON matrix of scalar strings used as the twist")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("semidirect", help="semidirect product of a bimodule")
    p.add_argument("file")
    p.set_defaults(func=cmd_semidirect)

    p = sub.add_parser("double", help="double of a matched pair")
    p.add_argument("file")
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("manin", help="standard Manin triple from an algebra and a coproduct")
    p.add_argument("algebra")
    p.add_argument("coproduct")
    p.add_argument("--algebra-out")
    p.add_argument("--form-out")
    p.set_defaults(func=cmd_manin)

    p = sub.add_parser("invariant", help="check left-invariance of a form")
    p.add_argument("algebra")
    p.add_argument("form")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("dual-bimodule", help="dual of a bimodule")
    p.add_argument("file")
    p.add_argument("--order", choices=["LR", "RL"], default="LR")
    p.set_defaults(func=cmd_dual_bimodule)

    p = sub.add_parser("commutator", help="commutator bracket of an algebra")
    p.add_argument("file")
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("family", help="a member of the two-dimensional families")
    p.add_argument("--name", required=True, help="I, II or III")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--gamma")
    p.add_argument("--delta", help="square root of gamma^2 + 4 alpha beta (family III)")
    p.add_argument("--field", default="rational", help="rational, quadratic:D or prime:P")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("enumerate", help="exhaustive enumeration over F_p")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--identity", default="nearly-associative", help="Hom identities are evaluated at alpha = id")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--tables", action="store_true", help="include every table, not just indices")
    p.add_argument("--threads", type=int)
    p.add_argument("--timing", action="store_true", help="add wall time in a sidecar field")
    p.add_argument("--text", action="store_true", help="human-readable table instead of JSON")
    p.set_defaults(func=cmd_enumerate)
    return parser


def _error_doc(exc: Exception) -> dict:
    report = {"kind": "error", "error": type(exc).__name__, "message": str(exc)}
    stage = getattr(exc, "stage", None)
    if stage:
        report["stage"] = stage
    return io.report_doc(None, report)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        result, code = args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        _write(io.dumps(_error_doc(exc)), args.out)
        return 2
    except AlgebraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        _write(io.dumps(_error_doc(exc)), args.out)
        return 1
    except (ValueError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        _write(io.dumps(_error_doc(exc)), args.out)
        return 2
    text = result if isinstance(result, str) else io.dumps(result)
    _write(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
