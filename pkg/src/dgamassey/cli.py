"""Command line interface: ``dgamassey <command> ...``.

Exit status is 0 on success, 1 for a negative verdict (invalid model, empty
or inessential product, failed verification, unmet hypothesis) and 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from importlib import resources
from typing import Dict, List, Optional

from . import __version__, modelfile
from .bundle import ChernData
from .certificate import blowup_certificate, verify_certificate
from .dga import CohomologyClass, cohomology_basis, validate
from .errors import BudgetExceeded, CorruptCertificate, EngineInconsistency, HypothesisFailure, MasseyError
from .exhaustive import budget_from_env, massey_nfold_exhaustive
from .fields import Field
from .massey import Status, massey_nfold_witness
from .models import BUNDLED, bundled_model
from .polyparse import format_polynomial, parse_polynomial

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2

_DATA_FILES = {"kodaira_thurston": "kodaira_thurston.model", "heisenberg": "heisenberg.model"}


class UsageError(Exception):
    pass


class Context:
    """Collects the report for one command run."""

    def __init__(self, argv: List[str]):
        self.argv = list(argv)
        self.inputs: List[bytes] = []
        self.results: Dict[str, object] = {}
        self.lines: List[str] = []

    def add_input(self, blob: bytes):
        self.inputs.append(blob)

    def say(self, text: str = ""):
        self.lines.append(text)

    def report(self) -> dict:
        h = hashlib.sha256()
        for blob in self.inputs:
            h.update(hashlib.sha256(blob).digest())
        return {
            "command": self.argv,
            "version": __version__,
            "inputs_digest": h.hexdigest(),
            "results": self.results,
        }


def _bundled_text(name: str) -> Optional[str]:
    key = name.lower().replace(".model", "").replace("-", "_")
    if key == "kt":
        key = "kodaira_thurston"
    fname = _DATA_FILES.get(key)
    if fname is None:
        return None
    return resources.files("dgamassey").joinpath("data", fname).read_text(encoding="utf-8")


def load_model(ctx: Context, spec: str, field: Optional[Field] = None, check: bool = True) -> modelfile.ModelFile:
    """A model file path or the name of a bundled model."""
    if os.path.exists(spec):
        with open(spec, "rb") as fh:
            blob = fh.read()
        ctx.add_input(blob)
        return modelfile.loads(blob.decode("utf-8"), field=field, check=check)
    text = _bundled_text(os.path.basename(spec))
    if text is not None:
        ctx.add_input(text.encode("utf-8"))
        return modelfile.loads(text, field=field, check=check)
    try:
        model = bundled_model(spec, field or Field(0))
    except KeyError as exc:
        raise UsageError(f"no such file or bundled model: {spec}") from exc
    mf = modelfile.from_model(model)
    ctx.add_input(modelfile.dumps(mf).encode("utf-8"))
    return mf


def _class_labels(mf: modelfile.ModelFile) -> Dict[str, CohomologyClass]:
    out = {}
    for label, v in mf.classes.items():
        if mf.model.is_cocycle(v):
            out[label] = mf.model.cohomology_class(v)
    return out


def render_class(c: CohomologyClass, labels: Dict[str, CohomologyClass]) -> str:
    """Label when the class is a labelled one (up to sign), otherwise ``[rep]``."""
    if not c.is_zero():
        for label, lc in labels.items():
            if lc.degree == c.degree and not lc.is_zero():
                if lc == c:
                    return label
                if lc == -c:
                    return "-" + label
    return c.format()


def resolve_class(mf: modelfile.ModelFile, token: str) -> CohomologyClass:
    model = mf.model
    try:
        v = mf.label(token)
    except KeyError:
        try:
            v = parse_polynomial(model.algebra, token)
        except MasseyError as exc:
            raise UsageError(f"{token!r} is neither a class label nor a polynomial: {exc}") from None
    return model.cohomology_class(v)


# commands -----------------------------------------------------------------
def cmd_validate(ctx: Context, args) -> int:
    mf = load_model(ctx, args.model, _field(args), check=False)
    rep = validate(mf.model)
    ctx.results = {
        "valid": rep.valid,
        "degree_errors": [{"generator": g, "message": m} for g, m in rep.degree_errors],
        "d_squared": [{"monomial": m, "d2": v} for m, v in rep.d_squared],
    }
    ctx.say("valid" if rep.valid else "invalid")
    for g, m in rep.degree_errors:
        ctx.say(f"  degree: {m}")
    for m, v in rep.d_squared:
        ctx.say(f"  d^2({m}) = {v}")
    return EXIT_OK if rep.valid else EXIT_NEGATIVE


def cmd_cohomology(ctx: Context, args) -> int:
    mf = load_model(ctx, args.model, _field(args))
    model = mf.model
    labels = _class_labels(mf)
    if args.all:
        degrees = list(range(model.truncation + 1))
    else:
        if not 0 <= args.degree <= model.truncation:
            raise UsageError(f"degree {args.degree} outside 0..{model.truncation}")
        degrees = [args.degree]
    out = []
    for n in degrees:
        basis = [render_class(c, labels) for c in cohomology_basis(model, n)]
        out.append({"degree": n, "dimension": len(basis), "basis": basis})
        ctx.say(f"H^{n}: dim {len(basis)}" + (f"  {{{', '.join(basis)}}}" if basis else ""))
    ctx.results = {"field": str(model.field), "degrees": out}
    if args.all:
        dims = [d["dimension"] for d in out]
        ctx.results["dimensions"] = dims
        ctx.say("dims (" + ",".join(str(d) for d in dims) + ")")
    return EXIT_OK


def cmd_massey(ctx: Context, args) -> int:
    mf = load_model(ctx, args.model, _field(args))
    model = mf.model
    labels = _class_labels(mf)
    classes = [resolve_class(mf, t) for t in args.classes]
    if args.arity is not None and args.arity != len(classes):
        raise UsageError(f"--arity {args.arity} but {len(classes)} classes given")
    if len(classes) < 3:
        raise UsageError("a Massey product needs at least three classes")
    names = [render_class(c, labels) for c in classes]
    res: Dict[str, object] = {"field": str(model.field), "classes": names, "arity": len(classes)}
    ctx.say(f"<{', '.join(names)}> over {model.field}")
    if args.exhaustive:
        if not model.field.is_finite:
            raise UsageError("--exhaustive needs a prime field, e.g. --field F5")
        result = massey_nfold_exhaustive(model, classes, budget=budget_from_env())
        values = sorted(result.values, key=lambda c: [int(x) for x in c.coords()])
        status = "NonEmpty" if result.values else "Empty"
        essential = "Essential" if result.essential else "Inessential"
        res.update(
            status=status,
            essential=essential,
            systems=result.systems,
            values=[render_class(v, labels) for v in values],
        )
        ctx.say(f"status: {status}")
        ctx.say(f"verdict: {essential}")
        ctx.say(f"defining systems enumerated: {result.systems}")
        ctx.say(f"values ({len(values)}): " + ", ".join(render_class(v, labels) for v in values))
        ctx.results = res
        return EXIT_OK if result.essential else EXIT_NEGATIVE
    verdict = massey_nfold_witness(model, classes, exhaustive=False)
    res["status"] = verdict.status.value
    res["essential"] = verdict.essential.value
    ctx.say(f"status: {verdict.status.value}")
    if verdict.representative is not None:
        res["representative"] = render_class(verdict.representative, labels)
        ctx.say(f"representative: {res['representative']}")
    if verdict.indeterminacy is not None:
        basis = [render_class(c, labels) for c in verdict.indeterminacy.classes()]
        res["indeterminacy"] = basis
        res["indeterminacy_complete"] = verdict.indeterminacy_complete
        ctx.say("indeterminacy: span{" + ", ".join(basis) + "}" + ("" if verdict.indeterminacy_complete else " (witnessed subspace)"))
    if verdict.obstruction is not None:
        i, j = verdict.obstruction.position
        res["obstruction"] = {"position": [i, j], "target": format_polynomial(verdict.obstruction.target)}
        ctx.say(f"obstruction at x[{i},{j}]: d x = {format_polynomial(verdict.obstruction.target)} has no solution")
    if verdict.witnesses:
        w = verdict.witnesses[0]
        res["witness"] = [{"i": i, "j": j, "x": format_polynomial(v)} for (i, j), v in w.items()]
        ctx.say("witness:")
        for (i, j), v in w.items():
            ctx.say(f"  x[{i},{j}] = {format_polynomial(v)}")
    if verdict.residue is not None:
        res["residue"] = format_polynomial(verdict.residue)
    res["notes"] = list(verdict.notes)
    for note in verdict.notes:
        ctx.say(f"note: {note}")
    ctx.say(f"verdict: {verdict.essential.value}")
    ctx.results = res
    if verdict.status is Status.EMPTY or verdict.essential.value == "Inessential":
        return EXIT_NEGATIVE
    return EXIT_OK


def _read_chern(ctx: Context, path: Optional[str], model, k: int) -> ChernData:
    if not path:
        return ChernData.zero(model, k)
    with open(path, "rb") as fh:
        blob = fh.read()
    ctx.add_input(blob)
    try:
        data = json.loads(blob.decode("utf-8"))
    except json.JSONDecodeError as exc:
        from .errors import ParseError

        raise ParseError(f"chern file: {exc.msg}", exc.lineno, exc.colno) from None
    if isinstance(data, dict):
        extra = set(data) - {f"c{i}" for i in range(1, k + 2)}
        if extra:
            raise UsageError(f"unknown chern keys {sorted(extra)}")
        data = [data.get(f"c{i}") for i in range(1, k + 2)]
    if not isinstance(data, list):
        raise UsageError("chern file must hold a list of polynomials or an object c1, c2, ...")
    return ChernData.parse(model, k, data)


def cmd_blowup(ctx: Context, args) -> int:
    mf = load_model(ctx, args.model, _field(args))
    model = mf.model
    labels = _class_labels(mf)
    tokens = args.triple or args.triple_restricted
    classes = [resolve_class(mf, t) for t in tokens]
    chern = _read_chern(ctx, args.chern, model, args.k) if args.k >= 0 else None
    names = [render_class(c, labels) for c in classes]
    kwargs = {"triple": classes} if args.triple else {"restricted": classes}
    try:
        cert = blowup_certificate(model, args.k, chern=chern, labels=names, **kwargs)
    except HypothesisFailure as exc:
        ctx.results = {"certificate": None, "hypothesis_failure": str(exc)}
        ctx.say(f"hypothesis failed: {exc}")
        return EXIT_NEGATIVE
    text = cert.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    E = cert.model
    lifted = [(f"{E.xi_name}^{e}*{n}" if e > 1 else f"{E.xi_name}*{n}") if e else n for e, n in zip(cert.exponents, names)]
    chain = [
        f"base triple <{', '.join(names)}> is essential",
        f"transferred triple <{', '.join(lifted)}> is essential in the CP^{cert.k}-bundle model",
        "an essential triple on the exceptional divisor persists to the blow-up",
        "the blow-up is not formal",
    ]
    ctx.results = {
        "route": cert.route,
        "k": cert.k,
        "exponents": list(cert.exponents),
        "verdict": cert.verdict,
        "representative": format_polynomial(cert.value),
        "chain": chain,
        "certificate": args.out,
        "certificate_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
    }
    ctx.say(f"route: {cert.route} (k = {cert.k}, exponents {tuple(cert.exponents)})")
    for step in chain:
        ctx.say(f"  => {step}")
    ctx.say(f"representative: [{format_polynomial(cert.value)}]")
    if args.out:
        ctx.say(f"certificate written to {args.out}")
    else:
        ctx.say(text.rstrip())
    return EXIT_OK


def cmd_verify(ctx: Context, args) -> int:
    with open(args.certificate, "rb") as fh:
        blob = fh.read()
    ctx.add_input(blob)
    try:
        text = blob.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptCertificate(f"not UTF-8: {exc}") from None
    report = verify_certificate(text)
    ctx.results = {
        "result": "PASS" if report.passed else "FAIL",
        "checks": [{"condition": n, "ok": ok, "detail": d} for n, ok, d in report.checks],
    }
    for n, ok, d in report.checks:
        ctx.say(f"{'ok  ' if ok else 'FAIL'} {n}: {d}")
    fail = report.first_failure
    if fail:
        ctx.say(f"FAIL at {fail[0]}")
    else:
        ctx.say("PASS")
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_examples(ctx: Context, args) -> int:
    ctx.results = {"models": [{"name": k, "description": v} for k, v in BUNDLED.items()]}
    for k, v in BUNDLED.items():
        ctx.say(f"{k:<18} {v}")
    return EXIT_OK


# plumbing -----------------------------------------------------------------
def _field(args) -> Optional[Field]:
    spec = getattr(args, "field", None)
    if not spec:
        return None
    try:
        return Field.from_spec(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dgamassey", description="Massey products in commutative DGA models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, field=True):
        sp.add_argument("--json", action="store_true", help="print the machine-readable report")
        if field:
            sp.add_argument("--field", help="override the field: Q or Fp such as F5")

    sp = sub.add_parser("validate", help="check degrees and d^2 = 0")
    sp.add_argument("model")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("cohomology", help="cohomology dimensions and bases")
    sp.add_argument("model")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--degree", type=int)
    g.add_argument("--all", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("massey", help="Massey product of labelled classes")
    sp.add_argument("model")
    sp.add_argument("classes", nargs="+", help="class labels or cocycle polynomials")
    sp.add_argument("--arity", type=int)
    sp.add_argument("--exhaustive", action="store_true", help="enumerate every defining system (prime fields)")
    common(sp)
    sp.set_defaults(func=cmd_massey)

    sp = sub.add_parser("blowup", help="non-formality certificate for a blow-up")
    sp.add_argument("model")
    sp.add_argument("--k", type=int, required=True, help="fibre CP^k of the exceptional divisor")
    sp.add_argument("--chern", help="JSON file with Chern cocycles c1..c(k+1)")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--triple", nargs=3, metavar="CLASS")
    g.add_argument("--triple-restricted", nargs=3, metavar="CLASS",
                   help="third class is restricted from the ambient manifold")
    sp.add_argument("--out", help="certificate output path")
    common(sp)
    sp.set_defaults(func=cmd_blowup)

    sp = sub.add_parser("verify", help="re-check a certificate")
    sp.add_argument("certificate")
    common(sp, field=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("examples", help="list bundled models")
    common(sp, field=False)
    sp.set_defaults(func=cmd_examples)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ctx = Context(argv)
    try:
        code = args.func(ctx, args)
    except EngineInconsistency:
        raise
    except (UsageError, CorruptCertificate, BudgetExceeded, MasseyError, OSError, ValueError, KeyError) as exc:
        kind = type(exc).__name__
        print(f"error: {kind}: {exc}", file=sys.stderr)
        if getattr(args, "json", False):
            ctx.results = {"error": {"type": kind, "message": str(exc)}}
            out.write(json.dumps(ctx.report(), indent=2, ensure_ascii=False) + "\n")
        return EXIT_USAGE
    if args.json:
        out.write(json.dumps(ctx.report(), indent=2, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(ctx.lines) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
