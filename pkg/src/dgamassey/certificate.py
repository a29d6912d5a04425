"""Non-formality certificates for blow-ups.

A certificate records a base model ``M``, the fibre parameter ``k``, Chern
cocycles, an essential triple ``<a, b, c>`` on ``M`` and the defining system
that witnesses the transferred triple ``<xi^l p*a, xi^m p*b, xi^n p*c>`` in
the projectivization model.  Everything needed to re-check the claim is
stored; :func:`verify_certificate` recomputes it from scratch.

Two routes are supported:

``triple``
    exponents ``(1, 1, 1)``, needs ``k >= 3``;
``restricted``
    exponents ``(1, 1, 0)`` where the third class is restricted from the
    ambient manifold, needs ``k >= 2``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from . import modelfile
from .algebra import GradedVector, monomial_key
from .bundle import ChernData, ProjectivizationModel, projectivize, transferred_massey
from .dga import CohomologyClass, DgaModel, ideal_slice, member
from .errors import CorruptCertificate, HypothesisFailure, MasseyError, ParseError
from .massey import DefiningSystem, Essentiality, MasseyVerdict, c_vector, system_positions, triple_massey, validate_defining_system
from .polyparse import format_polynomial, parse_terms

__all__ = [
    "ROUTES",
    "BlowupCertificate",
    "VerifyReport",
    "blowup_certificate",
    "verify_certificate",
]

FORMAT = "dgamassey-blowup-certificate"

ROUTES = {
    "triple": {"exponents": (1, 1, 1), "min_k": 3},
    "restricted": {"exponents": (1, 1, 0), "min_k": 2},
}

CONCLUSION = (
    "The projectivization model of the exceptional divisor carries the essential "
    "triple Massey product recorded here. An essential Massey product of the "
    "exceptional divisor that is transferred along powers of xi survives in the "
    "blow-up, so the blow-up is not formal."
)


def vector_to_json(v: GradedVector) -> list:
    f = v.algebra.field
    return [[v.algebra.format_monomial(m), f.format(c)] for m, c in v.terms]


def vector_from_json(algebra, degree: int, data) -> GradedVector:
    if not isinstance(data, list):
        raise CorruptCertificate("a vector must be a list of [monomial, coefficient] pairs")
    terms: Dict[tuple, object] = {}
    for item in data:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item)):
            raise CorruptCertificate(f"bad term {item!r}")
        mono, coef = item
        try:
            parsed = parse_terms(algebra, mono)
            c = algebra.field.parse(coef)
        except (ParseError, ValueError, ZeroDivisionError) as exc:
            raise CorruptCertificate(f"bad term {item!r}: {exc}") from None
        if len(parsed) != 1 or list(parsed.values())[0] != 1:
            raise CorruptCertificate(f"{mono!r} is not a basis monomial")
        m = next(iter(parsed))
        if m in terms:
            raise CorruptCertificate(f"monomial {mono!r} repeated")
        if algebra.monomial_degree(m) != degree:
            raise CorruptCertificate(f"{mono!r} does not have degree {degree}")
        if c != 0:
            terms[m] = c
    return GradedVector(algebra, degree, terms)


def _digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass
class BlowupCertificate:
    route: str
    k: int
    exponents: Tuple[int, int, int]
    base: DgaModel
    chern: ChernData
    labels: Tuple[str, str, str]
    base_classes: Tuple[GradedVector, GradedVector, GradedVector]
    model: ProjectivizationModel
    lifted: Tuple[GradedVector, GradedVector, GradedVector]
    witness: DefiningSystem
    value: GradedVector
    indeterminacy: Tuple[GradedVector, ...]
    residue: GradedVector
    verdict: str = "Essential"
    version: str = __version__

    def to_dict(self) -> dict:
        entries = [
            {"i": i, "j": j, "terms": vector_to_json(self.witness[(i, j)])}
            for i, j in system_positions(self.witness.n)
        ]
        base_file = modelfile.to_dict(modelfile.from_model(self.base))
        base_file.pop("classes", None)
        return {
            "format": FORMAT,
            "version": self.version,
            "route": self.route,
            "k": self.k,
            "exponents": list(self.exponents),
            "base": base_file,
            "chern": [format_polynomial(c) for c in self.chern.classes],
            "triple": [
                {"label": lab, "degree": v.degree, "rep": vector_to_json(v)}
                for lab, v in zip(self.labels, self.base_classes)
            ],
            "restricted": self.labels[2] if self.route == "restricted" else None,
            "lifted": [{"degree": v.degree, "rep": vector_to_json(v)} for v in self.lifted],
            "witness": entries,
            "witness_digest": _digest(entries),
            "value": {"degree": self.value.degree, "rep": vector_to_json(self.value)},
            "indeterminacy": [vector_to_json(v) for v in self.indeterminacy],
            "residue": vector_to_json(self.residue),
            "verdict": self.verdict,
            "conclusion": CONCLUSION,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def blowup_certificate(M: DgaModel, k: int, chern: Optional[ChernData] = None,
                       triple: Optional[Sequence[CohomologyClass]] = None,
                       restricted: Optional[Sequence[CohomologyClass]] = None,
                       labels: Optional[Sequence[str]] = None) -> BlowupCertificate:
    """Certificate for an essential transferred triple.

    Pass ``triple=(a, b, c)`` for the ``triple`` route or
    ``restricted=(a, b, w)``, with ``w`` the restriction of an ambient class,
    for the ``restricted`` route.
    """
    if (triple is None) == (restricted is None):
        raise ValueError("give exactly one of triple= and restricted=")
    route = "triple" if triple is not None else "restricted"
    classes = tuple(triple if triple is not None else restricted)
    if len(classes) != 3:
        raise ValueError("a triple needs three classes")
    need = ROUTES[route]["min_k"]
    if k < need:
        if route == "triple" and k >= ROUTES["restricted"]["min_k"]:
            raise HypothesisFailure(
                f"k = {k} < {need}: the plain triple needs k >= 3; with k = 2 the third class must be restricted from the ambient manifold"
            )
        raise HypothesisFailure(f"k = {k} < {need} required for the {route} route")
    if chern is None:
        chern = ChernData.zero(M, k)
    E = projectivize(M, chern, k)
    exps = ROUTES[route]["exponents"]
    verdict = transferred_massey(E, *classes, *exps)
    labels = tuple(labels) if labels else tuple(format_polynomial(c.rep) for c in classes)
    lifted = tuple(c.rep for c in verdict.classes)
    return BlowupCertificate(
        route=route,
        k=k,
        exponents=exps,
        base=M,
        chern=chern,
        labels=labels,
        base_classes=tuple(c.rep for c in classes),
        model=E,
        lifted=lifted,
        witness=verdict.witnesses[0],
        value=c_vector(verdict.witnesses[0]),
        indeterminacy=tuple(verdict.indeterminacy.vectors),
        residue=verdict.residue,
    )


@dataclass
class VerifyReport:
    checks: List[Tuple[str, bool, str]] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    @property
    def first_failure(self) -> Optional[Tuple[str, str]]:
        for name, ok, detail in self.checks:
            if not ok:
                return name, detail
        return None

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append((name, bool(ok), detail))


def _need(data, key, kind):
    if key not in data:
        raise CorruptCertificate(f"missing field {key!r}")
    if not isinstance(data[key], kind):
        raise CorruptCertificate(f"field {key!r} has the wrong type")
    return data[key]


def _load(data):
    """Parse the stored payload into live objects (no mathematical checks)."""
    if not isinstance(data, dict):
        raise CorruptCertificate("certificate must be a JSON object")
    if data.get("format") != FORMAT:
        raise CorruptCertificate("not a blow-up certificate")
    route = _need(data, "route", str)
    if route not in ROUTES:
        raise CorruptCertificate(f"unknown route {route!r}")
    k = _need(data, "k", int)
    exps = _need(data, "exponents", list)
    if len(exps) != 3 or not all(type(e) is int for e in exps):
        raise CorruptCertificate("exponents must be three integers")
    try:
        base = modelfile.from_dict(_need(data, "base", dict)).model
    except (ParseError, MasseyError, ValueError) as exc:
        raise CorruptCertificate(f"base model: {exc}") from None
    try:
        chern = ChernData.parse(base, k, _need(data, "chern", list))
    except (ParseError, MasseyError, ValueError) as exc:
        raise CorruptCertificate(f"chern data: {exc}") from None
    triple = _need(data, "triple", list)
    lifted = _need(data, "lifted", list)
    if len(triple) != 3 or len(lifted) != 3:
        raise CorruptCertificate("triple and lifted need three entries each")
    base_reps, labels = [], []
    for t in triple:
        if not isinstance(t, dict):
            raise CorruptCertificate("bad triple entry")
        labels.append(str(t.get("label", "")))
        base_reps.append(vector_from_json(base.algebra, _need(t, "degree", int), _need(t, "rep", list)))
    return route, k, tuple(exps), base, chern, tuple(labels), tuple(base_reps), lifted


def verify_certificate(cert) -> VerifyReport:
    """Re-check a certificate (object, dict or JSON text) from its stored data.

    Raises :class:`CorruptCertificate` if the payload cannot be read at all;
    otherwise every condition is evaluated and reported.  The stored engine
    version is informational only.
    """
    if isinstance(cert, BlowupCertificate):
        data = json.loads(cert.to_json())
    elif isinstance(cert, str):
        try:
            data = json.loads(cert)
        except json.JSONDecodeError as exc:
            raise CorruptCertificate(f"not JSON: {exc}") from None
    else:
        data = cert
    route, k, exps, base, chern, labels, base_reps, lifted_raw = _load(data)
    report = VerifyReport()

    spec = ROUTES[route]
    ok = k >= spec["min_k"] and exps == spec["exponents"] and sum(exps) <= k
    report.add("hypotheses", ok, f"route {route}, k = {k}, exponents {exps}")
    if not ok:
        return report

    try:
        base_classes = [base.cohomology_class(v) for v in base_reps]
    except MasseyError as exc:
        report.add("base-classes", False, str(exc))
        return report
    report.add("base-classes", True, "three cocycles")

    base_verdict = triple_massey(base, *base_classes)
    report.add(
        "base-essential",
        base_verdict.essential is Essentiality.ESSENTIAL,
        f"{base_verdict.status.value}, {base_verdict.essential.value}",
    )
    if base_verdict.essential is not Essentiality.ESSENTIAL:
        return report

    try:
        E = projectivize(base, chern, k)
    except MasseyError as exc:
        report.add("projectivization", False, str(exc))
        return report
    alg = E.algebra
    lifted_vecs = [alg.lift(v, e) for v, e in zip(base_reps, exps)]
    stored_lifted = []
    for item in lifted_raw:
        if not isinstance(item, dict):
            raise CorruptCertificate("bad lifted entry")
        stored_lifted.append(vector_from_json(alg, _need(item, "degree", int), _need(item, "rep", list)))
    same = all(a == b and a.degree == b.degree for a, b in zip(lifted_vecs, stored_lifted))
    report.add("lifted-classes", same, "xi^e p*(class) matches the stored representatives")
    classes = [E.cohomology_class(v) for v in lifted_vecs]

    degrees = [c.degree for c in classes]
    entries_raw = _need(data, "witness", list)
    entries = {}
    for item in entries_raw:
        if not isinstance(item, dict):
            raise CorruptCertificate("bad witness entry")
        i, j = _need(item, "i", int), _need(item, "j", int)
        deg = sum(degrees[i - 1 : j - 1]) - (j - i - 1)
        entries[(i, j)] = vector_from_json(alg, deg, _need(item, "terms", list))
    expected = set(system_positions(3))
    if set(entries) != expected:
        report.add("defining-system", False, "witness positions do not form a triple defining system")
        return report
    ds = DefiningSystem(3, entries)
    sys_report = validate_defining_system(E, ds, classes)
    detail = "; ".join(f"x[{i},{j}]: {msg}" for (i, j), msg in sys_report.violations)
    report.add("defining-system", sys_report.valid, detail or "conditions hold at every position")

    report.add(
        "witness-digest",
        data.get("witness_digest") == _digest(entries_raw),
        "stored digest of the witness payload",
    )

    top = sum(degrees) - 1
    value = c_vector(ds)
    stored_value = _need(data, "value", dict)
    sv = vector_from_json(alg, _need(stored_value, "degree", int), _need(stored_value, "rep", list))
    report.add("value", sv == value and E.is_cocycle(value), "c(X) matches the stored cocycle")

    indet = ideal_slice(E, [classes[0], classes[2]], top)
    stored_indet = [vector_from_json(alg, top, v) for v in _need(data, "indeterminacy", list)]
    report.add("indeterminacy", list(indet.vectors) == stored_indet, f"ideal slice of dimension {indet.dim}")

    if not sys_report.valid:
        report.add("essential", False, "no valid defining system")
        return report
    mem = member(E, E.cohomology_class(value), indet)
    stored_res = vector_from_json(alg, top, _need(data, "residue", list))
    if mem.is_member:
        report.add("essential", False, "value lies in the indeterminacy")
    elif mem.residue != stored_res:
        report.add("essential", False, "stored residue differs from the recomputed one")
    elif data.get("verdict") != Essentiality.ESSENTIAL.value:
        report.add("essential", False, f"stored verdict {data.get('verdict')!r} contradicts the recomputed one")
    else:
        report.add("essential", True, "nonzero residue modulo the indeterminacy")
    return report
