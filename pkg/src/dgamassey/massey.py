"""Massey products from defining systems.

Indices follow the usual convention: a defining system for
``<a_1, ..., a_n>`` is a family ``x[i, j]`` for ``1 <= i < j <= n + 1`` with
``(i, j) != (1, n + 1)``, where ``x[i, i+1]`` represents ``a_i`` and

    d x[i, j] = sum_{i < r < j} bar(x[i, r]) * x[r, j],

with ``bar(a) = (-1)^|a| a``.  The value of the system is the cocycle
``c(X) = sum_{1 < r <= n} bar(x[1, r]) * x[r, n+1]``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GradedVector
from .dga import (
    CohomologyClass,
    DgaModel,
    DgaMorphism,
    SubspaceBasis,
    cup,
    ideal_slice,
    member,
    solve_primitive,
)
from .errors import DegreeOutOfRange, MixedPresentation, NotABoundary, NotACocycle

__all__ = [
    "Status",
    "Essentiality",
    "DefiningSystem",
    "MasseyVerdict",
    "RestrictedPowerResult",
    "Obstruction",
    "entry_degree",
    "canonical_defining_system",
    "triple_massey",
    "validate_defining_system",
    "c_of",
    "massey_nfold_witness",
    "scale_defining_system",
    "pushforward_massey",
    "restricted_power",
    "random_defining_system",
]


class Status(enum.Enum):
    EMPTY = "Empty"
    NONEMPTY = "NonEmpty"
    UNKNOWN = "Unknown"


class Essentiality(enum.Enum):
    ESSENTIAL = "Essential"
    INESSENTIAL = "Inessential"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class DefiningSystem:
    n: int
    entries: Dict[Tuple[int, int], GradedVector]

    def __getitem__(self, ij):
        return self.entries[ij]

    def keys(self):
        return sorted(self.entries, key=lambda ij: (ij[1] - ij[0], ij[0]))

    def items(self):
        return [(ij, self.entries[ij]) for ij in self.keys()]

    def replace(self, ij, value: GradedVector) -> "DefiningSystem":
        entries = dict(self.entries)
        entries[ij] = value
        return DefiningSystem(self.n, entries)

    def map(self, fn) -> "DefiningSystem":
        return DefiningSystem(self.n, {ij: fn(v) for ij, v in self.entries.items()})


def system_positions(n: int) -> List[Tuple[int, int]]:
    """Entry positions in build order (increasing ``j - i``)."""
    return [(i, i + length) for length in range(1, n) for i in range(1, n + 2 - length)]


def entry_degree(degrees: Sequence[int], i: int, j: int) -> int:
    return sum(degrees[i - 1 : j - 1]) - (j - i - 1)


@dataclass
class Obstruction:
    """Where a canonical build stopped: ``d x[i, j] = target`` had no solution."""

    position: Tuple[int, int]
    target: GradedVector
    obstruction: object


@dataclass
class MasseyVerdict:
    arity: int
    classes: Tuple[CohomologyClass, ...]
    status: Status
    representative: Optional[CohomologyClass] = None
    indeterminacy: Optional[SubspaceBasis] = None
    indeterminacy_complete: bool = False
    essential: Essentiality = Essentiality.UNKNOWN
    witnesses: Tuple[DefiningSystem, ...] = ()
    residue: Optional[GradedVector] = None
    obstruction: Optional[Obstruction] = None
    value_set: Optional[frozenset] = None
    notes: List[str] = dc_field(default_factory=list)

    @property
    def is_essential(self) -> bool:
        return self.essential is Essentiality.ESSENTIAL

    @property
    def model(self) -> DgaModel:
        return self.classes[0].model


@dataclass
class RestrictedPowerResult:
    base: CohomologyClass
    k: int
    chain: Tuple[GradedVector, ...]
    value: Optional[CohomologyClass]
    defined: bool
    failed_at: Optional[int] = None
    obstruction: object = None


def _check_classes(model: DgaModel, classes: Sequence[CohomologyClass]):
    for c in classes:
        if c.model is not model and c.model != model:
            raise MixedPresentation("class belongs to a different model")


def _bar_product_sum(pairs) -> Optional[GradedVector]:
    total = None
    for a, b in pairs:
        t = a.bar() * b
        total = t if total is None else total + t
    return total


def _rhs(entries, i, j, model, degree):
    pairs = [(entries[(i, r)], entries[(r, j)]) for r in range(i + 1, j)]
    s = _bar_product_sum(pairs)
    if s is None or s.is_zero():
        return GradedVector(model.algebra, degree, {})
    return s


def canonical_defining_system(model: DgaModel, classes: Sequence[CohomologyClass]):
    """Greedy build with canonical primitives.  Returns a
    :class:`DefiningSystem`, or an :class:`Obstruction` at the first entry
    whose equation has no solution."""
    _check_classes(model, classes)
    n = len(classes)
    degs = [c.degree for c in classes]
    entries: Dict[Tuple[int, int], GradedVector] = {}
    for i, j in system_positions(n):
        if j == i + 1:
            entries[(i, j)] = classes[i - 1].rep
            continue
        target = _rhs(entries, i, j, model, entry_degree(degs, i, j) + 1)
        try:
            entries[(i, j)] = solve_primitive(model, target).solution
        except NotABoundary as exc:
            return Obstruction((i, j), target, exc.obstruction)
    return DefiningSystem(n, entries)


def c_of(model: DgaModel, ds: DefiningSystem) -> CohomologyClass:
    n = ds.n
    c = _bar_product_sum([(ds[(1, r)], ds[(r, n + 1)]) for r in range(2, n + 1)])
    if c is None:
        raise ValueError("defining system needs arity >= 2")
    if not model.is_cocycle(c):
        raise NotACocycle("c(X) is not a cocycle: the system is not a defining system")
    return model.cohomology_class(c)


def c_vector(ds: DefiningSystem) -> GradedVector:
    n = ds.n
    return _bar_product_sum([(ds[(1, r)], ds[(r, n + 1)]) for r in range(2, n + 1)])


@dataclass
class DefiningSystemReport:
    violations: List[Tuple[Tuple[int, int], str]]

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_defining_system(model: DgaModel, ds: DefiningSystem, classes) -> DefiningSystemReport:
    """Check conditions (1) ``[x[i,i+1]] = a_i`` and (2) the ``d x[i,j]``
    equations, listing every violation by position."""
    _check_classes(model, classes)
    n = len(classes)
    out = []
    if ds.n != n:
        return DefiningSystemReport([((0, 0), f"arity {ds.n} != {n}")])
    degs = [c.degree for c in classes]
    for i, j in system_positions(n):
        x = ds.entries.get((i, j))
        if x is None:
            out.append(((i, j), "missing entry"))
            continue
        if x.algebra != model.algebra:
            out.append(((i, j), "entry lives in another algebra"))
            continue
        deg = entry_degree(degs, i, j)
        if not x.is_zero() and x.degree != deg:
            out.append(((i, j), f"degree {x.degree}, expected {deg}"))
            continue
        if j == i + 1:
            if not model.is_cocycle(x):
                out.append(((i, j), "not a cocycle"))
            elif model.cohomology_class(x) != classes[i - 1]:
                out.append(((i, j), "does not represent the prescribed class"))
            continue
        target = _rhs(ds.entries, i, j, model, deg + 1)
        if model.d(GradedVector(model.algebra, deg, x.as_dict())) != target:
            out.append(((i, j), "d x_ij differs from the sum of bar(x_ir) x_rj"))
    return DefiningSystemReport(out)


def triple_massey(model: DgaModel, a: CohomologyClass, b: CohomologyClass, c: CohomologyClass) -> MasseyVerdict:
    """The triple product as a coset of the ideal ``(a, c)``."""
    classes = (a, b, c)
    _check_classes(model, classes)
    top = a.degree + b.degree + c.degree - 1
    if top > model.truncation:
        raise DegreeOutOfRange(f"product degree {top} exceeds truncation {model.truncation}")
    ab, bc = cup(model, a, b), cup(model, b, c)
    if not ab.is_zero() or not bc.is_zero():
        bad = (1, 3) if not ab.is_zero() else (2, 4)
        prod = ab if not ab.is_zero() else bc
        return MasseyVerdict(
            3, classes, Status.EMPTY, essential=Essentiality.INESSENTIAL,
            obstruction=Obstruction(bad, prod.rep, prod),
        )
    ds = canonical_defining_system(model, classes)
    if isinstance(ds, Obstruction):
        raise AssertionError("vanishing products must admit a defining system")
    rep = c_of(model, ds)
    indet = ideal_slice(model, [a, c], top)
    return _finish(model, 3, classes, rep, indet, True, (ds,))


def _finish(model, n, classes, rep, indet, complete, witnesses):
    verdict = MasseyVerdict(
        n, tuple(classes), Status.NONEMPTY, representative=rep,
        indeterminacy=indet, indeterminacy_complete=complete, witnesses=tuple(witnesses),
    )
    # every shift in ``indet`` is realized by some defining system, so a
    # representative inside it already exhibits zero as a value
    mem = member(model, rep, indet)
    if mem.is_member:
        verdict.essential = Essentiality.INESSENTIAL
    elif not complete:
        return verdict
    else:
        verdict.essential = Essentiality.ESSENTIAL
        verdict.residue = mem.residue
    return verdict


def massey_nfold_witness(model: DgaModel, classes: Sequence[CohomologyClass], exhaustive: bool = True,
                         budget: Optional[int] = None) -> MasseyVerdict:
    """Greedy canonical defining system for an ``n``-fold product.

    Arity 3 is the exact coset computation.  For larger arity a successful
    build proves non-emptiness only; essentiality is left Unknown unless the
    field is finite and the exhaustive enumeration fits in ``budget``.
    """
    classes = tuple(classes)
    n = len(classes)
    if n < 3:
        raise ValueError("arity must be at least 3")
    _check_classes(model, classes)
    top = sum(c.degree for c in classes) - (n - 2)
    if top > model.truncation:
        raise DegreeOutOfRange(f"product degree {top} exceeds truncation {model.truncation}")
    if n == 3:
        return triple_massey(model, *classes)
    # a defining system restricts to one for every consecutive sub-product,
    # so an essential consecutive triple rules out the whole product
    for i in range(n - 2):
        sub = classes[i : i + 3]
        if sum(c.degree for c in sub) - 1 > model.truncation:
            continue
        tv = triple_massey(model, *sub)
        if tv.essential is Essentiality.ESSENTIAL:
            verdict = MasseyVerdict(n, classes, Status.EMPTY, essential=Essentiality.INESSENTIAL,
                                    obstruction=Obstruction((i + 1, i + 4), tv.representative.rep, tv.representative))
            verdict.notes.append(f"consecutive triple at positions {i + 1}..{i + 3} is essential, so x[{i + 1},{i + 4}] cannot exist")
            return verdict
    ds = canonical_defining_system(model, classes)
    if isinstance(ds, Obstruction):
        i, j = ds.position
        status = Status.EMPTY if j - i == 2 else Status.UNKNOWN
        verdict = MasseyVerdict(
            n, classes, status,
            essential=Essentiality.INESSENTIAL if status is Status.EMPTY else Essentiality.UNKNOWN,
            obstruction=ds,
        )
        if status is Status.EMPTY:
            verdict.notes.append(f"adjacent product a_{i}a_{i + 1} is nonzero, so x[{i},{j}] cannot exist")
    else:
        rep = c_of(model, ds)
        # perturbing x[1,n] and x[2,n+1] by cocycles shifts the value by (a_1, a_n)
        indet = ideal_slice(model, [classes[0], classes[-1]], top)
        verdict = _finish(model, n, classes, rep, indet, False, (ds,))
        verdict.notes.append("indeterminacy is the witnessed subspace (a_1, a_n), not proven complete")
    if exhaustive and model.field.is_finite and verdict.status is not Status.EMPTY:
        from .exhaustive import massey_nfold_exhaustive
        from .errors import BudgetExceeded

        try:
            result = massey_nfold_exhaustive(model, classes, budget=budget, quotient=True)
        except BudgetExceeded as exc:
            verdict.notes.append(f"exhaustive check skipped: {exc}")
            return verdict
        verdict.value_set = result.values
        if not result.values:
            verdict.status = Status.EMPTY
            verdict.essential = Essentiality.INESSENTIAL
        else:
            verdict.status = Status.NONEMPTY
            verdict.essential = Essentiality.ESSENTIAL if result.essential else Essentiality.INESSENTIAL
            if verdict.representative is None:
                verdict.representative = min(result.values, key=lambda c: tuple(int(x) for x in c.coords()))
        verdict.notes.append(f"exhaustive over {model.field}: {result.systems} defining systems")
    return verdict


def scale_defining_system(model: DgaModel, ds: DefiningSystem, xi, k: int) -> DefiningSystem:
    """Multiply the entries ``x[i, j]`` with ``i <= k < j`` by a cocycle
    representing ``xi``.  The result is a defining system for
    ``<a_1, ..., xi*a_k, ..., a_n>`` whenever the representative is central,
    which in a graded-commutative algebra means even degree."""
    a = xi.rep if isinstance(xi, CohomologyClass) else xi
    if a.algebra != model.algebra:
        raise MixedPresentation("xi belongs to a different model")
    if not model.is_cocycle(a):
        raise NotACocycle("xi must be represented by a cocycle")
    if not 1 <= k <= ds.n:
        raise ValueError(f"position k={k} outside 1..{ds.n}")
    entries = {}
    for (i, j), x in ds.entries.items():
        entries[(i, j)] = a * x if i <= k < j else x
    return DefiningSystem(ds.n, entries)


def pushforward_massey(f: DgaMorphism, verdict: MasseyVerdict) -> MasseyVerdict:
    """Image of a computed product under ``f``: the witness system is mapped
    entrywise and re-validated; essentiality is recomputed on the target."""
    if verdict.status is not Status.NONEMPTY or not verdict.witnesses:
        raise ValueError("pushforward needs a non-empty verdict with a witness")
    target = f.target
    classes = tuple(f(c) for c in verdict.classes)
    witnesses = tuple(w.map(f.apply_vector) for w in verdict.witnesses)
    report = validate_defining_system(target, witnesses[0], classes)
    if not report.valid:
        raise AssertionError(f"image of a defining system is invalid: {report.violations}")
    rep = c_of(target, witnesses[0])
    n = verdict.arity
    top = sum(c.degree for c in classes) - (n - 2)
    indet = ideal_slice(target, [classes[0], classes[-1]], top) if top <= target.truncation else None
    if n == 3:
        return _finish(target, n, classes, rep, indet, True, witnesses)
    out = _finish(target, n, classes, rep, indet, False, witnesses)
    out.notes.append("indeterminacy is the witnessed subspace (a_1, a_n), not proven complete")
    return out


def restricted_power(model: DgaModel, u: CohomologyClass, k: int) -> RestrictedPowerResult:
    """Restricted power via a defining system constant along diagonals:
    ``d x_r = sum_{i<r} bar(x_i) x_{r-i}`` with ``x_1`` representing ``u``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    _check_classes(model, [u])
    top = k * u.degree - (k - 2)
    if top > model.truncation:
        raise DegreeOutOfRange(f"degree {top} exceeds truncation {model.truncation}")
    chain = [u.rep]

    def step(r):
        s = _bar_product_sum([(chain[i - 1], chain[r - i - 1]) for i in range(1, r)])
        deg = r * u.degree - (r - 2)
        if s is None or s.is_zero():
            return GradedVector(model.algebra, deg, {})
        return s

    for r in range(2, k):
        target = step(r)
        try:
            chain.append(solve_primitive(model, target).solution)
        except NotABoundary as exc:
            return RestrictedPowerResult(u, k, tuple(chain), None, False, r, exc.obstruction)
    value = model.cohomology_class(step(k))
    return RestrictedPowerResult(u, k, tuple(chain), value, True)


def restricted_system(result: RestrictedPowerResult) -> DefiningSystem:
    """The diagonal-constant defining system behind a restricted power."""
    k = result.k
    entries = {ij: result.chain[ij[1] - ij[0] - 1] for ij in system_positions(k)}
    return DefiningSystem(k, entries)


def _random_scalar(field, rng, spread=3):
    return field(rng.randint(-spread, spread))


def _random_vector(model, degree, rng, basis=None):
    if degree < 0 or degree > model.truncation:
        return GradedVector(model.algebra, degree, {})
    f = model.field
    vecs = basis if basis is not None else None
    if vecs is None:
        return model.algebra.vector(degree, [_random_scalar(f, rng) for _ in range(model.algebra.dim(degree))])
    out = [f.zero] * model.algebra.dim(degree)
    for v in vecs:
        s = _random_scalar(f, rng)
        out = [a + s * b for a, b in zip(out, v)]
    return model.algebra.vector(degree, out)


def random_defining_system(model: DgaModel, classes: Sequence[CohomologyClass], rng: random.Random = None):
    """A defining system with every free choice randomised: ``x[i,i+1]`` is the
    canonical representative plus a random coboundary, the other entries are
    the canonical primitive plus a random cocycle.  Returns an
    :class:`Obstruction` if the random choices lead to an unsolvable equation."""
    rng = rng or random.Random()
    _check_classes(model, classes)
    n = len(classes)
    degs = [c.degree for c in classes]
    entries: Dict[Tuple[int, int], GradedVector] = {}
    for i, j in system_positions(n):
        deg = entry_degree(degs, i, j)
        if j == i + 1:
            w = _random_vector(model, deg - 1, rng)
            entries[(i, j)] = classes[i - 1].rep + model.d(w) if deg - 1 >= 0 else classes[i - 1].rep
            continue
        target = _rhs(entries, i, j, model, deg + 1)
        try:
            x = solve_primitive(model, target).solution
        except NotABoundary as exc:
            return Obstruction((i, j), target, exc.obstruction)
        if 0 <= deg <= model.truncation:
            x = GradedVector(model.algebra, deg, x.as_dict()) + _random_vector(
                model, deg, rng, basis=model.cocycle_basis(deg)
            )
        entries[(i, j)] = x
    return DefiningSystem(n, entries)
