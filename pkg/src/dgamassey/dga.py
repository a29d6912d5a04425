"""Differential graded algebras: validity, cohomology, primitives, ideals and
morphisms.  All linear algebra is exact and computed degree by degree on
demand; per-degree results are cached on the model."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .algebra import (
    GradedAlgebra,
    GradedVector,
    Monomial,
    Presentation,
    add_terms,
    mul_terms,
)
from .errors import (
    DegreeMismatch,
    DegreeOutOfRange,
    InvalidDifferential,
    MixedPresentation,
    NotABoundary,
    NotACocycle,
)
from .linalg import Echelon, LinearSolver, is_zero_vector, nullspace, rref

__all__ = [
    "DgaModel",
    "CohomologyClass",
    "SubspaceBasis",
    "DgaMorphism",
    "ValidationReport",
    "Membership",
    "Primitive",
    "validate",
    "cohomology_basis",
    "solve_primitive",
    "cup",
    "ideal_slice",
    "member",
    "apply_morphism",
]


def _freeze(terms: dict):
    return frozenset(terms.items())


class DgaModel:
    """A graded-commutative algebra with a differential given on generators.

    ``differential`` maps generator names (or indices) to elements of degree
    one higher, given as :class:`GradedVector`, raw term dicts or strings.
    Generators left out have zero differential.  With ``check=True`` (the
    default) degrees and ``d^2 = 0`` are verified and
    :class:`InvalidDifferential` is raised on the first failure.
    """

    def __init__(self, algebra: GradedAlgebra, differential=None, check: bool = True):
        self.algebra = algebra
        diffs: List[dict] = [dict() for _ in algebra.generators]
        for key, value in (differential or {}).items():
            i = algebra.generator_index(key) if isinstance(key, str) else int(key)
            if isinstance(value, str):
                from .polyparse import parse_terms

                value = parse_terms(algebra, value)
            elif isinstance(value, GradedVector):
                if value.algebra != algebra:
                    raise MixedPresentation("differential lives in another algebra")
                value = value.as_dict()
            diffs[i] = {m: algebra.field(c) for m, c in value.items() if c != 0}
        self._gen_diff: Tuple[dict, ...] = tuple(diffs)
        self._cache: dict = {}
        self._hash = None
        self.degree_errors = self._degree_errors()
        if check:
            if self.degree_errors:
                name, msg = self.degree_errors[0]
                raise InvalidDifferential(msg, generator=name)
            bad = self._d_squared_failures(generators_only=True)
            if bad:
                m, _ = bad[0]
                name = algebra.format_monomial(m)
                raise InvalidDifferential(f"d^2 {name} != 0", generator=name)

    # identity -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, DgaModel):
            return NotImplemented
        if other is self:
            return True
        return (
            type(other) is type(self)
            and self.algebra == other.algebra
            and [_freeze(d) for d in self._gen_diff] == [_freeze(d) for d in other._gen_diff]
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, tuple(_freeze(d) for d in self._gen_diff)))
        return self._hash

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.algebra.generators)
        return f"<DgaModel [{gens}] top {self.truncation} over {self.field}>"

    @property
    def field(self):
        return self.algebra.field

    @property
    def truncation(self) -> int:
        return self.algebra.truncation

    @property
    def generators(self):
        return self.algebra.generators

    def d_generator(self, name_or_index) -> GradedVector:
        i = name_or_index
        if isinstance(i, str):
            i = self.algebra.generator_index(i)
        return GradedVector(self.algebra, self.generators[i].degree + 1, self._gen_diff[i])

    def differential_map(self) -> Dict[str, GradedVector]:
        return {g.name: self.d_generator(i) for i, g in enumerate(self.generators)}

    def element(self, text: str) -> GradedVector:
        return self.algebra.element(text)

    def with_field(self, field) -> "DgaModel":
        """The same presentation with coefficients mapped into ``field``."""
        alg = self.algebra.with_field(field)
        diffs = {i: {m: field(c) for m, c in d.items()} for i, d in enumerate(self._gen_diff)}
        return DgaModel(alg, diffs)

    # differential ---------------------------------------------------------
    def _degree_errors(self):
        out = []
        alg = self.algebra
        for i, (g, d) in enumerate(zip(alg.generators, self._gen_diff)):
            for m in d:
                dm = alg.monomial_degree(m)
                if dm != g.degree + 1:
                    out.append(
                        (g.name, f"d {g.name} has a term of degree {dm}, expected {g.degree + 1}")
                    )
                    break
        return out

    def d_terms(self, m: Monomial) -> dict:
        """``d`` of a basis monomial as a raw term dict (Leibniz rule)."""
        cache = self._cache.setdefault("d", {})
        if m in cache:
            return cache[m]
        alg = self.algebra
        word = alg.factors(m)
        one = {alg.unit_monomial: alg.field.one}
        prefixes = [one]
        for g in word:
            prefixes.append(mul_terms(alg, prefixes[-1], {alg.generator_monomial(g): alg.field.one}))
        suffixes = [one]
        for g in reversed(word):
            suffixes.append(mul_terms(alg, {alg.generator_monomial(g): alg.field.one}, suffixes[-1]))
        suffixes.reverse()
        out: dict = {}
        sign_deg = 0
        for t, g in enumerate(word):
            dg = self._gen_diff[g]
            if dg:
                term = mul_terms(alg, mul_terms(alg, prefixes[t], dg), suffixes[t + 1])
                out = add_terms(out, term, -1 if sign_deg % 2 else 1)
            sign_deg += alg.generators[g].degree
        cache[m] = out
        return out

    def d_raw(self, terms: dict) -> dict:
        out: dict = {}
        for m, c in terms.items():
            out = add_terms(out, self.d_terms(m), c)
        return out

    def d(self, v: GradedVector) -> GradedVector:
        if v.algebra != self.algebra:
            raise MixedPresentation("vector does not belong to this model")
        return GradedVector(self.algebra, v.degree + 1, self.d_raw(v.as_dict()))

    def _d_squared_failures(self, generators_only=False):
        alg = self.algebra
        if generators_only:
            monos = [alg.generator_monomial(i) for i in range(alg.ngens)]
        else:
            monos = [m for n in range(alg.truncation + 1) for m in alg.basis(n)]
        bad = []
        for m in monos:
            dd = self.d_raw(self.d_terms(m))
            if dd:
                bad.append((m, dd))
        return bad

    @property
    def is_valid(self) -> bool:
        if "valid" not in self._cache:
            self._cache["valid"] = not self.degree_errors and not self._d_squared_failures()
        return self._cache["valid"]

    def _require_valid(self):
        if self.degree_errors:
            name, msg = self.degree_errors[0]
            raise InvalidDifferential(msg, generator=name)

    # per-degree linear algebra --------------------------------------------
    def _slot(self, n):
        return self._cache.setdefault(("deg", n), {})

    def dmatrix(self, n: int):
        """Rows indexed by ``basis(n+1)``, columns by ``basis(n)``."""
        slot = self._slot(n)
        if "D" not in slot:
            self._require_valid()
            alg = self.algebra
            src = alg.basis(n)
            nrows = alg.dim(n + 1)
            zero = alg.field.zero
            rows = [[zero] * len(src) for _ in range(nrows)]
            if nrows:
                idx = alg.index(n + 1)
                for c, m in enumerate(src):
                    for t, coef in self.d_terms(m).items():
                        rows[idx[t]][c] = coef
            slot["D"] = rows
        return slot["D"]

    def cocycle_basis(self, n: int) -> List[list]:
        slot = self._slot(n)
        if "Z" not in slot:
            slot["Z"] = nullspace(self.dmatrix(n), self.algebra.dim(n), self.field)
        return slot["Z"]

    def boundary_echelon(self, n: int) -> Echelon:
        slot = self._slot(n)
        if "B" not in slot:
            alg = self.algebra
            gens = []
            if n >= 1:
                D = self.dmatrix(n - 1)
                ncols = alg.dim(n - 1)
                gens = [[row[c] for row in D] for c in range(ncols)]
            slot["B"] = Echelon(gens, alg.dim(n), self.field)
        return slot["B"]

    def _solver(self, n: int) -> LinearSolver:
        """Solver for ``d x = c`` with ``x`` in degree ``n``."""
        slot = self._slot(n)
        if "solver" not in slot:
            D = self.dmatrix(n)
            slot["solver"] = LinearSolver(D, len(D), self.algebra.dim(n), self.field)
        return slot["solver"]

    def _cohomology_echelon(self, n: int) -> Echelon:
        slot = self._slot(n)
        if "H" not in slot:
            B = self.boundary_echelon(n)
            residues = [B.normal_form(z) for z in self.cocycle_basis(n)]
            rows, _, _ = rref(residues, self.algebra.dim(n), self.field)
            slot["H"] = Echelon(rows, self.algebra.dim(n), self.field)
        return slot["H"]

    def betti(self, n: int) -> int:
        if n < 0 or n > self.truncation:
            return 0
        return self._cohomology_echelon(n).rank

    def betti_numbers(self) -> Tuple[int, ...]:
        return tuple(self.betti(n) for n in range(self.truncation + 1))

    def is_cocycle(self, v: GradedVector) -> bool:
        return self.d(v).is_zero()

    def is_boundary(self, v: GradedVector) -> bool:
        if v.degree < 0 or v.degree > self.truncation:
            return v.is_zero()
        return self.boundary_echelon(v.degree).contains(v.coords())

    def cohomology_class(self, v) -> "CohomologyClass":
        """Class of a cocycle (vector or polynomial string)."""
        if isinstance(v, str):
            v = self.element(v)
        if v.algebra != self.algebra:
            raise MixedPresentation("vector does not belong to this model")
        if not self.is_cocycle(v):
            raise NotACocycle(f"{v.format()} is not a cocycle")
        n = v.degree
        if n < 0 or n > self.truncation:
            return CohomologyClass(self, n, GradedVector(self.algebra, n, {}))
        res = self.boundary_echelon(n).normal_form(v.coords())
        return CohomologyClass(self, n, self.algebra.vector(n, res))

    def class_coords(self, c: "CohomologyClass") -> list:
        """Coordinates of ``c`` in the basis returned by :func:`cohomology_basis`."""
        if c.degree < 0 or c.degree > self.truncation:
            return []
        H = self._cohomology_echelon(c.degree)
        v = c.rep.coords()
        return [v[p] for p in H.pivots]

    def class_from_coords(self, n: int, coords) -> "CohomologyClass":
        basis = cohomology_basis(self, n)
        out = GradedVector(self.algebra, n, {})
        for b, x in zip(basis, coords):
            if x != 0:
                out = out + b.rep.scale(x)
        return CohomologyClass(self, n, out)

    def zero_class(self, n: int) -> "CohomologyClass":
        return CohomologyClass(self, n, GradedVector(self.algebra, n, {}))

    def unit_class(self) -> "CohomologyClass":
        return self.cohomology_class(self.algebra.one())


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    """A class in ``H^degree`` stored by its canonical representative: the
    cocycle reduced against the echelon basis of coboundaries."""

    model: DgaModel
    degree: int
    rep: GradedVector

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return (other.model is self.model or other.model == self.model) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def _lift(self, v: GradedVector) -> "CohomologyClass":
        return self.model.cohomology_class(v)

    def __add__(self, other):
        _same_model(self, other)
        return self._lift(self.rep + other.rep)

    def __sub__(self, other):
        _same_model(self, other)
        return self._lift(self.rep - other.rep)

    def __neg__(self):
        return CohomologyClass(self.model, self.degree, -self.rep)

    def scale(self, s):
        return CohomologyClass(self.model, self.degree, self.rep.scale(s))

    def __mul__(self, other):
        if isinstance(other, CohomologyClass):
            return cup(self.model, self, other)
        return self.scale(other)

    def __rmul__(self, s):
        return self.scale(s)

    def coords(self):
        return self.model.class_coords(self)

    def format(self) -> str:
        return f"[{self.rep.format()}]"

    def __repr__(self):
        return f"<H^{self.degree} {self.format()}>"


def _same_model(a: CohomologyClass, b: CohomologyClass):
    if a.model is not b.model and a.model != b.model:
        raise MixedPresentation("classes belong to different models")


@dataclass(frozen=True)
class SubspaceBasis:
    """Reduced echelon basis (canonical class representatives) of a subspace
    of ``H^degree``."""

    model: DgaModel
    degree: int
    vectors: Tuple[GradedVector, ...]
    _echelon: Optional[Echelon] = dc_field(default=None, compare=False, repr=False)

    @classmethod
    def span(cls, model: DgaModel, degree: int, vectors: Sequence[GradedVector]):
        alg = model.algebra
        if degree < 0 or degree > model.truncation:
            return cls(model, degree, ())
        rows, _, _ = rref([v.coords() for v in vectors], alg.dim(degree), model.field)
        return cls(model, degree, tuple(alg.vector(degree, r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def echelon(self) -> Echelon:
        if self._echelon is None:
            n = self.model.algebra.dim(self.degree) if 0 <= self.degree <= self.model.truncation else 0
            object.__setattr__(
                self, "_echelon", Echelon([v.coords() for v in self.vectors], n, self.model.field)
            )
        return self._echelon

    def classes(self) -> List[CohomologyClass]:
        return [CohomologyClass(self.model, self.degree, v) for v in self.vectors]

    def same_span(self, other: "SubspaceBasis") -> bool:
        return self.degree == other.degree and self.vectors == other.vectors


class Membership(NamedTuple):
    """``coefficients`` expand the element in the subspace basis when it is a
    member; otherwise ``residue`` is the nonzero remainder."""

    is_member: bool
    coefficients: Optional[list]
    residue: Optional[GradedVector]

    def __bool__(self):
        return self.is_member


class Primitive(NamedTuple):
    solution: GradedVector
    solution_space_dim: int


@dataclass
class ValidationReport:
    degree_errors: List[Tuple[str, str]]
    d_squared: List[Tuple[str, str]]

    @property
    def valid(self) -> bool:
        return not self.degree_errors and not self.d_squared


def validate(model: DgaModel) -> ValidationReport:
    """Every basis monomial (through the truncation degree) whose ``d^2`` is
    nonzero, plus generators whose differential has the wrong degree."""
    from .polyparse import format_terms
    from .algebra import monomial_key

    alg = model.algebra
    bad = []
    for m, dd in model._d_squared_failures():
        terms = sorted(dd.items(), key=lambda mc: monomial_key(mc[0]))
        bad.append((alg.format_monomial(m), format_terms(alg, terms)))
    return ValidationReport(list(model.degree_errors), bad)


def cohomology_basis(model: DgaModel, n: int) -> List[CohomologyClass]:
    if n < 0 or n > model.truncation:
        raise DegreeOutOfRange(f"degree {n} outside 0..{model.truncation}")
    H = model._cohomology_echelon(n)
    return [CohomologyClass(model, n, model.algebra.vector(n, r)) for r in H.rows]


def solve_primitive(model: DgaModel, c: GradedVector) -> Primitive:
    """Canonical ``x`` with ``d x = c`` (free coordinates zero)."""
    if c.algebra != model.algebra:
        raise MixedPresentation("vector does not belong to this model")
    n = c.degree - 1
    alg = model.algebra
    if n < 0 or n > model.truncation:
        if c.is_zero():
            return Primitive(GradedVector(alg, n, {}), 0)
        raise NotABoundary(f"{c.format()} is not a boundary", obstruction=_obstruction(model, c))
    kernel = len(model.cocycle_basis(n))
    if c.degree > model.truncation:
        return Primitive(GradedVector(alg, n, {}), kernel)
    x = model._solver(n).solve(c.coords())
    if x is None:
        raise NotABoundary(f"{c.format()} is not a boundary", obstruction=_obstruction(model, c))
    return Primitive(alg.vector(n, x), kernel)


def _obstruction(model, c):
    if model.is_cocycle(c):
        return model.cohomology_class(c)
    if 0 <= c.degree <= model.truncation:
        return model.algebra.vector(c.degree, model.boundary_echelon(c.degree).normal_form(c.coords()))
    return c


def cup(model: DgaModel, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    _same_model(a, b)
    if a.model != model:
        raise MixedPresentation("classes belong to a different model")
    return model.cohomology_class(a.rep * b.rep)


def ideal_slice(model: DgaModel, gens: Sequence[CohomologyClass], n: int) -> SubspaceBasis:
    """Degree-``n`` part of the ideal generated by ``gens`` in ``H(model)``."""
    if n < 0 or n > model.truncation:
        raise DegreeOutOfRange(f"degree {n} outside 0..{model.truncation}")
    reps = []
    for g in gens:
        if g.model != model:
            raise MixedPresentation("generator belongs to a different model")
        e = n - g.degree
        if e < 0 or e > model.truncation or g.is_zero():
            continue
        for h in cohomology_basis(model, e):
            reps.append(cup(model, g, h).rep)
    return SubspaceBasis.span(model, n, reps)


def member(model: DgaModel, v: CohomologyClass, s: SubspaceBasis) -> Membership:
    if v.is_zero():
        return Membership(True, [model.field.zero] * s.dim, None)
    if v.degree != s.degree:
        raise DegreeMismatch(f"class of degree {v.degree} vs subspace of degree {s.degree}")
    res, coeffs = s.echelon().reduce(v.rep.coords())
    if is_zero_vector(res):
        return Membership(True, coeffs, None)
    return Membership(False, None, model.algebra.vector(v.degree, res))


class DgaMorphism:
    """Algebra map determined by generator images; checked to commute with
    the differentials and to respect the source's relations."""

    def __init__(self, source: DgaModel, target: DgaModel, images, check: bool = True):
        self.source = source
        self.target = target
        imgs = []
        salg, talg = source.algebra, target.algebra
        if salg.field != talg.field:
            raise MixedPresentation("source and target use different fields")
        for i, g in enumerate(salg.generators):
            v = images.get(g.name, images.get(i)) if isinstance(images, dict) else images[i]
            if v is None:
                v = GradedVector(talg, g.degree, {})
            elif isinstance(v, str):
                v = target.element(v)
            if v.algebra != talg:
                raise MixedPresentation(f"image of {g.name} is not in the target")
            if not v.is_zero() and v.degree != g.degree:
                raise DegreeMismatch(f"image of {g.name} has degree {v.degree}, expected {g.degree}")
            imgs.append(GradedVector(talg, g.degree, v.as_dict()))
        self.images: Tuple[GradedVector, ...] = tuple(imgs)
        self._cache: dict = {}
        if check:
            for i, g in enumerate(salg.generators):
                lhs = self.apply_vector(source.d_generator(i))
                rhs = target.d(self.images[i])
                if lhs != rhs:
                    raise InvalidDifferential(f"f(d {g.name}) != d f({g.name})", generator=g.name)
            for word_poly in salg.relation_words(max_degree=talg.truncation):
                if not self._apply_words(word_poly).is_zero():
                    raise ValueError("generator images do not respect the source relations")

    @classmethod
    def identity(cls, model: DgaModel) -> "DgaMorphism":
        return cls(model, model, {g.name: model.algebra.gen(i) for i, g in enumerate(model.generators)})

    def _image_monomial(self, m: Monomial) -> dict:
        if m not in self._cache:
            talg = self.target.algebra
            out = {talg.unit_monomial: talg.field.one}
            for g in self.source.algebra.factors(m):
                out = mul_terms(talg, out, self.images[g].as_dict())
            self._cache[m] = out
        return self._cache[m]

    def _apply_words(self, word_poly) -> GradedVector:
        talg = self.target.algebra
        out: dict = {}
        deg = 0
        for coef, word in word_poly:
            t = {talg.unit_monomial: talg.field.one}
            for g in word:
                t = mul_terms(talg, t, self.images[g].as_dict())
            out = add_terms(out, t, coef)
            deg = sum(self.source.generators[g].degree for g in word)
        return GradedVector(talg, deg, out)

    def apply_vector(self, v: GradedVector) -> GradedVector:
        if v.algebra != self.source.algebra:
            raise MixedPresentation("vector does not belong to the source model")
        out: dict = {}
        for m, c in v.as_dict().items():
            out = add_terms(out, self._image_monomial(m), c)
        return GradedVector(self.target.algebra, v.degree, out)

    def __call__(self, a):
        return apply_morphism(self, a)


def apply_morphism(f: DgaMorphism, a):
    if isinstance(a, CohomologyClass):
        if a.model != f.source:
            raise MixedPresentation("class does not belong to the source model")
        return f.target.cohomology_class(f.apply_vector(a.rep))
    return f.apply_vector(a)
