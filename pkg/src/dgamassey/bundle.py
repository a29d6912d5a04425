"""Models of projective bundles ``P(E) -> B`` with fibre ``CP^k``.

The model is ``B ⊗ F[xi] / (xi^(k+1) + c_1 xi^k + ... + c_(k+1))`` with
``d xi = 0``; as a module over the base it is free on ``1, xi, ..., xi^k``.
Monomials are the base exponent tuple with the power of ``xi`` appended.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import GeneratorDecl, GradedAlgebra, GradedVector, Monomial, add_terms, mul_terms
from .dga import (
    CohomologyClass,
    DgaModel,
    DgaMorphism,
    cohomology_basis,
    ideal_slice,
    member,
)
from .errors import (
    DegreeMismatch,
    EngineInconsistency,
    ExponentTooLarge,
    HypothesisFailure,
    MixedPresentation,
    NotACocycle,
)
from .linalg import Echelon, is_zero_vector
from .massey import Essentiality, MasseyVerdict, triple_massey

__all__ = [
    "ChernData",
    "ProjectiveBundleAlgebra",
    "ProjectivizationModel",
    "projectivize",
    "decompose",
    "reassemble",
    "lift_ideal_check",
    "transferred_massey",
    "fiber_restriction",
]


@dataclass(frozen=True)
class ChernData:
    """Cocycles ``c_1, ..., c_(k+1)`` of the base, ``c_i`` in degree ``2i``."""

    k: int
    classes: Tuple[GradedVector, ...]

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if len(self.classes) != self.k + 1:
            raise ValueError(f"need {self.k + 1} Chern cocycles, got {len(self.classes)}")

    @classmethod
    def zero(cls, base: DgaModel, k: int) -> "ChernData":
        alg = base.algebra
        return cls(k, tuple(GradedVector(alg, 2 * i, {}) for i in range(1, k + 2)))

    @classmethod
    def parse(cls, base: DgaModel, k: int, polys: Sequence[Optional[str]]) -> "ChernData":
        """From polynomial strings; missing trailing entries are zero."""
        from .polyparse import parse_polynomial

        polys = list(polys or [])
        if len(polys) > k + 1:
            raise ValueError(f"at most {k + 1} Chern cocycles for k={k}")
        out = []
        for i in range(1, k + 2):
            text = polys[i - 1] if i <= len(polys) else None
            if text is None or str(text).strip() in ("", "0"):
                out.append(GradedVector(base.algebra, 2 * i, {}))
            else:
                out.append(parse_polynomial(base.algebra, text, degree=2 * i))
        return cls(k, tuple(out))

    def check(self, base: DgaModel):
        for i, c in enumerate(self.classes, start=1):
            if c.algebra != base.algebra:
                raise MixedPresentation(f"c_{i} is not an element of the base")
            if not c.is_zero() and c.degree != 2 * i:
                raise DegreeMismatch(f"c_{i} has degree {c.degree}, expected {2 * i}")
            if not base.is_cocycle(c):
                raise NotACocycle(f"c_{i} = {c.format()} is not a cocycle")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.classes)

    def transport(self, algebra) -> "ChernData":
        f = algebra.field
        return ChernData(
            self.k,
            tuple(GradedVector(algebra, c.degree, {m: f(x) for m, x in c.as_dict().items()}) for c in self.classes),
        )


class ProjectiveBundleAlgebra(GradedAlgebra):
    """``base ⊗ F[xi]`` reduced by the monic relation of degree ``k + 1`` in
    ``xi``; the base factor keeps its own truncation."""

    def __init__(self, base: GradedAlgebra, k: int, chern: Sequence[dict], xi_name: str = "xi"):
        self.base = base
        self.k = k
        self.field = base.field
        self.xi_name = xi_name
        self.chern = tuple({m: base.field(c) for m, c in terms.items() if c != 0} for terms in chern)
        if xi_name in {g.name for g in base.generators}:
            raise ValueError(f"generator name {xi_name!r} already used by the base")
        self.generators = tuple(base.generators) + (GeneratorDecl(xi_name, 2),)
        self.truncation = base.truncation + 2 * k
        self._cache = {}
        self._reduction = self._xi_powers()

    def __eq__(self, other):
        if not isinstance(other, ProjectiveBundleAlgebra):
            return NotImplemented
        return (
            self.base == other.base
            and self.k == other.k
            and self.xi_name == other.xi_name
            and [frozenset(c.items()) for c in self.chern] == [frozenset(c.items()) for c in other.chern]
        )

    def __hash__(self):
        return hash((self.base, self.k, self.xi_name, tuple(frozenset(c.items()) for c in self.chern)))

    def __repr__(self):
        return f"<ProjectiveBundleAlgebra k={self.k} over {self.base!r}>"

    def with_field(self, field):
        base = self.base.with_field(field)
        chern = [{m: field(c) for m, c in t.items()} for t in self.chern]
        return ProjectiveBundleAlgebra(base, self.k, chern, self.xi_name)

    def _xi_powers(self):
        """``xi^J`` for ``J <= 2k`` as ``{j: base terms}`` with ``j <= k``."""
        k, base = self.k, self.base
        one = {base.unit_monomial: base.field.one}
        table: List[Dict[int, dict]] = [{j: dict(one)} for j in range(k + 1)]
        for J in range(k + 1, 2 * k + 1):
            # xi^J = xi * xi^(J-1); only the xi^k term of xi^(J-1) overflows
            prev = table[J - 1]
            cur: Dict[int, dict] = {}
            for j, coef in prev.items():
                if j < k:
                    cur[j + 1] = add_terms(cur.get(j + 1, {}), coef)
                else:
                    # xi^(k+1) = -sum_i c_i xi^(k+1-i)
                    for i, ci in enumerate(self.chern, start=1):
                        if ci:
                            t = mul_terms(base, coef, ci)
                            cur[k + 1 - i] = add_terms(cur.get(k + 1 - i, {}), t, -1)
            table.append({j: t for j, t in cur.items() if t})
        return table

    def _split(self, m: Monomial):
        return m[:-1], m[-1]

    def _enumerate_basis(self, n):
        out = []
        for j in range(self.k + 1):
            e = n - 2 * j
            if 0 <= e <= self.base.truncation:
                out.extend(b + (j,) for b in self.base.basis(e))
        return out

    def _product(self, m1, m2):
        b1, j1 = self._split(m1)
        b2, j2 = self._split(m2)
        bprod = self.base.product(b1, b2)
        if not bprod:
            return {}
        out: dict = {}
        for j, coef in self._reduction[j1 + j2].items():
            for bm, c in mul_terms(self.base, bprod, coef).items():
                out[bm + (j,)] = c
        return out

    def factors(self, m: Monomial) -> Tuple[int, ...]:
        b, j = self._split(m)
        return tuple(self.base.factors(b)) + (len(self.generators) - 1,) * j

    def relation_words(self, max_degree=None):
        xi = len(self.generators) - 1
        out = [list(w) for w in self.base.relation_words(max_degree=max_degree)]
        if max_degree is None or 2 * (self.k + 1) <= max_degree:
            poly = [(self.field.one, (xi,) * (self.k + 1))]
            for i, ci in enumerate(self.chern, start=1):
                for m, c in ci.items():
                    poly.append((c, tuple(self.base.factors(m)) + (xi,) * (self.k + 1 - i)))
            out.append(poly)
        return out

    def lift(self, v: GradedVector, power: int = 0) -> GradedVector:
        """``xi^power * p*(v)`` for a base vector ``v``."""
        if v.algebra != self.base:
            raise MixedPresentation("vector is not an element of the base")
        out: dict = {}
        for j, coef in self._reduction[power].items() if power <= 2 * self.k else self._far_power(power):
            for bm, c in mul_terms(self.base, v.as_dict(), coef).items():
                out[bm + (j,)] = out.get(bm + (j,), 0) + c
        return GradedVector(self, v.degree + 2 * power, {m: c for m, c in out.items() if c != 0})

    def _far_power(self, power):
        # xi^power for power > 2k: repeated multiplication in the algebra
        xi = {self.unit_monomial[:-1] + (1,): self.field.one}
        acc = {self.unit_monomial: self.field.one}
        for _ in range(power):
            acc = mul_terms(self, acc, xi)
        grouped: Dict[int, dict] = {}
        for m, c in acc.items():
            b, j = self._split(m)
            grouped.setdefault(j, {})[b] = c
        return grouped.items()


class ProjectivizationModel(DgaModel):
    """Model of the projectivization of a rank ``k+1`` bundle over ``base``."""

    def __init__(self, base: DgaModel, chern: ChernData, xi_name: Optional[str] = None):
        if xi_name is None:
            names = {g.name for g in base.generators}
            xi_name = "xi"
            while xi_name in names:
                xi_name = xi_name + "_"
        chern.check(base)
        alg = ProjectiveBundleAlgebra(base.algebra, chern.k, [c.as_dict() for c in chern.classes], xi_name)
        diffs = {}
        for i, g in enumerate(base.generators):
            dg = base.d_generator(i).as_dict()
            if dg:
                diffs[i] = {m + (0,): c for m, c in dg.items()}
        super().__init__(alg, diffs)
        self.base = base
        self.chern = chern
        self.k = chern.k
        self.xi_name = xi_name

    def with_field(self, field) -> "ProjectivizationModel":
        base = self.base.with_field(field)
        return ProjectivizationModel(base, self.chern.transport(base.algebra), self.xi_name)

    @property
    def xi(self) -> GradedVector:
        return self.algebra.gen(len(self.generators) - 1)

    @property
    def xi_class(self) -> CohomologyClass:
        return self.cohomology_class(self.xi)

    def pullback(self) -> DgaMorphism:
        """The bundle projection ``p*: base -> E``."""
        if "pullback" not in self._cache:
            images = {g.name: self.algebra.lift(self.base.algebra.gen(i)) for i, g in enumerate(self.base.generators)}
            self._cache["pullback"] = DgaMorphism(self.base, self, images)
        return self._cache["pullback"]

    def lift_class(self, a: CohomologyClass, power: int = 0) -> CohomologyClass:
        """``xi^power * p*(a)``."""
        if a.model != self.base:
            raise MixedPresentation("class does not belong to the base")
        return self.cohomology_class(self.algebra.lift(a.rep, power))

    def leray_hirsch(self) -> List[Tuple[int, int, int]]:
        """``(n, dim H^n(E), sum_i dim H^(n-2i)(B))`` for every degree."""
        out = []
        for n in range(self.truncation + 1):
            expected = sum(self.base.betti(n - 2 * i) for i in range(self.k + 1))
            out.append((n, self.betti(n), expected))
        return out

    def leray_hirsch_holds(self) -> bool:
        return all(a == b for _, a, b in self.leray_hirsch())


def projectivize(base: DgaModel, chern: Optional[ChernData] = None, k: Optional[int] = None,
                 xi_name: Optional[str] = None) -> ProjectivizationModel:
    """Build the model and check the Leray-Hirsch dimension law degreewise.

    Chern data defaults to the zero bundle (give ``k`` then).
    """
    if chern is None:
        if k is None:
            raise ValueError("give chern data or k")
        chern = ChernData.zero(base, k)
    elif k is not None and k != chern.k:
        raise ValueError("k disagrees with the Chern data")
    E = ProjectivizationModel(base, chern, xi_name)
    for n, got, want in E.leray_hirsch():
        if got != want:
            raise EngineInconsistency(f"Leray-Hirsch fails in degree {n}: {got} != {want}")
    return E


def reassemble(E: ProjectivizationModel, components: Sequence[CohomologyClass]) -> CohomologyClass:
    """``sum_j xi^j p*(a_j)``."""
    if len(components) != E.k + 1:
        raise ValueError(f"need {E.k + 1} components")
    degrees = {c.degree + 2 * j for j, c in enumerate(components) if not c.is_zero()}
    if len(degrees) > 1:
        raise DegreeMismatch("components do not assemble into a homogeneous class")
    n = degrees.pop() if degrees else components[0].degree
    total = GradedVector(E.algebra, n, {})
    for j, c in enumerate(components):
        if not c.is_zero():
            total = total + E.algebra.lift(c.rep, j)
    return E.cohomology_class(total)


def decompose(E: ProjectivizationModel, a: CohomologyClass) -> Tuple[CohomologyClass, ...]:
    """The unique ``(a_0, ..., a_k)`` with ``a = sum_j xi^j p*(a_j)``."""
    if a.model != E:
        raise MixedPresentation("class does not belong to this projectivization")
    n = a.degree
    base = E.base
    zeros = tuple(base.zero_class(n - 2 * j) for j in range(E.k + 1))
    if a.is_zero() or n < 0 or n > E.truncation:
        return zeros
    labels = []
    vectors = []
    for j in range(E.k + 1):
        e = n - 2 * j
        if 0 <= e <= base.truncation:
            for h in cohomology_basis(base, e):
                labels.append((j, h))
                vectors.append(E.algebra.lift(h.rep, j).coords())
    bnd = E.boundary_echelon(n)
    ech = Echelon(vectors + [list(r) for r in bnd.rows], E.algebra.dim(n), E.field)
    residue, coeffs = ech.reduce(a.rep.coords())
    if not is_zero_vector(residue):
        raise EngineInconsistency("class is not in the span of xi^j p*(H(B))")
    comps = list(zeros)
    for (j, h), c in zip(labels, coeffs):
        if c != 0:
            comps[j] = comps[j] + h.scale(c)
    return tuple(comps)


def lift_ideal_check(E: ProjectivizationModel, x: CohomologyClass, gens: Sequence[CohomologyClass], n: int) -> bool:
    """Whether ``xi^n p*(x)`` lies in the ideal generated by ``p*(a_i)``.

    When it does, ``x`` must already lie in the ideal of the ``a_i`` in the
    base; a counterexample is raised as :class:`EngineInconsistency`.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > E.k:
        raise ExponentTooLarge(f"exponent {n} exceeds k={E.k}")
    up = E.lift_class(x, n)
    deg = x.degree + 2 * n
    if up.is_zero():
        upstairs = True
    else:
        upstairs = member(E, up, ideal_slice(E, [E.lift_class(g) for g in gens], deg)).is_member
    if upstairs:
        downstairs = x.is_zero() or member(E.base, x, ideal_slice(E.base, list(gens), x.degree)).is_member
        if not downstairs:
            raise EngineInconsistency("ideal membership lifted but does not descend")
    return upstairs


def transferred_massey(E: ProjectivizationModel, a: CohomologyClass, b: CohomologyClass, c: CohomologyClass,
                       l: int, m: int, n: int) -> MasseyVerdict:
    """``<xi^l p*a, xi^m p*b, xi^n p*c>`` for an essential base triple and
    ``l + m + n <= k``; the result is essential and this is checked."""
    if min(l, m, n) < 0:
        raise HypothesisFailure("exponents must be non-negative")
    if l + m + n > E.k:
        raise ExponentTooLarge(f"l + m + n = {l + m + n} exceeds k = {E.k}")
    base_verdict = triple_massey(E.base, a, b, c)
    if base_verdict.essential is not Essentiality.ESSENTIAL:
        raise HypothesisFailure(
            f"base triple is not essential ({base_verdict.status.value}, {base_verdict.essential.value})"
        )
    lifted = [E.lift_class(x, e) for x, e in ((a, l), (b, m), (c, n))]
    verdict = triple_massey(E, *lifted)
    if verdict.essential is not Essentiality.ESSENTIAL:
        raise EngineInconsistency("transferred triple is not essential")
    verdict.notes.append(f"base triple essential; exponents ({l}, {m}, {n}) with k = {E.k}")
    return verdict


def fiber_restriction(E: ProjectivizationModel) -> DgaMorphism:
    """Restriction to a fibre: base generators go to 0 and ``xi`` to the
    generator of ``F[h]/h^(k+1)``."""
    from .models import complex_projective_space

    target = complex_projective_space(E.k, E.field, name=E.xi_name)
    images = {g.name: None for g in E.base.generators}
    images[E.xi_name] = target.algebra.gen(0)
    return DgaMorphism(E, target, images)
