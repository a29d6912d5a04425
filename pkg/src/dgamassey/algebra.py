"""Free graded-commutative algebras truncated above a top degree.

Monomials are exponent tuples indexed by generator declaration order.  Odd
generators carry exponent 0 or 1.  The canonical monomial order compares
exponent tuples lexicographically with larger exponents first, so that
``x1 < x2 < ... `` and ``x1*x2 < x1*x3 < x2*x3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, Tuple

from .errors import DegreeOutOfRange, MixedPresentation
from .fields import Field, QQ

Monomial = Tuple[int, ...]

__all__ = [
    "GeneratorDecl",
    "GradedAlgebra",
    "Presentation",
    "GradedVector",
    "Monomial",
    "normalize_product",
    "multiply",
    "bar",
    "basis_of_degree",
    "monomial_key",
]

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def monomial_key(m: Monomial):
    return tuple(-e for e in m)


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    degree: int

    def __post_init__(self):
        if not _NAME.match(self.name):
            raise ValueError(f"invalid generator name {self.name!r}")
        if not isinstance(self.degree, int) or self.degree <= 0:
            raise ValueError(f"generator {self.name} needs a positive degree")

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class GradedAlgebra:
    """Interface shared by every finite-dimensional graded-commutative algebra
    in the package.  Subclasses provide ``_enumerate_basis``, ``_product`` and
    ``factors``; everything else is derived and cached per degree."""

    field: Field
    generators: Tuple[GeneratorDecl, ...]
    truncation: int

    def _caches(self):
        return self._cache

    def basis(self, n: int) -> Tuple[Monomial, ...]:
        if n < 0 or n > self.truncation:
            raise DegreeOutOfRange(f"degree {n} outside 0..{self.truncation}")
        cache = self._caches().setdefault("basis", {})
        if n not in cache:
            cache[n] = tuple(sorted(self._enumerate_basis(n), key=monomial_key))
        return cache[n]

    def index(self, n: int) -> Dict[Monomial, int]:
        cache = self._caches().setdefault("index", {})
        if n not in cache:
            cache[n] = {m: i for i, m in enumerate(self.basis(n))}
        return cache[n]

    def dim(self, n: int) -> int:
        if n < 0 or n > self.truncation:
            return 0
        return len(self.basis(n))

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators))

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def product(self, m1: Monomial, m2: Monomial) -> Dict[Monomial, object]:
        """Product of two basis monomials as a ``{monomial: coefficient}`` dict."""
        cache = self._caches().setdefault("product", {})
        key = (m1, m2)
        if key not in cache:
            cache[key] = self._product(m1, m2)
        return cache[key]

    def generator_monomial(self, i: int) -> Monomial:
        m = [0] * self.ngens
        m[i] = 1
        return tuple(m)

    def generator_index(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def gen(self, name_or_index) -> "GradedVector":
        i = name_or_index
        if isinstance(i, str):
            i = self.generator_index(i)
        m = self.generator_monomial(i)
        return GradedVector(self, self.generators[i].degree, {m: self.field.one})

    def one(self) -> "GradedVector":
        return GradedVector(self, 0, {self.unit_monomial: self.field.one})

    def zero(self, degree: int) -> "GradedVector":
        return GradedVector(self, degree, {})

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def element(self, text: str) -> "GradedVector":
        from .polyparse import parse_polynomial

        return parse_polynomial(self, text)

    def vector(self, degree: int, coords) -> "GradedVector":
        """Build a vector of ``degree`` from dense coordinates in ``basis(degree)``."""
        basis = self.basis(degree)
        return GradedVector(
            self, degree, {m: c for m, c in zip(basis, coords) if c != 0}
        )


def _koszul_sign(m1: Monomial, m2: Monomial, gens) -> int:
    # moving each odd factor of m2 left past the odd factors of m1 that follow it
    s = 0
    odd_after = 0
    for i in range(len(gens) - 1, -1, -1):
        if gens[i].odd:
            if m2[i]:
                s += odd_after
            if m1[i]:
                odd_after += m1[i]
    return -1 if s % 2 else 1


@dataclass(frozen=True, eq=True)
class Presentation(GradedAlgebra):
    """Free graded-commutative algebra on ``generators`` modulo everything of
    degree above ``truncation``."""

    generators: Tuple[GeneratorDecl, ...]
    truncation: int
    field: Field = QQ
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        gens = tuple(
            g if isinstance(g, GeneratorDecl) else GeneratorDecl(*g)
            for g in self.generators
        )
        object.__setattr__(self, "generators", gens)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        if self.truncation < 0:
            raise ValueError("truncation degree must be non-negative")

    @classmethod
    def of(cls, spec: Iterable, truncation: int, field: Field = QQ) -> "Presentation":
        """``Presentation.of([("x1", 1), ("x2", 1)], 2)``."""
        return cls(tuple(GeneratorDecl(n, d) for n, d in spec), truncation, field)

    def with_field(self, field: Field) -> "Presentation":
        return Presentation(self.generators, self.truncation, field)

    def _enumerate_basis(self, n):
        gens = self.generators
        out = []

        def rec(i, remaining, acc):
            if i == len(gens):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            d = gens[i].degree
            top = 1 if gens[i].odd else remaining // d
            for e in range(min(top, remaining // d), -1, -1):
                acc.append(e)
                rec(i + 1, remaining - e * d, acc)
                acc.pop()

        rec(0, n, [])
        return out

    def normalize_product(self, m1: Monomial, m2: Monomial):
        """``(sign, monomial)`` or ``(0, None)`` when the product vanishes."""
        gens = self.generators
        out = []
        deg = 0
        for a, b, g in zip(m1, m2, gens):
            e = a + b
            if g.odd and e > 1:
                return 0, None
            out.append(e)
            deg += e * g.degree
        if deg > self.truncation:
            return 0, None
        return _koszul_sign(m1, m2, gens), tuple(out)

    def _product(self, m1, m2):
        sign, m = self.normalize_product(m1, m2)
        if m is None:
            return {}
        return {m: self.field(sign)}

    def factors(self, m: Monomial) -> Tuple[int, ...]:
        out = []
        for i, e in enumerate(m):
            out.extend([i] * e)
        return tuple(out)

    def relation_words(self, max_degree=None):
        """Minimal monomials above the truncation degree, as generator words;
        an algebra map out of this algebra must send each to zero.  Words of
        degree above ``max_degree`` are skipped."""
        if not self.generators:
            return []
        top = self.truncation + max(g.degree for g in self.generators)
        if max_degree is not None:
            top = min(top, max_degree)
        if top <= self.truncation:
            return []
        free = Presentation(self.generators, top, self.field)
        out = []
        for n in range(self.truncation + 1, top + 1):
            for m in free.basis(n):
                lightest = min(g.degree for e, g in zip(m, self.generators) if e)
                if n - lightest <= self.truncation:
                    out.append([(self.field.one, self.factors(m))])
        return out


def normalize_product(presentation: Presentation, m1: Monomial, m2: Monomial):
    sign, m = presentation.normalize_product(m1, m2)
    if m is None:
        return presentation.field.zero, None
    return presentation.field(sign), m


def basis_of_degree(algebra: GradedAlgebra, n: int):
    return list(algebra.basis(n))


def mul_terms(algebra: GradedAlgebra, p: dict, q: dict) -> dict:
    """Product of two raw ``{monomial: coeff}`` polynomials (not necessarily
    homogeneous)."""
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            for m, s in algebra.product(m1, m2).items():
                v = out.get(m, 0) + c1 * c2 * s
                if v == 0:
                    out.pop(m, None)
                else:
                    out[m] = v
    return out


def add_terms(p: dict, q: dict, scale=1) -> dict:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + scale * c
        if v == 0:
            out.pop(m, None)
        else:
            out[m] = v
    return out


class GradedVector:
    """A homogeneous element of a :class:`GradedAlgebra`.  Immutable."""

    __slots__ = ("algebra", "degree", "_terms", "_hash")

    def __init__(self, algebra: GradedAlgebra, degree: int, terms=None):
        f = algebra.field
        clean = {}
        for m, c in (terms or {}).items():
            c = f(c)
            if c != 0:
                if algebra.monomial_degree(m) != degree:
                    raise ValueError(
                        f"monomial {algebra.format_monomial(m)} is not of degree {degree}"
                    )
                clean[m] = c
        self.algebra = algebra
        self.degree = degree
        self._terms = clean
        self._hash = None

    @property
    def terms(self):
        """``(monomial, coefficient)`` pairs in canonical monomial order."""
        return tuple(sorted(self._terms.items(), key=lambda mc: monomial_key(mc[0])))

    def coefficient(self, m: Monomial):
        return self._terms.get(m, self.algebra.field.zero)

    def as_dict(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def coords(self):
        """Dense coordinates in ``algebra.basis(degree)``."""
        if self.degree < 0 or self.degree > self.algebra.truncation:
            return []
        idx = self.algebra.index(self.degree)
        v = [self.algebra.field.zero] * len(idx)
        for m, c in self._terms.items():
            v[idx[m]] = c
        return v

    def _check(self, other):
        if not isinstance(other, GradedVector):
            raise TypeError(f"expected GradedVector, got {type(other).__name__}")
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise MixedPresentation("operands belong to different algebras")

    def __add__(self, other):
        self._check(other)
        if other.degree != self.degree and self._terms and other._terms:
            raise ValueError("cannot add vectors of different degrees")
        deg = self.degree if self._terms or not other._terms else other.degree
        return GradedVector(self.algebra, deg, add_terms(self._terms, other._terms))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GradedVector(
            self.algebra, self.degree, {m: -c for m, c in self._terms.items()}
        )

    def scale(self, s):
        s = self.algebra.field(s)
        return GradedVector(
            self.algebra, self.degree, {m: c * s for m, c in self._terms.items()}
        )

    def __rmul__(self, s):
        if isinstance(s, GradedVector):
            return s.__mul__(self)
        return self.scale(s)

    def __mul__(self, other):
        if not isinstance(other, GradedVector):
            return self.scale(other)
        return multiply(self, other)

    def bar(self) -> "GradedVector":
        return -self if self.degree % 2 else self

    def __eq__(self, other):
        if not isinstance(other, GradedVector):
            return NotImplemented
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            return False
        if not self._terms and not other._terms:
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.degree if self._terms else None, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"<GradedVector deg {self.degree}: {self.format()}>"

    def format(self) -> str:
        from .polyparse import format_polynomial

        return format_polynomial(self)

    __str__ = format


def multiply(a: GradedVector, b: GradedVector) -> GradedVector:
    a._check(b)
    alg = a.algebra
    deg = a.degree + b.degree
    if deg > alg.truncation:
        return GradedVector(alg, deg, {})
    return GradedVector(alg, deg, mul_terms(alg, a._terms, b._terms))


def bar(a: GradedVector) -> GradedVector:
    return a.bar()
