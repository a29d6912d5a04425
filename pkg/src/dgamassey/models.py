"""Constructors for concrete models: free CDGAs, Chevalley-Eilenberg algebras
of nilpotent Lie algebras, and the named examples (tori, projective spaces,
Heisenberg, Kodaira-Thurston, Iwasawa-type nilmanifolds)."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Optional, Sequence, Tuple

from .algebra import GeneratorDecl, Presentation
from .dga import DgaModel
from .errors import InvalidDifferential, JacobiFailure, NotNilpotent
from .fields import Field, QQ
from .linalg import rref

__all__ = [
    "free_cdga",
    "LieAlgebraData",
    "chevalley_eilenberg",
    "point",
    "torus",
    "complex_projective_space",
    "heisenberg_algebra",
    "heisenberg",
    "kodaira_thurston",
    "iwasawa_algebra",
    "iwasawa",
    "BUNDLED",
    "bundled_model",
]


def free_cdga(generators, differential=None, truncation: int = None, field: Field = QQ) -> DgaModel:
    """Validated model ``(Λ(generators), d)`` truncated above ``truncation``.

    ``generators`` is a sequence of ``(name, degree)`` pairs; ``differential``
    maps names to polynomial strings or vectors.  ``truncation`` defaults to
    the top degree of the exterior part when every generator is odd.
    """
    decls = tuple(g if isinstance(g, GeneratorDecl) else GeneratorDecl(*g) for g in generators)
    if truncation is None:
        if any(not g.odd for g in decls):
            raise ValueError("truncation is required when there are even generators")
        truncation = sum(g.degree for g in decls)
    alg = Presentation(decls, truncation, field)
    unknown = set(differential or {}) - {g.name for g in decls}
    if unknown:
        raise InvalidDifferential(f"differential for unknown generator {sorted(unknown)[0]}")
    return DgaModel(alg, differential or {})


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants ``[e_i, e_j] = sum_k c[(i, j, k)] e_k`` for ``i < j``
    (0-based indices).  Missing entries are zero."""

    dimension: int
    constants: Tuple[Tuple[Tuple[int, int, int], object], ...] = ()
    field: Field = QQ
    names: Optional[Tuple[str, ...]] = None
    _table: dict = dc_field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        raw = self.constants
        items = raw.items() if isinstance(raw, dict) else raw
        table: Dict[Tuple[int, int, int], object] = {}
        for (i, j, k), c in items:
            c = self.field(c)
            if c == 0:
                continue
            if not (0 <= i < self.dimension and 0 <= j < self.dimension and 0 <= k < self.dimension):
                raise ValueError(f"index out of range in {(i, j, k)}")
            if i == j:
                raise ValueError("[e_i, e_i] must vanish")
            if i > j:
                i, j, c = j, i, -c
            key = (i, j, k)
            table[key] = table.get(key, 0) + c
        table = {k: v for k, v in table.items() if v != 0}
        object.__setattr__(self, "constants", tuple(sorted(table.items())))
        object.__setattr__(self, "_table", table)
        if self.names is not None and len(self.names) != self.dimension:
            raise ValueError("one name per basis vector")

    def c(self, i: int, j: int, k: int):
        if i == j:
            return self.field.zero
        if i < j:
            return self._table.get((i, j, k), self.field.zero)
        return -self._table.get((j, i, k), self.field.zero)

    def bracket(self, u, v):
        n = self.dimension
        out = [self.field.zero] * n
        for (i, j, k), c in self._table.items():
            coef = u[i] * v[j] - u[j] * v[i]
            if coef != 0:
                out[k] = out[k] + coef * c
        return out

    def basis_vector(self, i: int):
        v = [self.field.zero] * self.dimension
        v[i] = self.field.one
        return v

    def jacobi_violation(self):
        """First ``(i, j, k)`` with ``[[e_i,e_j],e_k] + cyclic != 0``, or None."""
        n = self.dimension
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    a = self.bracket(self.bracket(e[i], e[j]), e[k])
                    b = self.bracket(self.bracket(e[j], e[k]), e[i])
                    c = self.bracket(self.bracket(e[k], e[i]), e[j])
                    if any(x + y + z != 0 for x, y, z in zip(a, b, c)):
                        return (i, j, k)
        return None

    def lower_central_dimensions(self):
        """Dimensions of g, [g,g], [g,[g,g]], ... until they stabilise."""
        n = self.dimension
        current = [self.basis_vector(i) for i in range(n)]
        dims = [n]
        while True:
            brackets = [self.bracket(self.basis_vector(i), v) for i in range(n) for v in current]
            rows, _, _ = rref(brackets, n, self.field)
            if len(rows) == dims[-1]:
                return dims
            dims.append(len(rows))
            current = rows
            if not rows:
                return dims

    def is_nilpotent(self) -> bool:
        return self.lower_central_dimensions()[-1] == 0

    def direct_sum(self, other: "LieAlgebraData") -> "LieAlgebraData":
        n = self.dimension
        consts = list(self.constants) + [((i + n, j + n, k + n), c) for (i, j, k), c in other.constants]
        names = None
        if self.names and other.names:
            names = tuple(self.names) + tuple(other.names)
        return LieAlgebraData(n + other.dimension, tuple(consts), self.field, names)


def chevalley_eilenberg(L: LieAlgebraData, check_nilpotent: bool = True) -> DgaModel:
    """Exterior algebra on the dual basis with ``d x^k = -sum_{i<j} c^k_ij x^i x^j``."""
    bad = L.jacobi_violation()
    if bad is not None:
        raise JacobiFailure(f"Jacobi identity fails on basis triple {bad}", triple=bad)
    if check_nilpotent and not L.is_nilpotent():
        raise NotNilpotent("Lie algebra is not nilpotent")
    alg, diffs = _ce_data(L)
    return DgaModel(alg, diffs)


def chevalley_eilenberg_unchecked(L: LieAlgebraData) -> DgaModel:
    """Same construction without the Jacobi check; ``d^2`` may fail."""
    alg, diffs = _ce_data(L)
    return DgaModel(alg, diffs, check=False)


def _ce_data(L):
    n = L.dimension
    names = L.names or tuple(f"x{i + 1}" for i in range(n))
    alg = Presentation(tuple(GeneratorDecl(nm, 1) for nm in names), n, L.field)
    diffs: Dict[int, dict] = {}
    for (i, j, k), c in L.constants:
        m = [0] * n
        m[i] = m[j] = 1
        d = diffs.setdefault(k, {})
        d[tuple(m)] = d.get(tuple(m), 0) - c
    return alg, {k: {m: c for m, c in d.items() if c != 0} for k, d in diffs.items()}


def point(field: Field = QQ) -> DgaModel:
    return DgaModel(Presentation((), 0, field))


def torus(n: int, field: Field = QQ) -> DgaModel:
    return free_cdga([(f"t{i + 1}", 1) for i in range(n)], {}, n, field)


def complex_projective_space(n: int, field: Field = QQ, name: str = "h") -> DgaModel:
    """``Λ(h)`` with ``deg h = 2`` truncated above ``2n``, i.e. ``Q[h]/h^(n+1)``."""
    return free_cdga([(name, 2)], {}, 2 * n, field)


def heisenberg_algebra(field: Field = QQ) -> LieAlgebraData:
    # sign chosen so that the dual differential reads d x3 = x1*x2
    return LieAlgebraData(3, {(0, 1, 2): -1}, field)


def heisenberg(field: Field = QQ) -> DgaModel:
    return chevalley_eilenberg(heisenberg_algebra(field))


def kodaira_thurston(field: Field = QQ) -> DgaModel:
    """``(Λ(x1,x2,x3,x4), d)`` with ``d x3 = x1*x2`` and the rest closed."""
    L = heisenberg_algebra(field).direct_sum(LieAlgebraData(1, (), field))
    return chevalley_eilenberg(L)


def iwasawa_algebra(p: int, q: int, field: Field = QQ) -> LieAlgebraData:
    """Lie algebra of ``H(1,p) x H(1,q)``.

    ``H(1,p)`` has basis ``x1..xp, y, z1..zp`` with ``[x_i, y] = -z_i``; the
    second factor uses ``u1..uq, v, w1..wq``.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")

    def block(r, a, b, c):
        names = tuple(f"{a}{i + 1}" for i in range(r)) + (b,) + tuple(f"{c}{i + 1}" for i in range(r))
        consts = {(i, r, r + 1 + i): -1 for i in range(r)}
        return LieAlgebraData(2 * r + 1, consts, field, names)

    return block(p, "x", "y", "z").direct_sum(block(q, "u", "v", "w"))


def iwasawa(p: int, q: int, field: Field = QQ) -> DgaModel:
    return chevalley_eilenberg(iwasawa_algebra(p, q, field))


BUNDLED = {
    "kodaira_thurston": "Kodaira-Thurston nilmanifold (Heisenberg x circle)",
    "heisenberg": "Heisenberg nilmanifold",
    "torus-n": "n-torus, e.g. torus-2",
    "cp-n": "complex projective space, e.g. cp-3",
    "iwasawa-p-q": "Iwasawa-type nilmanifold (H(1,p) x H(1,q))/Gamma, e.g. iwasawa-1-1",
}


def bundled_model(name: str, field: Field = QQ) -> DgaModel:
    """Resolve a bundled model name such as ``torus-3`` or ``iwasawa-1-2``."""
    key = name.strip().lower().replace(".model", "")
    parts = key.split("-")
    try:
        if key in ("kodaira_thurston", "kodaira-thurston", "kt"):
            return kodaira_thurston(field)
        if key == "heisenberg":
            return heisenberg(field)
        if parts[0] == "torus" and len(parts) == 2:
            return torus(int(parts[1]), field)
        if parts[0] == "cp" and len(parts) == 2:
            return complex_projective_space(int(parts[1]), field)
        if parts[0] == "iwasawa" and len(parts) == 3:
            return iwasawa(int(parts[1]), int(parts[2]), field)
        if key == "point":
            return point(field)
    except ValueError as exc:
        raise KeyError(f"bad bundled model {name!r}: {exc}") from None
    raise KeyError(f"unknown bundled model {name!r}")
