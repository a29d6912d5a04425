"""Dense exact linear algebra over a :class:`~dgamassey.fields.Field`.

Vectors are plain lists of field elements; matrices are lists of rows.
Everything is Gauss-Jordan elimination with exact arithmetic, so pivots and
reduced forms are canonical for a fixed column order.
"""

from __future__ import annotations

from typing import Sequence


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


def _eliminate(rows, ncols, field, track):
    m = [list(r) for r in rows]
    nrows = len(m)
    t = None
    if track:
        zero, one = field.zero, field.one
        t = [[one if i == j else zero for j in range(nrows)] for i in range(nrows)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            if track:
                t[r], t[piv] = t[piv], t[r]
        inv = field.one / m[r][c]
        if inv != 1:
            m[r] = [x * inv for x in m[r]]
            if track:
                t[r] = [x * inv for x in t[r]]
        row_r = m[r]
        for i in range(nrows):
            if i == r:
                continue
            f = m[i][c]
            if f == 0:
                continue
            row_i = m[i]
            for j in range(c, ncols):
                if row_r[j] != 0:
                    row_i[j] = row_i[j] - f * row_r[j]
            if track:
                ti, tr = t[i], t[r]
                for j in range(nrows):
                    if tr[j] != 0:
                        ti[j] = ti[j] - f * tr[j]
        pivots.append(c)
        r += 1
    return m, pivots, t


def rref(rows: Sequence[Sequence], ncols: int, field, track: bool = False):
    """Reduced row echelon form.

    Returns ``(R, pivots, T)`` where ``R`` holds only the nonzero rows, ``pivots``
    their pivot columns (strictly increasing) and, if ``track`` is set, ``T`` is
    the list of row-combination vectors with ``T[i] . rows == R[i]`` (else None).
    """
    m, pivots, t = _eliminate(rows, ncols, field, track)
    r = len(pivots)
    return m[:r], pivots, (t[:r] if track else None)


class Echelon:
    """Reduced echelon basis of a subspace of ``field^ncols``.

    ``reduce`` eliminates the pivot coordinates of a vector; the residue is a
    canonical normal form modulo the subspace.  Coordinates are reported
    relative to the *generators* the basis was built from.
    """

    def __init__(self, generators: Sequence[Sequence], ncols: int, field):
        self.field = field
        self.ncols = ncols
        self.generators = [list(g) for g in generators]
        self.rows, self.pivots, self._transform = rref(
            self.generators, ncols, field, track=True
        )

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v):
        """Return ``(residue, coeffs)`` with ``v == residue + sum(coeffs[i]*gen[i])``."""
        field = self.field
        res = list(v)
        comb = [field.zero] * len(self.rows)
        for k, (row, c) in enumerate(zip(self.rows, self.pivots)):
            f = res[c]
            if f == 0:
                continue
            comb[k] = f
            for j in range(c, self.ncols):
                if row[j] != 0:
                    res[j] = res[j] - f * row[j]
        coeffs = [field.zero] * len(self.generators)
        for k, f in enumerate(comb):
            if f == 0:
                continue
            for j, tj in enumerate(self._transform[k]):
                if tj != 0:
                    coeffs[j] = coeffs[j] + f * tj
        return res, coeffs

    def contains(self, v) -> bool:
        return is_zero_vector(self.reduce(v)[0])

    def normal_form(self, v):
        return self.reduce(v)[0]


def nullspace(rows: Sequence[Sequence], ncols: int, field):
    """Basis of ``{x : M x = 0}``, one vector per free column, in column order."""
    r, pivots, _ = rref(rows, ncols, field)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [field.zero] * ncols
        x[free] = field.one
        for row, pc in zip(r, pivots):
            if row[free] != 0:
                x[pc] = -row[free]
        basis.append(x)
    return basis


class LinearSolver:
    """Solves ``M x = b`` for a fixed matrix ``M`` (``nrows x ncols``).

    The canonical solution sets every free variable to zero, so it is the
    unique solution supported on the pivot columns of ``rref(M)``.
    """

    def __init__(self, rows: Sequence[Sequence], nrows: int, ncols: int, field):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        m, self.pivots, t = _eliminate(rows, ncols, field, track=True)
        r = len(self.pivots)
        self.rows = m[:r]
        self._transform = t[:r]
        # transform rows past the rank annihilate the column space
        self._left_null = t[r:]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def consistent(self, b) -> bool:
        return all(_dot(t, b) == 0 for t in self._left_null)

    def solve(self, b):
        """Canonical solution, or None when ``b`` is not in the column space."""
        if not self.consistent(b):
            return None
        x = [self.field.zero] * self.ncols
        for t, pc in zip(self._transform, self.pivots):
            x[pc] = self.field(_dot(t, b))
        return x


def _dot(u, v):
    s = 0
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            s = s + a * b
    return s
