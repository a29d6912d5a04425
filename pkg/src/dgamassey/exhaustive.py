"""Enumerate every defining system of a Massey product over F_p.

Each entry of a defining system is an affine family: ``x[i, i+1]`` runs over
``rep + B`` (representatives of the class) and every other entry over
``P(rhs) + Z`` where ``P`` is the canonical-solution map of ``d`` and ``Z``
the cocycles of that degree.  Entries are filled in order of increasing
length; whole batches of partial systems are advanced at once with numpy and
split into chunks whenever a batch would grow too large.  The full value set
``{[c(X)]}`` comes out as a set of cohomology coordinate vectors.

With ``quotient=True`` the two entries ``x[1, n]`` and ``x[2, n+1]`` are not
enumerated.  They occur only in ``c(X)``, linearly, and perturbing them by
cocycles moves the value exactly through the ideal ``(a_1, a_n)`` in the top
degree; so each partial system contributes a whole coset of that subspace.
This cuts the search by ``p^(dim Z + dim Z')`` and is what the witness engine
uses for arity four and up.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

import numpy as np

from .dga import CohomologyClass, DgaModel
from .errors import BudgetExceeded, DegreeOutOfRange, MixedPresentation
from .linalg import _eliminate

__all__ = ["DEFAULT_BUDGET", "ExhaustiveResult", "budget_from_env", "estimate_systems", "massey_nfold_exhaustive"]

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 17


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("MASSEY_BUDGET")
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MASSEY_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError("MASSEY_BUDGET must be positive")
    return value


@dataclass(frozen=True)
class ExhaustiveResult:
    values: FrozenSet[CohomologyClass]
    systems: int
    estimate: int
    quotient: bool = False

    @property
    def empty(self) -> bool:
        return not self.values

    @property
    def contains_zero(self) -> bool:
        return any(v.is_zero() for v in self.values)

    @property
    def essential(self) -> bool:
        return bool(self.values) and not self.contains_zero


class _Plan:
    """Precomputed integer matrices for one Massey product over F_p."""

    def __init__(self, model: DgaModel, classes: Sequence[CohomologyClass], quotient: bool = False):
        self.model = model
        self.p = p = model.field.characteristic
        self.dtype = np.int64 if p < 46341 else object
        alg = model.algebra
        n = len(classes)
        self.n = n
        degs = [c.degree for c in classes]
        every = [(i, i + L) for L in range(1, n) for i in range(1, n + 2 - L)]
        self.quotient = quotient and n >= 3
        self.last = [(1, n), (2, n + 1)] if self.quotient else []
        self.positions = [ij for ij in every if ij not in self.last]
        self.deg = {(i, j): sum(degs[i - 1 : j - 1]) - (j - i - 1) for i, j in every}
        self.top = sum(degs) - (n - 2)
        self.params: Dict[Tuple[int, int], int] = {}
        self.base: Dict[Tuple[int, int], np.ndarray] = {}
        self.offset: Dict[Tuple[int, int], np.ndarray] = {}
        self.solve: Dict[Tuple[int, int], Tuple[np.ndarray, np.ndarray]] = {}
        for (i, j) in every:
            e = self.deg[(i, j)]
            dim = alg.dim(e)
            if j == i + 1:
                gens = model.boundary_echelon(e).rows if dim else []
                self.offset[(i, j)] = self._arr([classes[i - 1].rep.coords()] if dim else [[]], 1, dim)[0]
            else:
                gens = model.cocycle_basis(e) if dim else []
                self.solve[(i, j)] = self._solver(e)
            self.base[(i, j)] = self._arr(gens, len(gens), dim)
            self.params[(i, j)] = len(gens)
        self._tensors: Dict[Tuple[int, int], np.ndarray] = {}
        self.class_map = self._class_map()
        self.slice = None
        if self.quotient:
            from .dga import ideal_slice

            s = ideal_slice(model, [classes[0], classes[-1]], self.top)
            self.slice = [[int(x) for x in model.class_coords(c)] for c in s.classes()]

    def _arr(self, rows, nrows, ncols):
        out = np.zeros((nrows, ncols), dtype=self.dtype)
        for r, row in enumerate(rows):
            for c, x in enumerate(row):
                out[r, c] = int(x)
        return out

    def _solver(self, e):
        """``(P, L)``: canonical solution ``x = rhs @ P`` of ``d x = rhs`` and
        consistency rows, ``rhs @ L == 0`` iff solvable."""
        model, alg = self.model, self.model.algebra
        ncols, nrows = alg.dim(e), alg.dim(e + 1)
        if nrows == 0:
            return self._arr([], 0, ncols), self._arr([], 0, 0)
        D = model.dmatrix(e)
        _, pivots, t = _eliminate(D, ncols, model.field, track=True)
        r = len(pivots)
        P = np.zeros((nrows, ncols), dtype=self.dtype)
        for k, pc in enumerate(pivots):
            for row in range(nrows):
                P[row, pc] = int(t[k][row])
        L = self._arr(t[r:], nrows - r, nrows).T.copy()
        return P, L

    def tensor(self, e1, e2):
        """``T[a*dim2 + b] = coords of bar(m_a) * m_b`` in degree ``e1 + e2``."""
        key = (e1, e2)
        if key not in self._tensors:
            alg = self.model.algebra
            d1, d2, d3 = alg.dim(e1), alg.dim(e2), alg.dim(e1 + e2)
            T = np.zeros((d1 * d2, d3), dtype=self.dtype)
            if d3:
                idx = alg.index(e1 + e2)
                sign = -1 if e1 % 2 else 1
                for a, m1 in enumerate(alg.basis(e1)):
                    for b, m2 in enumerate(alg.basis(e2)):
                        for m, c in alg.product(m1, m2).items():
                            T[a * d2 + b, idx[m]] = (sign * int(c)) % self.p
            self._tensors[key] = T
        return self._tensors[key]

    def _class_map(self):
        model, alg = self.model, self.model.algebra
        dim = alg.dim(self.top)
        if dim == 0:
            return self._arr([], 0, 0)
        B = model.boundary_echelon(self.top)
        H = model._cohomology_echelon(self.top)
        cols = []
        for k in range(dim):
            unit = [model.field.zero] * dim
            unit[k] = model.field.one
            nf = B.normal_form(unit)
            cols.append([nf[q] for q in H.pivots])
        return self._arr(cols, dim, len(H.pivots))

    def estimate(self) -> int:
        """Number of (partial) systems the walk visits in the worst case."""
        total = 1
        for ij in self.positions:
            total *= self.p ** self.params[ij]
        return total

    def last_fan(self) -> int:
        return self.p ** sum(self.params[ij] for ij in self.last)

    def bilinear(self, xs, ys, e1, e2):
        b = xs.shape[0]
        d1, d2 = xs.shape[1], ys.shape[1]
        T = self.tensor(e1, e2)
        if T.shape[1] == 0 or d1 == 0 or d2 == 0:
            return np.zeros((b, T.shape[1]), dtype=self.dtype)
        outer = (xs[:, :, None] * ys[:, None, :]).reshape(b, d1 * d2) % self.p
        return (outer @ T) % self.p


def _grid(p: int, k: int, dtype, lo: int = 0, hi: Optional[int] = None) -> np.ndarray:
    """Rows ``lo..hi`` of the list of all vectors in ``{0..p-1}^k``."""
    if k == 0:
        return np.zeros((1, 0), dtype=dtype)
    hi = p**k if hi is None else hi
    idx = np.arange(lo, hi, dtype=np.int64)
    digits = (idx[:, None] // (p ** np.arange(k, dtype=np.int64))[None, :]) % p
    return digits.astype(dtype)


class _Walker:
    def __init__(self, plan: _Plan):
        self.plan = plan
        self.systems = 0
        self.values = set()

    def run(self):
        self._advance(0, {})

    def _advance(self, step: int, state: Dict[Tuple[int, int], np.ndarray]):
        plan = self.plan
        p = plan.p
        if step == len(plan.positions):
            self._collect(state)
            return
        ij = plan.positions[step]
        i, j = ij
        batch = next(iter(state.values())).shape[0] if state else 1
        if j == i + 1:
            center = np.broadcast_to(plan.offset[ij], (batch, plan.offset[ij].shape[0]))
        else:
            e = plan.deg[ij]
            rhs = np.zeros((batch, plan.model.algebra.dim(e + 1)), dtype=plan.dtype)
            for r in range(i + 1, j):
                rhs = rhs + plan.bilinear(state[(i, r)], state[(r, j)], plan.deg[(i, r)], plan.deg[(r, j)])
            rhs %= p
            P, L = plan.solve[ij]
            if L.shape[1]:
                ok = ~((rhs @ L) % p).any(axis=1)
                if not ok.all():
                    state = {k: v[ok] for k, v in state.items()}
                    rhs = rhs[ok]
                    batch = rhs.shape[0]
                    if batch == 0:
                        return
            center = (rhs @ P) % p
        k = plan.params[ij]
        fan = p**k
        if batch * fan > _CHUNK and batch > 1:
            step_rows = max(1, _CHUNK // fan)
            for lo in range(0, batch, step_rows):
                sub = {kk: v[lo : lo + step_rows] for kk, v in state.items()}
                self._expand(step, ij, sub, center[lo : lo + step_rows], k)
            return
        self._expand(step, ij, state, center, k)

    def _expand(self, step, ij, state, center, k):
        plan = self.plan
        p = plan.p
        if k == 0:
            new = dict(state)
            new[ij] = np.ascontiguousarray(center)
            self._advance(step + 1, new)
            return
        fan = p**k
        for lo in range(0, fan, _CHUNK):
            grid = _grid(p, k, plan.dtype, lo, min(fan, lo + _CHUNK))
            shifts = (grid @ plan.base[ij]) % p
            self._expand_with(step, ij, state, center, shifts)

    def _expand_with(self, step, ij, state, center, shifts):
        p = self.plan.p
        batch, fan = center.shape[0], shifts.shape[0]
        new = {k: np.repeat(v, fan, axis=0) for k, v in state.items()}
        new[ij] = ((np.repeat(center, fan, axis=0) + np.tile(shifts, (batch, 1))) % p)
        self._advance(step + 1, new)

    def _collect(self, state):
        plan = self.plan
        n = plan.n
        p = plan.p
        if plan.quotient:
            state = dict(state)
            for ij in plan.last:
                i, j = ij
                e = plan.deg[ij]
                batch = next(iter(state.values())).shape[0]
                rhs = np.zeros((batch, plan.model.algebra.dim(e + 1)), dtype=plan.dtype)
                for r in range(i + 1, j):
                    rhs = rhs + plan.bilinear(state[(i, r)], state[(r, j)], plan.deg[(i, r)], plan.deg[(r, j)])
                rhs %= p
                P, L = plan.solve[ij]
                if L.shape[1]:
                    ok = ~((rhs @ L) % p).any(axis=1)
                    state = {k: v[ok] for k, v in state.items()}
                    rhs = rhs[ok]
                    if rhs.shape[0] == 0:
                        return
                state[ij] = (rhs @ P) % p
        batch = next(iter(state.values())).shape[0] if state else 1
        c = np.zeros((batch, plan.class_map.shape[0]), dtype=plan.dtype)
        for r in range(2, n + 1):
            c = c + plan.bilinear(state[(1, r)], state[(r, n + 1)], plan.deg[(1, r)], plan.deg[(r, n + 1)])
        coords = (c % plan.p) @ plan.class_map % plan.p if plan.class_map.shape[1] else np.zeros((batch, 0), dtype=plan.dtype)
        self.systems += batch * plan.last_fan()
        if coords.shape[1] == 0:
            self.values.add(())
        else:
            for row in np.unique(coords, axis=0) if plan.dtype is not object else {tuple(r) for r in coords}:
                self.values.add(tuple(int(x) for x in row))


def estimate_systems(model: DgaModel, classes: Sequence[CohomologyClass], quotient: bool = False) -> int:
    """Upper bound on the number of (partial) systems the enumeration visits."""
    return _Plan(model, classes, quotient).estimate()


def _coset_closure(values, basis, p):
    """All ``v + span(basis)`` over F_p for ``v`` in ``values``."""
    if not basis:
        return set(values)
    combos = _grid(p, len(basis), np.int64) @ np.array(basis, dtype=np.int64) % p
    out = set()
    for v in values:
        for row in (np.array(v, dtype=np.int64) + combos) % p:
            out.add(tuple(int(x) for x in row))
    return out


def massey_nfold_exhaustive(model: DgaModel, classes: Sequence[CohomologyClass],
                            budget: Optional[int] = None, quotient: bool = False) -> ExhaustiveResult:
    """Every value of ``<a_1, ..., a_n>`` over a prime field.

    Raises :class:`BudgetExceeded` (carrying the estimate) before doing any work
    when the parameter count exceeds ``budget``; the default budget is read
    from ``MASSEY_BUDGET`` and falls back to ``10**7``.  ``quotient`` switches
    on the coset shortcut for the last two entries (see the module notes).
    """
    if not model.field.is_finite:
        raise ValueError("exhaustive enumeration needs a finite field")
    classes = tuple(classes)
    if len(classes) < 2:
        raise ValueError("arity must be at least 2")
    for c in classes:
        if c.model is not model and c.model != model:
            raise MixedPresentation("class belongs to a different model")
    top = sum(c.degree for c in classes) - (len(classes) - 2)
    if top > model.truncation:
        raise DegreeOutOfRange(f"product degree {top} exceeds truncation {model.truncation}")
    plan = _Plan(model, classes, quotient)
    limit = budget if budget is not None else budget_from_env()
    est = plan.estimate()
    if est > limit:
        raise BudgetExceeded(f"about {est} defining systems, budget {limit}", estimate=est)
    walker = _Walker(plan)
    walker.run()
    coords = walker.values
    if plan.quotient:
        coords = _coset_closure(coords, plan.slice, plan.p)
    values = frozenset(model.class_from_coords(top, c) for c in coords)
    return ExhaustiveResult(values, walker.systems, est, plan.quotient)
