import random
from itertools import product

import pytest

from dgamassey.errors import BudgetExceeded
from dgamassey.exhaustive import (
    DEFAULT_BUDGET,
    budget_from_env,
    estimate_systems,
    massey_nfold_exhaustive,
)
from dgamassey.fields import GF, QQ
from dgamassey.massey import triple_massey
from dgamassey.models import heisenberg, kodaira_thurston

import randmodels as rm


def brute_triple(model, a, b, c):
    """All values of <a, b, c> by enumerating every vector of every degree."""
    F = model.field
    alg = model.algebra

    def space(n):
        return [alg.vector(n, list(cs)) for cs in product(F.elements(), repeat=alg.dim(n))]

    def reps(cls):
        return [v for v in space(cls.degree) if model.is_cocycle(v) and model.cohomology_class(v) == cls]

    values = set()
    A, B, C = reps(a), reps(b), reps(c)
    S13 = space(a.degree + b.degree - 1)
    S24 = space(b.degree + c.degree - 1)
    for x12, x23, x34 in product(A, B, C):
        t13 = x12.bar() * x23
        t24 = x23.bar() * x34
        X13 = [y for y in S13 if model.d(y) == t13]
        X24 = [y for y in S24 if model.d(y) == t24]
        for x13, x24 in product(X13, X24):
            values.add(model.cohomology_class(x12.bar() * x24 + x13.bar() * x34))
    return values


@pytest.mark.parametrize("names", [("x1", "x1", "x2"), ("x2", "x2", "x1"), ("x1", "x2", "x1")])
def test_heisenberg_matches_brute_force(names):
    M = heisenberg(GF(3))
    cls = [M.cohomology_class(n) for n in names]
    assert massey_nfold_exhaustive(M, cls).values == frozenset(brute_triple(M, *cls))


def test_random_models_match_brute_force():
    rng = random.Random(11)
    checked = 0
    while checked < 6:
        M = rm.random_sullivan(rng, GF(3), ngens=(2, 4), degrees=(1, 1, 2), max_trunc=4)
        cls = rm.vanishing_triple(rng, M)
        if cls is None or any(M.algebra.dim(n) > 4 for n in range(M.truncation + 1)):
            continue
        assert massey_nfold_exhaustive(M, cls).values == frozenset(brute_triple(M, *cls))
        checked += 1


def test_kt_f5_values():
    M = kodaira_thurston(GF(5))
    a, b = M.cohomology_class("x1"), M.cohomology_class("x2")
    r = massey_nfold_exhaustive(M, [a, a, b])
    assert len(r.values) == 25
    assert r.essential and not r.contains_zero
    assert r.values == massey_nfold_exhaustive(M, [a, a, b], quotient=True).values


def test_quotient_mode_matches_full():
    M = kodaira_thurston(GF(5))
    b, u = M.cohomology_class("x2"), M.cohomology_class("x1*x4 + x2*x3")
    full = massey_nfold_exhaustive(M, [b, b, u])
    quick = massey_nfold_exhaustive(M, [b, b, u], quotient=True)
    assert full.values == quick.values
    assert full.contains_zero
    assert quick.estimate < full.estimate
    v = triple_massey(M, b, b, u)
    assert v.representative in full.values


def test_fourfold_empty_mod5():
    M = kodaira_thurston(GF(5))
    a, b = M.cohomology_class("x1"), M.cohomology_class("x2")
    r = massey_nfold_exhaustive(M, [a, a, a, b], quotient=True)
    assert r.empty


def test_budget():
    M = kodaira_thurston(GF(5))
    g = M.cohomology_class("x4")
    with pytest.raises(BudgetExceeded) as err:
        massey_nfold_exhaustive(M, [g, g, g, g], budget=10)
    assert err.value.estimate == estimate_systems(M, [g, g, g, g])


def test_budget_env(monkeypatch):
    monkeypatch.delenv("MASSEY_BUDGET", raising=False)
    assert budget_from_env() == DEFAULT_BUDGET
    monkeypatch.setenv("MASSEY_BUDGET", "123")
    assert budget_from_env() == 123
    monkeypatch.setenv("MASSEY_BUDGET", "lots")
    with pytest.raises(ValueError):
        budget_from_env()


def test_needs_finite_field():
    M = kodaira_thurston(QQ)
    a = M.cohomology_class("x1")
    with pytest.raises(ValueError):
        massey_nfold_exhaustive(M, [a, a, a])
