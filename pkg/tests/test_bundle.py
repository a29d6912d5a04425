import random

import pytest
from hypothesis import given, settings, strategies as st

from dgamassey.bundle import (
    ChernData,
    decompose,
    fiber_restriction,
    lift_ideal_check,
    projectivize,
    reassemble,
    transferred_massey,
)
from dgamassey.dga import validate
from dgamassey.errors import (
    DegreeMismatch,
    EngineInconsistency,
    ExponentTooLarge,
    HypothesisFailure,
    NotACocycle,
    ParseError,
)
from dgamassey.massey import Essentiality
from dgamassey.models import complex_projective_space, kodaira_thurston, point, torus

import randmodels as rm


def kt_classes(M):
    a, b, g = (M.cohomology_class(s) for s in ("x1", "x2", "x4"))
    return a, b, g, M.cohomology_class("x1*x4 + x2*x3")


def test_projective_space_from_point():
    E = projectivize(point(), k=3)
    assert E.betti_numbers() == complex_projective_space(3).betti_numbers()


def test_kt_betti():
    E = projectivize(kodaira_thurston(), k=2)
    assert E.betti_numbers() == (1, 3, 5, 6, 6, 6, 5, 3, 1)
    assert E.leray_hirsch_holds()
    assert validate(E).valid


def test_nontrivial_chern_and_iteration():
    T = torus(2)
    E = projectivize(T, ChernData.parse(T, 1, ["t1*t2", None]))
    assert E.leray_hirsch_holds()
    E2 = projectivize(E, k=1)
    assert E2.xi.algebra is E2.algebra
    assert E2.betti_numbers()[2] == E.betti(2) + E.betti(0)
    assert E2.algebra.generators[-1].name == "xi_"


def test_chern_checks():
    M = kodaira_thurston()
    with pytest.raises(ParseError):
        ChernData.parse(M, 1, ["x1"])
    with pytest.raises(DegreeMismatch):
        ChernData(1, (M.element("x1"), None)).check(M)
    with pytest.raises(NotACocycle):
        ChernData.parse(M, 1, ["x3*x4"]).check(M)


def test_pullback_and_fiber():
    M = kodaira_thurston()
    E = projectivize(M, k=2)
    a, b, g, u = kt_classes(M)
    p = E.pullback()
    assert p(a * g) == E.lift_class(a * g, 0)
    f = fiber_restriction(E)
    assert f(E.xi_class) == f.target.cohomology_class("xi")


def test_decompose_roundtrip():
    M = kodaira_thurston()
    E = projectivize(M, k=2)
    x = E.cohomology_class("xi*x1*x3 + xi^2")
    comps = decompose(E, x)
    assert comps[1] == M.cohomology_class("x1*x3")
    assert comps[2] == M.unit_class()
    assert reassemble(E, comps) == x


@given(st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_random_decompose_roundtrip(seed):
    rng = random.Random(seed)
    M = rm.random_sullivan(rng, max_trunc=4)
    E = projectivize(M, k=rng.randint(1, 2))
    n = rng.randint(0, E.truncation)
    x = rm.random_class(rng, E, n)
    assert reassemble(E, decompose(E, x)) == x


def test_lift_ideal_check():
    M = kodaira_thurston()
    E = projectivize(M, k=2)
    a, b, g, u = kt_classes(M)
    assert not lift_ideal_check(E, M.cohomology_class("x1*x3"), [a, b], 1)
    assert lift_ideal_check(E, a * g, [a, b], 1)
    with pytest.raises(ExponentTooLarge):
        lift_ideal_check(E, a * g, [a, b], 3)


def test_transferred_alpha_alpha_beta():
    M = kodaira_thurston()
    a, b, g, u = kt_classes(M)
    assert transferred_massey(projectivize(M, k=2), a, a, b, 1, 1, 0).essential is Essentiality.ESSENTIAL
    assert transferred_massey(projectivize(M, k=3), a, a, b, 1, 1, 1).essential is Essentiality.ESSENTIAL
    with pytest.raises(ExponentTooLarge):
        transferred_massey(projectivize(M, k=2), a, a, b, 1, 1, 1)
    with pytest.raises(HypothesisFailure):
        transferred_massey(projectivize(M, k=2), a, a, b, -1, 1, 0)


def test_transfer_rejects_inessential_base():
    M = kodaira_thurston()
    a, b, g, u = kt_classes(M)
    with pytest.raises(HypothesisFailure, match="not essential"):
        transferred_massey(projectivize(M, k=3), b, b, u, 1, 1, 1)


def test_engine_inconsistency_is_assertion():
    assert issubclass(EngineInconsistency, AssertionError)
