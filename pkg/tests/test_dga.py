import random

import pytest
from hypothesis import given, settings, strategies as st

from dgamassey.algebra import Presentation
from dgamassey.dga import (
    DgaModel,
    DgaMorphism,
    cohomology_basis,
    cup,
    ideal_slice,
    member,
    solve_primitive,
    validate,
)
from dgamassey.errors import (
    DegreeMismatch,
    DegreeOutOfRange,
    InvalidDifferential,
    JacobiFailure,
    MixedPresentation,
    NotABoundary,
    NotNilpotent,
)
from dgamassey.fields import GF, QQ
from dgamassey.models import (
    LieAlgebraData,
    bundled_model,
    chevalley_eilenberg,
    free_cdga,
    heisenberg,
    kodaira_thurston,
)

import randmodels as rm


@pytest.mark.parametrize("name,betti", [
    ("point", (1,)),
    ("torus-3", (1, 3, 3, 1)),
    ("cp-2", (1, 0, 1, 0, 1)),
    ("heisenberg", (1, 2, 2, 1)),
    ("kodaira_thurston", (1, 3, 4, 3, 1)),
    ("iwasawa-1-1", (1, 4, 8, 10, 8, 4, 1)),
])
def test_bundled_betti(name, betti):
    assert bundled_model(name).betti_numbers() == betti


def test_betti_independent_of_field_for_kt():
    assert kodaira_thurston(GF(3)).betti_numbers() == (1, 3, 4, 3, 1)


def test_degree_error_and_d_squared_witness():
    gens = [("x1", 1), ("x2", 1), ("x3", 1), ("x4", 1)]
    with pytest.raises(InvalidDifferential) as err:
        free_cdga(gens, {"x3": "x1*x2", "x4": "x3"})
    assert err.value.generator == "x4"
    M = DgaModel(Presentation.of(gens, 4), {"x3": "x1*x2", "x4": "x3"}, check=False)
    report = validate(M)
    assert not report.valid
    assert report.degree_errors[0][0] == "x4"
    assert ("x4", "x1*x2") in report.d_squared


def test_unknown_generator_in_differential():
    with pytest.raises(InvalidDifferential):
        free_cdga([("a", 1)], {"b": "a"})


def test_primitive_and_obstruction():
    M = heisenberg()
    y = solve_primitive(M, M.element("x1*x2")).solution
    assert M.d(y) == M.element("x1*x2")
    with pytest.raises(NotABoundary) as err:
        solve_primitive(M, M.element("x1*x3"))
    assert not err.value.obstruction.is_zero()


def test_cup_slice_member():
    M = kodaira_thurston()
    a, b, g = (M.cohomology_class(s) for s in ("x1", "x2", "x4"))
    assert cup(M, a, b).is_zero()
    s = ideal_slice(M, [a, b], 2)
    assert s.dim == 2
    assert member(M, a * g, s).is_member
    assert not member(M, M.cohomology_class("x1*x3"), s).is_member
    with pytest.raises(DegreeMismatch):
        member(M, a, s)
    with pytest.raises(DegreeOutOfRange):
        cohomology_basis(M, 5)


def test_mixed_models():
    M, N = kodaira_thurston(), heisenberg()
    with pytest.raises(MixedPresentation):
        cup(M, M.cohomology_class("x1"), N.cohomology_class("x1"))


def test_morphism_checks():
    K, H = kodaira_thurston(), heisenberg()
    f = DgaMorphism(K, H, {"x1": "x1", "x2": "x2", "x3": "x3", "x4": "0"})
    assert f(K.cohomology_class("x1*x3")) == H.cohomology_class("x1*x3")
    with pytest.raises(InvalidDifferential):
        DgaMorphism(K, H, {"x1": "x1", "x2": "x2", "x3": "0", "x4": "0"})


def test_lie_algebra_checks():
    with pytest.raises(NotNilpotent):
        chevalley_eilenberg(LieAlgebraData(2, (((0, 1, 0), 1),)))
    # [[e0,e1],e3] = [e2,e3] = e4 while the other two Jacobi terms vanish
    bad = LieAlgebraData(5, (((0, 1, 2), 1), ((2, 3, 4), 1)))
    assert not rm.brute_jacobi_holds(bad)
    with pytest.raises(JacobiFailure):
        chevalley_eilenberg(bad)
    good = LieAlgebraData(4, (((0, 1, 2), 1), ((0, 2, 3), 1)))
    assert chevalley_eilenberg(good).betti_numbers() == (1, 2, 2, 2, 1)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_random_models_are_valid(seed):
    rng = random.Random(seed)
    M = rm.random_sullivan(rng, rng.choice([QQ, GF(3), GF(5)]))
    assert validate(M).valid
    # every cohomology basis class is a cocycle and not a boundary
    for n in range(M.truncation + 1):
        for c in cohomology_basis(M, n):
            assert M.is_cocycle(c.rep) and not M.is_boundary(c.rep)
        assert len(cohomology_basis(M, n)) == M.betti(n)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_euler_characteristic(seed):
    rng = random.Random(seed)
    M = rm.random_sullivan(rng, QQ)
    chi_chain = sum((-1) ** n * M.algebra.dim(n) for n in range(M.truncation + 1))
    chi_h = sum((-1) ** n * b for n, b in enumerate(M.betti_numbers()))
    assert chi_chain == chi_h
