import pytest
from hypothesis import given, settings, strategies as st

from dgamassey.algebra import GeneratorDecl, Presentation, bar
from dgamassey.errors import DegreeOutOfRange, MixedPresentation, ParseError
from dgamassey.fields import GF, QQ
from dgamassey.polyparse import format_polynomial, parse_polynomial


@pytest.fixture
def A():
    return Presentation.of([("x", 1), ("y", 1), ("z", 2)], 4)


def test_graded_commutativity(A):
    x, y, z = A.gen("x"), A.gen("y"), A.gen("z")
    assert y * x == -(x * y)
    assert (x * x).is_zero()
    assert z * x == x * z
    assert (z * z).format() == "z^2"
    assert (z * z * z).is_zero()  # above the truncation


def test_dimensions(A):
    assert [A.dim(n) for n in range(5)] == [1, 2, 2, 2, 2]
    with pytest.raises(DegreeOutOfRange):
        A.basis(5)


def test_bar(A):
    x, z = A.gen("x"), A.gen("z")
    assert bar(x) == -x
    assert bar(z) == z


def test_generator_validation():
    with pytest.raises(ValueError):
        GeneratorDecl("x", 0)
    with pytest.raises(ValueError):
        GeneratorDecl("2x", 1)
    with pytest.raises(ValueError):
        Presentation.of([("x", 1), ("x", 1)], 2)


def test_mixed_presentations(A):
    B = Presentation.of([("x", 1), ("y", 1), ("z", 2)], 4, GF(3))
    with pytest.raises(MixedPresentation):
        A.gen("x") + B.gen("x")


@pytest.mark.parametrize("text,out", [
    ("2*x*y - 3*z", "2*x*y - 3*z"),
    ("y*x", "-x*y"),
    ("1/2*z", "1/2*z"),
    ("x*y - y*x + x*y", "3*x*y"),
])
def test_parse_format(A, text, out):
    assert format_polynomial(parse_polynomial(A, text)) == out


def test_vanishing_expression_keeps_degree(A):
    v = parse_polynomial(A, "x^2")
    assert v.is_zero() and v.degree == 2


@pytest.mark.parametrize("text,col", [("x + w", 5), ("x*", 2), ("(x", 1)])
def test_parse_errors(A, text, col):
    with pytest.raises(ParseError) as err:
        parse_polynomial(A, text)
    assert err.value.column == col


def test_inhomogeneous(A):
    with pytest.raises(ParseError):
        parse_polynomial(A, "x + z")


P = Presentation.of([("a", 1), ("b", 1), ("c", 2), ("e", 3)], 7)
degree = st.integers(0, 7)
coef = st.integers(-3, 3)


def _vec(deg, coeffs):
    return P.vector(deg, [coeffs[i % len(coeffs)] for i in range(P.dim(deg))])


@given(degree, degree, degree, st.lists(coef, min_size=1, max_size=6), st.lists(coef, min_size=1, max_size=6),
       st.lists(coef, min_size=1, max_size=6))
@settings(max_examples=80, deadline=None)
def test_associative_and_graded_commutative(p, q, r, ca, cb, cc):
    u, v, w = _vec(p, ca), _vec(q, cb), _vec(r, cc)
    assert (u * v) * w == u * (v * w)
    assert u * v == (v * u).scale((-1) ** (p * q))


@given(degree, st.lists(coef, min_size=1, max_size=6))
@settings(max_examples=40, deadline=None)
def test_format_parse_roundtrip(p, cs):
    v = _vec(p, cs)
    if v.is_zero():
        return
    assert parse_polynomial(P, format_polynomial(v)) == v
