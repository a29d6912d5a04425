from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgamassey.fields import GF, QQ, Field, is_prime
from dgamassey.linalg import Echelon, LinearSolver, nullspace, rref


def test_field_specs():
    assert Field.from_spec("Q") == QQ
    assert Field.from_spec("F7") == GF(7)
    assert str(GF(5)) == "F5"
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(2)


def test_fp_arithmetic():
    F = GF(5)
    a, b = F(3), F(4)
    assert a + b == F(2)
    assert a * b == F(2)
    assert a / b == F(2)
    assert -a == F(2)
    assert F(7) == F(2)
    assert a ** 4 == F.one
    with pytest.raises(ZeroDivisionError):
        a / F(0)


def test_parse_and_format():
    assert QQ.parse("3/4") == Fraction(3, 4)
    assert GF(5).parse("-1") == GF(5)(4)
    assert GF(5).format(GF(5)(4)) == "4 mod 5"


@pytest.mark.parametrize("n,ok", [(3, True), (9, False), (97, True), (1, False), (2, True)])
def test_is_prime(n, ok):
    assert is_prime(n) is ok


def test_rref_and_nullspace():
    rows, pivots, _ = rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]], 3, QQ)
    assert pivots == [0, 1]
    assert rows == [[1, 0, 1], [0, 1, 1]]
    ns = nullspace([[1, 2, 3], [0, 1, 1]], 3, QQ)
    assert ns == [[-1, -1, 1]]


def test_solver_canonical_solution():
    s = LinearSolver([[1, 2], [2, 4]], 2, 2, QQ)
    assert s.consistent([1, 2])
    assert s.solve([1, 2]) == [1, 0]
    assert not s.consistent([1, 3])
    assert s.rank == 1


def test_echelon_normal_form():
    e = Echelon([[1, 1, 0]], 3, QQ)
    assert e.contains([2, 2, 0])
    assert not e.contains([1, 0, 0])
    assert e.normal_form([1, 0, 0]) == [0, -1, 0]


mat = st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4)


@given(mat, st.sampled_from([QQ, GF(3), GF(7)]))
@settings(max_examples=60, deadline=None)
def test_nullspace_is_kernel(rows, F):
    rows = [[F(x) for x in r] for r in rows]
    ns = nullspace(rows, 4, F)
    for v in ns:
        for r in rows:
            assert sum((a * b for a, b in zip(r, v)), F.zero) == 0
    assert len(ns) + len(rref(rows, 4, F)[1]) == 4


@given(mat, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_solver_solutions_satisfy_system(rows, x):
    n = len(rows)
    b = [sum(r[j] * x[j] for j in range(4)) for r in rows]
    s = LinearSolver(rows, n, 4, QQ)
    assert s.consistent(b)
    y = s.solve(b)
    assert [sum(r[j] * y[j] for j in range(4)) for r in rows] == b
