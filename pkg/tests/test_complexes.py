from fractions import Fraction

import pytest

from shintani.complexes import (LinearForm, OrderedComplex, OrderedSimplex,
                                build_domain_complex, lambda_complex_check, omega_j,
                                point_complex, raise_complex, reorder_A, simplices_meet_properly,
                                spanning_vertices, upper_fractional)
from shintani.exceptions import (AmbiguousBarycentric, BadSectorCount, InvalidFieldSpec,
                                 PointOutsideComplex, UnitNotTotallyPositive,
                                 UnitsNotIndependent)
from shintani.numfield import NumberField

# omega_1((1, 0)) for Q(cbrt 2) with eps = 1 + theta + theta^2, N = 3:
# (3 / 2 pi) * arg(-0.423661 - 0.283606 i), computed independently with mpmath
OMEGA_CBRT2 = -1.2183413901367


def zero_complex(dim_steps):
    X = point_complex()
    for step in range(dim_steps):
        X = raise_complex(X, LinearForm.zero(step), 0, 1)
    return X


def test_upper_fractional_part():
    assert upper_fractional(LinearForm.zero(2), (3, -1)) == (1, 1)
    A, k = upper_fractional(LinearForm.rational([Fraction(23, 10)]), (1,))
    assert A == Fraction(3, 10) and k == -2


def test_upper_fractional_cbrt2(cbrt2):
    e = cbrt2.element([1, 1, 1])
    form = LinearForm.from_unit_arguments(cbrt2, [e], 2, 3, 1)
    A, k = upper_fractional(form, (1,))
    assert float(A) == pytest.approx(OMEGA_CBRT2 + 2, abs=1e-12)
    assert k == 2
    # loosely rounded reference values 0.78157 / -1.21843
    assert float(A) == pytest.approx(0.78157, abs=1e-3)


def test_reorder_by_A():
    s = OrderedSimplex(((0,), (1,)))
    assert reorder_A(s, LinearForm.zero(1)) == [0, 1]
    assert reorder_A(s, LinearForm.rational([Fraction(78, 100)])) == [1, 0]
    assert reorder_A(s, LinearForm.rational([1])) == [0, 1]   # tie keeps the old order


def test_first_raises():
    X1 = raise_complex(point_complex(), LinearForm.zero(0), 0, 1)
    assert [s.vertices for s in X1] == [((1,), (0,))]
    X2 = raise_complex(X1, LinearForm.zero(1), 0, 1)
    assert len(X2) == 2
    assert sum(abs(s.det()) for s in X2) == 2   # two unimodular triangles tile [0,1]^2
    assert lambda_complex_check(X2, samples=500).passed


@pytest.mark.parametrize("steps, M, expected", [(0, 1, 1), (2, 3, 18)])
def test_cardinality_law(steps, M, expected):
    X = zero_complex(steps)
    Y = raise_complex(X, LinearForm.zero(X.dim), 0, M)
    assert len(Y) == (X.dim + 1) * M * len(X) == expected


def test_domain_complex_sqrt5(sqrt5):
    X, sector = build_domain_complex(sqrt5, [sqrt5.element([1, 1])], [])
    assert [s.vertices for s in X] == [((1,), (0,))]
    rep = lambda_complex_check(X, samples=1000)
    assert rep.passed and rep.volume == rep.expected_volume == 1


def test_domain_complex_cbrt2(cbrt2):
    X, sector = build_domain_complex(cbrt2, [cbrt2.element([1, 1, 1])], [3])
    assert len(X) == 6
    assert all(isinstance(c, int) for s in X for v in s.vertices for c in v)
    rep = lambda_complex_check(X, samples=2000, sector=sector)
    assert rep.passed, rep.summary()
    assert rep.volume == 6


def test_domain_complex_two_complex_places():
    K = NumberField([1, 1, 0, 0, 1])          # x^4 + x + 1, signature (0, 2)
    X, sector = build_domain_complex(K, [K.theta()], [3, 3])
    assert len(X) == 54
    assert sum(abs(s.det()) for s in X) == 54


def test_omega_j(cbrt2):
    units = [cbrt2.element([1, 1, 1])]
    assert omega_j(cbrt2, units, (3,), 1, (0, 0)) == 0
    assert float(omega_j(cbrt2, units, (3,), 1, (1, 0))) == pytest.approx(OMEGA_CBRT2, abs=1e-12)
    assert omega_j(cbrt2, units, (3,), 1, (0, 2)) == 2


def test_spanning_vertices():
    X = zero_complex(2)
    assert spanning_vertices(X, (Fraction(0), Fraction(0))) == {(0, 0)}
    assert spanning_vertices(X, (Fraction(1, 2), Fraction(1, 2))) == {(0, 0), (1, 1)}
    s = X[0]
    centroid = tuple(sum(Fraction(v[c]) for v in s.vertices) / 3 for c in range(2))
    assert spanning_vertices(X, centroid) == set(s.vertices)
    with pytest.raises(AmbiguousBarycentric):
        spanning_vertices(X, (0.5, 0.5 + 1e-15))
    with pytest.raises(PointOutsideComplex):
        spanning_vertices(X, (Fraction(2), Fraction(0)))


def test_meet_properly():
    a = ((0, 0), (1, 0), (0, 1))
    assert simplices_meet_properly(a, ((1, 0), (0, 1), (1, 1)))
    assert not simplices_meet_properly(a, ((0, 0), (1, 1), (0, 1)))
    assert simplices_meet_properly(a, ((5, 5), (6, 5), (5, 6)))


def test_shifted_vertex_is_caught(cbrt2):
    X, sector = build_domain_complex(cbrt2, [cbrt2.element([1, 1, 1])], [3])
    s = X[0]
    bad = OrderedSimplex((tuple(c + 1 for c in s.vertices[0]),) + s.vertices[1:], s.provenance)
    rep = lambda_complex_check(X.replace_simplex(0, bad), samples=500)
    assert not rep.passed
    assert not (rep.axioms["i"].passed and rep.axioms["iv"].passed)


def test_input_errors(sqrt5, cbrt2):
    e = cbrt2.element([1, 1, 1])
    with pytest.raises(BadSectorCount):
        build_domain_complex(cbrt2, [e], [2])
    with pytest.raises(BadSectorCount):
        build_domain_complex(cbrt2, [e], [])
    with pytest.raises(UnitNotTotallyPositive):
        build_domain_complex(sqrt5, [sqrt5.theta()], [])
    with pytest.raises(InvalidFieldSpec):
        build_domain_complex(sqrt5, [sqrt5.element([2])], [])
    with pytest.raises(UnitsNotIndependent):
        build_domain_complex(sqrt5, [sqrt5.one()], [])


def test_complex_shape_validation():
    with pytest.raises(ValueError):
        OrderedComplex(1, (OrderedSimplex(((0, 0), (1, 0), (0, 1))),), (1,))
    with pytest.raises(ValueError):
        raise_complex(point_complex(), LinearForm.zero(0), 1, 1)
