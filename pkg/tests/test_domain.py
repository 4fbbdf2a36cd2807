from fractions import Fraction

import pytest

from shintani.complexes import OrderedSimplex
from shintani.domain import (AMBIGUOUS, NO, YES, build_signed_domain, cone_generators, contains,
                             det_R_sign, sector_check, sign_mu, solve_e1)
from shintani.exceptions import InvalidFieldSpec, TotallyComplexField
from shintani.numfield import NumberField
from shintani.twisters import Twister


def test_sqrt5_single_cone(sqrt5_domain):
    d = sqrt5_domain
    K = d.field
    assert len(d.cones) == 1
    c = d.cones[0]
    assert c.mu == 1
    assert [w.coords for w in c.generators] == [(1, 1), (1, 0)]
    assert d.det_R_sign == -1
    assert [float(v) for v in c.y] == pytest.approx([0.4472135955, -0.1708203932])
    assert c.closure == (True, False)


def test_generators_sqrt5(sqrt5_domain):
    d = sqrt5_domain
    K = d.field
    s = OrderedSimplex(((0,), (1,)))
    assert cone_generators(s, d.twister, d.units) == [K.one(), K.element([1, 1])]


def test_generators_cbrt2(cbrt2_domain):
    d = cbrt2_domain
    (w,) = cone_generators(OrderedSimplex(((1, 2),)), d.twister, d.units)
    assert w == d.twister.table[(2,)] * d.units[0]


def test_det_R_sign(sqrt5_domain):
    assert det_R_sign(sqrt5_domain.field, sqrt5_domain.units) == -1


def test_mu_zero_for_dependent_generators(sqrt5_domain):
    d = sqrt5_domain
    K = d.field
    tw = Twister(K, (), {(): K.one()})
    # both vertices carry the same exponent, so the generators coincide
    s = OrderedSimplex(((0,), (0,)))
    gens = cone_generators(s, tw, d.units)
    assert sign_mu(K, d.units, s, gens, frame=d.frame) == 0


def test_mu_relabel_invariance(cbrt2_domain):
    d = cbrt2_domain
    for c in d.cones:
        s = d.complex[c.alpha]
        for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
            t = s.relabel(perm)
            gens = cone_generators(t, d.twister, d.units)
            assert sign_mu(d.field, d.units, t, gens, d.det_R_sign, d.frame) == c.mu


def test_y_scales_linearly(sqrt5_domain):
    d = sqrt5_domain
    c = d.cones[0]
    scaled = type(c)(c.alpha, c.vertices, tuple(2 * w for w in c.generators), c.mu, c.det_V,
                     4 * c.det_C, frame=c.frame)
    y2, signs = solve_e1(d.field, scaled, d.frame)
    assert [float(a) for a in y2] == pytest.approx([float(b) / 2 for b in c.y])
    assert tuple(signs) == tuple(c.y_signs)


def test_contains_sqrt5(sqrt5_domain):
    d = sqrt5_domain
    K = d.field
    c = d.cones[0]
    assert contains(c, K.one()) == YES                  # closed face t_0 = 0
    assert contains(c, K.element([1, 1])) == NO         # eps sits on the open face
    assert contains(c, K.element([Fraction(1, 2)])) == YES
    assert contains(c, [0.5, 0.5]) == AMBIGUOUS          # numeric point exactly on a face
    assert contains(c, [2.0, 1.0]) == YES
    assert contains(c, [1.0, 2.0]) == NO


def test_sector_check(cbrt2_domain):
    d = cbrt2_domain
    assert all(sector_check(c) for c in d.cones)
    c = d.cones[0]
    flipped = type(c)(c.alpha, c.vertices, (-c.generators[0],) + c.generators[1:], c.mu,
                      c.det_V, -c.det_C, sector=c.sector, sector_anchor=c.sector_anchor,
                      frame=c.frame)
    assert not sector_check(flipped)


def test_sector_check_vacuous(sqrt5_domain):
    assert sector_check(sqrt5_domain.cones[0])


def test_cbrt2_domain(cbrt2_domain):
    d = cbrt2_domain
    assert len(d.cones) == 6
    assert all(c.mu == 1 for c in d.cones)
    assert all(all(s != 0 for s in c.y_signs) for c in d.cones)
    assert d.coherence_failures() == []


def test_quartic_domain(quartic_domain):
    d = quartic_domain
    assert len(d.cones) == 18
    assert sum(abs(c.det_V) for c in d.cones) == 18
    assert sorted({c.mu for c in d.cones}) == [-1, 0, 1]
    assert d.coherence_failures() == []


def test_totally_complex_rejected():
    K = NumberField([1, 0, 0, 0, 1])
    with pytest.raises(TotallyComplexField, match="field must have a real place"):
        build_signed_domain(K, [K.one()], (3, 3))


def test_bad_explicit_twister(cbrt2):
    one = cbrt2.one()
    tw = Twister(cbrt2, (3,), {(0,): one, (1,): one, (2,): one})
    with pytest.raises(InvalidFieldSpec):
        build_signed_domain(cbrt2, [cbrt2.element([1, 1, 1])], (3,), tw)
