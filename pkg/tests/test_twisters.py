from fractions import Fraction

import pytest
from mpmath import mp

from shintani.exceptions import TwisterSearchFailed
from shintani.numfield import NumberField, embed, is_totally_positive
from shintani.twisters import Twister, construct_twister, trivial_twister, validate_twister


def test_trivial_twister(sqrt5):
    tw = construct_twister(sqrt5, ())
    assert tw.table == {(): sqrt5.one()}
    assert validate_twister(sqrt5, tw).ok
    assert tw((5,)) == sqrt5.one()
    bad = Twister(sqrt5, (), {(): sqrt5.theta()})
    assert not validate_twister(sqrt5, bad).ok


def test_windows_cbrt2(cbrt2):
    one = cbrt2.one()
    ok = Twister(cbrt2, (3,), {(0,): one, (1,): cbrt2.theta(), (2,): cbrt2.element([0, 0, 1])})
    rep = validate_twister(cbrt2, ok)
    assert rep.ok
    # class 0 mapped to 1: argument 0, window pi/2 - pi/3 = pi/6
    assert rep.entries[0].windows[0].slack == pytest.approx(float(mp.pi / 6))
    bad = Twister(cbrt2, (3,), {(0,): one, (1,): one, (2,): one})
    rep = validate_twister(cbrt2, bad)
    assert [e.ok for e in rep.entries] == [True, False, False]


def test_construct_cbrt2(cbrt2):
    tw = construct_twister(cbrt2, (3,))
    assert tw.table[(0,)] == cbrt2.one()
    rep = validate_twister(cbrt2, tw)
    assert rep.ok and rep.min_relative_slack >= 0.25
    for c in (1, 2):
        beta = tw.table[(c,)]
        assert is_totally_positive(cbrt2, beta)
        arg = mp.arg(embed(cbrt2, beta, 2).value)
        target = 2 * mp.pi * c / 3
        dev = abs((arg - target + mp.pi) % (2 * mp.pi) - mp.pi)
        assert dev < mp.pi / 6


@pytest.mark.parametrize("N", [(4,), (5,), (7,)])
def test_construct_other_sector_counts(cbrt2, N):
    tw = construct_twister(cbrt2, N)
    assert validate_twister(cbrt2, tw).ok
    assert len(tw.table) == N[0]


def test_periodicity(cbrt2):
    tw = construct_twister(cbrt2, (3,))
    for a in range(-3, 4):
        for b in range(-7, 8):
            assert tw((a, b)) == tw((0, b + 3)) == tw((a + 11, b - 6))


def test_search_cap(cbrt2):
    # for N = 3 theta and theta^2 hit the targets exactly; N = 5 has no exact hit,
    # so a margin close to 1 cannot be met with small denominators
    with pytest.raises(TwisterSearchFailed):
        construct_twister(cbrt2, (5,), margin=0.999999, max_denominator=16)


def test_margin_validation(cbrt2):
    with pytest.raises(ValueError):
        construct_twister(cbrt2, (3,), margin=1.5)
