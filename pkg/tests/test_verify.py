import numpy as np
import pytest

from shintani.exceptions import UnstableBound
from shintani.verify import (enumeration_bound, flip_mu, run_property_suite, sample_points,
                             signed_count, signed_count_detail, unit_action)


def test_bound_sqrt5(sqrt5_domain):
    B = enumeration_bound(sqrt5_domain, [1.0, 1.0])
    assert B <= 5
    assert enumeration_bound(sqrt5_domain, [1e6, 1e6]) == B


def test_bound_cbrt2(cbrt2_domain):
    B = enumeration_bound(cbrt2_domain, [1.0, 1 + 0j])
    assert 0 < B < 20
    assert signed_count(cbrt2_domain, [1.0, 1 + 0.1j], B=B) == 1


def test_signed_count_sqrt5(sqrt5_domain):
    d = sqrt5_domain
    K = d.field
    eps = K.element([1, 1])
    assert signed_count(d, K.one()) == 1
    assert signed_count(d, eps) == 1
    assert signed_count(d, [2.618033988749895, 0.3819660112501051]) in (1, "ambiguous")
    assert signed_count(d, [2.5, 0.4]) == 1
    res = signed_count_detail(d, K.one())
    assert res.hits == {0: 1}


def test_exact_path_generator_rays(cbrt2_domain):
    d = cbrt2_domain
    for c in d.cones:
        for w in c.generators:
            assert signed_count(d, w) == 1


def test_unstable_bound(sqrt5_domain):
    # the hit for this point needs |a| = 9 or 10: B = 8 misses it, B + 2 does not
    with pytest.raises(UnstableBound):
        signed_count(sqrt5_domain, [1e4, 1e-4], B=8)
    assert signed_count(sqrt5_domain, [1e4, 1e-4]) == 1


def test_unit_action(sqrt5_domain):
    x = [2.0, 3.0]
    y = unit_action(sqrt5_domain, (1,), x)
    assert y[0] == pytest.approx(2.0 * 2.618033988749895)
    assert y[1] == pytest.approx(3.0 * 0.3819660112501051)


def test_sample_points_shape(cbrt2):
    pts = sample_points(cbrt2, np.random.default_rng(0), 50)
    assert len(pts) == 50
    assert all(p[0] > 0 and isinstance(p[1], complex) for p in pts)
    assert all(np.exp(-2) <= p[0] <= np.exp(2) for p in pts)


def test_suite_sqrt5(sqrt5_domain):
    rep = run_property_suite(sqrt5_domain, samples=200, seed=42, lambda_samples=1000)
    assert rep.passed, rep.failed_properties()
    assert rep.samples_accepted == 200
    assert set(rep.counts) == {1}


def test_suite_detects_flipped_mu(cbrt2_domain):
    bad = flip_mu(cbrt2_domain, 0)
    assert bad.cones[0].mu == -cbrt2_domain.cones[0].mu
    rep = run_property_suite(bad, samples=200, seed=1, lambda_samples=500,
                             relabelings=5, invariance_pairs=10)
    assert not rep.passed
    assert not rep.properties["signed_count"].passed
    assert rep.count_failures
