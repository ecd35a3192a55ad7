import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpdendro.channel import Snr, channel_llr, derived_rng, llr_from_output, sample_awgn
from lpdendro.codes import BruteForceMap
from lpdendro.lpdecode import lp_decode


def test_llr_examples():
    assert llr_from_output([0.0], 1.0)[0] == 1.0
    for s2 in (0.1, 1.0, 7.5):
        assert llr_from_output([0.5], Snr(s2))[0] == 0.0
    assert llr_from_output([1.0], Snr(4.0))[0] == -4.0


def test_llr_punctured_and_finite():
    h = llr_from_output([0.1, 0.2, 0.3], 2.0, punctured=[False, True, False])
    assert h[1] == 0.0 and h[0] == pytest.approx(1.6)
    with pytest.raises(ValueError):
        llr_from_output([np.nan], 1.0)


def test_exact_llr_is_twice_h():
    # log N(x; 0, v) / N(x; 1, v) with v = 1/(4 s2)
    s2, x = 1.7, np.array([-0.3, 0.2, 0.9])
    v = 1 / (4 * s2)
    exact = ((x - 1) ** 2 - x ** 2) / (2 * v)
    assert np.allclose(channel_llr(x, s2), exact)


@given(st.floats(0.01, 100), st.floats(-5, 5), st.floats(-5, 5))
def test_llr_affine_slope(s2, a, b):
    ha, hb = llr_from_output([a, b], s2)
    if abs(a - b) > 1e-3:
        assert math.isclose((hb - ha) / (b - a), -2 * s2, rel_tol=1e-6)


def test_snr_conversions():
    assert Snr.from_db(0.0).s_squared == 1.0
    assert Snr.from_db(10.0).s_squared == pytest.approx(10.0)
    assert Snr(4.0).noise_std == 0.25
    with pytest.raises(ValueError):
        Snr(0.0)


def test_sample_statistics():
    x = sample_awgn(Snr(1.0), 10**6, np.random.default_rng(1))
    assert abs(x.mean()) < 5 * 0.5 / 1e3
    # var of the sample variance is 2 sigma^4 / n
    assert abs(x.var() - 0.25) < 5 * math.sqrt(2 / 1e6) * 0.25


def test_sample_replay():
    a = sample_awgn(2.0, 50, np.random.default_rng(9))
    b = sample_awgn(2.0, 50, np.random.default_rng(9))
    assert np.array_equal(a, b)
    assert np.array_equal(derived_rng(3, 4).random(5), derived_rng(3, 4).random(5))
    assert not np.array_equal(derived_rng(3, 4).random(5), derived_rng(3, 5).random(5))


def test_argmin_scale_invariance(hamming):
    rng = np.random.default_rng(2)
    oracle = BruteForceMap(hamming)
    for _ in range(50):
        h = rng.normal(0.2, 1.0, 7)
        for c in (0.01, 3.0, 250.0):
            assert np.array_equal(oracle(h), oracle(c * h))
            assert np.allclose(lp_decode(hamming, h).beliefs, lp_decode(hamming, c * h).beliefs,
                               atol=1e-9)
