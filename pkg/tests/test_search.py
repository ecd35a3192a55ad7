import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpdendro.codes import enumerate_codewords, hamming_7_4, tanner_155
from lpdendro.dendro import dendro_transform
from lpdendro.lpdecode import Kind
from lpdendro.search import (
    InitialNoiseError,
    SearchCode,
    SearchCollapsed,
    SearchConfig,
    effective_distance,
    instanton,
    median_noise,
    pseudo_codeword_search,
    random_initial_noise,
    search_once,
)

beliefs = st.lists(st.floats(0.0, 1.0), min_size=2, max_size=30).filter(lambda v: sum(v) > 1e-3)


def test_effective_distance_examples():
    assert effective_distance(np.r_[np.ones(20), np.zeros(135)]) == 20.0
    assert effective_distance([0.5, 0.5, 0.5, 0.5, 0, 0, 0]) == 4.0
    assert effective_distance([1.0, 0.5, 0.5, 0, 0]) == 8 / 3
    with pytest.raises(ValueError):
        effective_distance(np.zeros(4))


def test_effective_distance_skips_punctured():
    s = [1.0, 0.5, 0.5, 1.0, 1.0]
    assert effective_distance(s, [False, False, False, True, True]) == 8 / 3
    with pytest.raises(ValueError):
        effective_distance([0.0, 1.0], [False, True])


def test_median_examples():
    assert median_noise([1.0, 1.0, 0.0, 0.0]).tolist() == [0.5, 0.5, 0.0, 0.0]
    assert median_noise([1.0, 0.5, 0.5]).tolist() == [2 / 3, 1 / 3, 1 / 3]
    for c in sorted(enumerate_codewords(hamming_7_4()))[1:]:
        c = np.array(c, dtype=float)
        assert np.array_equal(median_noise(c), 0.5 * c)
    y = median_noise([1.0, 0.5, 0.5, 0.7], [False, False, False, True])
    assert y.tolist() == [2 / 3, 1 / 3, 1 / 3, 0.0]


@given(beliefs)
def test_median_equals_instanton(s):
    assert np.allclose(median_noise(s), instanton(s), rtol=1e-14, atol=1e-300)


@given(beliefs)
def test_balance_at_median(s):
    s = np.asarray(s)
    h = 1.0 - 2.0 * median_noise(s)
    assert abs(np.dot(h, s)) < 1e-9 * max(1.0, s.sum())


@given(beliefs, st.floats(1e-3, 1e3))
def test_scale_invariance(s, c):
    assert effective_distance(np.asarray(s) * c) == pytest.approx(effective_distance(s), rel=1e-12)


@given(beliefs)
def test_distance_bounds(s):
    assert 1 - 1e-12 <= effective_distance(s) <= len(s) + 1e-12


def test_fixed_point_on_integral_codeword(hamming):
    for c in enumerate_codewords(hamming):
        c = np.array(c, dtype=float)
        if c.sum() != 3:
            continue
        res = pseudo_codeword_search(hamming, 0.6 * c)
        assert res.kind is Kind.CODEWORD
        assert res.d_eff == 3.0
        assert np.array_equal(res.instanton, 0.5 * c)
        assert res.straddles


def test_search_on_dendro_reports_original_bits():
    H = hamming_7_4()
    D = dendro_transform(H)
    rng = np.random.default_rng(0)
    for _ in range(10):
        res = search_once(D, rng)
        assert res.pseudo_codeword.beliefs.shape == (7,)
        assert res.instanton.shape == (7,)
        assert res.d_eff == pytest.approx(effective_distance(res.pseudo_codeword.beliefs))
        assert np.array_equal(res.instanton, median_noise(res.pseudo_codeword.beliefs))
        assert 1 <= res.d_eff <= 7
        assert res.straddles
        assert abs(res.balance) < 1e-9


def test_collapse_raises(hamming):
    with pytest.raises(SearchCollapsed):
        pseudo_codeword_search(hamming, np.zeros(7))
    with pytest.raises(ValueError):
        pseudo_codeword_search(hamming, np.ones(3))


def test_initial_noise_policy():
    code = SearchCode(hamming_7_4())
    big = SearchConfig(init_scale=5.0)
    x = random_initial_noise(code, np.random.default_rng(1), big)
    shape = np.abs(np.random.default_rng(1).standard_normal(7))
    assert np.array_equal(x, 5.0 * shape)
    small = SearchConfig(init_scale=1e-4)
    x = random_initial_noise(code, np.random.default_rng(1), small)
    ratio = x / (1e-4 * shape)
    assert np.allclose(ratio, ratio[0]) and ratio[0] >= 2
    assert np.log2(ratio[0]) == round(np.log2(ratio[0]))
    with pytest.raises(InitialNoiseError):
        random_initial_noise(code, np.random.default_rng(1), SearchConfig(init_scale=0.0))
    a = random_initial_noise(code, np.random.default_rng(5))
    b = random_initial_noise(code, np.random.default_rng(5))
    assert np.array_equal(a, b)


def test_tanner_search_smoke():
    D = dendro_transform(tanner_155())
    code = SearchCode(D)
    dec = code.decoder()
    rng = np.random.default_rng(3)
    res = search_once(code, rng, decoder=dec)
    assert res.iterations < SearchConfig().max_iterations
    assert res.straddles and abs(res.balance) < 1e-9
    assert 16 <= res.d_eff <= 155
    # nonincreasing within tolerance on the whole trajectory
    d = [t[0] for t in res.trajectory]
    assert d[-1] <= d[0] + 1e-9
