import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothscad import dwt
from smoothscad.errors import DepthError, ShapeError, UnsupportedFamilyError

FAMILIES = [f.value for f in dwt.Family]


def _sample_signal():
    i = np.arange(16)
    return np.sin(0.7 * i) + 0.1 * i * (i % 3)


# Periodized coefficients from an independent wavelet package, rounded to 1e-12.
# Its symmlet table differs from ours by <1e-12 per tap, hence atol 1e-10.
EXTERNAL = {
    ("haar", 2): (
        [1.496438391938, 0.115088268714, 2.915351047604, 2.013761190607],
        [-0.7522207047, 1.269116653752, -1.929803784992, 0.459936079831],
        [-0.526241373325, 0.369279702327, 0.060649522906, -0.416572981241,
         0.673108706471, -1.082708917449, -0.540582748321, 2.342797947122],
    ),
    ("db2", 2): (
        [1.095188224344, 1.664581766827, 0.245641276612, 3.53522763108],
        [0.488311410725, -1.227560434101, 0.533810550205, 1.628567410815],
        [0.067270399582, -0.039732226422, 0.687568589828, -0.592794969744,
         -0.96678155802, 1.880635864112, -0.425030585317, -1.490865372511],
    ),
    ("db3", 1): (
        [-0.088702819596, 1.081168492656, 1.472286518513, 0.323495020668,
         -0.103895293129, 0.651425881761, 3.059239673138, 2.854842763346],
        [0.499055905493, -0.143354246139, -0.884537146594, 1.104995986288,
         0.083041220799, -1.503374553996, 1.727039671223, -0.003136978584],
    ),
    ("sym4", 1): (
        [1.315097039935, 1.416813860962, 0.162855709406, -0.176468482647,
         1.027303794911, 3.225925169916, 2.456245299218, -0.177912154345],
        [-0.163735231768, -0.326611249925, -0.097275657501, 0.938343097389,
         -0.892488006044, -0.337717256262, 1.682251079731, -1.682496634118],
    ),
}


@pytest.mark.parametrize("family", FAMILIES)
def test_filter_qmf_conditions(family):
    filt = dwt.make_filter(family)
    s, o = dwt.qmf_residuals(filt.lowpass)
    assert s < 1e-10 and o < 1e-10
    n = np.arange(len(filt))
    np.testing.assert_array_equal(filt.highpass, (-1.0) ** n * filt.lowpass[::-1])
    assert abs(np.dot(filt.lowpass, filt.highpass)) < 1e-12


@pytest.mark.parametrize("family", FAMILIES)
def test_highpass_vanishing_moments(family):
    q = dwt.make_filter(family).highpass
    n = np.arange(len(q), dtype=float)
    for m in range(len(q) // 2):
        assert abs(np.sum(n**m * q)) < 1e-10 * max(1.0, len(q) ** m)


def test_filter_lengths_and_haar():
    assert [len(dwt.make_filter(f)) for f in FAMILIES] == [2, 4, 6, 8]
    np.testing.assert_allclose(dwt.make_filter("haar").lowpass, [2**-0.5, 2**-0.5], rtol=0, atol=1e-15)


def test_db2_matches_closed_form():
    r3 = math.sqrt(3.0)
    expected = np.array([1 + r3, 3 + r3, 3 - r3, 1 - r3]) / (4 * math.sqrt(2.0))
    np.testing.assert_allclose(dwt.make_filter("db2").lowpass, expected, atol=1e-14)


def test_unknown_family():
    with pytest.raises(UnsupportedFamilyError):
        dwt.make_filter("coif3")
    assert dwt.parse_family("Symmlet4") is dwt.Family.SYM4


@pytest.mark.parametrize("key", sorted(EXTERNAL))
def test_matches_external_periodization(key):
    family, depth = key
    dec = dwt.forward(_sample_signal(), family, depth)
    expected = EXTERNAL[key]
    np.testing.assert_allclose(dec.approx, expected[0], atol=1e-10)
    # expected[1:] runs coarse to fine, like dec.levels
    for j, ref in zip(dec.levels, expected[1:]):
        np.testing.assert_allclose(dec.details[j], ref, atol=1e-10)


def test_haar_impulse_hand_computed():
    x = np.zeros(8)
    x[0] = 1.0
    dec = dwt.forward(x, "haar", 3)
    np.testing.assert_allclose(dec.details[2], [2**-0.5, 0, 0, 0], atol=1e-15)
    np.testing.assert_allclose(dec.details[1], [0.5, 0], atol=1e-15)
    np.testing.assert_allclose(dec.details[0], [8**-0.5], atol=1e-15)
    np.testing.assert_allclose(dec.approx, [8**-0.5], atol=1e-15)


def test_haar_constant_synthesis():
    c = 1.7
    dec = dwt.WaveletDecomposition(np.array([math.sqrt(8) * c]), {0: np.zeros(1), 1: np.zeros(2), 2: np.zeros(4)}, 3, 3, dwt.Family.HAAR)
    np.testing.assert_allclose(dwt.inverse(dec), np.full(8, c), atol=1e-14)


@pytest.mark.parametrize("family", FAMILIES)
def test_constant_has_zero_details(family):
    dec = dwt.forward(np.full(256, 3.25), family, 5)
    assert np.max(np.abs(dec.detail_vector())) < 1e-12


@pytest.mark.parametrize("family", FAMILIES)
def test_zero_decomposition_inverts_to_zero(family):
    dec = dwt.forward(np.zeros(64), family, 3)
    assert not np.any(dwt.inverse(dec))


def test_layout_and_levels():
    dec = dwt.forward(np.arange(64.0), "db3", 2)
    assert dec.levels == [4, 5]
    assert [len(dec.details[j]) for j in dec.levels] == [16, 32]
    assert len(dec.coefficient_vector()) == 64
    assert dwt.default_depth(1024) == 6
    assert dwt.max_depth(1024, "sym4") == 7
    assert dwt.max_depth(1024, "haar") == 10
    assert dwt.max_depth(1024, "db3") == 7


def test_shape_errors():
    with pytest.raises(ShapeError):
        dwt.forward(np.zeros(100), "haar")
    with pytest.raises(DepthError):
        dwt.forward(np.zeros(16), "haar", 5)
    with pytest.raises(DepthError):
        dwt.forward(np.zeros(16), "haar", 0)
    dec = dwt.forward(np.zeros(16), "haar", 2)
    dec.details[3] = np.zeros(3)
    with pytest.raises(ShapeError):
        dwt.inverse(dec)
    with pytest.raises(ShapeError):
        dwt.inverse(dwt.forward(np.zeros(16), "haar", 2), "db2")


@pytest.mark.parametrize("family", FAMILIES)
def test_transform_matrix_is_orthogonal(family):
    n = 32
    W = np.array([dwt.forward(e, family, 3).coefficient_vector() for e in np.eye(n)]).T
    np.testing.assert_allclose(W @ W.T, np.eye(n), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    family=st.sampled_from(FAMILIES),
    J=st.integers(4, 10),
    seed=st.integers(0, 2**32 - 1),
    data=st.data(),
)
def test_reconstruction_and_parseval(family, J, seed, data):
    depth = data.draw(st.integers(1, J))
    x = np.random.default_rng(seed).normal(size=2**J)
    dec = dwt.forward(x, family, depth)
    assert np.max(np.abs(dwt.inverse(dec) - x)) < 1e-10
    e_in, e_out = np.sum(x**2), np.sum(dec.coefficient_vector() ** 2)
    assert abs(e_out - e_in) <= 1e-8 * e_in


def test_with_detail_vector_round_trip():
    dec = dwt.forward(np.random.default_rng(1).normal(size=128), "sym4", 3)
    again = dec.with_detail_vector(dec.detail_vector())
    for j in dec.levels:
        np.testing.assert_array_equal(again.details[j], dec.details[j])
    with pytest.raises(ShapeError):
        dec.with_detail_vector(np.zeros(5))
