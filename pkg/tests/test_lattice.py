import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwequiv import lattice as lat
from qwequiv.coin import EulerAngles, from_euler
from qwequiv.errors import GuardViolationError, IncommensurateRingPhaseError, InvalidInputError
from qwequiv.lattice import LatticeConfig, localized_state, product_state

from conftest import assert_close

UP, DOWN = (1, 0), (0, 1)


@pytest.fixture
def padded():
    return LatticeConfig(size=21, origin_index=10)


def random_state(rng, config, sites=range(-3, 4)):
    amps = np.zeros((config.size, 2), dtype=complex)
    rows = [config.index(j) for j in sites]
    amps[rows] = rng.normal(size=(len(rows), 2)) + 1j * rng.normal(size=(len(rows), 2))
    return lat.WalkerCoinState(amps / np.linalg.norm(amps), config)


# ---- configuration -----------------------------------------------------------


def test_config_validation():
    with pytest.raises(InvalidInputError):
        LatticeConfig(size=1)
    with pytest.raises(InvalidInputError):
        LatticeConfig(size=4, guard=0)
    with pytest.raises(InvalidInputError):
        LatticeConfig(size=4, guard=2)


def test_for_walk_sizes():
    cfg = LatticeConfig.for_walk(5, (0, 0))
    assert cfg.size == 1 + 2 * (5 + 2)
    assert cfg.sites[cfg.origin_index] == 0


# ---- product_state -----------------------------------------------------------


def test_product_delta_up(padded):
    s = product_state({0: 1.0}, UP, padded)
    assert s.amplitude(0)[0] == 1.0
    assert np.count_nonzero(s.amplitudes) == 1


def test_product_delta_superposed_coin(padded):
    s = product_state({0: 1.0}, (1 / math.sqrt(2), 1j / math.sqrt(2)), padded)
    assert_close(s.amplitude(0), [1 / math.sqrt(2), 1j / math.sqrt(2)])


def test_product_uniform_two_sites(padded):
    s = product_state({0: 1.0, 1: 1.0}, UP, padded)
    assert_close(s.amplitude(0), [1 / math.sqrt(2), 0])
    assert_close(s.amplitude(1), [1 / math.sqrt(2), 0])
    assert s.norm == pytest.approx(1.0, abs=1e-15)


def test_product_normalizes_and_rejects_zero(padded):
    s = product_state({2: 3.0}, (0, 2j), padded)
    assert s.norm == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        product_state({0: 0.0}, UP, padded)
    with pytest.raises(InvalidInputError):
        product_state({0: 1.0}, (0, 0), padded)


def test_site_major_layout(padded):
    s = product_state({0: 1.0}, (0.6, 0.8j), padded)
    i = padded.index(0)
    assert_close(s.flat[2 * i:2 * i + 2], [0.6, 0.8j])


# ---- shifts ------------------------------------------------------------------


def test_shift_right_moves_delta(padded):
    s = lat.apply_shift(localized_state(0, UP, padded), "right")
    assert lat.position_distribution(s) == {1: 1.0}
    assert s.amplitude(1)[0] == 1.0


def test_ring_shift_wraps():
    ring = LatticeConfig.ring(4)
    s = lat.apply_shift(localized_state(3, DOWN, ring), "right")
    assert s.amplitude(0)[1] == 1.0


def test_shift_right_then_left_is_exact(rng, padded):
    s = random_state(rng, padded)
    back = lat.apply_shift(lat.apply_shift(s, "right"), "left")
    assert np.array_equal(back.amplitudes, s.amplitudes)


def test_conditional_shift_examples(padded):
    s = lat.conditional_shift(localized_state(0, UP, padded))
    assert lat.position_distribution(s) == {1: 1.0}
    s = lat.conditional_shift(product_state({0: 1.0}, (1, 1), padded))
    assert_close(s.amplitude(1), [1 / math.sqrt(2), 0])
    assert_close(s.amplitude(-1), [0, 1 / math.sqrt(2)])
    s = lat.conditional_shift(lat.conditional_shift(localized_state(0, UP, padded)))
    assert s.amplitude(2)[0] == 1.0


def test_guard_violation():
    cfg = LatticeConfig(size=5, origin_index=2)
    s = localized_state(0, UP, cfg)
    s = lat.conditional_shift(s)  # site 1 = storage 3, adjacent to the guard
    with pytest.raises(GuardViolationError):
        lat.conditional_shift(s)
    with pytest.raises(GuardViolationError):
        lat.apply_shift(localized_state(-1, UP, cfg), "left")


def test_ring_never_raises_guard():
    ring = LatticeConfig.ring(3)
    s = localized_state(0, (1, 1), ring)
    for _ in range(10):
        s = lat.conditional_shift(s)
    assert s.norm == pytest.approx(1.0)


# ---- coin --------------------------------------------------------------------


def test_apply_identity_coin(rng, padded):
    s = random_state(rng, padded)
    assert_close(lat.apply_coin(s, np.eye(2)).amplitudes, s.amplitudes)


@pytest.mark.parametrize("theta", [0.0, 0.7, math.pi / 2, math.pi])
def test_apply_theta_coin_first_column(padded, theta):
    s = lat.apply_coin(localized_state(0, UP, padded), from_euler(EulerAngles(0, theta, 0)))
    assert_close(s.amplitude(0), [math.cos(theta / 2), -math.sin(theta / 2)])


def test_coin_then_inverse(rng, padded):
    u = from_euler(EulerAngles(0.3, 1.2, -2.0))
    s = random_state(rng, padded)
    assert_close(lat.apply_coin(lat.apply_coin(s, u), u.conj().T).amplitudes, s.amplitudes)


# ---- quasi-momentum shift ----------------------------------------------------


def test_qm_shift_zero_and_two_pi(rng, padded):
    s = random_state(rng, padded)
    assert np.array_equal(lat.apply_quasimomentum_shift(s, 0.0).amplitudes, s.amplitudes)
    assert_close(lat.apply_quasimomentum_shift(s, 2 * math.pi).amplitudes, s.amplitudes)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_qm_shift_composes(phi, chi):
    cfg = LatticeConfig(size=21, origin_index=10)
    s = random_state(np.random.default_rng(5), cfg, sites=range(-8, 9))
    two = lat.apply_quasimomentum_shift(lat.apply_quasimomentum_shift(s, phi), chi)
    # independent route: explicit per-site phases
    expected = s.amplitudes * np.exp(1j * (phi + chi) * np.arange(-10, 11))[:, None]
    assert_close(two.amplitudes, expected, atol=1e-12)
    assert_close(lat.apply_quasimomentum_shift(s, phi + chi).amplitudes, expected, atol=1e-12)


@given(st.floats(-10, 10))
def test_qm_shift_keeps_distribution(phi):
    cfg = LatticeConfig(size=21, origin_index=10)
    s = random_state(np.random.default_rng(6), cfg)
    p0, p1 = lat.site_probabilities(s), lat.site_probabilities(lat.apply_quasimomentum_shift(s, phi))
    assert_close(p0, p1, atol=1e-15)


@given(st.floats(-4, 4))
def test_qm_shift_conjugates_translation(phi):
    # E_phi R E_phi^dagger = exp(i phi) R on interior support
    cfg = LatticeConfig(size=21, origin_index=10)
    s = random_state(np.random.default_rng(7), cfg)
    lhs = lat.apply_quasimomentum_shift(lat.apply_shift(lat.apply_quasimomentum_shift(s, -phi), "right"), phi)
    rhs = np.exp(1j * phi) * lat.apply_shift(s, "right").amplitudes
    assert_close(lhs.amplitudes, rhs)


@pytest.mark.parametrize("m", [0, 1, 3, -5])
def test_ring_commensurate_identity_including_wrap(rng, m):
    ring = LatticeConfig.ring(8, origin_index=3)
    phi = 2 * math.pi * m / 8
    s = random_state(rng, ring, sites=range(-3, 5))
    lhs = lat.apply_quasimomentum_shift(lat.apply_shift(lat.apply_quasimomentum_shift(s, -phi), "right"), phi)
    assert_close(lhs.amplitudes, np.exp(1j * phi) * lat.apply_shift(s, "right").amplitudes)


def test_ring_rejects_incommensurate_phase():
    ring = LatticeConfig.ring(8)
    with pytest.raises(IncommensurateRingPhaseError):
        lat.apply_quasimomentum_shift(localized_state(0, UP, ring), 0.3)
    lat.apply_quasimomentum_shift(localized_state(0, UP, ring), 0.3, strict=False)


def test_unitarity_of_every_operation(rng, padded):
    s = random_state(rng, padded)
    u = from_euler(EulerAngles(1.0, 2.0, 3.0))
    for out in (lat.apply_shift(s, "left"), lat.conditional_shift(s), lat.apply_coin(s, u),
                lat.apply_quasimomentum_shift(s, 0.77)):
        assert abs(out.norm - 1.0) <= 1e-12


# ---- statistics --------------------------------------------------------------


def test_distribution_examples(padded):
    assert lat.position_distribution(localized_state(0, UP, padded)) == {0: 1.0}
    s = lat.conditional_shift(product_state({0: 1.0}, (1, 1), padded))
    dist = lat.position_distribution(s)
    assert dist.keys() == {1, -1}
    assert dist[1] == pytest.approx(0.5) and dist[-1] == pytest.approx(0.5)


@pytest.mark.parametrize("dist, expected", [
    ({0: 1.0}, (0, 0, 0)),
    ({1: 0.5, -1: 0.5}, (0, 1, 1)),
    ({2: 0.5, 0: 0.5}, (1, 1, 1)),
])
def test_moments(dist, expected):
    assert lat.moments(dist) == pytest.approx(expected)


def test_moments_rejects_unnormalized():
    with pytest.raises(InvalidInputError):
        lat.moments({0: 0.5})


def test_total_variation():
    assert lat.total_variation({0: 1.0}, {0: 1.0}) == 0.0
    assert lat.total_variation({0: 1.0}, {1: 1.0}) == 1.0


# ---- exports -----------------------------------------------------------------


def test_distribution_csv(tmp_path):
    path = tmp_path / "d.csv"
    lat.write_distribution_csv({2: 0.1, -1: 0.9}, path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["site", "probability"]
    assert [r[0] for r in rows[1:]] == ["-1", "2"]
    assert float(rows[2][1]) == 0.1
    assert rows[2][1] == f"{0.1:.17g}"


def test_state_csv(tmp_path, padded):
    path = tmp_path / "s.csv"
    lat.write_state_csv(product_state({0: 1.0}, (0.6, 0.8j), padded), path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["site", "re_up", "im_up", "re_down", "im_down"]
    assert len(rows) == padded.size + 1
    row0 = next(r for r in rows[1:] if r[0] == "0")
    assert [float(v) for v in row0[1:]] == pytest.approx([0.6, 0.0, 0.0, 0.8])
