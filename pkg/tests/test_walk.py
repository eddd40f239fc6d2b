import cmath
import math

import numpy as np
import pytest

from lzwalk import (
    ResourceLimitError,
    decay_ratio,
    distribution,
    evolve,
    initial_state,
    make_boundary_coin,
    make_bulk_coin,
    norm,
    step,
    transition_amplitude,
)
from conftest import P_REF, THETA_REF


def test_initial_state():
    s = initial_state()
    assert s.tau == 0
    assert s.psi_L[0] == 1.0 + 0.0j
    assert s.psi_R[0] == 0.0 + 0.0j
    assert norm(s) == pytest.approx(1.0, abs=0)


@pytest.mark.parametrize("gamma_tilde", [0.0, 0.3, -1.2])
def test_single_step_reflects_off_boundary(gamma_tilde, ref_coins):
    u, _ = ref_coins
    ub = make_boundary_coin(gamma_tilde)
    s = step(initial_state(), u, ub)
    assert s.tau == 1
    assert s.psi_R[1] == pytest.approx(-cmath.exp(-1j * gamma_tilde), abs=1e-15)
    assert s.psi_L[0] == 0.0 and s.psi_L[1] == 0.0 and s.psi_R[0] == 0.0


def test_two_steps_split(ref_coins):
    u, ub = ref_coins
    s = step(step(initial_state(), u, ub), u, ub)
    probs = {n: (pl, pr) for n, pl, pr in distribution(s)}
    assert probs[0][0] == pytest.approx(0.8, abs=1e-14)
    assert probs[0][1] == 0.0
    assert probs[2][1] == pytest.approx(0.2, abs=1e-14)
    assert norm(s) == pytest.approx(1.0, abs=1e-14)


def test_ballistic_limit():
    u = make_bulk_coin(1.0, 0.4, 0.0)
    ub = make_boundary_coin(0.7)
    s = initial_state()
    for tau in range(1, 51):
        s = step(s, u, ub)
        assert abs(s.psi_R[tau]) == pytest.approx(1.0, abs=1e-14)
        assert np.sum(np.abs(s.psi_L)) == 0.0


def test_norm_drift_random_coins():
    rng = np.random.default_rng(5)
    for _ in range(5):
        u = make_bulk_coin(
            float(rng.uniform(0.05, 1.0)),
            float(rng.uniform(-math.pi, math.pi)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        ub = make_boundary_coin(float(rng.uniform(-math.pi, math.pi)))
        s = initial_state()
        for _ in range(500):
            s = step(s, u, ub)
            assert abs(norm(s) - 1.0) < 1e-11


def test_parity_sites_exactly_zero(phased_coins):
    u, ub = phased_coins
    s = initial_state()
    for _ in range(31):
        s = step(s, u, ub)
    off = np.arange(s.tau + 1) % 2 != s.tau % 2
    assert np.all(s.psi_L[off] == 0.0)
    assert np.all(s.psi_R[off] == 0.0)


def test_boundary_site_has_no_right_mover(phased_coins):
    u, ub = phased_coins
    s = initial_state()
    for _ in range(20):
        s = step(s, u, ub)
        assert s.psi_R[0] == 0.0


def test_walk_matches_path_enumeration(phased_coins):
    u, ub = phased_coins
    s = initial_state()
    states = [s]
    for _ in range(12):
        s = step(s, u, ub)
        states.append(s)
    for tau in range(13):
        st = states[tau]
        for n in range(tau % 2, tau + 1, 2):
            amp_L, amp_R = transition_amplitude(n, tau, u, ub).apply()
            assert amp_L == pytest.approx(st.psi_L[n], abs=1e-10)
            assert amp_R == pytest.approx(st.psi_R[n], abs=1e-10)


def test_evolve_zero_steps_is_initial_state(ref_coins):
    u, ub = ref_coins
    s = evolve(u, ub, 0)
    assert s.tau == 0 and s.psi_L[0] == 1.0


def test_evolve_step_cap(ref_coins):
    u, ub = ref_coins
    with pytest.raises(ResourceLimitError, match="cap"):
        evolve(u, ub, 10, max_steps=5)


def test_distribution_examples(ref_coins):
    u, ub = ref_coins
    assert distribution(initial_state()) == [(0, 1.0, 0.0)]
    one = distribution(step(initial_state(), u, ub))
    assert len(one) == 1
    n, pl, pr = one[0]
    assert (n, pl) == (1, 0.0)
    assert pr == pytest.approx(1.0, abs=1e-14)


def test_distribution_sums_to_one(phased_coins):
    u, ub = phased_coins
    s = evolve(u, ub, 37)
    total = sum(pl + pr for _, pl, pr in distribution(s))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_bimodal_distribution_at_long_times(ref_coins):
    # The distribution separates into a boundary peak and a propagating
    # front; the front's group velocity is sqrt(p), so its maximum sits
    # near sqrt(p)*tau (= 89.4 here), clearly separated by a low valley.
    u, ub = ref_coins
    s = evolve(u, ub, 200)
    prob = {n: pl + pr for n, pl, pr in distribution(s)}
    sites = sorted(prob)
    edge_peak = max(prob[n] for n in sites if n <= 2)
    front_sites = [n for n in sites if n >= 30]
    front_peak_site = max(front_sites, key=lambda n: prob[n])
    front_expected = math.sqrt(P_REF) * 200
    assert prob[0] == edge_peak  # boundary maximum sits at n = 0
    assert 0.75 * front_expected <= front_peak_site <= 1.05 * front_expected
    valley = max(prob[n] for n in sites if 20 <= n <= 60)
    assert valley < 0.3 * prob[front_peak_site]
    assert valley < 0.1 * edge_peak


def test_near_boundary_mass_approaches_edge_weight(ref_coins):
    # time-averaged probability within n <= 10 tends to the edge weight 1-r
    u, ub = ref_coins
    expected = 1.0 - decay_ratio(P_REF, THETA_REF)
    s = initial_state()
    masses = []
    for tau in range(1, 201):
        s = step(s, u, ub)
        if tau >= 150:
            masses.append(
                float(np.sum(np.abs(s.psi_L[:11]) ** 2 + np.abs(s.psi_R[:11]) ** 2))
            )
    assert np.mean(masses) == pytest.approx(expected, abs=0.02)
