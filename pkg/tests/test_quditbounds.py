import itertools

import numpy as np
import pytest

from bellquant import beta, big_k, bounds_report, gp_chsh_value, k_lower_bound_check, lb_thm4
from bellquant.entanglement import concurrence, concurrence_max
from bellquant.errors import ContractViolation
from bellquant.quditbounds import ub_general
from bellquant.states import (
    SchmidtData,
    bell_state,
    max_entangled_state,
    product_state,
    schmidt,
    schmidt_diagonal_state,
)

from conftest import haar_states


def sd_of(lams):
    return schmidt(schmidt_diagonal_state(lams))


def k_by_enumeration(lams):
    """Oracle: explicit pairing loop over the sorted list."""
    lam = sorted(lams, reverse=True)
    total = 0.0
    i = 0
    while i + 1 < len(lam):
        total += np.sqrt(lam[i] * lam[i + 1])
        i += 2
    return 2 * total


@pytest.mark.parametrize("lams, b", [([1.0], 1.0), ([0.6, 0.4], 0.0), ([1 / 3] * 3, 1 / 3)])
def test_beta(lams, b):
    assert abs(beta(sd_of(lams)) - b) < 1e-12


@pytest.mark.parametrize(
    "lams, k",
    [([0.8, 0.2], 0.8), ([1 / 3] * 3, 2 / 3), ([0.4, 0.3, 0.2, 0.1], 2 * (np.sqrt(0.12) + np.sqrt(0.02)))],
)
def test_big_k(lams, k):
    got = big_k(sd_of(lams))
    assert abs(got - k) < 1e-12
    assert abs(got - k_by_enumeration(lams)) < 1e-12
    assert big_k(sd_of([1.0])) == 0.0


def test_big_k_rank4_decimal():
    assert abs(big_k(sd_of([0.4, 0.3, 0.2, 0.1])) - 0.975663) < 1e-6


@pytest.mark.parametrize(
    "lams, gp",
    [([1.0], 1.0), ([0.5, 0.5], np.sqrt(2)), ([1 / 3] * 3, 1 / 3 + 2 * np.sqrt(2) / 3)],
)
def test_gp_value(lams, gp):
    assert abs(gp_chsh_value(sd_of(lams)) - gp) < 1e-12
    assert abs(gp_chsh_value(sd_of([1 / 3] * 3)) - 1.276142) < 1e-6


def test_gp_rank_one_is_exactly_one():
    assert gp_chsh_value(schmidt(product_state(3, 4))) == 1.0


def test_gp_permutation_invariant(rng):
    for psi in haar_states(5, 5, 50):
        sd = schmidt(psi)
        shuffled = SchmidtData(rng.permutation(sd.lambdas), sd.rank, sd.basis1, sd.basis2, sd.tol_used)
        assert gp_chsh_value(shuffled) == gp_chsh_value(sd)
        assert big_k(shuffled) == big_k(sd)


def test_lb_thm4_examples():
    sd = sd_of([0.8, 0.2])
    assert abs(lb_thm4(sd, 0.8) - np.sqrt(1.64)) < 1e-12
    q = sd_of([1 / 3] * 3)
    c = np.sqrt(4 / 3)
    assert abs(lb_thm4(q, c) - np.sqrt(1 + (4 / 3) / 9)) < 1e-12
    assert abs(lb_thm4(q, c) - 1.071517) < 1e-6
    assert lb_thm4(sd_of([1.0]), 0.0) == 1.0
    with pytest.raises(ContractViolation):
        lb_thm4(sd, 0.7)


def test_k_slack():
    assert k_lower_bound_check(sd_of([0.8, 0.2]), 0.8) == 0.0
    q = sd_of([1 / 3] * 3)
    assert abs(k_lower_bound_check(q, np.sqrt(4 / 3)) - (2 / 3 - np.sqrt(4 / 3) / 3)) < 1e-12
    assert abs(k_lower_bound_check(q, np.sqrt(4 / 3)) - 0.281766) < 1e-6
    for psi in haar_states(4, 4, 200):
        sd = schmidt(psi)
        assert k_lower_bound_check(sd, concurrence(psi)) >= -1e-12
    with pytest.raises(ContractViolation):
        k_lower_bound_check(sd_of([1.0]), 0.0)


def test_bounds_report_examples():
    b = bounds_report(bell_state())
    assert abs(b.lb_thm4 - np.sqrt(2)) < 1e-12
    assert abs(b.ub_pure - 3) < 1e-12 and b.ub_dim == 3
    q = bounds_report(max_entangled_state(3))
    assert abs(q.lb_thm4 - 1.071517) < 1e-6
    assert abs(q.gp_value - 1.276142) < 1e-6
    assert abs(q.ub_pure - 5) < 1e-12 and q.ub_dim == 5
    assert abs(q.gp_raw - 2 * q.gp_value) < 1e-15
    for d1, d2 in [(2, 2), (3, 5), (4, 4)]:
        p = bounds_report(product_state(d1, d2))
        assert p.lb_thm4 == p.lb_sqrt1K2 == p.gp_value == 1.0
        assert p.ub_pure == 1.0 and p.rank == 1


@pytest.mark.parametrize("d1,d2", list(itertools.product([2, 3, 4, 5], repeat=2)))
def test_chain_on_ensemble(d1, d2):
    for psi in haar_states(d1, d2, 100, base=500):
        b = bounds_report(psi)
        assert b.chain_violation() <= 1e-12
        assert b.ub_general <= b.ub_dim + 1e-12
        if b.rank == 2:
            assert abs(b.bigK - b.concurrence) < 1e-10
            assert abs(b.lb_thm4 - np.sqrt(1 + b.concurrence**2)) < 1e-10


@pytest.mark.parametrize("d", range(2, 8))
def test_upper_bounds_coincide_at_max_entanglement(d):
    assert abs(ub_general(d, concurrence_max(d)) - (2 * d - 1)) < 1e-12


def test_eq37_on_grid():
    for g in np.linspace(0, 1, 11):
        for k in np.linspace(0, 2, 21):
            assert g + np.sqrt((1 - g) ** 2 + k * k) >= np.sqrt(1 + k * k) - 1e-15


def test_theorem3_grid():
    for c in np.linspace(0, 1, 11):
        assert np.sqrt(1 + c * c) <= 1 + 2 * c + 1e-12
