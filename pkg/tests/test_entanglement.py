import numpy as np
import pytest

from bellquant import concurrence, concurrence_max, entanglement_report, negativity
from bellquant.entanglement import concurrence_purity_form, concurrence_schmidt_form
from bellquant.states import (
    bell_state,
    make_state,
    max_entangled_state,
    product_state,
    remark1_state,
    schmidt,
    schmidt_diagonal_state,
)
from bellquant.verification import haar_unitary

from conftest import haar_states


def negativity_by_partial_transpose(psi):
    """Brute-force oracle: (||rho^{T_B}||_1 - 1) / 2."""
    d1, d2 = psi.dims
    r = psi.density().reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)
    return (np.abs(np.linalg.eigvalsh(r)).sum() - 1) / 2


@pytest.mark.parametrize(
    "psi, c",
    [(bell_state(), 1.0), (product_state(3, 2), 0.0), (remark1_state(), 0.0),
     (schmidt_diagonal_state([0.8, 0.2]), 0.8)],
)
def test_concurrence_examples(psi, c):
    assert abs(concurrence(psi) - c) < 1e-12


@pytest.mark.parametrize("d, c", [(2, 1.0), (1, 0.0), (3, np.sqrt(4 / 3))])
def test_concurrence_max_examples(d, c):
    assert abs(concurrence_max(d) - c) < 1e-15
    assert abs(concurrence_max(3) - 1.154700) < 1e-6


@pytest.mark.parametrize(
    "psi, n",
    [(bell_state(), 0.5), (product_state(2, 2), 0.0), (schmidt_diagonal_state([0.8, 0.2]), 0.4)],
)
def test_negativity_examples(psi, n):
    assert abs(negativity(psi) - n) < 1e-12
    assert abs(negativity_by_partial_transpose(psi) - n) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_ensemble_properties(d):
    for psi in haar_states(d, d + 1 if d < 5 else d, 200, base=1000):
        c, n = concurrence(psi), negativity(psi)
        r = schmidt(psi).rank
        assert abs(concurrence_purity_form(psi) - concurrence_schmidt_form(schmidt(psi).lambdas)) < 1e-9
        assert 0 <= 2 * np.sqrt(2) * n <= r * (r - 1) * c + 1e-9
        assert 0 <= c <= concurrence_max(min(psi.dims)) + 1e-12
        assert abs(n - negativity_by_partial_transpose(psi)) < 1e-9


@pytest.mark.parametrize("d", range(2, 7))
def test_max_entangled_attains_bound(d):
    assert abs(concurrence(max_entangled_state(d)) - concurrence_max(d)) < 1e-10


def test_local_unitary_invariance(rng):
    for psi in haar_states(3, 4, 100):
        moved = psi.apply_local(haar_unitary(rng, 3), haar_unitary(rng, 4))
        assert abs(concurrence(moved) - concurrence(psi)) < 1e-9
        assert abs(negativity(moved) - negativity(psi)) < 1e-9


def test_separability_threshold():
    assert entanglement_report(product_state(2, 3)).separable
    assert entanglement_report(remark1_state()).separable
    near = make_state(2, 2, [1, 0, 0, 1e-4])
    rep = entanglement_report(near)
    assert not rep.separable and rep.rank == 2
    # rank cut is on lambda_2 / lambda_1 = 1e-12 < 1e-10, while C = 2e-6 is above 1e-8
    tiny = entanglement_report(make_state(2, 2, [1, 0, 0, 1e-6]))
    assert tiny.rank == 1 and not tiny.separable


def test_report_gamma_two_qubit_only():
    rep = entanglement_report(schmidt_diagonal_state([0.8, 0.2]))
    assert abs(rep.gamma - 0.6) < 1e-12
    assert entanglement_report(max_entangled_state(3)).gamma is None
