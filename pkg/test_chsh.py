#!/usr/bin/env python3
"""
Tests for the CHSH Bell operator, maximal violation and optimal settings
"""

import numpy as np
import pytest

from chsh_toolkit.core.errors import DegenerateStateError, DomainError
from chsh_toolkit.models.qstate import (
    StateKind,
    bell_projector,
    make_rng,
    maximally_mixed,
    product_state,
    random_unitary,
    sample_state,
    to_correlation,
)
from chsh_toolkit.processing.chsh import (
    CLASSICAL_BOUND,
    TSIRELSON,
    BellSettings,
    bell_diagonal_beta,
    bell_operator,
    beta_from_correlation,
    brute_force_beta,
    chsh_value,
    correlation_value,
    max_over_unitaries,
    max_violation,
    optimal_settings,
    settings_matrix,
)
from chsh_toolkit.processing.families import pure_schmidt, werner

_SQRT2 = np.sqrt(2.0)


def test_reference_values():
    assert max_violation(bell_projector("phi+")).beta == pytest.approx(_SQRT2, abs=1e-12)
    assert max_violation(maximally_mixed()).beta == pytest.approx(0.0, abs=1e-12)
    assert max_violation(product_state("00")).beta == pytest.approx(1.0, abs=1e-12)
    assert max_violation(werner(0.9)).beta == pytest.approx(1.27279, abs=1e-5)


def test_violates_flag():
    assert max_violation(bell_projector("psi-")).violates
    assert not max_violation(werner(0.5)).violates


@pytest.mark.parametrize("c", [0.0, 0.3, 0.6, 1.0])
def test_pure_states_on_upper_curve(c):
    assert max_violation(pure_schmidt(c)).beta == pytest.approx(np.sqrt(1.0 + c * c), abs=1e-10)


def test_beta_from_correlation_matches_state_route():
    rho = sample_state(make_rng(31, 0))
    assert beta_from_correlation(to_correlation(rho)).beta == pytest.approx(max_violation(rho).beta, abs=1e-15)


def test_optimal_settings_attain_beta():
    rng = make_rng(40)
    for kind in (StateKind.MIXED_HS, StateKind.PURE_HAAR, StateKind.BELL_DIAGONAL):
        for _ in range(10):
            rho = sample_state(rng, kind)
            settings, beta = optimal_settings(rho)
            assert chsh_value(rho, settings) == pytest.approx(beta.beta, abs=1e-9)
            assert correlation_value(to_correlation(rho).block, settings) == pytest.approx(beta.beta, abs=1e-9)


def test_optimal_settings_for_singlet_are_unit_vectors():
    settings, beta = optimal_settings(bell_projector("psi-"))
    assert beta.beta == pytest.approx(_SQRT2)
    for v in (settings.a, settings.b, settings.c, settings.d):
        assert np.linalg.norm(v) == pytest.approx(1.0)
    assert len(settings.as_list()) == 12


def test_optimal_settings_degenerate_state():
    with pytest.raises(DegenerateStateError):
        optimal_settings(maximally_mixed())


def test_settings_must_be_unit_vectors():
    e = np.array([1.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        BellSettings(e, e, e, 2.0 * e)
    with pytest.raises(DomainError):
        BellSettings(e, e, e, np.array([1.0, 0.0]))


def test_bell_operator_is_hermitian_and_bounded():
    rng = make_rng(7)
    s = BellSettings.normalized(*rng.standard_normal((4, 3)))
    b = bell_operator(s).matrix
    np.testing.assert_allclose(b, b.conj().T, atol=1e-14)
    assert np.max(np.abs(np.linalg.eigvalsh(b))) <= TSIRELSON + 1e-12


def test_bell_operator_with_equal_b_settings_is_xx():
    x, y = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    b = bell_operator(BellSettings(x, y, x, x))
    np.testing.assert_allclose(b.matrix, np.kron(sigma_x, sigma_x), atol=1e-15)


def test_settings_matrix_expectation_agrees():
    rng = make_rng(8)
    rho = sample_state(rng)
    s = BellSettings.normalized(*rng.standard_normal((4, 3)))
    t = settings_matrix(s)
    assert t.shape == (3, 3)
    assert correlation_value(to_correlation(rho).block, s) == pytest.approx(chsh_value(rho, s), abs=1e-12)


def test_tsirelson_bound_on_samples():
    rng = make_rng(9)
    for _ in range(200):
        assert max_violation(sample_state(rng)).beta <= TSIRELSON + 1e-8


def test_brute_force_oracle():
    rng = make_rng(10)
    for rho in (bell_projector("phi+"), werner(0.8), sample_state(rng, StateKind.PURE_HAAR)):
        beta = max_violation(rho).beta
        found = brute_force_beta(rho, n_random=64, refine=True, seed=rng)
        assert found <= beta + 1e-9
        assert found == pytest.approx(beta, abs=1e-3)


def test_brute_force_rejects_zero_samples():
    with pytest.raises(DomainError):
        brute_force_beta(maximally_mixed(), n_random=0)


def test_bell_diagonal_formula():
    assert bell_diagonal_beta([1.0, 0.0, 0.0, 0.0]) == pytest.approx(_SQRT2)
    assert bell_diagonal_beta([0.25, 0.25, 0.25, 0.25]) == pytest.approx(0.0)
    p = 0.7
    assert bell_diagonal_beta([p + (1 - p) / 4, (1 - p) / 4, (1 - p) / 4, (1 - p) / 4]) == pytest.approx(_SQRT2 * p)


def test_bell_diagonal_formula_rejects_bad_weights():
    with pytest.raises(DomainError):
        bell_diagonal_beta([0.1, 0.2, 0.3, 0.4])
    with pytest.raises(DomainError):
        bell_diagonal_beta([0.5, 0.5, 0.5, -0.5])
    with pytest.raises(DomainError):
        bell_diagonal_beta([1.0, 0.0, 0.0])


def test_max_over_unitaries_bounds_rotated_states():
    rng = make_rng(11)
    s, _ = optimal_settings(bell_projector("phi+"))
    b = bell_operator(s)
    assert max_over_unitaries([1.0, 0.0, 0.0, 0.0], b) == pytest.approx(_SQRT2, abs=1e-10)
    spectrum = rng.dirichlet(np.ones(4))
    bound = max_over_unitaries(spectrum, b)
    for _ in range(50):
        u = random_unitary(rng, 4)
        rho = u @ np.diag(spectrum) @ u.conj().T
        assert np.real(np.trace(rho @ b.matrix)) <= bound + 1e-9


def test_classical_bound_constant():
    assert CLASSICAL_BOUND == 1.0
    assert TSIRELSON == pytest.approx(_SQRT2)
