#!/usr/bin/env python3
"""
Tests for the two-qubit state model: validation, correlation matrices and sampling
"""

import numpy as np
import pytest

from chsh_toolkit.core.errors import DomainError, StateValidationError, UnphysicalCorrelationsError
from chsh_toolkit.models.qstate import (
    BELL_ORDER,
    DensityMatrix,
    StateKind,
    apply_local_unitaries,
    bell_projector,
    entropy,
    from_correlation,
    make_rng,
    maximally_mixed,
    product_state,
    purity,
    random_local_unitary,
    reduced_states,
    sample_state,
    to_correlation,
    validate,
)
from chsh_toolkit.processing.families import werner


def test_bell_state_correlation_matrix():
    entries = to_correlation(bell_projector("phi+")).entries
    np.testing.assert_allclose(entries, np.diag([1.0, 1.0, -1.0, 1.0]), atol=1e-12)


def test_singlet_correlation_block():
    block = to_correlation(bell_projector("psi-")).block
    np.testing.assert_allclose(block, -np.eye(3), atol=1e-12)


def test_local_vectors_of_product_state():
    corr = to_correlation(product_state("01"))
    np.testing.assert_allclose(corr.local_a, [0.0, 0.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(corr.local_b, [0.0, 0.0, -1.0], atol=1e-12)


def test_correlation_round_trip_random_state():
    rho = sample_state(make_rng(17, 0))
    back = from_correlation(to_correlation(rho))
    np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-12)


def test_from_correlation_rejects_unphysical():
    with pytest.raises(UnphysicalCorrelationsError):
        from_correlation(np.eye(4))


def test_from_correlation_requires_unit_corner():
    with pytest.raises(DomainError):
        from_correlation(2.0 * np.eye(4))


def test_ingest_clips_rounding_level_negative_eigenvalue():
    mat = np.diag([0.5, 0.5 + 5e-9, 0.0, -5e-9]).astype(complex)
    rho = DensityMatrix.ingest(mat)
    assert rho.spectrum()[-1] >= 0.0
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize(
    "mat, message",
    [
        (np.array([[0.5, 0.1, 0, 0], [0, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]), "Hermitian"),
        (np.eye(4) / 2.0, "trace"),
        (np.diag([0.6, 0.5, 0.0, -0.1]), "positive semidefinite"),
    ],
)
def test_ingest_rejects_invalid_matrices(mat, message):
    with pytest.raises(StateValidationError) as info:
        DensityMatrix.ingest(mat)
    assert message in str(info.value)
    assert info.value.report is not None
    assert not info.value.report.is_valid


def test_validate_reports_shape():
    report = validate(np.eye(3) / 3.0)
    assert not report.is_valid
    assert "4x4" in report.errors[0]


def test_density_matrix_is_read_only():
    rho = maximally_mixed()
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_reduced_states():
    rho_a, rho_b = reduced_states(bell_projector("phi+"))
    np.testing.assert_allclose(rho_a, np.eye(2) / 2.0, atol=1e-12)
    np.testing.assert_allclose(rho_b, np.eye(2) / 2.0, atol=1e-12)
    rho_a, rho_b = reduced_states(product_state("01"))
    np.testing.assert_allclose(rho_a, np.diag([1.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(rho_b, np.diag([0.0, 1.0]), atol=1e-12)


def test_purity_and_entropy():
    assert purity(maximally_mixed()) == pytest.approx(0.25)
    assert entropy(maximally_mixed()) == pytest.approx(2.0)
    assert purity(bell_projector("psi+")) == pytest.approx(1.0)
    assert entropy(bell_projector("psi+")) == pytest.approx(0.0, abs=1e-12)


def test_werner_purity_and_entropy_from_spectrum():
    rho = werner(0.5)
    np.testing.assert_allclose(rho.spectrum(), [0.625, 0.125, 0.125, 0.125], atol=1e-12)
    assert purity(rho) == pytest.approx(0.4375, abs=1e-12)
    assert entropy(rho) == pytest.approx(-0.625 * np.log2(0.625) + 3 * 0.125 * 3.0, abs=1e-12)
    assert entropy(rho) == pytest.approx(1.5488, abs=1e-4)


def test_bell_projectors_resolve_identity():
    total = sum(bell_projector(name) for name in BELL_ORDER)
    np.testing.assert_allclose(total, np.eye(4), atol=1e-12)


def test_bad_names_rejected():
    with pytest.raises(DomainError):
        product_state("2")
    with pytest.raises(DomainError):
        bell_projector("omega")


def test_stream_splitting_matches_spawn():
    direct = make_rng(5, 3).random(4)
    spawned = np.random.default_rng(np.random.SeedSequence(5).spawn(4)[3]).random(4)
    np.testing.assert_array_equal(direct, spawned)


@pytest.mark.parametrize("kind", list(StateKind))
def test_sampled_states_are_valid_and_reproducible(kind):
    first = sample_state(make_rng(99, 4), kind)
    again = sample_state(make_rng(99, 4), kind)
    other = sample_state(make_rng(99, 5), kind)
    assert validate(first.matrix).is_valid
    np.testing.assert_array_equal(first.matrix, again.matrix)
    assert not np.allclose(first.matrix, other.matrix)


def test_pure_samples_have_unit_purity():
    rho = sample_state(make_rng(1, 0), StateKind.PURE_HAAR)
    assert purity(rho) == pytest.approx(1.0, abs=1e-12)


def test_local_unitaries_preserve_spectrum():
    rng = make_rng(8)
    rho = sample_state(rng)
    u_a, u_b = random_local_unitary(rng)
    moved = apply_local_unitaries(rho, u_a, u_b)
    np.testing.assert_allclose(moved.spectrum(), rho.spectrum(), atol=1e-12)
