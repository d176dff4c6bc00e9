#!/usr/bin/env python3
"""
Tests for the small dense numeric kernels and the configuration layer
"""

import numpy as np
import pytest

from chsh_toolkit.core.config import DEFAULT_SEED, Tolerances, ToolkitConfig, get_tolerances, load_config
from chsh_toolkit.core.errors import ConfigError, DomainError, SingularMarginalError
from chsh_toolkit.core.numkernel import (
    as_matrix,
    hermitian_eigensystem,
    operator_norm,
    psd_inv_sqrt,
    psd_sqrt,
    real_svd,
    singular_values,
)


def _random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def test_eigenvalues_sorted_descending():
    eig = hermitian_eigensystem(np.diag([1.0, 3.0, 2.0]))
    np.testing.assert_allclose(eig.values, [3.0, 2.0, 1.0])
    # eigenvector columns follow the same order
    np.testing.assert_allclose(np.abs(eig.vectors[:, 0]), [0.0, 1.0, 0.0], atol=1e-12)


def test_eigensystem_reconstructs_hermitian_matrix():
    rng = np.random.default_rng(3)
    h = _random_hermitian(rng, 4)
    eig = hermitian_eigensystem(h)
    rebuilt = (eig.vectors * eig.values) @ eig.vectors.conj().T
    np.testing.assert_allclose(rebuilt, h, atol=1e-12)
    np.testing.assert_allclose(eig.vectors.conj().T @ eig.vectors, np.eye(4), atol=1e-12)


def test_non_hermitian_input_rejected():
    with pytest.raises(DomainError):
        hermitian_eigensystem(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_oversized_and_non_finite_matrices_rejected():
    with pytest.raises(DomainError):
        as_matrix(np.eye(5))
    with pytest.raises(DomainError):
        as_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_real_svd_descending_and_reconstructs():
    rng = np.random.default_rng(11)
    m = rng.standard_normal((3, 3))
    svd = real_svd(m)
    assert np.all(np.diff(svd.singulars) <= 0.0)
    np.testing.assert_allclose(svd.reconstruct(), m, atol=1e-12)
    np.testing.assert_allclose(svd.left.T @ svd.left, np.eye(3), atol=1e-12)


def test_singular_values_of_complex_matrix():
    u = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / np.sqrt(2.0)
    np.testing.assert_allclose(singular_values(u @ np.diag([2.0, 0.5])), [2.0, 0.5], atol=1e-12)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(5)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    p = g @ g.conj().T
    root = psd_sqrt(p)
    np.testing.assert_allclose(root @ root, p, atol=1e-10)


def test_psd_inv_sqrt_whitens():
    p = np.array([[0.7, 0.1], [0.1, 0.3]])
    w = psd_inv_sqrt(p)
    np.testing.assert_allclose(w @ p @ w, np.eye(2), atol=1e-12)


def test_psd_inv_sqrt_of_diagonal_matrix():
    np.testing.assert_allclose(psd_inv_sqrt(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]), atol=1e-15)


def test_psd_inv_sqrt_singular_raises():
    with pytest.raises(SingularMarginalError):
        psd_inv_sqrt(np.diag([1.0, 0.0]))


def test_operator_norm():
    assert operator_norm(np.diag([0.5, -3.0])) == pytest.approx(3.0)


def test_default_config():
    config = load_config()
    assert config.seed == DEFAULT_SEED
    assert config.normal_form_max_iter == 10_000
    assert config.brute_force_samples == 64
    tol = get_tolerances()
    assert tol.validation == 1e-8
    assert tol.convergence == 1e-10
    assert tol.rank_tol == 1e-12


def test_config_is_frozen():
    config = ToolkitConfig()
    with pytest.raises(Exception):
        config.seed = 1


def test_load_config_from_yaml(tmp_path):
    path = tmp_path / "toolkit.yaml"
    path.write_text("seed: 7\nworkers: 2\ntolerances:\n  convergence: 1.0e-9\n", encoding="utf-8")
    config = load_config(path)
    assert config.seed == 7
    assert config.workers == 2
    assert config.tolerances.convergence == 1e-9
    assert config.tolerances.validation == Tolerances().validation


def test_load_config_rejects_unknown_fields(tmp_path):
    path = tmp_path / "toolkit.yaml"
    path.write_text("seeds: 7\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_rejects_bad_yaml(tmp_path):
    path = tmp_path / "toolkit.yaml"
    path.write_text("seed: [1, 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_rejects_non_positive_tolerance(tmp_path):
    path = tmp_path / "toolkit.yaml"
    path.write_text("tolerances:\n  rank_tol: 0\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(path)
