"""
Dense numeric kernels for matrices of dimension at most 4.

Everything else in the toolkit goes through these helpers for its
eigenvalue, singular value and matrix-function needs, so that ordering and
tolerance conventions are fixed in one place: eigenvalues and singular
values always come back sorted descending.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from .config import Tolerances, get_tolerances
from .errors import DomainError, SingularMarginalError

ComplexMatrix = npt.NDArray[np.complex128]
RealMatrix = npt.NDArray[np.float64]

MAX_DIM = 4


@dataclass(frozen=True, eq=False)
class EigenSystem:
	values: npt.NDArray[np.float64]  # descending
	vectors: ComplexMatrix  # columns, vectors[:, k] belongs to values[k]


@dataclass(frozen=True, eq=False)
class SvdResult:
	left: RealMatrix
	singulars: npt.NDArray[np.float64]  # descending, >= 0
	right: RealMatrix

	def reconstruct(self) -> RealMatrix:
		return self.left @ np.diag(self.singulars) @ self.right.T


def as_matrix(m: npt.ArrayLike, dtype: type = np.complex128) -> np.ndarray:
	"""Coerce to a finite square-or-rectangular matrix with dimensions <= 4."""
	arr = np.array(m, dtype=dtype)
	if arr.ndim != 2 or arr.shape[0] > MAX_DIM or arr.shape[1] > MAX_DIM or 0 in arr.shape:
		raise DomainError(f"expected a matrix with dimensions <= {MAX_DIM}, got shape {arr.shape}")
	if not np.all(np.isfinite(arr)):
		raise DomainError("matrix has non-finite entries")
	return arr


def dagger(m: np.ndarray) -> np.ndarray:
	return np.conj(m).T


def hermitian_defect(h: np.ndarray) -> float:
	return float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0


def hermitian_eigensystem(h: npt.ArrayLike, tolerances: Optional[Tolerances] = None) -> EigenSystem:
	"""
	Eigen-decomposition of a Hermitian matrix.

	Args:
		h: Hermitian matrix, n <= 4
		tolerances: Hermiticity defects above ``tolerances.hermitian`` are rejected

	Returns:
		EigenSystem with eigenvalues sorted descending and orthonormal eigenvectors
	"""
	tol = get_tolerances(tolerances)
	mat = as_matrix(h)
	if mat.shape[0] != mat.shape[1]:
		raise DomainError(f"expected a square matrix, got shape {mat.shape}")
	defect = hermitian_defect(mat)
	if defect > tol.hermitian:
		raise DomainError(f"matrix is not Hermitian (defect {defect:.3e})")
	# symmetrize so eigh only sees the rounding-free Hermitian part
	values, vectors = np.linalg.eigh(0.5 * (mat + dagger(mat)))
	order = np.argsort(values)[::-1]
	return EigenSystem(values=values[order].astype(np.float64), vectors=vectors[:, order])


def real_svd(m: npt.ArrayLike) -> SvdResult:
	"""Singular value decomposition of a real matrix, M = left . diag(singulars) . right^T."""
	mat = as_matrix(m, dtype=np.float64)
	u, s, vt = np.linalg.svd(mat)
	return SvdResult(left=u, singulars=s, right=vt.T)


def singular_values(m: npt.ArrayLike) -> npt.NDArray[np.float64]:
	"""Singular values of a complex matrix, descending."""
	return np.linalg.svd(as_matrix(m), compute_uv=False)


def _psd_function(p: np.ndarray, fn, tolerances: Optional[Tolerances]) -> ComplexMatrix:
	eig = hermitian_eigensystem(p, tolerances)
	return (eig.vectors * fn(eig.values)) @ dagger(eig.vectors)


def psd_sqrt(p: npt.ArrayLike, tolerances: Optional[Tolerances] = None) -> ComplexMatrix:
	"""Principal square root of a PSD matrix; rounding-level negative eigenvalues are clipped."""
	return _psd_function(np.asarray(p), lambda v: np.sqrt(np.clip(v, 0.0, None)), tolerances)


def psd_inv_sqrt(p: npt.ArrayLike, tolerances: Optional[Tolerances] = None) -> ComplexMatrix:
	"""
	P^(-1/2) for a positive definite matrix.

	Raises:
		SingularMarginalError: smallest eigenvalue below ``rank_tol``
	"""
	tol = get_tolerances(tolerances)
	eig = hermitian_eigensystem(p, tol)
	smallest = float(eig.values[-1])
	if smallest < tol.rank_tol:
		raise SingularMarginalError(f"smallest eigenvalue {smallest:.3e} is below rank_tol {tol.rank_tol:.1e}")
	return (eig.vectors * (1.0 / np.sqrt(eig.values))) @ dagger(eig.vectors)


def operator_norm(m: npt.ArrayLike) -> float:
	return float(np.linalg.norm(np.asarray(m), ord=2))
