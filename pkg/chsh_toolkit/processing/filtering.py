"""
Local filtering (SLOCC) operations and the Bell-diagonal normal form.

A filter (A, B) maps rho to (A x B) rho (A x B)^dag / p. In the correlation
picture the same map is R~ -> Lambda(A) R~ Lambda(B)^T followed by division
by the (0, 0) entry, where Lambda(M) is the proper orthochronous Lorentz
matrix of the determinant-normalized M.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.spatial.transform import Rotation

from ..core.config import Tolerances, get_tolerances
from ..core.errors import AnnihilatedStateError, DomainError
from ..core.numkernel import ComplexMatrix, RealMatrix, dagger, operator_norm, psd_inv_sqrt, real_svd
from ..models.qstate import (
	PAULI,
	SIGMA_0,
	CorrelationMatrix,
	DensityMatrix,
	as_density,
	reduced_states,
	to_correlation,
)
from .chsh import max_violation

StateLike = Union[DensityMatrix, npt.ArrayLike]

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
DEFAULT_MAX_ITER = 10_000
_HALF_IDENTITY = 0.5 * np.eye(2)


@dataclass(frozen=True, eq=False)
class LocalFilter:
	a: ComplexMatrix
	b: ComplexMatrix

	def __post_init__(self) -> None:
		for name in ("a", "b"):
			m = np.asarray(getattr(self, name), dtype=np.complex128)
			if m.shape != (2, 2):
				raise DomainError(f"filter factor {name} must be 2x2, got {m.shape}")
			object.__setattr__(self, name, m)

	def kron(self) -> ComplexMatrix:
		return np.kron(self.a, self.b)

	def then(self, other: "LocalFilter") -> "LocalFilter":
		"""The filter that applies self first and other second."""
		return LocalFilter(other.a @ self.a, other.b @ self.b)

	def rescaled(self) -> "LocalFilter":
		"""Scale both factors to operator norm 1; the induced state map is unchanged."""
		return LocalFilter(self.a / operator_norm(self.a), self.b / operator_norm(self.b))

	def is_reversible(self, tolerances: Optional[Tolerances] = None) -> bool:
		rank_tol = get_tolerances(tolerances).rank_tol
		return abs(np.linalg.det(self.a)) >= rank_tol and abs(np.linalg.det(self.b)) >= rank_tol


@dataclass(frozen=True, eq=False)
class LorentzMatrix:
	matrix: RealMatrix

	def metric_defect(self) -> float:
		m = self.matrix
		return float(np.max(np.abs(m.T @ MINKOWSKI @ m - MINKOWSKI)))

	def is_proper_orthochronous(self, tol: float = 1e-8) -> bool:
		return self.metric_defect() <= tol and self.matrix[0, 0] > 0 and abs(np.linalg.det(self.matrix) - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class NormalFormResult:
	state: DensityMatrix
	filter: LocalFilter
	success_probability: float
	iterations: int
	converged: bool
	marginal_defect: float

	@property
	def beta(self) -> float:
		return max_violation(self.state).beta


def apply_filter(rho: StateLike, f: LocalFilter, tolerances: Optional[Tolerances] = None) -> Tuple[DensityMatrix, float]:
	"""
	Apply a local filter and renormalize.

	Returns:
		(filtered state, success probability p = tr((A x B) rho (A x B)^dag))

	Raises:
		AnnihilatedStateError: p below rank_tol
	"""
	tol = get_tolerances(tolerances)
	k = f.kron()
	out = k @ as_density(rho).matrix @ dagger(k)
	p = float(np.real(np.trace(out)))
	if p < tol.rank_tol:
		raise AnnihilatedStateError(f"filter success probability {p:.3e} is below rank_tol")
	return DensityMatrix.trusted(out / p), p


def lorentz_of_slocc(m: npt.ArrayLike, tolerances: Optional[Tolerances] = None) -> LorentzMatrix:
	"""
	Lorentz matrix Lambda_mn = 1/2 tr(sigma_m M sigma_n M^dag) of det(M) = 1 normalized M.

	Raises:
		DomainError: |det M| below rank_tol
	"""
	tol = get_tolerances(tolerances)
	mat = np.asarray(m, dtype=np.complex128)
	if mat.shape != (2, 2):
		raise DomainError(f"expected a 2x2 matrix, got {mat.shape}")
	det = np.linalg.det(mat)
	if abs(det) < tol.rank_tol:
		raise DomainError(f"|det M| = {abs(det):.3e} is below rank_tol; no Lorentz image")
	mat = mat / np.sqrt(det)
	lam = np.array([[0.5 * np.trace(sm @ mat @ sn @ dagger(mat)) for sn in PAULI] for sm in PAULI])
	return LorentzMatrix(np.real(lam))


def filter_correlation(corr: Union[CorrelationMatrix, npt.ArrayLike], f: LocalFilter, tolerances: Optional[Tolerances] = None) -> CorrelationMatrix:
	"""Correlation matrix of the filtered state, Lambda(A) R~ Lambda(B)^T / (0, 0) entry."""
	entries = corr.entries if isinstance(corr, CorrelationMatrix) else np.asarray(corr, dtype=np.float64)
	out = lorentz_of_slocc(f.a, tolerances).matrix @ entries @ lorentz_of_slocc(f.b, tolerances).matrix.T
	return CorrelationMatrix(out / out[0, 0])


def unitary_of_rotation(o: npt.ArrayLike) -> ComplexMatrix:
	"""SU(2) element W with W sigma_k W^dag = sum_j O_jk sigma_j for a proper rotation O."""
	rotvec = Rotation.from_matrix(np.asarray(o, dtype=np.float64)).as_rotvec()
	angle = float(np.linalg.norm(rotvec))
	if angle == 0.0:
		return SIGMA_0.copy()
	n = rotvec / angle
	generator = n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3]
	return np.cos(angle / 2) * SIGMA_0 - 1j * np.sin(angle / 2) * generator


def _proper_svd(r: RealMatrix) -> Tuple[RealMatrix, np.ndarray, RealMatrix]:
	"""R = U diag(d) V^T with U, V in SO(3); only the last entry of d may be negative."""
	svd = real_svd(r)
	u, s, v = svd.left.copy(), svd.singulars.copy(), svd.right.copy()
	if np.linalg.det(u) < 0:
		u[:, 2] *= -1.0
		s[2] *= -1.0
	if np.linalg.det(v) < 0:
		v[:, 2] *= -1.0
		s[2] *= -1.0
	return u, s, v


def local_diagonal_form(rho: StateLike) -> Tuple[DensityMatrix, LocalFilter]:
	"""
	Rotate the local bases so that the spin block R becomes diagonal.

	The diagonal is (d1, d2, d3) with |d1| >= |d2| >= |d3| and only d3
	possibly negative.
	"""
	state = as_density(rho)
	u, _, v = _proper_svd(to_correlation(state).block)
	rotation = LocalFilter(unitary_of_rotation(u.T), unitary_of_rotation(v.T))
	k = rotation.kron()
	return DensityMatrix.trusted(k @ state.matrix @ dagger(k)), rotation


def is_bell_diagonal(rho: StateLike, tol: float = 1e-8) -> bool:
	entries = to_correlation(rho).entries
	off = entries - np.diag(np.diag(entries))
	return bool(np.max(np.abs(off)) <= tol)


def marginal_defect(rho: StateLike) -> float:
	rho_a, rho_b = reduced_states(rho)
	return float(np.linalg.norm(rho_a - _HALF_IDENTITY) + np.linalg.norm(rho_b - _HALF_IDENTITY))


def normal_form(
	rho: StateLike,
	tol: Optional[float] = None,
	max_iter: int = DEFAULT_MAX_ITER,
	tolerances: Optional[Tolerances] = None,
	quiet: bool = False,
) -> NormalFormResult:
	"""
	Bell-diagonal normal form under stochastically reversible local filters.

	Alternately whitens the A and B marginals with (2 rho_A)^(-1/2) x I and
	I x (2 rho_B)^(-1/2) until ||rho_A - I/2||_F + ||rho_B - I/2||_F <= tol,
	then rotates the local bases to make R~ diagonal. States without a
	full-rank normal form only approach it asymptotically; they come back
	with ``converged=False`` and the last iterate. ``quiet`` drops the
	non-convergence warning to debug level for callers that expect it.

	Raises:
		SingularMarginalError: a marginal eigenvalue falls below rank_tol
	"""
	tols = get_tolerances(tolerances)
	tol = tols.convergence if tol is None else tol
	original = as_density(rho)
	current = original.matrix
	acc_a = np.eye(2, dtype=np.complex128)
	acc_b = np.eye(2, dtype=np.complex128)
	identity = np.eye(2)
	iterations = 0
	defect = marginal_defect(DensityMatrix.trusted(current))
	while defect > tol and iterations < max_iter:
		rho_a, _ = reduced_states(DensityMatrix.trusted(current))
		f_a = psd_inv_sqrt(2.0 * rho_a, tols)
		k = np.kron(f_a, identity)
		current = k @ current @ dagger(k)
		current = current / np.trace(current).real
		_, rho_b = reduced_states(DensityMatrix.trusted(current))
		f_b = psd_inv_sqrt(2.0 * rho_b, tols)
		k = np.kron(identity, f_b)
		current = k @ current @ dagger(k)
		current = current / np.trace(current).real
		acc_a = f_a @ acc_a
		acc_b = f_b @ acc_b
		acc_a /= operator_norm(acc_a)
		acc_b /= operator_norm(acc_b)
		iterations += 1
		defect = marginal_defect(DensityMatrix.trusted(current))
	converged = defect <= tol
	if not converged:
		logger.log("DEBUG" if quiet else "WARNING", "normal form did not converge after {} iterations (marginal defect {:.3e})", iterations, defect)

	whitened = DensityMatrix.trusted(current)
	cumulative = LocalFilter(acc_a, acc_b)
	if not is_bell_diagonal(whitened, max(tol, tols.validation)):
		_, rotation = local_diagonal_form(whitened)
		cumulative = cumulative.then(rotation)
	cumulative = cumulative.rescaled()
	# state and probability from one combined filter on the original state;
	# asymptotic runs may push p below rank_tol, so no AnnihilatedStateError here
	k = cumulative.kron()
	out = k @ original.matrix @ dagger(k)
	p = float(np.real(np.trace(out)))
	state = DensityMatrix.trusted(out / p)
	logger.debug("normal form after {} iterations: defect {:.3e}, p {:.6e}", iterations, defect, p)
	return NormalFormResult(
		state=state,
		filter=cumulative,
		success_probability=p,
		iterations=iterations,
		converged=converged,
		marginal_defect=defect,
	)


def sample_filter(rng: np.random.Generator, tolerances: Optional[Tolerances] = None) -> LocalFilter:
	"""Random reversible filter with complex Gaussian factors, rescaled to norm 1."""
	tols = get_tolerances(tolerances)
	while True:
		a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
		b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
		f = LocalFilter(a, b)
		if f.is_reversible(tols):
			return f.rescaled()
