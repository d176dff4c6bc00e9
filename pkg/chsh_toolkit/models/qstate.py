"""
Two-qubit state model.

Conventions used throughout the package:

* computational basis order |00>, |01>, |10>, |11>, first factor is qubit A
* Bell basis Phi+/- = (|00> +/- |11>)/sqrt2, Psi+/- = (|01> +/- |10>)/sqrt2
* correlation matrix R~_mn = tr(rho sigma_m x sigma_n), sigma_0 = identity,
  so R~[0, 0] = 1 and R~[1:, 1:] is the 3x3 spin block R
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.stats import entropy as shannon_entropy
from scipy.stats import unitary_group

from ..core.config import Tolerances, get_tolerances
from ..core.errors import DomainError, StateValidationError, UnphysicalCorrelationsError
from ..core.numkernel import ComplexMatrix, RealMatrix, dagger, hermitian_eigensystem

SIGMA_0 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI: Tuple[np.ndarray, ...] = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)

# PAULI_PRODUCTS[m, n] = sigma_m (x) sigma_n
PAULI_PRODUCTS = np.array([[np.kron(sm, sn) for sn in PAULI] for sm in PAULI])

_S = 1.0 / np.sqrt(2.0)
BELL_ORDER: Tuple[str, ...] = ("phi+", "phi-", "psi+", "psi-")
BELL_VECTORS = {
	"phi+": np.array([_S, 0, 0, _S], dtype=np.complex128),
	"phi-": np.array([_S, 0, 0, -_S], dtype=np.complex128),
	"psi+": np.array([0, _S, _S, 0], dtype=np.complex128),
	"psi-": np.array([0, _S, -_S, 0], dtype=np.complex128),
}

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


class StateKind(str, Enum):
	PURE_HAAR = "pure-haar"
	MIXED_HS = "mixed-hs"
	BELL_DIAGONAL = "bell-diagonal"


@dataclass
class ValidationReport:
	hermiticity_defect: float
	trace_defect: float
	min_eigenvalue: float
	errors: List[str] = field(default_factory=list)

	@property
	def is_valid(self) -> bool:
		return not self.errors


@dataclass(frozen=True, eq=False)
class DensityMatrix:
	"""A validated 4x4 two-qubit density matrix. Use ``ingest`` or ``trusted`` to build one."""
	matrix: ComplexMatrix

	def __post_init__(self) -> None:
		self.matrix.setflags(write=False)

	@classmethod
	def ingest(cls, array: npt.ArrayLike, tolerances: Optional[Tolerances] = None) -> "DensityMatrix":
		"""
		Validate user data and repair rounding.

		Negative eigenvalues within the validation tolerance are clipped to zero
		and the result is renormalized to unit trace.

		Raises:
			StateValidationError: one or more defects beyond tolerance
		"""
		tol = get_tolerances(tolerances)
		report = validate(array, tol)
		if not report.is_valid:
			raise StateValidationError("invalid density matrix: " + "; ".join(report.errors), report)
		mat = np.array(array, dtype=np.complex128)
		mat = 0.5 * (mat + dagger(mat))
		if report.min_eigenvalue < 0.0:
			logger.debug("clipping eigenvalues down to {:.3e}", report.min_eigenvalue)
			eig = hermitian_eigensystem(mat, tol)
			values = np.clip(eig.values, 0.0, None)
			mat = (eig.vectors * values) @ dagger(eig.vectors)
		return cls(mat / np.trace(mat).real)

	@classmethod
	def trusted(cls, array: npt.ArrayLike) -> "DensityMatrix":
		"""Wrap an internally constructed state; only symmetrizes and fixes the trace."""
		mat = np.array(array, dtype=np.complex128)
		mat = 0.5 * (mat + dagger(mat))
		return cls(mat / np.trace(mat).real)

	def spectrum(self) -> npt.NDArray[np.float64]:
		return hermitian_eigensystem(self.matrix).values

	def __array__(self, dtype=None, copy=None):
		return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
	entries: RealMatrix

	def __post_init__(self) -> None:
		self.entries.setflags(write=False)

	@property
	def block(self) -> RealMatrix:
		"""The 3x3 spin block R (CorrBlock)."""
		return np.array(self.entries[1:, 1:])

	@property
	def local_a(self) -> npt.NDArray[np.float64]:
		return np.array(self.entries[1:, 0])

	@property
	def local_b(self) -> npt.NDArray[np.float64]:
		return np.array(self.entries[0, 1:])


def validate(array: npt.ArrayLike, tolerances: Optional[Tolerances] = None) -> ValidationReport:
	"""
	Report Hermiticity defect, trace defect and minimum eigenvalue of a candidate state.

	Each defect beyond ``tolerances.validation`` is flagged individually.
	"""
	tol = get_tolerances(tolerances).validation
	mat = np.asarray(array, dtype=np.complex128)
	if mat.shape != (4, 4):
		return ValidationReport(np.inf, np.inf, -np.inf, [f"shape {mat.shape} is not 4x4"])
	if not np.all(np.isfinite(mat)):
		return ValidationReport(np.inf, np.inf, -np.inf, ["non-finite entries"])
	herm = float(np.max(np.abs(mat - dagger(mat))))
	trace_defect = float(abs(np.trace(mat) - 1.0))
	min_eig = float(np.linalg.eigvalsh(0.5 * (mat + dagger(mat)))[0])
	report = ValidationReport(herm, trace_defect, min_eig)
	if herm > tol:
		report.errors.append(f"not Hermitian (defect {herm:.3e})")
	if trace_defect > tol:
		report.errors.append(f"trace differs from 1 by {trace_defect:.3e}")
	if min_eig < -tol:
		report.errors.append(f"not positive semidefinite (min eigenvalue {min_eig:.3e})")
	return report


def as_density(rho: Union[DensityMatrix, npt.ArrayLike]) -> DensityMatrix:
	return rho if isinstance(rho, DensityMatrix) else DensityMatrix.ingest(rho)


def to_correlation(rho: Union[DensityMatrix, npt.ArrayLike]) -> CorrelationMatrix:
	mat = as_density(rho).matrix
	entries = np.einsum("ij,mnji->mn", mat, PAULI_PRODUCTS).real
	entries[0, 0] = 1.0
	return CorrelationMatrix(np.ascontiguousarray(entries))


def from_correlation(corr: Union[CorrelationMatrix, npt.ArrayLike], tolerances: Optional[Tolerances] = None) -> DensityMatrix:
	"""
	Rebuild rho = 1/4 sum_mn R~_mn sigma_m (x) sigma_n.

	Raises:
		DomainError: R~[0, 0] != 1
		UnphysicalCorrelationsError: the reconstruction is not positive semidefinite
	"""
	tol = get_tolerances(tolerances)
	entries = corr.entries if isinstance(corr, CorrelationMatrix) else np.asarray(corr, dtype=np.float64)
	if entries.shape != (4, 4):
		raise DomainError(f"correlation matrix must be 4x4, got {entries.shape}")
	if abs(entries[0, 0] - 1.0) > tol.validation:
		raise DomainError(f"R~[0,0] must be 1, got {entries[0, 0]}")
	mat = 0.25 * np.einsum("mn,mnij->ij", entries, PAULI_PRODUCTS)
	report = validate(mat, tol)
	if not report.is_valid:
		raise UnphysicalCorrelationsError("correlations do not describe a state: " + "; ".join(report.errors), report)
	return DensityMatrix.ingest(mat, tol)


def reduced_states(rho: Union[DensityMatrix, npt.ArrayLike]) -> Tuple[ComplexMatrix, ComplexMatrix]:
	t = as_density(rho).matrix.reshape(2, 2, 2, 2)
	return np.einsum("ajbj->ab", t), np.einsum("iaib->ab", t)


def purity(rho: Union[DensityMatrix, npt.ArrayLike]) -> float:
	mat = as_density(rho).matrix
	return float(np.real(np.trace(mat @ mat)))


def entropy(rho: Union[DensityMatrix, npt.ArrayLike]) -> float:
	"""Von Neumann entropy in bits."""
	values = np.clip(as_density(rho).spectrum(), 0.0, None)
	return float(shannon_entropy(values, base=2))


def ket_to_density(psi: npt.ArrayLike) -> DensityMatrix:
	vec = np.asarray(psi, dtype=np.complex128).reshape(4)
	norm = np.linalg.norm(vec)
	if norm == 0.0:
		raise DomainError("zero state vector")
	vec = vec / norm
	return DensityMatrix.trusted(np.outer(vec, np.conj(vec)))


def bell_state(name: str) -> np.ndarray:
	try:
		return BELL_VECTORS[name].copy()
	except KeyError:
		raise DomainError(f"unknown Bell state {name!r}; expected one of {BELL_ORDER}") from None


def bell_projector(name: str) -> ComplexMatrix:
	vec = bell_state(name)
	return np.outer(vec, np.conj(vec))


def product_state(bits: str) -> DensityMatrix:
	"""Computational basis projector, e.g. ``product_state("01")``."""
	if len(bits) != 2 or any(b not in "01" for b in bits):
		raise DomainError(f"expected two bits, got {bits!r}")
	vec = np.zeros(4, dtype=np.complex128)
	vec[int(bits, 2)] = 1.0
	return ket_to_density(vec)


def maximally_mixed() -> DensityMatrix:
	return DensityMatrix.trusted(np.eye(4) / 4.0)


def apply_local_unitaries(rho: Union[DensityMatrix, npt.ArrayLike], u_a: np.ndarray, u_b: np.ndarray) -> DensityMatrix:
	u = np.kron(u_a, u_b)
	return DensityMatrix.trusted(u @ as_density(rho).matrix @ dagger(u))


# ---------- random sampling ----------

def make_rng(seed: SeedLike = None, index: Optional[int] = None) -> np.random.Generator:
	"""
	Seedable generator with the package's stream-splitting rule.

	Sample ``index`` of a run seeded with ``seed`` draws from
	``SeedSequence(seed, spawn_key=(index,))``, the same stream as
	``SeedSequence(seed).spawn(n)[index]``.
	"""
	if isinstance(seed, np.random.Generator):
		return seed
	if index is None:
		return np.random.default_rng(seed)
	if isinstance(seed, np.random.SeedSequence):
		seq = np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + (index,))
	else:
		seq = np.random.SeedSequence(seed, spawn_key=(index,))
	return np.random.default_rng(seq)


def random_unitary(rng: np.random.Generator, dim: int) -> ComplexMatrix:
	return unitary_group.rvs(dim, random_state=rng)


def random_local_unitary(rng: np.random.Generator) -> Tuple[ComplexMatrix, ComplexMatrix]:
	return random_unitary(rng, 2), random_unitary(rng, 2)


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
	return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample_state(seed: SeedLike, kind: Union[StateKind, str] = StateKind.MIXED_HS) -> DensityMatrix:
	"""
	Draw a random two-qubit state.

	pure-haar: projector onto a Haar-random vector; mixed-hs: G G^dag / tr
	with G complex Ginibre (Hilbert-Schmidt measure); bell-diagonal: flat
	Dirichlet weights on the four Bell projectors.
	"""
	kind = StateKind(kind)
	rng = make_rng(seed)
	if kind is StateKind.PURE_HAAR:
		return ket_to_density(_ginibre(rng, 4))
	if kind is StateKind.MIXED_HS:
		g = _ginibre(rng, (4, 4))
		return DensityMatrix.trusted(g @ dagger(g))
	weights = rng.dirichlet(np.ones(4))
	mat = sum(w * bell_projector(name) for w, name in zip(weights, BELL_ORDER))
	return DensityMatrix.trusted(mat)
