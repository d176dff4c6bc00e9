"""
CHSH Bell operator, expectation values and maximal violation.

Normalization: the Bell operator carries a factor 1/2, so local hidden
variable models are bounded by 1 and the quantum (Tsirelson) maximum is
sqrt(2). Most of the literature uses 2 and 2*sqrt(2) instead; every beta
reported by this package uses the 1 / sqrt(2) convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from loguru import logger

from ..core.config import Tolerances, get_tolerances
from ..core.errors import DegenerateStateError, DomainError
from ..core.numkernel import ComplexMatrix, RealMatrix, hermitian_eigensystem, real_svd
from ..models.qstate import PAULI_PRODUCTS, CorrelationMatrix, DensityMatrix, SeedLike, as_density, make_rng, to_correlation

StateLike = Union[DensityMatrix, npt.ArrayLike]

TSIRELSON = float(np.sqrt(2.0))
CLASSICAL_BOUND = 1.0

REFINE_MAX_SWEEPS = 500
REFINE_MIN_GAIN = 1e-12


@dataclass(frozen=True, eq=False)
class BellSettings:
	"""Measurement directions: a, b for qubit A and c, d for qubit B."""
	a: np.ndarray
	b: np.ndarray
	c: np.ndarray
	d: np.ndarray

	def __post_init__(self) -> None:
		for name in ("a", "b", "c", "d"):
			vec = np.asarray(getattr(self, name), dtype=np.float64)
			if vec.shape != (3,):
				raise DomainError(f"setting {name} must be a real 3-vector, got shape {vec.shape}")
			norm = float(np.linalg.norm(vec))
			if abs(norm - 1.0) > 1e-10:
				raise DomainError(f"setting {name} is not a unit vector (norm {norm:.12f})")
			object.__setattr__(self, name, vec)

	@classmethod
	def normalized(cls, a, b, c, d) -> "BellSettings":
		return cls(*(np.asarray(v, dtype=np.float64) / np.linalg.norm(v) for v in (a, b, c, d)))

	def as_list(self) -> List[float]:
		return [float(x) for v in (self.a, self.b, self.c, self.d) for x in v]


@dataclass(frozen=True, eq=False)
class BellOperator:
	matrix: ComplexMatrix

	def spectrum(self) -> npt.NDArray[np.float64]:
		return hermitian_eigensystem(self.matrix).values


@dataclass(frozen=True)
class BetaValue:
	beta: float
	sigma1: float
	sigma2: float

	@property
	def violates(self) -> bool:
		return self.beta > CLASSICAL_BOUND

	def __float__(self) -> float:
		return self.beta


def settings_matrix(s: BellSettings) -> RealMatrix:
	"""T with B = sum_ij T_ij sigma_i (x) sigma_j, T = 1/2 [a (c+d)^T + b (c-d)^T]."""
	return 0.5 * (np.outer(s.a, s.c + s.d) + np.outer(s.b, s.c - s.d))


def bell_operator(s: BellSettings) -> BellOperator:
	t = settings_matrix(s)
	matrix = np.einsum("ij,ijkl->kl", t, PAULI_PRODUCTS[1:, 1:])
	return BellOperator(matrix)


def chsh_value(rho: StateLike, s: BellSettings) -> float:
	"""tr(rho B) for the Bell operator of the given settings."""
	return float(np.real(np.trace(as_density(rho).matrix @ bell_operator(s).matrix)))


def correlation_value(r: RealMatrix, s: BellSettings) -> float:
	"""The same expectation computed in the correlation picture, sum_ij R_ij T_ij."""
	return float(np.sum(np.asarray(r) * settings_matrix(s)))


def beta_from_correlation(corr: Union[CorrelationMatrix, npt.ArrayLike]) -> BetaValue:
	entries = corr.entries if isinstance(corr, CorrelationMatrix) else np.asarray(corr, dtype=np.float64)
	s = real_svd(entries[1:, 1:]).singulars
	return BetaValue(beta=float(np.hypot(s[0], s[1])), sigma1=float(s[0]), sigma2=float(s[1]))


def max_violation(rho: StateLike) -> BetaValue:
	"""beta(rho) = sqrt(s1^2 + s2^2) from the two largest singular values of R."""
	return beta_from_correlation(to_correlation(rho))


def optimal_settings(rho: StateLike, tolerances: Optional[Tolerances] = None) -> Tuple[BellSettings, BetaValue]:
	"""
	Settings attaining beta(rho).

	With R = U diag(s) V^T (rows of R belong to qubit A) the optimum is the
	best rank-2 approximation of R: a, b = cos(t) u1 +/- sin(t) u2 and
	c, d = v1, v2 where cos(t) = s1/beta, sin(t) = s2/beta.

	Raises:
		DegenerateStateError: R = 0, every setting gives 0
	"""
	tol = get_tolerances(tolerances)
	svd = real_svd(to_correlation(rho).block)
	s1, s2 = float(svd.singulars[0]), float(svd.singulars[1])
	beta = float(np.hypot(s1, s2))
	if beta < tol.rank_tol:
		raise DegenerateStateError("correlation block vanishes; no setting gives a nonzero CHSH value")
	cos_t, sin_t = s1 / beta, s2 / beta
	u1, u2 = svd.left[:, 0], svd.left[:, 1]
	settings = BellSettings.normalized(
		cos_t * u1 + sin_t * u2,
		cos_t * u1 - sin_t * u2,
		svd.right[:, 0],
		svd.right[:, 1],
	)
	return settings, BetaValue(beta=beta, sigma1=s1, sigma2=s2)


def _unit(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
	norm = np.linalg.norm(v)
	return fallback if norm < 1e-300 else v / norm


def _random_directions(rng: np.random.Generator, count: int) -> np.ndarray:
	v = rng.standard_normal((count, 3))
	return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _ascend(r: np.ndarray, a, b, c, d) -> Tuple[float, Tuple[np.ndarray, ...]]:
	"""Coordinate ascent: each direction in turn is replaced by its optimal normalized image."""
	value = 0.5 * (a @ r @ (c + d) + b @ r @ (c - d))
	for _ in range(REFINE_MAX_SWEEPS):
		a = _unit(r @ (c + d), a)
		b = _unit(r @ (c - d), b)
		c = _unit(r.T @ (a + b), c)
		d = _unit(r.T @ (a - b), d)
		new_value = 0.5 * (a @ r @ (c + d) + b @ r @ (c - d))
		if new_value - value < REFINE_MIN_GAIN:
			value = max(value, new_value)
			break
		value = new_value
	return float(value), (a, b, c, d)


def brute_force_beta(rho: StateLike, n_random: int = 64, refine: bool = True, seed: SeedLike = None, refine_starts: int = 8) -> float:
	"""
	Independent estimate of beta by random search over settings.

	Args:
		rho: The state
		n_random: Number of random setting quadruples
		refine: Follow the best ``refine_starts`` quadruples with coordinate
			ascent (stops on a gain below 1e-12 or after 500 sweeps)
		seed: Seed for the random directions

	Returns:
		Largest CHSH value found
	"""
	if n_random < 1:
		raise DomainError("n_random must be at least 1")
	r = to_correlation(rho).block
	rng = make_rng(seed)
	dirs = _random_directions(rng, 4 * n_random).reshape(n_random, 4, 3)
	a, b, c, d = (dirs[:, k, :] for k in range(4))
	values = 0.5 * (np.einsum("ni,ij,nj->n", a, r, c + d) + np.einsum("ni,ij,nj->n", b, r, c - d))
	best = float(np.max(values))
	if refine:
		for idx in np.argsort(values)[::-1][:refine_starts]:
			value, quad = _ascend(r, a[idx], b[idx], c[idx], d[idx])
			if value > best:
				best = chsh_value(rho, BellSettings.normalized(*quad))
	logger.debug("brute-force beta {:.12f} over {} samples", best, n_random)
	return best


def _check_spectrum(spectrum: Sequence[float], tol: float) -> np.ndarray:
	lam = np.asarray(spectrum, dtype=np.float64)
	if lam.shape != (4,):
		raise DomainError(f"expected four eigenvalues, got shape {lam.shape}")
	if np.any(lam < -tol) or abs(lam.sum() - 1.0) > tol:
		raise DomainError(f"spectrum must be non-negative and sum to 1, got {lam.tolist()}")
	return lam


def max_over_unitaries(spectrum: Sequence[float], b: BellOperator, tolerances: Optional[Tolerances] = None) -> float:
	"""
	max_U tr(U rho U^dag B) for rho with the given spectrum.

	|u_ik|^2 is doubly stochastic, so the maximum is the sorted inner product
	of the descending state spectrum with the descending spectrum of B.
	"""
	lam = _check_spectrum(spectrum, get_tolerances(tolerances).validation)
	return float(np.dot(np.sort(lam)[::-1], b.spectrum()))


def bell_diagonal_beta(lam: Sequence[float], tolerances: Optional[Tolerances] = None) -> float:
	"""beta = sqrt(2) sqrt((l2 - l3)^2 + (l1 - l4)^2) for descending Bell weights."""
	tol = get_tolerances(tolerances).validation
	lam = _check_spectrum(lam, tol)
	if np.any(np.diff(lam) > tol):
		raise DomainError(f"Bell weights must be sorted descending, got {lam.tolist()}")
	return float(np.sqrt(2.0) * np.hypot(lam[1] - lam[2], lam[0] - lam[3]))
