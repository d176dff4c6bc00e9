"""
Named two-qubit state families and the concurrence / violation bounds.

The region of attainable (C, beta) pairs is bounded above by
sqrt(1 + C^2) (pure states) and below by sqrt(2) C (maximally entangled
mixed states); Bell-diagonal states with C > 0 additionally satisfy
beta >= sqrt(2) (2C + 1) / 3, attained by Werner states.
"""
from __future__ import annotations

import concurrent.futures
import multiprocessing
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ..core.config import Tolerances, get_tolerances
from ..core.errors import DomainError, SingularMarginalError, UnphysicalCorrelationsError
from ..models.qstate import (
	BELL_ORDER,
	DensityMatrix,
	StateKind,
	bell_projector,
	entropy,
	from_correlation,
	ket_to_density,
	make_rng,
	product_state,
	purity,
	sample_state,
)
from .chsh import max_violation
from .entanglement import concurrence
from .filtering import normal_form

_SQRT2 = float(np.sqrt(2.0))


def _check_unit_interval(name: str, value: float, open_left: bool = False) -> float:
	value = float(value)
	low_ok = value > 0.0 if open_left else value >= 0.0
	if not (low_ok and value <= 1.0):
		interval = "(0, 1]" if open_left else "[0, 1]"
		raise DomainError(f"{name} must lie in {interval}, got {value}")
	return value


def pure_schmidt(c: float) -> DensityMatrix:
	"""lambda+ |00> + lambda- |11> with lambda+- = (sqrt(1+C) +- sqrt(1-C)) / 2."""
	c = _check_unit_interval("C", c)
	lp = (np.sqrt(1.0 + c) + np.sqrt(1.0 - c)) / 2.0
	lm = (np.sqrt(1.0 + c) - np.sqrt(1.0 - c)) / 2.0
	return ket_to_density([lp, 0.0, 0.0, lm])


def werner(p: float) -> DensityMatrix:
	p = _check_unit_interval("p", p)
	return DensityMatrix.trusted(p * bell_projector("phi+") + (1.0 - p) * np.eye(4) / 4.0)


def rank2_family(c: float, a: float, tolerances: Optional[Tolerances] = None) -> DensityMatrix:
	"""
	Rank-2 states violating as strongly as pure states of the same concurrence.

	1/2 [[0, 0, 0, 0], [0, 1-a, C, 0], [0, C, 1+a, 0], [0, 0, 0, 0]] with |a| <= sqrt(1 - C^2).
	"""
	c = _check_unit_interval("C", c)
	limit = np.sqrt(1.0 - c * c)
	if abs(a) > limit + get_tolerances(tolerances).validation:
		raise DomainError(f"|a| must not exceed sqrt(1 - C^2) = {limit:.12g}, got {a}")
	mat = np.zeros((4, 4))
	mat[1, 1], mat[1, 2], mat[2, 1], mat[2, 2] = 1.0 - a, c, c, 1.0 + a
	return DensityMatrix.trusted(0.5 * mat)


def mems(c: float) -> DensityMatrix:
	"""C |Phi+><Phi+| + (1 - C) |01><01|, the minimizer of beta at fixed concurrence."""
	c = _check_unit_interval("C", c, open_left=True)
	return DensityMatrix.trusted(c * bell_projector("phi+") + (1.0 - c) * product_state("01").matrix)


def gisin_state(p: float, theta: float) -> DensityMatrix:
	"""p |psi_t><psi_t| + (1 - p) |01><01| with psi_t = cos(t) |00> + sin(t) |11>."""
	p = _check_unit_interval("p", p)
	psi = ket_to_density([np.cos(theta), 0.0, 0.0, np.sin(theta)]).matrix
	return DensityMatrix.trusted(p * psi + (1.0 - p) * product_state("01").matrix)


def bell_diagonal(weights: Sequence[float], tolerances: Optional[Tolerances] = None) -> DensityMatrix:
	"""Mixture of (Phi+, Phi-, Psi+, Psi-) with the given weights, in that order."""
	tol = get_tolerances(tolerances).validation
	w = np.asarray(weights, dtype=np.float64)
	if w.shape != (4,) or np.any(w < -tol) or abs(w.sum() - 1.0) > tol:
		raise DomainError(f"Bell weights must be four non-negative numbers summing to 1, got {list(weights)}")
	return DensityMatrix.trusted(sum(x * bell_projector(name) for x, name in zip(w, BELL_ORDER)))


def bell_diagonal_concurrence(weights: Sequence[float]) -> float:
	return max(0.0, 2.0 * float(np.max(weights)) - 1.0)


def spectrum_maximizer(spectrum: Sequence[float], tolerances: Optional[Tolerances] = None) -> DensityMatrix:
	"""Bell-diagonal state with the descending spectrum on (Phi+, Phi-, Psi+, Psi-); maximizes beta at fixed spectrum."""
	return bell_diagonal(np.sort(np.asarray(spectrum, dtype=np.float64))[::-1], tolerances)


def spectral_beta_ceiling(spectrum: Sequence[float], tolerances: Optional[Tolerances] = None) -> float:
	return max_violation(spectrum_maximizer(spectrum, tolerances)).beta


# ---------- extremal correlation form ----------

@dataclass(frozen=True)
class ExtremalForm:
	"""Sparse R~ with entries R~00 = 1, R~11 = x, R~22 = y, R~33 = z, R~03 = a, R~30 = b."""
	x: float
	y: float
	z: float
	a: float
	b: float

	def constraint_margins(self) -> Tuple[float, float, float]:
		x, y, z, a, b = self.x, self.y, self.z, self.a, self.b
		return (
			1.0 - abs(z),
			(1.0 + z) ** 2 - (a + b) ** 2 - (x - y) ** 2,
			(1.0 - z) ** 2 - (a - b) ** 2 - (x + y) ** 2,
		)

	def is_feasible(self, tol: float = 1e-12) -> bool:
		return min(self.constraint_margins()) >= -tol

	def correlation(self) -> np.ndarray:
		r = np.zeros((4, 4))
		r[0, 0], r[1, 1], r[2, 2], r[3, 3] = 1.0, self.x, self.y, self.z
		r[0, 3], r[3, 0] = self.a, self.b
		return r

	def concurrence_formula(self) -> float:
		x, y, z, a, b = self.x, self.y, self.z, self.a, self.b
		minus = abs(x - y) - np.sqrt(max(0.0, (1.0 - z) ** 2 - (a - b) ** 2))
		plus = abs(x + y) - np.sqrt(max(0.0, (1.0 + z) ** 2 - (a + b) ** 2))
		return 0.5 * max(0.0, minus, plus)


def extremal_form_state(e: ExtremalForm, tolerances: Optional[Tolerances] = None) -> Tuple[DensityMatrix, float]:
	"""
	State of an extremal correlation form and its closed-form concurrence.

	Raises:
		UnphysicalCorrelationsError: the positivity constraints fail
	"""
	tol = get_tolerances(tolerances)
	if not e.is_feasible(tol.validation):
		raise UnphysicalCorrelationsError(f"extremal form violates the positivity constraints: margins {e.constraint_margins()}")
	return from_correlation(e.correlation(), tol), e.concurrence_formula()


def sample_extremal_form(rng: np.random.Generator) -> ExtremalForm:
	"""Random feasible instance: z uniform, then a +/- b and x -/+ y inside their constraint discs."""
	z = rng.uniform(-1.0, 1.0)
	s = rng.uniform(-(1.0 + z), 1.0 + z)  # a + b
	t = rng.uniform(-(1.0 - z), 1.0 - z)  # a - b
	diff_max = np.sqrt(max(0.0, (1.0 + z) ** 2 - s * s))
	sum_max = np.sqrt(max(0.0, (1.0 - z) ** 2 - t * t))
	u = rng.uniform(-diff_max, diff_max)  # x - y
	v = rng.uniform(-sum_max, sum_max)  # x + y
	return ExtremalForm(x=(u + v) / 2.0, y=(v - u) / 2.0, z=z, a=(s + t) / 2.0, b=(s - t) / 2.0)


# ---------- bound curves ----------

@dataclass(frozen=True)
class BoundCurve:
	name: str
	description: str
	evaluate: Callable[[float], float]

	def __call__(self, c: float) -> float:
		return self.evaluate(c)


def _upper(c: float) -> float:
	return float(np.sqrt(1.0 + c * c))


def _lower(c: float) -> float:
	return _SQRT2 * c


def _threshold(c: float) -> float:
	return 1.0


def _bell_diag_lower(c: float) -> float:
	return _SQRT2 * (2.0 * c + 1.0) / 3.0


def bound_curves() -> Dict[str, BoundCurve]:
	return {
		"upper": BoundCurve("upper", "sqrt(1 + C^2), pure and rank-2 states", _upper),
		"lower": BoundCurve("lower", "sqrt(2) C, sharp beta floor", _lower),
		"threshold": BoundCurve("threshold", "violation threshold 1", _threshold),
		"bell_diag_lower": BoundCurve("bell_diag_lower", "sqrt(2)(2C + 1)/3, Bell-diagonal states with C > 0", _bell_diag_lower),
	}


# ---------- region sampling ----------

class RegionKind(str, Enum):
	MIXED_HS = "mixed-hs"
	PURE_HAAR = "pure-haar"
	BELL_DIAGONAL = "bell-diagonal"
	WERNER_LINE = "werner-line"
	MEMS_LINE = "mems-line"
	PURE_LINE = "pure-line"


@dataclass(frozen=True)
class RegionRecord:
	kind: str
	concurrence: float
	beta: float
	purity: float
	entropy: float


def describe(rho: DensityMatrix, kind: str) -> RegionRecord:
	return RegionRecord(
		kind=kind,
		concurrence=concurrence(rho).value,
		beta=max_violation(rho).beta,
		purity=purity(rho),
		entropy=entropy(rho),
	)


def _grid(n: int, low: float, high: float, open_left: bool = False) -> np.ndarray:
	if open_left:
		return low + (high - low) * np.arange(1, n + 1) / n
	if n == 1:
		return np.array([high])
	return np.linspace(low, high, n)


def _line_states(kind: RegionKind, n: int) -> List[DensityMatrix]:
	if kind is RegionKind.WERNER_LINE:
		return [werner(p) for p in _grid(n, 1.0 / 3.0, 1.0)]
	if kind is RegionKind.MEMS_LINE:
		return [mems(c) for c in _grid(n, 0.0, 1.0, open_left=True)]
	return [pure_schmidt(c) for c in _grid(n, 0.0, 1.0)]


def _sample_chunk(seed: int, indices: Sequence[int], kind: str) -> List[RegionRecord]:
	state_kind = StateKind(kind)
	return [describe(sample_state(make_rng(seed, i), state_kind), kind) for i in indices]


def region_sample(seed: int, n: int, kind: Union[RegionKind, str] = RegionKind.MIXED_HS, workers: int = 1) -> List[RegionRecord]:
	"""
	(C, beta, purity, entropy) records for n states of one kind.

	Random kinds draw sample i from the seed's i-th split stream, so the
	output does not depend on ``workers``. Line kinds are deterministic grids.
	"""
	if n < 1:
		raise DomainError("n must be at least 1")
	kind = RegionKind(kind)
	if kind in (RegionKind.WERNER_LINE, RegionKind.MEMS_LINE, RegionKind.PURE_LINE):
		return [describe(rho, kind.value) for rho in _line_states(kind, n)]
	if workers <= 1:
		return _sample_chunk(seed, range(n), kind.value)
	chunks = [list(chunk) for chunk in np.array_split(np.arange(n), workers) if len(chunk)]
	logger.info("sampling {} {} states on {} workers", n, kind.value, len(chunks))
	ctx = multiprocessing.get_context("spawn")
	with concurrent.futures.ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
		futures = [pool.submit(_sample_chunk, seed, [int(i) for i in chunk], kind.value) for chunk in chunks]
		records: List[RegionRecord] = []
		for fut in futures:
			records.extend(fut.result())
	return records


# ---------- hidden nonlocality ----------

@dataclass(frozen=True)
class HiddenNonlocalityWitness:
	p: float
	theta: float
	beta: float
	normal_form_beta: float
	normal_form_converged: bool


def scan_hidden_nonlocality(
	ps: Iterable[float] = (0.3, 0.4, 0.5, 0.6, 0.7),
	thetas: Iterable[float] = (np.pi / 16, np.pi / 8, 3 * np.pi / 16, np.pi / 4),
	margin: float = 1e-3,
	max_iter: int = 500,
) -> List[HiddenNonlocalityWitness]:
	"""
	Scan p |psi_t><psi_t| + (1 - p) |01><01| for states that satisfy every
	CHSH inequality but violate one after optimal local filtering.

	Returns:
		Witnesses with beta <= 1 - margin and normal-form beta >= 1 + margin
	"""
	witnesses: List[HiddenNonlocalityWitness] = []
	thetas = list(thetas)
	for p in ps:
		for theta in thetas:
			rho = gisin_state(p, theta)
			beta = max_violation(rho).beta
			if beta > 1.0 - margin:
				continue
			try:
				result = normal_form(rho, max_iter=max_iter, quiet=True)
			except SingularMarginalError:
				continue
			nf_beta = result.beta
			if nf_beta >= 1.0 + margin:
				witnesses.append(HiddenNonlocalityWitness(float(p), float(theta), beta, nf_beta, result.converged))
	logger.info("hidden nonlocality scan found {} witnesses", len(witnesses))
	return witnesses


__all__ = [
	"BoundCurve",
	"ExtremalForm",
	"HiddenNonlocalityWitness",
	"RegionKind",
	"RegionRecord",
	"bell_diagonal",
	"bell_diagonal_concurrence",
	"bound_curves",
	"describe",
	"extremal_form_state",
	"gisin_state",
	"mems",
	"pure_schmidt",
	"rank2_family",
	"region_sample",
	"sample_extremal_form",
	"scan_hidden_nonlocality",
	"spectral_beta_ceiling",
	"spectrum_maximizer",
	"werner",
]
