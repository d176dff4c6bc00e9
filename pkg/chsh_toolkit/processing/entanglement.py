from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy.special import xlogy

from ..core.config import Tolerances, get_tolerances
from ..core.errors import DomainError
from ..core.numkernel import ComplexMatrix, hermitian_eigensystem, psd_sqrt, singular_values
from ..models.qstate import SIGMA_Y, DensityMatrix, as_density

SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

StateLike = Union[DensityMatrix, npt.ArrayLike]


@dataclass(frozen=True)
class ConcurrenceValue:
	value: float
	spin_flip_spectrum: Tuple[float, float, float, float]  # sqrt(l_i), descending

	def __float__(self) -> float:
		return self.value


def spin_flip(rho: StateLike) -> ComplexMatrix:
	"""
	rho~ = (sy x sy) conj(rho) (sy x sy).

	The conjugate is taken entrywise in the computational basis; for a
	Hermitian rho it equals the transpose rho^T.
	"""
	mat = as_density(rho).matrix
	return SIGMA_YY @ np.conj(mat) @ SIGMA_YY


def concurrence(rho: StateLike, tolerances: Optional[Tolerances] = None) -> ConcurrenceValue:
	"""
	Wootters concurrence max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)).

	The l_i are the eigenvalues of sqrt(rho) rho~ sqrt(rho), which shares the
	spectrum of rho rho~. Their square roots are read off directly as the
	singular values of sqrt(rho) sqrt(rho~), so rank-deficient states do not
	pick up sqrt(eps) errors from rounding-level eigenvalues.
	"""
	tol = get_tolerances(tolerances)
	state = as_density(rho)
	root = psd_sqrt(state.matrix, tol)
	# sqrt(rho~) = (sy x sy) conj(sqrt(rho)) (sy x sy)
	root_flipped = SIGMA_YY @ np.conj(root) @ SIGMA_YY
	roots = singular_values(root @ root_flipped)
	c = max(0.0, float(roots[0] - roots[1] - roots[2] - roots[3]))
	return ConcurrenceValue(value=min(c, 1.0), spin_flip_spectrum=tuple(float(r) for r in roots))


def binary_entropy(x: float) -> float:
	return float(-(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)) / np.log(2.0))


def eof(c: float) -> float:
	"""Entanglement of formation (in ebits) as a function of the concurrence."""
	c = float(c)
	if not 0.0 <= c <= 1.0:
		raise DomainError(f"concurrence must lie in [0, 1], got {c}")
	return binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0)


def partial_transpose(rho: StateLike) -> ComplexMatrix:
	"""Transpose on the B factor."""
	t = as_density(rho).matrix.reshape(2, 2, 2, 2)
	return t.transpose(0, 3, 2, 1).reshape(4, 4)


def negativity(rho: StateLike, tolerances: Optional[Tolerances] = None) -> float:
	"""N = max(0, -2 lambda_min(rho^T_B)); in [0, 1] for two qubits."""
	values = hermitian_eigensystem(partial_transpose(rho), tolerances).values
	return max(0.0, -2.0 * float(values[-1]))
