from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
	from ..models.qstate import ValidationReport


class ToolkitError(Exception):
	pass


class DomainError(ToolkitError, ValueError):
	"""A parameter lies outside the domain of the operation."""


class StateValidationError(ToolkitError, ValueError):
	def __init__(self, message: str, report: Optional["ValidationReport"] = None) -> None:
		super().__init__(message)
		self.report = report


class UnphysicalCorrelationsError(StateValidationError):
	"""A correlation matrix whose reconstruction is not positive semidefinite."""


class SingularMarginalError(ToolkitError, ArithmeticError):
	"""A reduced state (or 2x2 PSD matrix) has an eigenvalue below rank_tol."""


class AnnihilatedStateError(ToolkitError, ArithmeticError):
	"""A local filter succeeds with probability below rank_tol."""


class DegenerateStateError(ToolkitError, ArithmeticError):
	pass


class StateFormatError(ToolkitError, ValueError):
	pass


class ConfigError(ToolkitError, ValueError):
	"""The configuration file is not valid YAML or fails validation."""
