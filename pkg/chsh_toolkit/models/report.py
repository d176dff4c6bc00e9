from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional


@dataclass
class AnalysisReport:
	concurrence: float
	eof: float
	negativity: float
	purity: float
	entropy: float
	beta: float
	optimal_settings: Optional[List[float]]  # a, b, c, d flattened; None when R = 0
	bell_diagonal: bool
	normal_form_beta: Optional[float]  # None when the state has no full-rank normal form
	normal_form_converged: bool
	normal_form_iterations: int = 0

	def to_dict(self) -> Dict[str, Any]:
		return asdict(self)
