from __future__ import annotations

from typing import Optional

from loguru import logger

from ..core.config import ToolkitConfig, load_config
from ..core.errors import DegenerateStateError, SingularMarginalError
from ..models.qstate import DensityMatrix, entropy, purity
from ..models.report import AnalysisReport
from .chsh import max_violation, optimal_settings
from .entanglement import concurrence, eof, negativity
from .filtering import is_bell_diagonal, normal_form


def analyze_state(
	rho: DensityMatrix,
	config: Optional[ToolkitConfig] = None,
	tol: Optional[float] = None,
	max_iter: Optional[int] = None,
) -> AnalysisReport:
	"""Collect every entanglement and violation quantity of one state."""
	config = config or load_config()
	tols = config.tolerances
	c = concurrence(rho, tols).value
	beta = max_violation(rho)
	try:
		settings, _ = optimal_settings(rho, tols)
		settings_list = settings.as_list()
	except DegenerateStateError:
		settings_list = None

	nf_beta: Optional[float] = None
	nf_converged = False
	nf_iterations = 0
	try:
		result = normal_form(
			rho,
			tol=tol,
			max_iter=max_iter or config.normal_form_max_iter,
			tolerances=tols,
		)
		nf_beta = result.beta
		nf_converged = result.converged
		nf_iterations = result.iterations
	except SingularMarginalError as e:
		logger.warning("no full-rank normal form: {}", e)

	return AnalysisReport(
		concurrence=c,
		eof=eof(c),
		negativity=negativity(rho, tols),
		purity=purity(rho),
		entropy=entropy(rho),
		beta=beta.beta,
		optimal_settings=settings_list,
		bell_diagonal=is_bell_diagonal(rho, tols.validation),
		normal_form_beta=nf_beta,
		normal_form_converged=nf_converged,
		normal_form_iterations=nf_iterations,
	)
