from __future__ import annotations

import json
from typing import Any, Dict, Iterable

from ..models.report import AnalysisReport
from ..models.state_io import matrix_to_pairs, state_to_data
from ..processing.filtering import NormalFormResult
from ..processing.verify import PropertyResult


def normal_form_to_data(result: NormalFormResult) -> Dict[str, Any]:
	return {
		"state": state_to_data(result.state),
		"filter": {
			"A": matrix_to_pairs(result.filter.a),
			"B": matrix_to_pairs(result.filter.b),
		},
		"probability": result.success_probability,
		"iterations": result.iterations,
		"converged": result.converged,
		"marginal_defect": result.marginal_defect,
		"beta": result.beta,
	}


def dumps_normal_form(result: NormalFormResult) -> str:
	return json.dumps(normal_form_to_data(result), indent=2)


def dumps_report(report: AnalysisReport) -> str:
	return json.dumps(report.to_dict(), indent=2)


def verification_to_data(results: Iterable[PropertyResult], suite: str, samples: int, seed: int) -> Dict[str, Any]:
	"""Summary document of a verify run; failing properties carry their first offending state."""
	records = []
	for r in results:
		record = r.summary()
		if r.counterexample is not None:
			record["counterexample"] = state_to_data(r.counterexample)
		records.append(record)
	return {
		"suite": suite,
		"samples": samples,
		"seed": seed,
		"passed": all(rec["passed"] for rec in records),
		"properties": records,
	}


def dumps_verification(results: Iterable[PropertyResult], suite: str, samples: int, seed: int) -> str:
	# worst_margin may be inf for a property with no qualifying samples; emit null instead
	data = verification_to_data(results, suite, samples, seed)
	for rec in data["properties"]:
		if rec["worst_margin"] == float("inf"):
			rec["worst_margin"] = None
	return json.dumps(data, indent=2)
