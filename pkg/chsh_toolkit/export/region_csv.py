from __future__ import annotations

import csv
import sys
from typing import Iterable, List

import numpy as np

from ..processing.families import RegionRecord

HEADER = ["kind", "C", "beta", "purity", "entropy"]


def format_float(value: float) -> str:
	"""Positional decimal with 15 significant digits."""
	return np.format_float_positional(float(value), precision=15, unique=False, fractional=False, trim="k")


def region_rows(records: Iterable[RegionRecord]) -> List[List[str]]:
	return [
		[r.kind, format_float(r.concurrence), format_float(r.beta), format_float(r.purity), format_float(r.entropy)]
		for r in records
	]


def export_region_csv(path: str, records: Iterable[RegionRecord]) -> None:
	"""
	Write region records as CSV with header ``kind,C,beta,purity,entropy``.
	``-`` writes to standard output. Rows are formatted before the file is
	opened, so a failure never leaves a partial file behind.
	"""
	rows = region_rows(records)
	if path == "-":
		writer = csv.writer(sys.stdout, lineterminator="\n")
		writer.writerow(HEADER)
		writer.writerows(rows)
		return
	with open(path, "w", encoding="utf-8", newline="") as f:
		writer = csv.writer(f, lineterminator="\n")
		writer.writerow(HEADER)
		writer.writerows(rows)
