"""
Toolkit configuration.

All numeric tolerances live in one record so that the whole package has a
single tuning point. The CLI can override the defaults with a YAML file
passed through ``--config``; nothing is read from the environment.
"""
from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError

DEFAULT_SEED = 20020917


class Tolerances(BaseModel):
	model_config = ConfigDict(frozen=True, extra="forbid")

	validation: float = Field(1e-8, gt=0.0)
	convergence: float = Field(1e-10, gt=0.0)
	rank_tol: float = Field(1e-12, gt=0.0)
	hermitian: float = Field(1e-10, gt=0.0)


class ToolkitConfig(BaseModel):
	model_config = ConfigDict(frozen=True, extra="forbid")

	tolerances: Tolerances = Field(default_factory=Tolerances)
	seed: int = Field(DEFAULT_SEED, ge=0)
	normal_form_max_iter: int = Field(10_000, ge=1)
	brute_force_samples: int = Field(64, ge=1)
	workers: int = Field(1, ge=1)


_DEFAULT_CONFIG = ToolkitConfig()


def get_tolerances(tolerances: Optional[Tolerances] = None) -> Tolerances:
	return _DEFAULT_CONFIG.tolerances if tolerances is None else tolerances


def load_config(path: Optional[Union[str, Path]] = None) -> ToolkitConfig:
	"""
	Load a configuration file.

	Args:
		path: YAML file with any subset of the ToolkitConfig fields. ``None``
			returns the defaults.

	Returns:
		Validated ToolkitConfig

	Raises:
		ConfigError: malformed YAML or invalid field values
	"""
	if path is None:
		return _DEFAULT_CONFIG
	with open(path, "r", encoding="utf-8") as f:
		try:
			data = yaml.safe_load(f) or {}
		except yaml.YAMLError as e:
			raise ConfigError(f"invalid YAML in {path}: {e}") from None
	try:
		return ToolkitConfig.model_validate(data)
	except ValidationError as e:
		raise ConfigError(f"invalid configuration in {path}: {e}") from None
