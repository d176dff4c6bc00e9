from .analysis import analyze_state
from .chsh import max_violation, optimal_settings
from .entanglement import concurrence, eof, negativity
from .filtering import normal_form

__all__ = [
	"analyze_state",
	"concurrence",
	"eof",
	"max_violation",
	"negativity",
	"normal_form",
	"optimal_settings",
]
