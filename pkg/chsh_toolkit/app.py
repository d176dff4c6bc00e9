import argparse
import sys
import textwrap
from typing import List, Optional

from loguru import logger

from .core.config import ToolkitConfig, load_config
from .core.errors import ToolkitError
from .export.region_csv import export_region_csv
from .export.results_json import dumps_normal_form, dumps_report, dumps_verification
from .models.qstate import DensityMatrix
from .models.state_io import read_state, write_state
from .processing.analysis import analyze_state
from .processing.families import (
	RegionKind,
	bell_diagonal,
	gisin_state,
	mems,
	pure_schmidt,
	rank2_family,
	region_sample,
	werner,
)
from .processing.filtering import normal_form
from .processing.verify import SUITES, run_suites

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_NOT_CONVERGED = 2
EXIT_PROPERTY_VIOLATED = 3

_LEVELS = ("WARNING", "INFO", "DEBUG")


class _Parser(argparse.ArgumentParser):
	"""Usage errors are invalid input (exit 1), not argparse's default 2."""

	def error(self, message: str) -> None:  # type: ignore[override]
		self.print_usage(sys.stderr)
		self.exit(EXIT_INVALID_INPUT, f"{self.prog}: error: {message}\n")


def configure_logging(verbosity: int = 0) -> None:
	logger.remove()
	logger.add(sys.stderr, level=_LEVELS[min(verbosity, len(_LEVELS) - 1)], format="{level: <8} | {name}:{line} - {message}")


def _emit(text: str) -> None:
	sys.stdout.write(text)
	if not text.endswith("\n"):
		sys.stdout.write("\n")
	sys.stdout.flush()


# ---------- commands ----------

def cmd_analyze(args: argparse.Namespace, config: ToolkitConfig) -> int:
	rho = read_state(args.path, config.tolerances)
	report = analyze_state(rho, config, tol=args.tol, max_iter=args.max_iter)
	_emit(dumps_report(report))
	return EXIT_OK if report.normal_form_converged else EXIT_NOT_CONVERGED


def _family_state(args: argparse.Namespace, config: ToolkitConfig) -> DensityMatrix:
	name = args.family
	tols = config.tolerances
	if name == "pure":
		return pure_schmidt(args.c)
	if name == "werner":
		return werner(args.p)
	if name == "mems":
		return mems(args.c)
	if name == "rank2":
		return rank2_family(args.c, args.a, tols)
	if name == "bell-diag":
		return bell_diagonal(args.weights, tols)
	return gisin_state(args.p, args.theta)


def cmd_family(args: argparse.Namespace, config: ToolkitConfig) -> int:
	write_state(_family_state(args, config), "-")
	return EXIT_OK


def cmd_region(args: argparse.Namespace, config: ToolkitConfig) -> int:
	seed = config.seed if args.seed is None else args.seed
	workers = config.workers if args.workers is None else args.workers
	records = region_sample(seed, args.samples, args.kind, workers=workers)
	export_region_csv(args.out, records)
	logger.info("wrote {} {} records to {}", len(records), args.kind, args.out)
	return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: ToolkitConfig) -> int:
	seed = config.seed if args.seed is None else args.seed
	results = run_suites(args.suite, args.samples, seed, brute_force_samples=config.brute_force_samples)
	_emit(dumps_verification(results, args.suite, args.samples, seed))
	return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY_VIOLATED


def cmd_normal_form(args: argparse.Namespace, config: ToolkitConfig) -> int:
	rho = read_state(args.path, config.tolerances)
	max_iter = config.normal_form_max_iter if args.max_iter is None else args.max_iter
	result = normal_form(rho, tol=args.tol, max_iter=max_iter, tolerances=config.tolerances)
	_emit(dumps_normal_form(result))
	return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


# ---------- parser ----------

def _positive_int(text: str) -> int:
	value = int(text)
	if value < 1:
		raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
	return value


def build_parser() -> argparse.ArgumentParser:
	p = _Parser(
		prog="chsh-toolkit",
		description="Entanglement, CHSH violation and local-filtering normal forms of two-qubit states.",
		formatter_class=argparse.RawDescriptionHelpFormatter,
		epilog=textwrap.dedent(
			"""
			Examples:
			  chsh-toolkit family werner --p 0.9 | chsh-toolkit analyze -
			  chsh-toolkit normal-form state.json --max-iter 500
			  chsh-toolkit region --kind mixed-hs --samples 10000 --seed 7 --out region.csv
			  chsh-toolkit verify --suite bounds --samples 10000

			Exit codes: 0 success, 1 invalid input, 2 normal form not converged,
			3 property violated.
			"""
		),
	)
	p.add_argument("--config", help="YAML file with tolerances, seed and iteration limits")
	p.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging on stderr")
	sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

	analyze = sub.add_parser("analyze", help="Full entanglement / violation report of a state file")
	analyze.add_argument("path", help="State JSON file, '-' for standard input")
	analyze.add_argument("--tol", type=float, default=None, help="Normal-form convergence tolerance")
	analyze.add_argument("--max-iter", type=_positive_int, default=None, help="Normal-form iteration limit")
	analyze.set_defaults(func=cmd_analyze)

	family = sub.add_parser("family", help="Write a named family member as state JSON")
	families = family.add_subparsers(dest="family", required=True, parser_class=_Parser)
	f = families.add_parser("pure", help="Schmidt state with concurrence C")
	f.add_argument("--c", type=float, required=True)
	f = families.add_parser("werner", help="p |Phi+><Phi+| + (1 - p) I/4")
	f.add_argument("--p", type=float, required=True)
	f = families.add_parser("mems", help="C |Phi+><Phi+| + (1 - C) |01><01|")
	f.add_argument("--c", type=float, required=True)
	f = families.add_parser("rank2", help="Rank-2 states on the pure-state curve, |a| <= sqrt(1 - C^2)")
	f.add_argument("--c", type=float, required=True)
	f.add_argument("--a", type=float, required=True)
	f = families.add_parser("bell-diag", help="Bell-diagonal state with weights on (Phi+, Phi-, Psi+, Psi-)")
	f.add_argument("--weights", type=float, nargs=4, required=True, metavar="W")
	f = families.add_parser("gisin", help="p |psi_t><psi_t| + (1 - p) |01><01|, psi_t = cos t |00> + sin t |11>")
	f.add_argument("--p", type=float, required=True)
	f.add_argument("--theta", type=float, required=True)
	family.set_defaults(func=cmd_family)

	region = sub.add_parser("region", help="CSV of (C, beta, purity, entropy) records")
	region.add_argument("--samples", type=_positive_int, default=1000)
	region.add_argument("--seed", type=int, default=None)
	region.add_argument("--kind", choices=[k.value for k in RegionKind], default=RegionKind.MIXED_HS.value)
	region.add_argument("--out", default="-", help="CSV path, '-' for standard output")
	region.add_argument("--workers", type=_positive_int, default=None)
	region.set_defaults(func=cmd_region)

	verify = sub.add_parser("verify", help="Run the Monte Carlo property suites")
	verify.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
	verify.add_argument("--samples", type=_positive_int, default=100)
	verify.add_argument("--seed", type=int, default=None)
	verify.set_defaults(func=cmd_verify)

	nf = sub.add_parser("normal-form", help="Bell-diagonal normal form under local filtering")
	nf.add_argument("path", help="State JSON file, '-' for standard input")
	nf.add_argument("--tol", type=float, default=None)
	nf.add_argument("--max-iter", type=_positive_int, default=None)
	nf.set_defaults(func=cmd_normal_form)
	return p


def main(argv: Optional[List[str]] = None) -> int:
	# region workers are spawned, never forked
	try:
		import multiprocessing as _mp
		_mp.set_start_method("spawn", force=True)
	except RuntimeError:
		pass
	args = build_parser().parse_args(argv)
	configure_logging(args.verbose)
	try:
		config = load_config(args.config)
		return args.func(args, config)
	except (ToolkitError, OSError) as e:
		logger.debug("command {} failed", args.command)
		print(f"Error: {e}", file=sys.stderr)
		return EXIT_INVALID_INPUT


if __name__ == "__main__":
	sys.exit(main())
