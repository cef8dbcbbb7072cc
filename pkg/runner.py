#!/usr/bin/env python3
"""
Traffic Toolkit Runner
Batch CLI: simulate traces, analyze them, run interval detection on sessions.
"""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.errors import TrafficToolkitError
from src.pipeline import ANALYSES, INPUT_FORMATS, RunManager
from src.utils.config import Config
from src.utils.config_loader import ConfigLoader
from src.utils.logger import setup_logging, create_run_log_file, RunLogger


class ToolkitRunner:
    """
    Main runner
    Wires CLI arguments, configuration and logging to the run manager
    """

    def __init__(self, config: Config, out_dir: Optional[str] = None):
        self.config = config
        self.out_dir = out_dir or str(config.output_dir)
        self.manager = RunManager(self.out_dir)
        self.logger: Optional[RunLogger] = None

    def initialize(self, command: str, log_to_file: bool = False):
        """Sets up logging for one command"""
        log_file = None
        if log_to_file:
            self.config.ensure_directories()
            log_file = create_run_log_file(command, self.config.logs_dir)

        setup_logging(
            level=self.config.log_level,
            format_type=self.config.log_format,
            log_file=log_file
        )
        self.logger = RunLogger(command, {"out_dir": self.out_dir})
        self.logger.start_run()

    def log_steps(self, result: Dict[str, Any]):
        for index, step in enumerate(result["steps"]):
            if step["status"] == "success":
                self.logger.step_success(index, step.get("duration", 0.0), step.get("outputs"))
            elif step["status"] == "error":
                self.logger.step_failure(index, step["error"], step["error_type"])
            for skipped in step.get("skipped", []):
                self.logger.session_skipped(skipped["session"], skipped["reason"])

    def run_simulate(self, args: argparse.Namespace) -> Dict[str, Any]:
        overrides = {
            "model": args.model,
            "users": args.users,
            "bins_log2": args.bins_log2,
            "seed": args.seed,
            "bin_width": args.bin_width,
            "slow_start_max": args.slow_start_max,
            "rtt_level_count": args.rtt_level_count,
            "levels": args.levels,
        }
        if args.p is not None:
            overrides["load"] = {"p": args.p}
        base = {"seed": self.config.default_seed, "bin_width": self.config.default_bin_width}
        sim_config = ConfigLoader.resolve_sim_config(args.preset, args.config_file, overrides, base)
        if args.no_rtt:
            # flag values of None are ignored by the loader
            sim_config = sim_config.model_copy(update={"rtt": None})
        return self.manager.simulate(sim_config, args.trace_name)

    def run_analyze(self, args: argparse.Namespace) -> Dict[str, Any]:
        options = {
            "definition": args.definition,
            "p": args.p if args.p is not None else 2.0,
            "window": args.window,
            "epsilon": args.epsilon,
            "threshold": args.threshold,
            "k": args.k,
            "s": args.s,
            "strict": not args.no_strict,
            "max_lag": args.max_lag,
            "anchor": args.anchor if args.anchor is not None else (True if self.config.energy_zero_anchor else None),
            "thresholds": self.config.get_thresholds(),
        }
        analyses = args.analyses or ["averaging", "energy"]
        return self.manager.analyze(
            args.input,
            analyses,
            options,
            input_format=args.input_format,
            bin_width=args.bin_width or self.config.default_bin_width,
            key=args.key,
        )

    def run_ida(self, args: argparse.Namespace) -> Dict[str, Any]:
        overrides = {"base": args.base, "gamma": args.gamma, "c1": args.c1, "c2": args.c2}
        if args.gap_normalization:
            overrides["gap_normalization"] = args.gap_normalization
        if args.normalize_gaps:
            overrides["normalize_gaps"] = True
        if args.zero_column:
            overrides["zero_column"] = True
        ida_config = ConfigLoader.resolve_ida_config(args.config_file, overrides)
        return self.manager.ida(
            session_paths(args.input),
            ida_config,
            aggregate=args.aggregate,
            input_format=args.input_format,
            bin_width=args.bin_width or self.config.default_bin_width,
            key=args.key,
        )


def session_paths(inputs: List[str]) -> List[str]:
    """Files as given, directories expanded to their sorted .txt files"""
    paths: List[str] = []
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            paths.extend(str(found) for found in sorted(path.glob("*.txt")))
        else:
            paths.append(str(path))
    return paths


def parse_anchor(value: str) -> Any:
    """--anchor with no value anchors the first scale, --anchor J anchors scale J"""
    return True if value == "first" else int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Traffic trace simulation and multiresolution analysis",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Simulate the 0-1 model with 200 users
  python runner.py simulate --preset 0-1 --users 200 --seed 3 --out-dir out/m_a

  # Three-level sessions from a config file, flags override the file
  python runner.py simulate --config-file tests/levels.yaml --users 8

  # Averaging, Energy and Tool 1 on a simulated trace
  python runner.py analyze out/m_a/trace.txt --analyses averaging energy tool1

  # IDA over every session file of a directory with a sqrt(2) base
  python runner.py ida sessions/ --aggregate --base 1.41421356

  # Create or validate a run config
  python runner.py --create-example tests/example.yaml
  python runner.py --validate tests/example.yaml
        """
    )

    special = parser.add_mutually_exclusive_group()
    special.add_argument("--create-example", help="Write an example run config to this path")
    special.add_argument("--validate", help="Validate a run config without running anything")

    parser.add_argument("--config", help="Custom .env file")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None, help="Log level")
    parser.add_argument("--log-format", choices=["json", "text"], default=None, help="Log format")
    parser.add_argument("--log-file", action="store_true", help="Also log to a timestamped file in LOGS_DIR")
    parser.add_argument("--output", help="Save the run result as JSON")
    parser.add_argument("--verbose", action="store_true", help="Detailed output")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", help="Output directory (default OUTPUT_DIR)")
    common.add_argument("--config-file", help="YAML or key=value run config")
    common.add_argument("--bin-width", type=float, help="Bin width in seconds")

    subparsers = parser.add_subparsers(dest="command")

    simulate = subparsers.add_parser("simulate", parents=[common], help="Simulate a trace")
    simulate.add_argument("--preset", help="0-1, ARR, RH, RH_HT, ARRRH, EXP_IID, HT_IID, slow-start or a level label")
    simulate.add_argument("--model", help="Model name (model_a ... ht_iid, or 0-1 / arr / slow-start / levels)")
    simulate.add_argument("--users", type=int, help="Number of users n")
    simulate.add_argument("--bins-log2", type=int, help="Trace length 2^m bins")
    simulate.add_argument("--seed", type=int, help="Run seed")
    simulate.add_argument("--p", type=float, help="Tail exponent of the heavy-tailed load")
    simulate.add_argument("--slow-start-max", type=int, help="Slow Start maximum M")
    simulate.add_argument("--levels", help="Level label, e.g. 7/12/17")
    simulate.add_argument("--rtt-level-count", type=int, help="Finest levels continuing a Slow Start session")
    simulate.add_argument("--no-rtt", action="store_true", help="Sessions without RTT spikes")
    simulate.add_argument("--trace-name", default="trace.txt", help="Trace file name")

    analyze = subparsers.add_parser("analyze", parents=[common], help="Analyze a trace")
    analyze.add_argument("input", help="Trace file")
    analyze.add_argument("--analyses", nargs="+", choices=ANALYSES, help="Analyses to run (default averaging energy)")
    analyze.add_argument("--input-format", choices=INPUT_FORMATS, default="binned", help="Trace file format")
    analyze.add_argument("--key", help="Connection key shost,rhost,sport,rport (connections format)")
    analyze.add_argument("--definition", choices=["1", "2"], default="2", help="Estimator definition")
    analyze.add_argument("--p", type=float, help="Averaging exponent (default 2)")
    analyze.add_argument("--window", type=int, default=512, help="Kolmogorov window size")
    analyze.add_argument("--epsilon", type=float, default=0.01, help="Tool 1 slope floor")
    analyze.add_argument("--threshold", type=float, default=-0.1, help="Tool 2 flat-slope threshold")
    analyze.add_argument("--k", type=int, help="Tool 3/4 scale count")
    analyze.add_argument("--s", type=int, default=9, help="Tool 4 window exponent")
    analyze.add_argument("--no-strict", action="store_true", help="Warn instead of failing on Tool 3/4 limits")
    analyze.add_argument("--max-lag", type=int, help="Autocorrelation lags (default min(1024, n-1))")
    analyze.add_argument("--anchor", nargs="?", const="first", type=parse_anchor,
                         help="Shift log2 profiles to 0 at the first scale, or at scale J")

    ida = subparsers.add_parser("ida", parents=[common], help="Interval detection on sessions")
    ida.add_argument("input", nargs="+", help="Session files or directories")
    ida.add_argument("--input-format", choices=INPUT_FORMATS, default="binned", help="Session file format")
    ida.add_argument("--key", help="Connection key (connections format); all connections if absent")
    ida.add_argument("--aggregate", action="store_true", help="Superpose all sessions")
    ida.add_argument("--base", type=float, help="Length class base b")
    ida.add_argument("--gamma", type=float, help="Stage normalization threshold")
    ida.add_argument("--c1", type=float, help="Column rescaling threshold c1")
    ida.add_argument("--c2", type=float, help="Column rescaling threshold c2")
    ida.add_argument("--gap-normalization", choices=["row", "session"], help="Gap histogram divisor")
    ida.add_argument("--normalize-gaps", action="store_true", help="Rescale the gap column like the stages")
    ida.add_argument("--zero-column", action="store_true", help="Blank column before the gaps in im")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI function"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = Config(env_file=args.config)

        if args.log_level:
            os.environ["LOG_LEVEL"] = args.log_level
        if args.log_format:
            os.environ["LOG_FORMAT"] = args.log_format

        if args.create_example:
            if ConfigLoader.create_example_config(args.create_example):
                print(f"✅ Example config created: {args.create_example}")
                return 0
            print(f"❌ Example config could not be created: {args.create_example}")
            return 1

        if args.validate:
            validation = ConfigLoader.validate_config_syntax(args.validate)
            if validation["valid"]:
                print(f"✅ Config valid: {args.validate}")
                print(f"   Model: {validation.get('model', 'N/A')}")
                print(f"   Bins: {validation.get('bins', 0)}")
                for warning in validation["warnings"]:
                    print(f"   ! {warning}")
                return 0
            print(f"❌ Config invalid: {args.validate}")
            for error in validation["errors"]:
                print(f"   - {error}")
            return 9

        if not args.command:
            parser.print_help()
            return 2

        runner = ToolkitRunner(config, args.out_dir)
        runner.initialize(args.command, log_to_file=args.log_file)

        print(f"🚀 Running {args.command} -> {runner.out_dir}")
        if args.verbose:
            print(json.dumps(config.get_all_config(), indent=2))
        handler = getattr(runner, f"run_{args.command}")
        result = handler(args)

        runner.log_steps(result)
        runner.logger.end_run(result["status"], result["duration"])

        if args.output:
            output_path = Path(args.output)
            output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, 'w', encoding='utf-8') as f:
                json.dump(result, f, indent=2, ensure_ascii=False, default=str)
            print(f"📊 Run result saved: {args.output}")

        summary = result["summary"]
        if summary["exit_code"] == 0:
            print(f"✅ {args.command} completed, manifest: {result['manifest']}")
        else:
            print(f"❌ {summary['failed_steps']} step(s) failed, {summary['skipped_steps']} skipped")
            for failure in summary["failures"]:
                print(f"   - {failure['step']}: {failure['error']}")
        return summary["exit_code"]

    except KeyboardInterrupt:
        print("\n⚠️  Interrupted by user")
        return 130

    except TrafficToolkitError as e:
        print(f"❌ {type(e).__name__}: {e.message}")
        return e.exit_code

    except Exception as e:
        print(f"❌ Unexpected error: {str(e)}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
