"""
Run Manager
Orchestrates the simulate, analyze and ida commands: loading, planning,
execution, verification and the manifest.
"""

from typing import Dict, Any, List, Optional, Tuple
from pathlib import Path
import time

import structlog

from .. import __version__
from ..errors import EmptyInputError, InvalidArgumentError, TrafficToolkitError
from ..models.ida import IdaConfig
from ..models.simulation import SimConfig
from ..models.trace import BinnedTrace, SessionBitmap
from ..analysis.binning import bin_trace, to_bitmap, truncate_to_power_of_two
from ..utils import trace_loader
from .executor import StepExecutor
from .planner import AnalysisPlanner
from .verifier import RunVerifier

logger = structlog.get_logger(__name__)

INPUT_FORMATS = ("binned", "packets", "connections")


class RunManager:
    """
    Runs one CLI command end to end
    - loads inputs in the requested format
    - plans and executes the steps
    - verifies the results and writes the manifest
    """

    def __init__(self, out_dir: str):
        self.logger = logger.bind(component="run_manager")
        self.out_dir = Path(out_dir)
        self.planner = AnalysisPlanner()
        self.verifier = RunVerifier()

    def _finish(
        self,
        command: str,
        config: Dict[str, Any],
        seed: Optional[int],
        inputs: List[str],
        step_results: List[Dict[str, Any]],
        started: float,
    ) -> Dict[str, Any]:
        summary = self.verifier.verify_results(step_results)
        manifest = self.verifier.write_manifest(
            self.out_dir, command, config, seed, inputs, step_results, summary, __version__
        )
        duration = time.perf_counter() - started
        self.logger.info("Command completed", command=command, status=summary["overall_status"], duration=duration)
        return {
            "status": summary["overall_status"],
            "summary": summary,
            "steps": step_results,
            "manifest": manifest,
            "duration": duration,
        }

    @staticmethod
    def _load_error(step: str, error: TrafficToolkitError) -> Dict[str, Any]:
        return {
            "status": "error",
            "step": step,
            "outputs": [],
            "error": error.message,
            "error_type": type(error).__name__,
            "exit_code": error.exit_code,
        }

    # simulate
    def simulate(self, config: SimConfig, trace_name: str = "trace.txt") -> Dict[str, Any]:
        """
        Simulates a trace and writes it with its manifest

        Args:
            config: Resolved simulator configuration
            trace_name: Trace file name inside the output directory

        Returns:
            Run result (status, summary, steps, manifest path)
        """
        started = time.perf_counter()
        executor = StepExecutor(self.out_dir)
        step_results = [executor.execute_simulation(config, trace_name)]
        return self._finish(
            "simulate", config.model_dump(mode="json"), config.seed, [], step_results, started
        )

    # analyze
    def load_binned(
        self,
        path: str,
        input_format: str,
        bin_width: float,
        key: Optional[str] = None,
    ) -> BinnedTrace:
        """BinnedTrace from a format C file, or by binning a format A / B file"""
        if input_format == "binned":
            return trace_loader.load_prebinned(path, bin_width)
        if input_format == "packets":
            return bin_trace(trace_loader.load_packet_trace(path), bin_width)
        if input_format == "connections":
            connection = trace_loader.parse_connection_key(key)
            if connection is None:
                raise InvalidArgumentError("connections input needs a connection key")
            return bin_trace(trace_loader.load_connection(path, connection), bin_width)
        raise InvalidArgumentError(f"unknown input format: {input_format}", known=list(INPUT_FORMATS))

    def analyze(
        self,
        path: str,
        analyses: List[str],
        options: Dict[str, Any],
        input_format: str = "binned",
        bin_width: float = 0.001,
        key: Optional[str] = None,
    ) -> Dict[str, Any]:
        """
        Runs the requested analyses on one trace

        Args:
            path: Trace file
            analyses: Analysis names (dependencies are added automatically)
            options: Analysis parameters (definition, p, window, epsilon, threshold, k, s, ...)
            input_format: binned / packets / connections
            bin_width: Bin width Δ (s)
            key: Connection key for the connections format

        Returns:
            Run result
        """
        started = time.perf_counter()
        config = {
            "input_format": input_format,
            "bin_width": bin_width,
            "key": key,
            "analyses": sorted(set(analyses)),
            "options": options,
        }
        try:
            view = truncate_to_power_of_two(self.load_binned(path, input_format, bin_width, key))
        except TrafficToolkitError as e:
            self.logger.error("Trace could not be loaded", **{"path": path, **e.to_dict()})
            return self._finish("analyze", config, None, [], [self._load_error("load", e)], started)

        plan = self.planner.create_plan(analyses, view.m, options)
        if plan["status"] != "success":
            error = InvalidArgumentError(plan["error"])
            return self._finish("analyze", config, None, [path], [self._load_error("plan", error)], started)
        for warning in plan["warnings"]:
            self.logger.warning("Plan warning", warning=warning)
        config["implied"] = plan["implied"]

        executor = StepExecutor(self.out_dir, options)
        step_results: List[Dict[str, Any]] = []
        failed = set()
        for step in plan["steps"]:
            missing = [dep for dep in step["depends_on"] if dep in failed]
            if missing:
                step_results.append({"status": "skipped", "step": step["name"], "outputs": [], "reason": missing})
                failed.add(step["name"])
                continue
            result = executor.execute_analysis(step["name"], view)
            if result["status"] != "success":
                failed.add(step["name"])
            step_results.append(result)

        summary_path = executor.write_burstiness_summary(Path(path).stem)
        if summary_path:
            step_results.append({"status": "success", "step": "burstiness", "outputs": [summary_path]})

        return self._finish("analyze", config, None, [path], step_results, started)

    # ida
    def load_sessions(
        self,
        paths: List[str],
        input_format: str,
        bin_width: float,
        key: Optional[str] = None,
    ) -> List[Tuple[str, SessionBitmap]]:
        """
        Session bitmaps from format C bitmap files, format A packet files, or the
        connections of format B files (one key, or all of them)
        """
        sessions: List[Tuple[str, SessionBitmap]] = []
        for path in paths:
            name = Path(path).stem
            if input_format == "binned":
                sessions.append((name, trace_loader.load_session_bitmap(path, bin_width)))
            elif input_format == "packets":
                sessions.append((name, to_bitmap(trace_loader.load_packet_trace(path), bin_width)))
            elif input_format == "connections":
                connection = trace_loader.parse_connection_key(key)
                if connection is not None:
                    trace = trace_loader.load_connection(path, connection)
                    if len(trace) == 0:
                        raise EmptyInputError("connection not found in trace", key=str(connection), path=path)
                    sessions.append((f"{name}:{connection}", to_bitmap(trace, bin_width)))
                else:
                    for found, trace in trace_loader.load_connections(path).items():
                        sessions.append((f"{name}:{found}", to_bitmap(trace, bin_width)))
            else:
                raise InvalidArgumentError(f"unknown input format: {input_format}", known=list(INPUT_FORMATS))
        if not sessions:
            raise EmptyInputError("no sessions found", inputs=len(paths))
        return sessions

    def ida(
        self,
        paths: List[str],
        config: IdaConfig,
        aggregate: bool = False,
        input_format: str = "binned",
        bin_width: float = 0.001,
        key: Optional[str] = None,
    ) -> Dict[str, Any]:
        """
        Interval detection on one session, or superposed over many

        Returns:
            Run result; degenerate sessions are skipped in aggregate mode
        """
        started = time.perf_counter()
        run_config = {
            "ida": config.model_dump(mode="json"),
            "aggregate": aggregate,
            "input_format": input_format,
            "bin_width": bin_width,
            "key": key,
        }
        try:
            sessions = self.load_sessions(paths, input_format, bin_width, key)
        except TrafficToolkitError as e:
            self.logger.error("Sessions could not be loaded", **e.to_dict())
            return self._finish("ida", run_config, None, [], [self._load_error("load", e)], started)

        if len(sessions) > 1 and not aggregate:
            self.logger.warning("Several sessions found, analyzing the first", sessions=len(sessions))
        run_config["sessions"] = [name for name, _ in sessions]

        executor = StepExecutor(self.out_dir)
        result = executor.execute_ida(sessions if aggregate else sessions[:1], config, aggregate)
        run_config["skipped"] = result.get("skipped", [])
        return self._finish("ida", run_config, None, list(paths), [result], started)
