"""
Step Executor
Runs simulation, analysis and interval-detection steps and writes their outputs.
"""

from typing import Dict, Any, List, Optional, Tuple
from pathlib import Path
import time

import numpy as np
import structlog

from ..errors import DegenerateInputError, TrafficToolkitError
from ..models.ida import IdaConfig, IdaResult
from ..models.profiles import Definition
from ..models.simulation import SimConfig
from ..models.trace import DyadicView, SessionBitmap
from ..analysis import gaussianity, level_tools, multires
from ..analysis.ida import aggregate_ida, run_ida
from ..simulation.generators import simulate
from ..utils import writers

logger = structlog.get_logger(__name__)


class StepExecutor:
    """
    Executes one step at a time
    - every step returns a result dict with status, outputs and error details
    - toolkit errors are caught and reported with their exit code
    - computed profiles are kept in the context for dependent steps
    """

    def __init__(self, out_dir: Path, options: Optional[Dict[str, Any]] = None):
        self.logger = logger.bind(component="executor")
        self.out_dir = Path(out_dir)
        self.options = options or {}
        self.context: Dict[str, Any] = {}

    def _path(self, name: str) -> str:
        return str(self.out_dir / name)

    def _run(self, step: str, action) -> Dict[str, Any]:
        """Runs an action returning its output files, wraps errors in the result"""
        started = time.perf_counter()
        try:
            outputs = action()
            return {
                "status": "success",
                "step": step,
                "outputs": outputs,
                "duration": time.perf_counter() - started,
            }
        except TrafficToolkitError as e:
            self.logger.error("Step failed", **{"step": step, **e.to_dict()})
            return {
                "status": "error",
                "step": step,
                "outputs": [],
                "error": e.message,
                "error_type": type(e).__name__,
                "exit_code": e.exit_code,
                "duration": time.perf_counter() - started,
            }

    # Simulation
    def execute_simulation(self, config: SimConfig, trace_name: str = "trace.txt") -> Dict[str, Any]:
        """
        Simulates the configured model and writes the trace in format C

        Returns:
            Step result; the trace is kept in the context under "trace"
        """
        def action() -> List[str]:
            trace = simulate(config)
            self.context["trace"] = trace
            return [writers.write_trace(self._path(trace_name), trace.values)]

        return self._run("simulate", action)

    # Analyses
    def execute_analysis(self, name: str, view: DyadicView) -> Dict[str, Any]:
        """
        Runs one analysis on a dyadic view

        Args:
            name: One of the planner's analysis names
            view: Power-of-two series

        Returns:
            Step result with the written files
        """
        handler = getattr(self, f"_analysis_{name}")
        return self._run(name, lambda: handler(view))

    def _definition(self) -> Definition:
        return Definition(str(self.options.get("definition", "2")))

    def _profile_outputs(self, name: str, profile) -> List[str]:
        anchor = self.options.get("anchor")
        logs = None
        if anchor is not None and anchor is not False:
            logs = multires.anchor_log2_profile(profile, None if anchor is True else int(anchor))
        return [writers.write_profile_csv(self._path(f"{name}.csv"), profile, logs)]

    def _analysis_averaging(self, view: DyadicView) -> List[str]:
        profile = multires.averaging(view, float(self.options.get("p", 2.0)), self._definition())
        self.context["averaging"] = profile
        return self._profile_outputs("averaging", profile)

    def _analysis_energy(self, view: DyadicView) -> List[str]:
        profile = multires.energy(view, self._definition())
        self.context["energy"] = profile
        return self._profile_outputs("energy", profile)

    def _analysis_autocorr(self, view: DyadicView) -> List[str]:
        max_lag = self.options.get("max_lag") or min(1024, len(view) - 1)
        series = multires.autocorrelation(view.values, int(max_lag))
        return [writers.write_autocorr_csv(self._path("autocorr.csv"), series)]

    def _analysis_kolmogorov(self, view: DyadicView) -> List[str]:
        series = gaussianity.windowed_kolmogorov(view.values, int(self.options.get("window", 512)))
        summary: Dict[str, Any] = {
            "window": series.window_size,
            "windows": len(series),
            "missing": series.missing_count,
            "mean_distance": gaussianity.mean_distance(series),
        }
        if summary["mean_distance"] is not None:
            summary["regime"] = gaussianity.classify_distance(
                summary["mean_distance"], **self.options.get("thresholds", {})
            )
            summary["oscillation"] = gaussianity.oscillation_amplitude(series)
        try:
            summary["traffic_correlation"] = gaussianity.distance_traffic_correlation(series)
        except TrafficToolkitError as e:
            summary["traffic_correlation"] = None
            self.logger.warning("Distance/traffic correlation unavailable", reason=e.message)
        return [
            writers.write_kolmogorov_csv(self._path("kolmogorov.csv"), series),
            writers.write_json(self._path("kolmogorov.json"), summary),
        ]

    def _analysis_tool1(self, view: DyadicView) -> List[str]:
        series = level_tools.tool1_level_detector(
            self.context["averaging"], float(self.options.get("epsilon", level_tools.DEFAULT_EPSILON))
        )
        return [
            writers.write_slope_csv(self._path("tool1.csv"), series),
            writers.write_json(self._path("tool1.json"), series.model_dump(mode="json")),
        ]

    def _analysis_tool2(self, view: DyadicView) -> List[str]:
        regions = level_tools.tool2_flat_regions(
            self.context["averaging"], float(self.options.get("threshold", level_tools.DEFAULT_FLAT_THRESHOLD))
        )
        return [
            writers.write_flat_csv(self._path("tool2.csv"), regions),
            writers.write_json(self._path("tool2.json"), regions.model_dump(mode="json")),
        ]

    def _scale_count(self, view: DyadicView, margin: int) -> int:
        k = self.options.get("k")
        return int(k) if k is not None else max(1, view.m - margin)

    def _analysis_tool3(self, view: DyadicView) -> List[str]:
        report = level_tools.tool3_gaussian_deviation(
            view, self._scale_count(view, 10), strict=bool(self.options.get("strict", True))
        )
        self.context["tool3"] = report
        return [writers.write_json(self._path("tool3.json"), report.model_dump(mode="json"))]

    def _analysis_tool4(self, view: DyadicView) -> List[str]:
        s = int(self.options.get("s", level_tools.DEFAULT_WINDOW_EXPONENT))
        report = level_tools.tool4_burstiness(
            view, self._scale_count(view, s + 7), s, strict=bool(self.options.get("strict", True))
        )
        self.context["tool4"] = report
        return [writers.write_json(self._path("tool4.json"), report.model_dump(mode="json"))]

    def write_burstiness_summary(self, trace_name: str) -> Optional[str]:
        """One-line trace,D,O summary of whichever burstiness tools ran"""
        reports = [self.context[name] for name in ("tool3", "tool4") if name in self.context]
        if not reports:
            return None
        report = reports[0] if len(reports) == 1 else reports[0].merge(reports[1])
        return writers.write_burstiness_csv(self._path("burstiness.csv"), trace_name, report)

    # Interval detection
    def execute_ida(
        self,
        sessions: List[Tuple[str, SessionBitmap]],
        config: IdaConfig,
        aggregate: bool,
    ) -> Dict[str, Any]:
        """
        Runs the IDA on one session, or on many and superposes the results

        Args:
            sessions: (name, bitmap) pairs
            config: IDA parameters
            aggregate: Skip degenerate sessions with a warning and superpose the rest

        Returns:
            Step result; skipped sessions are listed under "skipped"
        """
        skipped: List[Dict[str, str]] = []

        def action() -> List[str]:
            results: List[IdaResult] = []
            for name, bitmap in sessions:
                try:
                    results.append(run_ida(bitmap, config))
                except DegenerateInputError as e:
                    if not aggregate:
                        raise
                    self.logger.warning("Degenerate session skipped", session=name, reason=e.message)
                    skipped.append({"session": name, "reason": e.message})
            if not results:
                raise DegenerateInputError("no session could be analyzed", sessions=len(sessions))
            result = aggregate_ida(results) if aggregate else results[0]
            self.context["ida"] = result
            return [
                writers.write_ida_csv(self._path("ida.csv"), result),
                writers.write_json(self._path("ida.json"), result.model_dump(mode="json")),
                writers.write_pgm(self._path("ida.pgm"), np.asarray(result.im)),
            ]

        step_result = self._run("ida", action)
        step_result["skipped"] = skipped
        return step_result
