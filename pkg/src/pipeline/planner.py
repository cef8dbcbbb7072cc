"""
Analysis Planner
Resolves the requested analyses into an ordered plan and flags risky parameters.
"""

from typing import List, Dict, Any
import structlog

logger = structlog.get_logger(__name__)

ANALYSES = ("averaging", "energy", "autocorr", "kolmogorov", "tool1", "tool2", "tool3", "tool4")

DEPENDENCIES: Dict[str, List[str]] = {
    "tool1": ["averaging"],
    "tool2": ["averaging"],
}


class AnalysisPlanner:
    """
    Plans an analyze run
    - adds the analyses a requested one depends on
    - orders steps so dependencies run first
    - checks parameters against the trace length and records warnings
    """

    def __init__(self):
        self.logger = logger.bind(component="planner")

    def create_plan(self, requested: List[str], m: int, params: Dict[str, Any]) -> Dict[str, Any]:
        """
        Execution plan of an analyze run

        Args:
            requested: Analysis names, any order, duplicates allowed
            m: log2 of the dyadic trace length
            params: Analysis parameters (k, s, window, strict, ...)

        Returns:
            Plan dict with ordered steps, implied steps and warnings
        """
        unknown = [name for name in requested if name not in ANALYSES]
        if unknown:
            return {"status": "error", "error": f"unknown analyses: {', '.join(unknown)}"}

        wanted = set(requested)
        implied = sorted({dep for name in wanted for dep in DEPENDENCIES.get(name, [])} - wanted)
        wanted.update(implied)

        steps = []
        for name in ANALYSES:
            if name in wanted:
                steps.append({
                    "name": name,
                    "depends_on": DEPENDENCIES.get(name, []),
                    "implied": name in implied,
                })

        plan = {
            "status": "success",
            "steps": steps,
            "implied": implied,
            "warnings": self._assess_parameters(wanted, m, params),
        }

        self.logger.info("Analysis plan created",
                         steps=[step["name"] for step in steps],
                         implied=implied,
                         warnings=len(plan["warnings"]))
        return plan

    def _assess_parameters(self, wanted: set, m: int, params: Dict[str, Any]) -> List[str]:
        """Parameter combinations that will fail or fall outside recommended limits"""
        warnings = []
        k = params.get("k")
        s = params.get("s", 9)
        window = params.get("window", 512)

        if "kolmogorov" in wanted and 2 ** m < 2 * window:
            warnings.append(f"kolmogorov: trace of 2^{m} bins holds fewer than two windows of {window}")
        if "tool3" in wanted and k is not None and k > m - 10:
            warnings.append(f"tool3: k={k} exceeds the recommended m-10={m - 10}")
        if "tool4" in wanted:
            if s < 9:
                warnings.append(f"tool4: s={s} is below the recommended 9")
            if k is not None and k > m - s - 7:
                warnings.append(f"tool4: k={k} exceeds the recommended m-s-7={m - s - 7}")
        if "autocorr" in wanted and params.get("max_lag", 0) >= 2 ** m:
            warnings.append("autocorr: max_lag must be below the trace length")
        return warnings
