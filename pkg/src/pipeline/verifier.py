"""
Run Verifier
Summarizes step results, picks the exit code and writes the run manifest.
"""

from typing import Dict, Any, List, Optional
from pathlib import Path
import structlog

from ..models.manifest import RunManifest
from ..utils import writers

logger = structlog.get_logger(__name__)

MANIFEST_NAME = "manifest.json"


class RunVerifier:
    """
    Checks a run's outcome
    - counts succeeded, failed and skipped steps
    - exit code 0 only when every step succeeded, else the first failure's code
    - records digests of inputs and outputs in the manifest
    """

    def __init__(self):
        self.logger = logger.bind(component="verifier")

    def verify_results(self, step_results: List[Dict[str, Any]]) -> Dict[str, Any]:
        """
        Run summary from the step results

        Args:
            step_results: Executor results in execution order

        Returns:
            Summary with overall_status, counts, failures and exit_code
        """
        failures = [
            {
                "step": result.get("step"),
                "error": result.get("error"),
                "error_type": result.get("error_type"),
                "exit_code": result.get("exit_code", 1),
            }
            for result in step_results
            if result.get("status") == "error"
        ]
        skipped = [result for result in step_results if result.get("status") == "skipped"]
        passed = len(step_results) - len(failures) - len(skipped)

        if not failures and not skipped:
            status = "success"
        elif passed > 0:
            status = "partial"
        else:
            status = "error"

        exit_code = failures[0]["exit_code"] if failures else (1 if skipped else 0)

        summary = {
            "overall_status": status,
            "total_steps": len(step_results),
            "passed_steps": passed,
            "failed_steps": len(failures),
            "skipped_steps": len(skipped),
            "failures": failures,
            "exit_code": exit_code,
        }
        self.logger.info("Run verified",
                         status=status,
                         passed=passed,
                         failed=len(failures),
                         exit_code=exit_code)
        return summary

    def write_manifest(
        self,
        out_dir: Path,
        command: str,
        config: Dict[str, Any],
        seed: Optional[int],
        inputs: List[str],
        step_results: List[Dict[str, Any]],
        summary: Dict[str, Any],
        tool_version: str,
    ) -> str:
        """
        Writes manifest.json next to the outputs

        Returns:
            Manifest path
        """
        out_dir = Path(out_dir)
        outputs = sorted(
            {str(Path(path).relative_to(out_dir)) for result in step_results for path in result.get("outputs", [])}
        )
        manifest = RunManifest(
            command=command,
            config=config,
            seed=seed,
            input_digests={Path(path).name: writers.sha256_file(path) for path in inputs},
            outputs=outputs,
            output_digests={name: writers.sha256_file(str(out_dir / name)) for name in outputs},
            tool_version=tool_version,
            status=summary["overall_status"],
            failures=summary["failures"],
        )
        path = writers.write_json(str(out_dir / MANIFEST_NAME), manifest.model_dump(mode="json"))
        self.logger.info("Manifest written", path=path, outputs=len(outputs))
        return path
