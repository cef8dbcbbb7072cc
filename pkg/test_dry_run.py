#!/usr/bin/env python3
"""
Dry Run Test - full simulate / analyze / ida workflow through the run manager
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from src.models.ida import IdaConfig
from src.pipeline import RunManager
from src.utils.config_loader import ConfigLoader
from src.utils.logger import setup_logging
from src.utils.writers import write_trace


def show_summary(title: str, result: dict):
    summary = result["summary"]
    print(f"\n🎯 {title}:")
    print(f"   📈 Overall Status: {summary['overall_status']}")
    print(f"   📊 Total Steps: {summary['total_steps']}")
    print(f"   ✅ Passed: {summary['passed_steps']}")
    print(f"   ❌ Failed: {summary['failed_steps']}")
    print(f"   ⏭️  Skipped: {summary['skipped_steps']}")
    print(f"   ⏱️  Duration: {result['duration']:.2f} seconds")
    for step in result["steps"][:5]:
        print(f"      - {step['step']}: {step['status']} ({len(step.get('outputs', []))} files)")


def test_full_workflow():
    """Simulates a small trace, analyzes it and runs the IDA on one session"""

    print("🚀 Dry Run Test - Toolkit Workflow")
    print("=" * 60)

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp)

        # 1. Run config
        print("\n📝 Creating run config...")
        config_path = out / "dry-run.yaml"
        assert ConfigLoader.create_example_config(str(config_path)), "example config not written"
        sim_config = ConfigLoader.resolve_sim_config(
            config_file=str(config_path),
            overrides={"model": "0-1", "users": 8, "bins_log2": 12},
        )
        print(f"✅ Config resolved: {sim_config.model.value}, {sim_config.users} users, {sim_config.bins} bins")

        # 2. Simulate
        print("\n⚡ Simulating...")
        simulated = RunManager(str(out / "simulate")).simulate(sim_config)
        show_summary("Simulation", simulated)
        assert simulated["summary"]["exit_code"] == 0, simulated["summary"]["failures"]

        # 3. Analyze
        print("\n🔍 Analyzing...")
        trace_path = str(out / "simulate" / "trace.txt")
        analyzed = RunManager(str(out / "analyze")).analyze(
            trace_path,
            ["averaging", "energy", "autocorr", "tool1", "tool2"],
            {"definition": "2", "p": 2.0, "max_lag": 64},
        )
        show_summary("Analysis", analyzed)
        assert analyzed["summary"]["exit_code"] == 0, analyzed["summary"]["failures"]

        # 4. IDA
        print("\n🧩 Interval detection...")
        session_path = str(out / "session.txt")
        write_trace(session_path, np.tile(np.r_[np.ones(16), np.zeros(4)], 20))
        detected = RunManager(str(out / "ida")).ida([session_path], IdaConfig())
        show_summary("IDA", detected)
        assert detected["summary"]["exit_code"] == 0, detected["summary"]["failures"]

        for name in ("ida.csv", "ida.json", "ida.pgm", "manifest.json"):
            assert (out / "ida" / name).exists(), f"{name} missing"

    print("\n🎉 Dry Run Test passed!")
    print("✅ Toolkit works end to end")


def main():
    """Main entry point"""

    setup_logging(level="WARNING", format_type="text")

    try:
        test_full_workflow()
    except Exception as e:
        print(f"\n❌ Dry Run Test error: {str(e)}")
        import traceback
        traceback.print_exc()
        print("\n💥 RESULT: the toolkit has problems!")
        sys.exit(1)

    print("\n🎯 RESULT: toolkit verified and ready to use!")
    sys.exit(0)


if __name__ == "__main__":
    main()
