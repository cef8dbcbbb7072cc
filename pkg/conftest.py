"""Repository-level pytest configuration: import path and markers."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte-Carlo acceptance checks (deselect with -m 'not slow')")
