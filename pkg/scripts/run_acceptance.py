"""Run the acceptance suite and show its PASS/FAIL lines."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

if __name__ == "__main__":
    suite = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    sys.exit(pytest.main([str(suite), "-q", "-s", *sys.argv[1:]]))
