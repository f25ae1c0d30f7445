"""
state_manager.py — JSON ledger of the last verify run.

Tracks each check's verdict to:
  - Detect regressions (a check that passed last run and fails now)
  - Persist across runs of `arboru.py verify --state FILE`

A missing or corrupt file yields fresh state.
"""

import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Iterable

from reports import CheckResult

logger = logging.getLogger(__name__)

STATE_VERSION = "1.0"


def load_state(path: str) -> dict[str, Any]:
    """
    Previous verify-run ledger, or {} when the file is absent, corrupt or
    not a JSON object.
    """
    if not path or not os.path.exists(path):
        logger.info(f"No state file found at {path or '<unset>'}; starting fresh")
        return {}

    try:
        with open(path, "r") as f:
            state = json.load(f)
    except (json.JSONDecodeError, IOError) as e:
        logger.warning(f"Failed to load state file: {e}; starting fresh")
        return {}
    if not isinstance(state, dict):
        logger.warning(f"State file {path} does not hold an object; starting fresh")
        return {}
    logger.info(f"Loaded state from {path} ({len(state.get('checks', {}))} checks)")
    return state


def save_state(path: str, state: dict[str, Any]) -> bool:
    """
    Write the ledger with a timestamp and version; False on I/O failure.
    """
    try:
        state["_last_updated"] = datetime.now(timezone.utc).isoformat()
        state["_version"] = STATE_VERSION
        with open(path, "w") as f:
            json.dump(state, f, indent=2, sort_keys=True, default=str)
        logger.info(f"State saved to {path}")
        return True
    except (IOError, TypeError) as e:
        logger.error(f"Failed to save state: {e}")
        return False


def update_state(current_state: dict[str, Any], results: Iterable[CheckResult], seed: int) -> dict[str, Any]:
    """
    Merge this run's verdicts into the state (not saved; call save_state).
    """
    checks = dict(current_state.get("checks", {}))
    for r in results:
        checks[r.key] = r.verdict
    return {**current_state, "checks": checks, "seed": seed}


def find_regressions(previous: dict[str, Any], results: Iterable[CheckResult]) -> list[str]:
    """Keys of checks that passed in the previous state and fail now."""
    before = previous.get("checks", {})
    return sorted(r.key for r in results if not r.passed and before.get(r.key) == "PASS")


def clear_state(path: str) -> bool:
    """Delete the state file."""
    try:
        if os.path.exists(path):
            os.remove(path)
            logger.info(f"State file deleted: {path}")
        return True
    except IOError as e:
        logger.error(f"Failed to delete state file: {e}")
        return False


def get_state_summary(state: dict[str, Any]) -> str:
    checks = state.get("checks", {})
    failing = sorted(k for k, v in checks.items() if v != "PASS")
    lines = ["Previous verify run:"]
    lines.append(f"  Checks: {len(checks)} ({len(failing)} failing)")
    if failing:
        lines.append(f"  Failing: {', '.join(failing[:10])}")
    if "seed" in state:
        lines.append(f"  Seed: {state['seed']}")
    lines.append(f"  Last Updated: {state.get('_last_updated', 'N/A')}")
    return "\n".join(lines)
