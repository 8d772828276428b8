"""Scenario orchestration: configs, run logs, runner, scoring."""

from .config import ScenarioConfig, config_hash, load_scenario_config
from .runlog import RunLogReader, RunLogWriter, read_log
from .runner import RunResult, make_scene, replay_commands, run_scenario
from .score import score_log, write_report

__all__ = [
    "RunLogReader",
    "RunLogWriter",
    "RunResult",
    "ScenarioConfig",
    "config_hash",
    "load_scenario_config",
    "make_scene",
    "read_log",
    "replay_commands",
    "run_scenario",
    "score_log",
    "write_report",
]
