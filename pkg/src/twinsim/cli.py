"""Command-line entry point.

Subcommands:
  run          execute a scenario from a config file
  replay       re-run a recorded command log deterministically
  score        score a run log against a trajectory, render a report
  map-convert  normalize a map (PGM + metadata) through load/save

Exit codes: 0 success, 1 unexpected error, 2 invalid config/parameter,
3 no usable trajectory, 4 simulation diverged, 5 malformed map file,
6 run-log mismatch.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

from .errors import TwinsimError
from .harness import (
    load_scenario_config,
    read_log,
    run_scenario,
    write_report,
)
from .environment import load_map, save_map
from .navigation import load_trajectory


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinsim", description="scaled vehicle digital-twin simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario")
    run.add_argument("--config", required=True, help="scenario YAML path")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--output-dir", help="override the output directory")
    run.add_argument("--serve", action="store_true",
                     help="expose the telemetry server during the run")
    run.add_argument("--port", type=int, default=8765,
                     help="telemetry port (with --serve)")

    replay = sub.add_parser("replay", help="re-run a recorded command log")
    replay.add_argument("--config", required=True)
    replay.add_argument("--log", required=True, help="input run log (JSONL)")
    replay.add_argument("--output-dir")

    score = sub.add_parser("score", help="score a run log against a trajectory")
    score.add_argument("--log", required=True)
    score.add_argument("--trajectory", required=True)
    score.add_argument("--out", default="report",
                       help="report directory (figures + metrics.csv)")

    convert = sub.add_parser("map-convert", help="normalize a map file pair")
    convert.add_argument("--input", required=True, help="map metadata YAML")
    convert.add_argument("--output", required=True,
                         help="output metadata YAML (PGM written alongside)")
    return parser


def _cmd_run(args) -> int:
    config = load_scenario_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.output_dir:
        config.output_dir = args.output_dir
    if args.serve:
        return _run_with_server(config, args.port)
    result = run_scenario(config)
    print(json.dumps({"log": str(result.log_path),
                      "metrics": result.metrics}, indent=2))
    return 0


def _run_with_server(config, port: int) -> int:
    from .telemetry import TelemetryServer

    async def main():
        server = await TelemetryServer(port=port).start(
            state_rate_hz=config.state_rate_hz,
            scan_rate_hz=config.scan_rate_hz)
        loop = asyncio.get_running_loop()
        print(f"telemetry listening on ws://127.0.0.1:{server.port}",
              file=sys.stderr)

        def source(tick, state):
            return server.poll_command(loop.time())

        def publish(tick, state):
            server.publish_state(state, tick * 1e-3)

        config.realtime = True
        try:
            result = await loop.run_in_executor(
                None, lambda: run_scenario(config, command_source=source,
                                           on_tick=publish))
        finally:
            await server.stop()
        print(json.dumps({"log": str(result.log_path),
                          "metrics": result.metrics}, indent=2))

    asyncio.run(main())
    return 0


def _cmd_replay(args) -> int:
    config = load_scenario_config(args.config)
    config.mode = "replay"
    config.input_log = args.log
    if args.output_dir:
        config.output_dir = args.output_dir
    result = run_scenario(config)
    print(json.dumps({"log": str(result.log_path),
                      "metrics": result.metrics}, indent=2))
    return 0


def _cmd_score(args) -> int:
    log = read_log(args.log)
    traj = load_trajectory(args.trajectory)
    metrics = write_report(log, traj, args.out)
    print(json.dumps(metrics, indent=2))
    return 0


def _cmd_convert(args) -> int:
    grid = load_map(args.input)
    save_map(grid, Path(args.output))
    print(f"wrote {args.output}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"run": _cmd_run, "replay": _cmd_replay, "score": _cmd_score,
                "map-convert": _cmd_convert}
    try:
        return handlers[args.command](args)
    except TwinsimError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
