"""Scoring a run log against a reference trajectory, with report output.

The report directory gets delimited metrics (metrics.csv) alongside
rendered figures: the driven path over the reference, cross-track error
over time, and the speed profile.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ..navigation import Trajectory
from ..navigation.tracking import nearest_segment
from .runlog import RunLogReader


def _arc_offsets(traj: Trajectory) -> np.ndarray:
    lengths = traj.segment_lengths()
    return np.concatenate([[0.0], np.cumsum(lengths)])


def score_log(log: RunLogReader, traj: Trajectory) -> dict:
    """Cross-track statistics, completion fraction, speed-tracking RMS."""
    if not log.records:
        return {"samples": 0, "completion": 0.0}
    arcs = _arc_offsets(traj)
    total = float(arcs[-1])
    xs, ys, speeds, targets, xtes, progress = [], [], [], [], [], []
    for record in log.records:
        s = record["state"]
        x, y = s["x"], s["y"]
        seg, t, signed = nearest_segment(traj, x, y)
        seg_len = float(arcs[seg + 1] - arcs[seg])
        xs.append(x)
        ys.append(y)
        xtes.append(abs(signed))
        progress.append(float(arcs[seg]) + t * seg_len)
        speeds.append(s["v"][0])
        targets.append(float(traj.waypoints[min(seg + 1, len(traj) - 1), 2]))
    xtes = np.array(xtes)
    speeds = np.array(speeds)
    targets = np.array(targets)
    completion = max(progress) / total if total > 0 else 0.0
    return {
        "samples": len(xtes),
        "xte_mean": float(xtes.mean()),
        "xte_max": float(xtes.max()),
        "completion": float(min(1.0, completion)),
        "speed_rms": float(np.sqrt(np.mean((speeds - targets) ** 2))),
        "collided": any(r["state"].get("collided") for r in log.records),
    }


def write_report(log: RunLogReader, traj: Trajectory, out_dir: str | Path,
                 dt: float = 1e-3) -> dict:
    """Score the log and render metrics.csv plus figures into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    metrics = score_log(log, traj)

    with open(out / "metrics.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(sorted(metrics))
        writer.writerow([metrics[k] for k in sorted(metrics)])

    if not log.records:
        return metrics
    xs = [r["state"]["x"] for r in log.records]
    ys = [r["state"]["y"] for r in log.records]
    times = [r["tick"] * dt for r in log.records]
    xtes = [abs(nearest_segment(traj, x, y)[2]) for x, y in zip(xs, ys)]
    speeds = [r["state"]["v"][0] for r in log.records]

    fig, ax = plt.subplots(figsize=(6, 6))
    ref = traj.waypoints
    closed = np.vstack([ref, ref[:1]]) if traj.loop else ref
    ax.plot(closed[:, 0], closed[:, 1], "k--", label="reference")
    ax.plot(xs, ys, "b-", linewidth=0.8, label="driven")
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend()
    fig.savefig(out / "path.png", dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(times, xtes)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("cross-track error [m]")
    fig.tight_layout()
    fig.savefig(out / "cross_track.png", dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(times, speeds)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("speed [m/s]")
    fig.tight_layout()
    fig.savefig(out / "speed.png", dpi=120)
    plt.close(fig)

    return metrics
