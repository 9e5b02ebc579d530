"""Writers for trajectories, reports and plots.

Floats are written with 17 significant digits so that every value read back
is bit-identical to the one computed.
"""

from __future__ import annotations

import json
import os
from typing import Any, Iterable

import numpy as np


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def dumps17(obj: Any, indent: int | None = None, _level: int = 0) -> str:
    """JSON text with every float rendered at 17 significant digits."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps17(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps17(v, indent, _level + 1)}" for v in obj]
        return "[" + sep.join(items) + end + "]"
    if isinstance(obj, np.ndarray):
        return dumps17(obj.tolist(), indent, _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite value {obj}")
        return fmt(obj)
    if hasattr(obj, "value") and isinstance(obj.value, str):
        return json.dumps(obj.value)
    return json.dumps(str(obj))


def write_json(path: str, obj: Any) -> str:
    with open(path, "w") as fh:
        fh.write(dumps17(obj, indent=2) + "\n")
    return path


def write_ndjson(path: str, records: Iterable[dict]) -> str:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(dumps17(rec) + "\n")
    return path


def write_csv(path: str, header: list[str], columns: list) -> str:
    cols = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def read_ndjson(path: str) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_trajectory(path: str, trajectory) -> str:
    return write_ndjson(path, trajectory.records())


def write_snapshot_fields(path: str, state) -> str:
    return write_csv(path, ["y", "x", "M", "A"], [state.y, state.x, state.M, state.A])


def write_R0F_trace(path: str, trace) -> str:
    t = [p[0] for p in trace]
    R = [p[1] for p in trace]
    return write_csv(path, ["t", "R0F"], [t, R])


def heatmap_grid(trajectory, nx: int = 400):
    """Space-time array of M on a uniform grid over ``[min g, max h]``."""
    snaps = trajectory.snapshots
    xmin = min(s.g for s in snaps)
    xmax = max(s.h for s in snaps)
    xs = np.linspace(xmin, xmax, nx)
    field = np.array([np.interp(xs, s.x, s.M, left=0.0, right=0.0) for s in snaps])
    return xs, np.array([s.t for s in snaps]), field


def plot_trajectory(trajectory, trace, stem: str) -> dict:
    """Front curves, M heatmap and R0F trace as PNG files; returns axis metadata."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = trajectory.times
    meta: dict[str, Any] = {}

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(t, trajectory.h, "o-" if len(t) == 1 else "-", label="h(t)")
    ax.plot(t, trajectory.g, "o-" if len(t) == 1 else "-", label="g(t)")
    ax.set_xlabel("t")
    ax.set_ylabel("front position")
    ax.legend()
    fig.tight_layout()
    fig.savefig(stem + "-fronts.png", dpi=100)
    plt.close(fig)
    meta["fronts"] = {"file": os.path.basename(stem + "-fronts.png"),
                      "t_range": [float(t[0]), float(t[-1])]}

    xs, ts, field = heatmap_grid(trajectory)
    fig, ax = plt.subplots(figsize=(6, 4))
    t_hi = ts[-1] if ts[-1] > ts[0] else ts[0] + 1.0
    im = ax.imshow(field, origin="lower", aspect="auto",
                   extent=(xs[0], xs[-1], ts[0], t_hi), cmap="viridis")
    fig.colorbar(im, ax=ax, label="M")
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(stem + "-heatmap.png", dpi=100)
    plt.close(fig)
    meta["heatmap"] = {"file": os.path.basename(stem + "-heatmap.png"),
                       "x_range": [float(xs[0]), float(xs[-1])],
                       "t_range": [float(ts[0]), float(ts[-1])]}

    if trace:
        tt = [p[0] for p in trace]
        RR = [p[1] for p in trace]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(tt, RR, "o-" if len(tt) == 1 else "-", label="R0F(t)")
        ax.axhline(1.0, color="k", ls="--", lw=0.8)
        ax.set_xlabel("t")
        ax.set_ylabel("R0F")
        fig.tight_layout()
        fig.savefig(stem + "-r0f.png", dpi=100)
        plt.close(fig)
        meta["r0f"] = {"file": os.path.basename(stem + "-r0f.png")}
    return meta


def emit_outputs(results: dict, output, task: str, run_hash: str) -> list[str]:
    """Write everything in ``results`` under ``output.dir``.

    Recognized keys: ``trajectory``, ``trace``, ``report`` (JSON object),
    ``table`` (JSON array), ``stationary`` (a StationarySolution),
    ``summary`` (text). File names are ``<task>-<run_hash>.*``.
    """
    try:
        os.makedirs(output.dir, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {output.dir}: {exc}") from exc
    if not os.access(output.dir, os.W_OK):
        raise OSError(f"output directory {output.dir} is not writable")
    stem = os.path.join(output.dir, f"{task}-{run_hash}")
    written = []
    traj = results.get("trajectory")
    trace = results.get("trace")
    if traj is not None:
        if "ndjson" in output.formats:
            written.append(write_trajectory(stem + ".ndjson", traj))
        if "csv" in output.formats and output.fields:
            for i, s in enumerate(traj.snapshots):
                written.append(write_snapshot_fields(f"{stem}-fields-{i:05d}.csv", s))
    if trace is not None and "csv" in output.formats:
        written.append(write_R0F_trace(stem + "-r0f.csv", trace))
    if "report" in results:
        written.append(write_json(stem + ".json", results["report"]))
    if "table" in results:
        written.append(write_json(stem + "-table.json", results["table"]))
    sol = results.get("stationary")
    if sol is not None:
        written.append(write_csv(stem + "-stationary.csv", ["x", "M_star", "A_star"],
                                 [sol.x, sol.M_star, sol.A_star]))
    if "summary" in results:
        with open(stem + ".txt", "w") as fh:
            fh.write(results["summary"].rstrip() + "\n")
        written.append(stem + ".txt")
    if traj is not None and "png" in output.formats:
        meta = plot_trajectory(traj, trace, stem)
        written.append(write_json(stem + "-plots.json", meta))
        written += [os.path.join(output.dir, m["file"]) for m in meta.values()]
    return written
