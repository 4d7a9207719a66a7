"""Figure rendering for report documents.

Opt-in plotting used by the command line tool when --plot-dir is
given: each function takes the JSON-ready report dict the respective
module emits and writes a PNG next to it.  The Agg backend keeps this
headless-safe.
"""

from __future__ import annotations

import os


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def spectrum_figure(report: dict, path: str) -> str:
    """Membership bar chart: one bar per size, full height for members,
    half height hatched for sizes the budget left undecided."""
    plt = _pyplot()
    max_size = report["max_size"]
    members = set(report["members"])
    unknown = set(report["unknown"])
    sizes = list(range(max_size + 1))
    heights = [1 if s in members else (0.5 if s in unknown else 0) for s in sizes]
    colors = ["tab:blue" if s in members else "tab:gray" for s in sizes]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(sizes)), 2.8))
    bars = ax.bar(sizes, heights, color=colors)
    for s, bar in zip(sizes, bars):
        if s in unknown:
            bar.set_hatch("//")
    ax.set_xticks(sizes)
    ax.set_yticks([0, 1])
    ax.set_yticklabels(["no model", "model"])
    ax.set_xlabel("size")
    ax.set_title(f"finite spectrum of {report['sentence']} up to {max_size}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return os.fspath(path)


def locality_figure(report: dict, path: str) -> str:
    """Observed closure depth per model size against the declared step
    bound."""
    plt = _pyplot()
    by_size = {int(k): v for k, v in report["depth_by_size"].items()}
    sizes = sorted(by_size)
    depths = [by_size[s] for s in sizes]
    declared = report["declared_steps"]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * max(len(sizes), 1)), 2.8))
    ax.bar(sizes, depths, color="tab:blue")
    ax.axhline(declared, color="tab:red", linestyle="--", label=f"declared bound {declared}")
    ax.set_xticks(sizes)
    ax.set_xlabel("model size")
    ax.set_ylabel("max closure depth")
    ax.set_title(f"closure depth survey for {report['sentence']}")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return os.fspath(path)
