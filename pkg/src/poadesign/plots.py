"""Figure rendering for the experiment commands.

The CLI writes delimited data as the primary artifact; these helpers render
the companion PNGs next to it.  Import is kept local to the functions so the
library itself never pulls in a GUI backend.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Mapping, Sequence


def _axes(path: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    return fig, ax, plt


def render_design_sweep(
    rows: Sequence[Mapping[str, float]], delta_true: float, path: str
) -> None:
    """One curve per sampled welfare: guarantee of the delta-targeted design."""
    fig, ax, plt = _axes(path)
    by_id: dict[int, list[tuple[float, float]]] = defaultdict(list)
    for row in rows:
        by_id[int(row["w_id"])].append((row["delta"], row["poa"]))
    for points in by_id.values():
        points.sort()
        ax.plot([p[0] for p in points], [p[1] for p in points], lw=0.8, alpha=0.55)
    ax.axvline(delta_true, ls="--", color="k", lw=1.0)
    ax.set_xlabel("uncertainty level targeted by the design")
    ax.set_ylabel("price of anarchy at the realized level")
    ax.set_title(f"realized uncertainty {delta_true:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mismatch_curves(rows: Sequence[Mapping[str, float]], path: str) -> None:
    """One curve per realized uncertainty: set covering mismatch guarantee."""
    fig, ax, plt = _axes(path)
    by_true: dict[float, list[tuple[float, float]]] = defaultdict(list)
    for row in rows:
        by_true[row["delta_true"]].append((row["delta_design"], row["poa"]))
    for delta_true in sorted(by_true):
        points = sorted(by_true[delta_true])
        ax.plot(
            [p[0] for p in points],
            [p[1] for p in points],
            lw=1.2,
            label=f"realized {delta_true:g}",
        )
    ax.set_xlabel("uncertainty level targeted by the design")
    ax.set_ylabel("price of anarchy at the realized level")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
