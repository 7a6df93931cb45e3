"""Matplotlib renderings for the report path: addition table and order diagram.

Figures are written to files with the Agg backend; nothing here opens a
window.  Layout is deterministic for a given scaling.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .scaling import Scale, Scaling, Undefined


def render_table_figure(scale: Scale, path: str, which: str = "add") -> None:
    """Grid rendering of the + or dual-+ table: named cells, X and ? marks."""
    order = scale.display
    k = len(order)
    table = {"add": scale.add, "dualadd": scale.dual_add}[which]
    fig, ax = plt.subplots(figsize=(0.7 * k + 1.6, 0.7 * k + 1.6))
    ax.set_xlim(0, k)
    ax.set_ylim(0, k)
    ax.set_xticks([i + 0.5 for i in range(k)])
    ax.set_yticks([i + 0.5 for i in range(k)])
    ax.set_xticklabels([scale.names[c] for c in order])
    ax.set_yticklabels([scale.names[c] for c in reversed(order)])
    ax.xaxis.tick_top()
    for i, r in enumerate(order):
        for j, c in enumerate(order):
            entry = table(r, c)
            if isinstance(entry, Undefined):
                text = "X" if entry.reason == "boxtimes" else "?"
                color = "#c0c0c0" if text == "X" else "#e8d080"
            else:
                text = scale.names[entry]
                color = "#d8e8f8"
            ax.add_patch(
                plt.Rectangle((j, k - 1 - i), 1, 1, facecolor=color,
                              edgecolor="black", linewidth=0.5)
            )
            ax.text(j + 0.5, k - 1 - i + 0.5, text,
                    ha="center", va="center", fontsize=9)
    label = "+" if which == "add" else "dual +"
    ax.set_title(f"{label} table", pad=24)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _layers(scaling: Scaling) -> list[list[int]]:
    # longest-path depth from the minimal classes
    depth = [0] * scaling.k
    changed = True
    while changed:
        changed = False
        for i in range(scaling.k):
            for j in range(scaling.k):
                if scaling.lt[i] >> j & 1 and depth[j] < depth[i] + 1:
                    depth[j] = depth[i] + 1
                    changed = True
    layers: list[list[int]] = [[] for _ in range(max(depth) + 1)]
    for c, d in enumerate(depth):
        layers[d].append(c)
    return layers


def render_order_figure(scale: Scale, path: str) -> None:
    """Layered diagram of the class order: covers as edges, depth as height."""
    scaling = scale.scaling
    layers = _layers(scaling)
    pos = {}
    for level, classes in enumerate(layers):
        for i, c in enumerate(sorted(classes)):
            pos[c] = (i - (len(classes) - 1) / 2.0, level)
    fig, ax = plt.subplots(figsize=(6, 1.2 * len(layers) + 1))
    for i in range(scaling.k):
        row = scaling.lt[i]
        for j in range(scaling.k):
            if row >> j & 1 and not any(
                row >> m & 1 and scaling.lt[m] >> j & 1 for m in range(scaling.k)
            ):
                ax.plot(
                    [pos[i][0], pos[j][0]], [pos[i][1], pos[j][1]],
                    color="#808080", linewidth=1, zorder=1,
                )
    for c, (x, y) in pos.items():
        ax.scatter([x], [y], s=600, color="#d8e8f8",
                   edgecolor="black", zorder=2)
        ax.text(x, y, scale.names[c], ha="center", va="center",
                fontsize=9, zorder=3)
    ax.set_title("class order (covers)")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
