"""Delimited result tables and optional figure rendering.

Every command that produces tabular results writes the same CSV layout:
``# key=value`` metadata comment lines echoing the effective
configuration, the fixed header, then one row per evaluation.  Bounds are
serialized with 9 significant digits and infeasible rows carry
``bound=inf`` so sweeps keep a total order.  Sweep tables can additionally
be rendered to a figure (bound versus the swept parameter, analysis
dashed, synthesis solid) next to the CSV.
"""

from __future__ import annotations

import io
import math
import sys
from typing import Mapping, Sequence

CSV_HEADER = (
    "method",
    "kappa",
    "theta",
    "feasible",
    "bound",
    "q",
    "t",
    "solver_status",
    "wall_ms",
)


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.9g}"
    return str(value)


def render_table(metadata: Mapping[str, object], rows: Sequence[Mapping]) -> str:
    out = io.StringIO()
    for key in sorted(metadata):
        out.write(f"# {key}={format_value(metadata[key])}\n")
    out.write(",".join(CSV_HEADER) + "\n")
    for row in rows:
        out.write(",".join(format_value(row.get(col)) for col in CSV_HEADER) + "\n")
    return out.getvalue()


def write_table(path: str | None, metadata: Mapping[str, object],
                rows: Sequence[Mapping]) -> None:
    """Write the table to ``path`` (UTF-8, LF) or standard output."""
    text = render_table(metadata, rows)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def render_sweep_figure(rows: Sequence[Mapping], parameter: str,
                        path: str) -> None:
    """Plot bound-versus-parameter curves for each method label.

    Analysis curves are dashed and synthesis curves solid, mirroring the
    with/without-controller presentation; infeasible points are gaps.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = []
    for row in rows:
        if row["method"] not in labels:
            labels.append(row["method"])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label in labels:
        xs, ys = [], []
        for row in rows:
            if row["method"] != label:
                continue
            bound = row.get("bound")
            x = row.get(parameter)
            if x is None:
                continue
            feasible = bool(row.get("feasible")) and math.isfinite(bound)
            xs.append(float(x))
            ys.append(float(bound) if feasible else math.nan)
        style = "--" if label.endswith("analysis") else "-"
        ax.plot(xs, ys, style, label=label)
    ax.set_xlabel(parameter)
    ax.set_ylabel("guaranteed cost bound")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
