"""CSV and SVG output.

CSV files carry a header row, RFC 4180 quoting, '.' as the decimal
separator, and floats at 17 significant digits so round-tripping through
text is lossless.  SVG figures are 800x500 and byte-deterministic:
matplotlib's Date metadata and hash salt are pinned.
"""

import csv
import io

import matplotlib
import numpy as np

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "nrange"

import matplotlib.pyplot as plt

__all__ = ["format_cell", "write_csv", "render_csv", "write_curves"]


def format_cell(value):
    # numpy bools and floats are not instances of the builtin types, so
    # match on both; comparison results routinely arrive as np.bool_
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def render_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(c) for c in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    """Write rows under a header; returns the path for convenience."""
    text = render_csv(header, rows)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def write_curves(path, curves, xlabel, ylabel, title, logx=False, logy=False):
    """One SVG line plot; curves is a list of (label, xs, ys).

    The SVG backend sizes the document at 72 units per inch, so the figure
    is 800/72 by 500/72 inches to land on an 800x500 canvas.
    """
    fig, ax = plt.subplots(figsize=(800.0 / 72.0, 500.0 / 72.0))
    for label, xs, ys in curves:
        ax.plot(xs, ys, marker="o", markersize=3, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if curves and any(label for label, _, _ in curves):
        ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
