"""Deterministic SVG output for the rate figure."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def figure2_svg(table, path, comments=()):
    """Log-log plot of ``f1 = D(n)`` and ``f2 = C n^{-s}``.

    The SVG carries no timestamp and a fixed id salt, so identical tables
    give identical files.
    """
    with plt.rc_context({"svg.hashsalt": "opuc-rates", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.loglog(table.n, table.f1, "-", lw=1.2, label=r"$f_1 = D(n)$")
        if table.f2 is not None:
            ax.loglog(table.n, table.f2, "--", lw=1.2,
                      label=rf"$f_2 = {table.constant:.5f}\, n^{{-{table.s:g}}}$")
        ax.set_xlabel("n")
        ax.set_ylabel("deviation")
        ax.set_title(f"s = {table.s:g}")
        ax.legend()
        fig.tight_layout()
        meta = {"Date": None}
        if comments:
            meta["Description"] = " | ".join(comments)
        fig.savefig(path, format="svg", metadata=meta)
        plt.close(fig)
