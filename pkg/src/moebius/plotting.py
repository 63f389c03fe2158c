"""SVG figures for region scans, numerical ranges and the W(V) comparison.

Figures are built on bare ``Figure`` objects (no pyplot state) and written
with a fixed hash salt and no date stamp, so identical data give identical
files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib as mpl  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import TwoSlopeNorm  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.titlesize": 11,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "moebius",
    "svg.fonttype": "path",
}


def _save(fig: Figure, path) -> None:
    with mpl.rc_context(STYLE):
        fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches="tight")


def region_figure(scan, title: str, segment=None) -> Figure:
    """Heat map of the direct norm over the lambda window.

    ``segment`` is an optional pair (start, end) of complex numbers drawn as
    the predicted contraction locus; the end point is drawn open.
    """
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(6.0, 5.0))
        ax = fig.add_subplot()
        x0, x1, y0, y1 = scan.window
        norms = np.ma.masked_invalid(scan.norms)
        lo, hi = float(norms.min()), float(norms.max())
        cnorm = TwoSlopeNorm(vcenter=1.0, vmin=min(lo, 1.0 - 1e-6), vmax=max(hi, 1.0 + 1e-6))
        im = ax.imshow(norms, origin="lower", extent=(x0, x1, y0, y1), cmap="RdBu_r", norm=cnorm, aspect="auto")
        fig.colorbar(im, ax=ax, label="norm of Moebius matrix")
        xs, ys = scan.lams.real[0], scan.lams.imag[:, 0]
        ax.contour(xs, ys, scan.norms, levels=[1.0 + scan.band], colors="k", linewidths=0.8)
        if segment is not None:
            a, b = segment
            ax.plot([a.real, b.real], [a.imag, b.imag], color="gold", lw=2, label="predicted segment")
            ax.plot([a.real], [a.imag], "o", color="gold")
            ax.plot([b.real], [b.imag], "o", mfc="white", mec="gold")
            ax.legend(loc="upper right", fontsize=8)
        ax.plot([scan.mu.real], [scan.mu.imag], "k+", ms=10)
        ax.set_xlabel("Re lambda")
        ax.set_ylabel("Im lambda")
        ax.set_title(title)
    return fig


def numrange_figure(boundary, title: str, reference=None, eigs=None) -> Figure:
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(5.5, 5.0))
        ax = fig.add_subplot()
        pts = np.append(boundary.points, boundary.points[:1])
        ax.fill(pts.real, pts.imag, alpha=0.25, color="tab:blue")
        ax.plot(pts.real, pts.imag, color="tab:blue", lw=1.2, label="computed boundary")
        if reference is not None:
            ref = np.append(reference, reference[:1])
            ax.plot(ref.real, ref.imag, "--", color="tab:red", lw=1.0, label="reference curve")
        if eigs is not None:
            eigs = np.asarray(eigs)
            ax.plot(eigs.real, eigs.imag, "k.", ms=3, label="eigenvalues")
        ax.set_aspect("equal", adjustable="datalim")
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.set_title(title)
        ax.legend(loc="upper left", bbox_to_anchor=(1.02, 1.0), fontsize=8)
    return fig


def support_figure(thetas, computed, reference, title: str) -> Figure:
    with mpl.rc_context(STYLE):
        fig = Figure(figsize=(6.5, 4.0))
        ax1, ax2 = fig.subplots(2, 1, sharex=True)
        ax1.plot(thetas, computed, label="computed")
        ax1.plot(thetas, reference, "--", label="reference")
        ax1.set_ylabel("support")
        ax1.legend(fontsize=8)
        ax2.semilogy(thetas, np.maximum(np.abs(np.asarray(computed) - np.asarray(reference)), 1e-17))
        ax2.set_ylabel("|difference|")
        ax2.set_xlabel("theta")
        ax1.set_title(title)
    return fig


def save_figure(fig: Figure, path) -> None:
    _save(fig, path)
