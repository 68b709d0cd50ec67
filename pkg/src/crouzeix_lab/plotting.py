"""Static figures of the boundaries, the rational domain and convergence runs."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import kms  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.5,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "svg.hashsalt": "crouzeix-lab",
    "svg.fonttype": "none",
}


def save_figure(fig, path) -> Path:
    """Write ``fig``; SVG output carries no date so reruns are byte-identical."""
    path = Path(path)
    fmt = path.suffix.lstrip(".")
    metadata = {"Date": None} if fmt == "svg" else {}
    if fmt == "png":
        metadata = {"Software": None}
    with plt.rc_context(STYLE):
        fig.savefig(path, format=fmt, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
    return path


def boundary_figure(k: int, points: int = 2001):
    """Boundary of W(A_k): algebraic arc, flat segment, cusps, rest of the curve."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 5))
        lim = 2 * np.pi / k
        full = kms.boundary_point(k, np.linspace(-np.pi, np.pi, 4 * points))
        ax.plot(full.real, full.imag, "--", color="tab:blue", lw=0.8, gid="algebraic-remainder")
        arc = kms.boundary_point(k, np.linspace(-lim, lim, points))
        ax.plot(arc.real, arc.imag, "-k", lw=2, gid="algebraic")
        top = kms.segment_half_height(k)
        ax.plot([-0.5, -0.5], [top, -top], "-k", lw=2, gid="segment")
        cusps = kms.boundary_point(k, kms.cusp_angles(k))
        if len(cusps):
            ax.plot(cusps.real, cusps.imag, "o", color="tab:red", ms=3, gid="cusps")
        ax.set_aspect("equal")
        ax.set_title(f"W(A_{k})")
    return fig


def omega_figure(report):
    """Boundary of Omega against W(A_3), with a zoom on the segment."""
    c = report.curves
    z = c["re"] + 1j * c["im"]
    closed = np.concatenate([z, z[-2:0:-1].conj()])
    lim = 2 * np.pi / 3
    arc = kms.boundary_point(3, np.linspace(-lim, lim, 2001))
    top = kms.segment_half_height(3)
    with plt.rc_context(STYLE):
        fig, (ax, zoom) = plt.subplots(1, 2, figsize=(9, 4.5), gridspec_kw={"width_ratios": [2, 1]})
        for a in (ax, zoom):
            a.plot(arc.real, arc.imag, "-k", lw=1.5)
            a.plot([-0.5, -0.5], [top, -top], "-k", lw=1.5)
            a.plot(closed.real, closed.imag, "-r", lw=1)
        ax.set_aspect("equal")
        zoom.set_xlim(-0.5005, -0.4985)
        zoom.set_xticks([-0.5, -0.499])
        zoom.set_ylim(-0.3, 0.3)
        zoom.set_title("near Re z = -1/2")
    return fig


def inclusion_curves_figure(report):
    """p(f1(e^{it})) on the cardioid part and Re f1(e^{it}) on the segment part."""
    c = report.curves
    s = c["split"]
    t = c["theta"]
    h = t[1] - t[0]
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(2, 2, figsize=(9, 6))
        axes[0, 0].plot(t[: s + 1], c["p"][: s + 1])
        axes[0, 0].set_title("p(f1(e^{it})), 0 <= t <= 3pi/4")
        axes[0, 1].plot(t[:s], np.diff(c["p"][: s + 1]) / h)
        axes[0, 1].set_title("d/dt p(f1(e^{it}))")
        axes[1, 0].plot(t[s:], c["re"][s:])
        axes[1, 0].set_title("Re f1(e^{it}), 3pi/4 <= t <= pi")
        axes[1, 1].plot(t[s:-1], np.diff(c["re"][s:]) / h)
        axes[1, 1].set_title("d/dt Re f1(e^{it})")
        fig.tight_layout()
    return fig


def convergence_figure(rows):
    ref = rows[-1]
    n = np.array([r.n for r in rows[:-1]])
    da = np.array([abs(r.a - ref.a) for r in rows[:-1]])
    dg = np.array([abs(r.g2 - ref.g2) for r in rows[:-1]])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog(n, da, "o-", label="|a(n) - a(ref)|")
        ax.loglog(n, dg, "s-", label="|g''(n) - g''(ref)|")
        ax.loglog(n, 50.0 * n**-4.0, "k:", label="50 n^-4")
        ax.set_xlabel("boundary nodes n")
        ax.legend()
    return fig
