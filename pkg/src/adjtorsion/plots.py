"""Report figures: fiber scatter, cancellation walk, Newton polygons.

Rendered to files with the Agg backend; paths are returned so the CLI can
list what it wrote.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .laurent import LaurentPoly, parse_poly  # noqa: E402
from .polytope import minkowski_sum, newton_polytope  # noqa: E402

ML = ("m", "l")


def _c(v):
    return complex(float(v.real), float(v.imag))


def save_fiber_plot(report, path):
    """Fiber points in the m-plane, one marker style per component."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.4))
    markers = ["o", "s", "^", "d"]
    for comp in report.components:
        ms = [_c(p.m) for p in comp.points]
        ys = [_c(p.y) for p in comp.points]
        ax1.scatter([v.real for v in ms], [v.imag for v in ms],
                    marker=markers[comp.index % len(markers)], s=28,
                    label=f"component {comp.index}")
        ax2.scatter([v.real for v in ys], [v.imag for v in ys],
                    marker=markers[comp.index % len(markers)], s=28)
    ax1.set_xlabel("Re m")
    ax1.set_ylabel("Im m")
    ax1.set_title(f"{report.preset} fiber, slope "
                  f"({report.slope[0]},{report.slope[1]})")
    ax1.axhline(0, lw=0.4, color="0.7")
    ax1.axvline(0, lw=0.4, color="0.7")
    ax1.legend(fontsize=8)
    ax2.set_xlabel("Re y")
    ax2.set_ylabel("Im y")
    ax2.set_title("Riley coordinates")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_cancellation_plot(report, path):
    """Head-to-tail walk of the inverse torsions; closure shows the vanishing."""
    terms = []
    for comp in report.components:
        for p in comp.points:
            if p.torsion_gamma is not None:
                terms.append(1 / _c(p.torsion_gamma))
    terms.sort(key=lambda t: (abs(t), t.real, t.imag), reverse=True)
    xs, ys = [0.0], [0.0]
    acc = 0j
    for t in terms:
        acc += t
        xs.append(acc.real)
        ys.append(acc.imag)
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    ax.plot(xs, ys, "-o", ms=3, lw=0.9)
    ax.plot([0], [0], "r*", ms=12, zorder=5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"{report.preset}: partial sums of 1/Tor "
                 f"(metric {report.vanishing_metric:.1e})")
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_polytope_plot(apoly: LaurentPoly, bpoly: LaurentPoly, path,
                       h: LaurentPoly | None = None):
    """Newton polygons of A, B, their Minkowski sum, and Delta(h) inside."""
    if h is None:
        h = parse_poly("m^2 - m^-2", ML)
    pa = newton_polytope(apoly)
    pb = newton_polytope(bpoly)
    ps = minkowski_sum(pa, pb)
    ph = newton_polytope(h)
    fig, ax = plt.subplots(figsize=(5.6, 5.2))

    def draw(poly, color, label, filled=True):
        pts = list(poly.vertices) + [poly.vertices[0]]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if filled and len(poly.vertices) >= 3:
            ax.fill(xs, ys, alpha=0.18, color=color)
        ax.plot(xs, ys, "-o", color=color, ms=4, lw=1.2, label=label)

    draw(ps, "tab:blue", "Delta(A) + Delta(B)")
    draw(pa, "tab:green", "Delta(A)")
    draw(pb, "tab:orange", "Delta(B)", filled=False)
    draw(ph, "tab:red", "Delta(h)", filled=False)
    ax.set_xlabel("m exponent")
    ax.set_ylabel("l exponent")
    ax.legend(fontsize=8)
    ax.set_title("Newton polygons")
    ax.grid(lw=0.3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_figures(report, directory):
    """Write the standard figure set for a verification report."""
    os.makedirs(directory, exist_ok=True)
    tag = f"{report.preset}_{report.slope[0]}_{report.slope[1]}"
    written = []
    written.append(save_fiber_plot(
        report, os.path.join(directory, f"fiber_{tag}.png")))
    written.append(save_cancellation_plot(
        report, os.path.join(directory, f"cancellation_{tag}.png")))
    return written
