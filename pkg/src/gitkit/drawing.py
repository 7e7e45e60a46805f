"""Fan figures rendered to SVG with byte-deterministic output.

Rank-1 and rank-2 fans are drawn directly; rank-3 fans with pointed support
are drawn as a labeled cross-section through a hyperplane meeting every ray.
Higher ranks are not drawable.  Determinism: fixed hash salt, no timestamps,
fixed figure geometry; identical input yields identical bytes.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Polygon

from .cones import Cone, dualize
from .linalg import dot

_PALETTE = (
    "#cfe2f3",
    "#d9ead3",
    "#fff2cc",
    "#f4cccc",
    "#d9d2e9",
    "#fce5cd",
    "#d0e0e3",
    "#ead1dc",
)

_RC = {
    "svg.hashsalt": "gitkit",
    "svg.fonttype": "none",
    "font.size": 9,
    "figure.figsize": (4.8, 4.8),
    "figure.dpi": 100,
}


class NotDrawable(ValueError):
    pass


def render_fan_svg(cones, path, title: str = "") -> None:
    """Draw a collection of cones (a fan) to an SVG file."""
    cones = list(cones)
    if not cones:
        raise NotDrawable("nothing to draw")
    rank = cones[0].rank
    if rank > 3:
        raise NotDrawable(f"rank {rank} fans are not drawable (supported: 1, 2, 3)")
    if rank == 0:
        raise NotDrawable("rank 0 has no figure")
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots()
        if rank == 1:
            _draw_rank1(ax, cones)
        elif rank == 2:
            _draw_rank2(ax, cones)
        else:
            _draw_rank3_section(ax, cones)
        if title:
            ax.set_title(title)
        ax.set_aspect("equal")
        ax.axis("off")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def _draw_rank1(ax, cones) -> None:
    ax.axhline(0, color="#888888", linewidth=0.8, zorder=1)
    for idx, c in enumerate(sorted(cones, key=lambda c: (c.dim(), c.rays))):
        if c.lineality:
            ax.plot([-1.1, 1.1], [0, 0], color="black", linewidth=2.5, zorder=2)
        elif c.rays:
            (r,) = c.rays
            x = 1.0 if r[0] > 0 else -1.0
            ax.annotate(
                "",
                xy=(x, 0),
                xytext=(0, 0),
                arrowprops={"arrowstyle": "-|>", "color": "black", "linewidth": 2.0},
            )
            ax.annotate(f"{tuple(r)}", xy=(x, 0.08), ha="center")
        else:
            ax.plot([0], [0], marker="o", color="black", markersize=5)
    ax.set_xlim(-1.3, 1.3)
    ax.set_ylim(-0.6, 0.6)


def _unit(v) -> tuple[float, float]:
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n)


def _draw_rank2(ax, cones) -> None:
    radius = 1.0
    ordered = sorted(cones, key=lambda c: (c.dim(), c.rays))
    color = 0
    for c in ordered:
        if c.dim() == 2 and not c.lineality and len(c.rays) >= 2:
            pts = [(0.0, 0.0)]
            rays = sorted(c.rays, key=lambda r: math.atan2(r[1], r[0]))
            for r in rays:
                u = _unit(r)
                pts.append((radius * u[0], radius * u[1]))
            ax.add_patch(
                Polygon(
                    pts,
                    closed=True,
                    facecolor=_PALETTE[color % len(_PALETTE)],
                    edgecolor="none",
                    zorder=1,
                )
            )
            color += 1
    for c in ordered:
        for r in c.rays:
            u = _unit(r)
            ax.annotate(
                "",
                xy=(radius * u[0], radius * u[1]),
                xytext=(0, 0),
                arrowprops={"arrowstyle": "-|>", "color": "black", "linewidth": 1.5},
            )
            ax.annotate(
                f"{tuple(r)}",
                xy=(1.12 * radius * u[0], 1.12 * radius * u[1]),
                ha="center",
                va="center",
            )
        for l in c.lineality:
            u = _unit(l)
            ax.plot(
                [-radius * u[0], radius * u[0]],
                [-radius * u[1], radius * u[1]],
                color="black",
                linewidth=1.2,
                linestyle="--",
                zorder=2,
            )
    ax.plot([0], [0], marker="o", color="black", markersize=3, zorder=3)
    ax.set_xlim(-1.35, 1.35)
    ax.set_ylim(-1.35, 1.35)


def _draw_rank3_section(ax, cones) -> None:
    """Cross-section through {x : <c, x> = 1} for c interior to the dual of
    the support; every ray punctures the plane in one labeled point."""
    all_rays = []
    for c in cones:
        if c.lineality:
            raise NotDrawable("rank-3 fans with lineality have no cross-section")
        for r in c.rays:
            if r not in all_rays:
                all_rays.append(r)
    support = Cone.from_generators(all_rays, 3)
    cvec = dualize(support).relative_interior_point()
    if any(dot(cvec, r) <= 0 for r in all_rays):
        raise NotDrawable("fan support is not pointed: no cross-section plane")
    # orthonormal basis of the section plane (floats, drawing only)
    c = [float(x) for x in cvec]
    nrm = math.sqrt(sum(x * x for x in c))
    c = [x / nrm for x in c]
    seed = [1.0, 0.0, 0.0] if abs(c[0]) < 0.9 else [0.0, 1.0, 0.0]
    b1 = [s - d * sum(s * d2 for s, d2 in zip(seed, c)) for s, d in zip(seed, c)]
    n1 = math.sqrt(sum(x * x for x in b1))
    b1 = [x / n1 for x in b1]
    b2 = [
        c[1] * b1[2] - c[2] * b1[1],
        c[2] * b1[0] - c[0] * b1[2],
        c[0] * b1[1] - c[1] * b1[0],
    ]

    def plane_coords(r):
        t = float(dot(cvec, r))
        p = [x / t for x in r]
        return (
            sum(p[i] * b1[i] for i in range(3)),
            sum(p[i] * b2[i] for i in range(3)),
        )

    color = 0
    for cone in sorted(cones, key=lambda c: (c.dim(), c.rays)):
        pts = [plane_coords(r) for r in cone.rays]
        if cone.dim() == 3 and len(pts) >= 3:
            center = (
                sum(p[0] for p in pts) / len(pts),
                sum(p[1] for p in pts) / len(pts),
            )
            pts_sorted = sorted(
                pts, key=lambda p: math.atan2(p[1] - center[1], p[0] - center[0])
            )
            ax.add_patch(
                Polygon(
                    pts_sorted,
                    closed=True,
                    facecolor=_PALETTE[color % len(_PALETTE)],
                    edgecolor="black",
                    linewidth=0.8,
                    zorder=1,
                )
            )
            color += 1
        elif cone.dim() == 2 and len(pts) == 2:
            ax.plot(
                [pts[0][0], pts[1][0]],
                [pts[0][1], pts[1][1]],
                color="black",
                linewidth=1.0,
                zorder=2,
            )
    for r in all_rays:
        x, y = plane_coords(r)
        ax.plot([x], [y], marker="o", color="black", markersize=4, zorder=3)
        ax.annotate(
            f"{tuple(r)}",
            xy=(x, y + 0.07),
            ha="center",
            annotation_clip=False,
        )
    ax.relim()
    ax.autoscale_view()
    ax.margins(0.2)


def render_svg(fan_cones, path, title: str = "") -> None:
    """Spec-facing alias."""
    render_fan_svg(fan_cones, path, title)
