"""SVG figures of subdivisions, affine fans and differential matrices.

Every artist carries a ``gid`` so the output can be inspected structurally,
and SVG metadata/hash salts are pinned so reruns are byte-identical.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
from matplotlib import rcParams  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

rcParams["svg.hashsalt"] = "secondary-operad"
rcParams["svg.fonttype"] = "none"

STATUS_COLORS = {
    "Regular": "#8fbcd4",
    "IrregularPerturbedlyRegular": "#f2c46d",
    "IrregularNotPerturbedlyRegular": "#d98c8c",
}


def _save(fig: Figure, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})


def _viewport(xs, ys, margin=0.1, min_extent=1.0):
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    wx = max(hi_x - lo_x, min_extent)
    wy = max(hi_y - lo_y, min_extent)
    cx, cy = (lo_x + hi_x) / 2, (lo_y + hi_y) / 2
    return (cx - wx * (0.5 + margin), cx + wx * (0.5 + margin),
            cy - wy * (0.5 + margin), cy + wy * (0.5 + margin))


def _draw_subdivision(ax, config, D, face="#dfe8ef", labels=True):
    pts = [(float(p.x), float(p.y)) for p in config.points]
    x0, x1, y0, y1 = _viewport([p[0] for p in pts], [p[1] for p in pts])
    for k, c in enumerate(D.cells):
        poly = Polygon([pts[i] for i in c.vertices], closed=True, facecolor=face,
                       edgecolor="#1f3b57", linewidth=1.2)
        poly.set_gid(f"cell-{k}")
        ax.add_patch(poly)
    for k, (i, j) in enumerate(D.walls):
        (line,) = ax.plot([pts[i][0], pts[j][0]], [pts[i][1], pts[j][1]], color="#b03a2e", lw=1.6)
        line.set_gid(f"wall-{k}")
    used = D.used_labels()
    for i, (x, y) in enumerate(pts):
        if i in D.unused:
            (m,) = ax.plot([x], [y], marker="o", mfc="white", mec="#b03a2e", ms=6, ls="none")
            m.set_gid(f"unused-{i}")
        elif i in used:
            (m,) = ax.plot([x], [y], marker="o", color="#1f3b57", ms=4, ls="none")
            m.set_gid(f"point-{i}")
        if labels:
            ax.annotate(str(i), (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])


def render_subdivision(config, D, path, title=None) -> None:
    fig = Figure(figsize=(4, 4))
    ax = fig.add_subplot()
    _draw_subdivision(ax, config, D)
    if title:
        ax.set_title(title, fontsize=9)
    _save(fig, path)


def _ray_end(p, d, box):
    """Point where the ray p + s d (s > 0) leaves the box."""
    x0, x1, y0, y1 = box
    s_best = math.inf
    for lim, comp, coord in ((x0, 0, p[0]), (x1, 0, p[0]), (y0, 1, p[1]), (y1, 1, p[1])):
        if d[comp] != 0:
            s = (lim - coord) / d[comp]
            if s > 0:
                s_best = min(s_best, s)
    if s_best is math.inf:
        s_best = 1.0
    return (p[0] + s_best * d[0], p[1] + s_best * d[1])


def render_fan(fan, path, title=None) -> None:
    verts = [(float(x), float(y)) for x, y in fan.vertices]
    box = _viewport([v[0] for v in verts], [v[1] for v in verts], margin=0.6, min_extent=2.0)
    fig = Figure(figsize=(4, 4))
    ax = fig.add_subplot()
    for k, (v, d) in enumerate(fan.rays):
        norm = math.hypot(float(d[0]), float(d[1]))
        u = (float(d[0]) / norm, float(d[1]) / norm)
        end = _ray_end(verts[v], u, box)
        (line,) = ax.plot([verts[v][0], end[0]], [verts[v][1], end[1]], color="#5d6d7e", lw=1.0)
        line.set_gid(f"fan-ray-{k}")
    for k, (a, b) in enumerate(fan.edges):
        (line,) = ax.plot([verts[a][0], verts[b][0]], [verts[a][1], verts[b][1]], color="#b03a2e", lw=1.6)
        line.set_gid(f"fan-edge-{k}")
    for k, (x, y) in enumerate(verts):
        (m,) = ax.plot([x], [y], marker="o", color="#1f3b57", ms=5, ls="none")
        m.set_gid(f"fan-vertex-{k}")
    ax.set_xlim(box[0], box[1])
    ax.set_ylim(box[2], box[3])
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=9)
    _save(fig, path)


def render_overview(config, subdivisions, statuses, path, ncols: int = 6) -> None:
    """Grid of all subdivisions, shaded by classification status."""
    n = len(subdivisions)
    ncols = max(1, min(ncols, n))
    nrows = max(1, math.ceil(n / ncols))
    fig = Figure(figsize=(1.8 * ncols, 1.9 * nrows))
    for k, (D, st) in enumerate(zip(subdivisions, statuses)):
        ax = fig.add_subplot(nrows, ncols, k + 1)
        _draw_subdivision(ax, config, D, face=STATUS_COLORS.get(st, "#dddddd"), labels=False)
        ax.set_title(f"#{k}", fontsize=7)
    fig.tight_layout()
    _save(fig, path)


def render_differential(cx, path) -> None:
    """Sparsity pattern of the total differential, +1 and -1 entries colored."""
    order = [D for k in sorted(cx.bases) for D in cx.bases[k]]
    pos = {D: i for i, D in enumerate(order)}
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot()
    for sign, color in ((1, "#1f6f8b"), (-1, "#c0392b")):
        xs, ys = [], []
        for (src, dst), entries in sorted(cx.blocks.items()):
            for (r, c), v in sorted(entries.items()):
                if (v > 0) == (sign > 0):
                    xs.append(pos[cx.bases[src][c]])
                    ys.append(pos[cx.bases[dst][r]])
        ax.scatter(xs, ys, s=12, c=color, marker="s", label=f"{'+' if sign > 0 else '-'}")
    n = len(order)
    ax.set_xlim(-0.5, n - 0.5)
    ax.set_ylim(n - 0.5, -0.5)
    ax.set_xlabel("source")
    ax.set_ylabel("target")
    ax.legend(loc="upper right", fontsize=7)
    _save(fig, path)

