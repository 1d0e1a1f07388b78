"""CSV and SVG writers.

CSV headers are ``name[unit]``; numbers use the shortest round-trip repr so
output is byte-stable.
"""
from __future__ import annotations

import numpy as np


def _fmt(v):
    v = float(v)
    if np.isnan(v):
        return "nan"
    return repr(v)


def write_csv(path, columns):
    """``columns`` is a list of ``(name, unit, values)``."""
    names = [f"{n}[{u}]" for n, u, _ in columns]
    arrays = [np.asarray(v) for _, _, v in columns]
    rows = [",".join(names)]
    for i in range(len(arrays[0])):
        rows.append(",".join(_fmt(a[i]) for a in arrays))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(rows) + "\n")


def read_csv(path):
    """Return ``{name: array}`` keyed by column name without the unit suffix."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        names = [h.split("[", 1)[0].strip() for h in header]
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {n: data[:, i] for i, n in enumerate(names)}


def _polyline(x, y, x0, x1, y0, y1, dashed=False):
    w, h, pad = 800.0, 600.0, 60.0
    sx = (w - 2 * pad) / (x1 - x0) if x1 > x0 else 0.0
    sy = (h - 2 * pad) / (y1 - y0) if y1 > y0 else 0.0
    px = pad + (np.asarray(x) - x0) * sx
    py = h - pad - (np.asarray(y) - y0) * sy
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    dash = ' stroke-dasharray="8,5"' if dashed else ""
    return f'<polyline fill="none" stroke="black" stroke-width="1.5"{dash} points="{pts}"/>'


def write_svg(path, panels):
    """Stack panels vertically, each in its own 800x600 viewBox.

    ``panels`` is a list of ``(title, x, [(y, dashed), ...])``.
    """
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="800" '
           f'height="{600 * len(panels)}">']
    for k, (title, x, curves) in enumerate(panels):
        x = np.asarray(x, dtype=float)
        ys = np.concatenate([np.asarray(y, dtype=float) for y, _ in curves])
        y0, y1 = float(ys.min()), float(ys.max())
        out.append(f'<svg x="0" y="{600 * k}" width="800" height="600" viewBox="0 0 800 600">')
        out.append('<rect x="60" y="60" width="680" height="480" fill="none" stroke="gray"/>')
        out.append(f'<text x="400" y="35" text-anchor="middle" font-size="20">{title}</text>')
        for y, dashed in curves:
            out.append(_polyline(x, y, x[0], x[-1], y0, y1, dashed))
        out.append("</svg>")
    out.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
