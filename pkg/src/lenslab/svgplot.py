"""Tiny deterministic SVG line-plot writer (no timestamps, fixed number formatting)."""

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v):
    return f"{v:.2f}"


def _escape(text):
    return str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def line_plot(series, title="", xlabel="", ylabel="", xlog=True, ylog=True, notes=()):
    """Return SVG text for ``series = [(label, x, y), ...]``.

    Nonpositive values are dropped on logarithmic axes.  ``notes`` are extra
    text lines (for instance fitted slopes) printed in the top-left corner.
    """
    cleaned = []
    for label, x, y in series:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y)
        if xlog:
            keep &= x > 0
        if ylog:
            keep &= y > 0
        x, y = x[keep], y[keep]
        cleaned.append((label, np.log10(x) if xlog else x, np.log10(y) if ylog else y))
    xs = np.concatenate([c[1] for c in cleaned]) if cleaned else np.array([0.0])
    ys = np.concatenate([c[2] for c in cleaned]) if cleaned else np.array([0.0])
    if xs.size == 0:
        xs = ys = np.array([0.0])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1

    def px(v):
        return MARGIN + (v - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)

    def py(v):
        return HEIGHT - MARGIN - (v - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
           f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>']
    for frac in (0.0, 0.5, 1.0):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        xt = f"1e{xv:.1f}" if xlog else f"{xv:.3g}"
        yt = f"1e{yv:.1f}" if ylog else f"{yv:.3g}"
        out.append(f'<text x="{_fmt(px(xv))}" y="{HEIGHT - MARGIN + 18}" font-size="11" '
                   f'text-anchor="middle">{xt}</text>')
        out.append(f'<text x="{MARGIN - 6}" y="{_fmt(py(yv) + 4)}" font-size="11" '
                   f'text-anchor="end">{yt}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{MARGIN - 24}" font-size="14" '
               f'text-anchor="middle">{_escape(title)}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 14}" font-size="12" '
               f'text-anchor="middle">{_escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{HEIGHT / 2}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 16 {HEIGHT / 2})">{_escape(ylabel)}</text>')
    for k, (label, x, y) in enumerate(cleaned):
        color = COLORS[k % len(COLORS)]
        if x.size:
            pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, y))
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 16 + 14 * k}" font-size="11" '
                   f'text-anchor="end" fill="{color}">{_escape(label)}</text>')
    for k, note in enumerate(notes):
        out.append(f'<text x="{MARGIN + 6}" y="{MARGIN + 16 + 14 * k}" font-size="11">'
                   f'{_escape(note)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
