"""Minimal SVG polyline plots for end-effector trajectories."""

WIDTH = 420
HEIGHT = 420
MARGIN = 45
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _bounds(curves):
    xs = [p[0] for c in curves for p in c]
    ys = [p[1] for c in curves for p in c]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-12)
    return x0, y0, span


def _panel(curves, labels, title, x_off):
    x0, y0, span = _bounds(curves)
    plot = WIDTH - 2 * MARGIN

    def sx(x):
        return x_off + MARGIN + (x - x0) / span * plot

    def sy(y):
        return HEIGHT - MARGIN - (y - y0) / span * plot

    parts = [
        f'<rect x="{x_off + MARGIN}" y="{MARGIN}" width="{plot}" height="{HEIGHT - 2 * MARGIN}" '
        'fill="none" stroke="#999"/>',
        f'<text x="{x_off + WIDTH / 2}" y="{MARGIN - 12}" text-anchor="middle" '
        f'font-size="14">{title}</text>',
    ]
    for i, (curve, label) in enumerate(zip(curves, labels)):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{sx(p[0]):.2f},{sy(p[1]):.2f}" for p in curve)
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        parts.append(f'<text x="{x_off + MARGIN + 4}" y="{MARGIN + 16 + 14 * i}" '
                     f'font-size="12" fill="{color}">{label}</text>')
        s = curve[0]
        e = curve[-1]
        parts.append(f'<circle cx="{sx(s[0]):.2f}" cy="{sy(s[1]):.2f}" r="3" fill="{color}"/>')
        parts.append(f'<circle cx="{sx(e[0]):.2f}" cy="{sy(e[1]):.2f}" r="3" '
                     f'fill="none" stroke="{color}"/>')
    return parts


def trajectory_svg(positions_by_label, title: str, planar: bool = False) -> str:
    """Overlay plot of several trajectories.

    positions_by_label: label -> (k, 3) position array. Draws an X-Y panel
    and, for spatial chains, an X-Z panel next to it. Start points are
    filled circles, end points hollow ones.
    """
    labels = list(positions_by_label)
    xy = [[(p[0], p[1]) for p in positions_by_label[l]] for l in labels]
    parts = _panel(xy, labels, f"{title} (X-Y)", 0)
    total_width = WIDTH
    if not planar:
        xz = [[(p[0], p[2]) for p in positions_by_label[l]] for l in labels]
        parts += _panel(xz, labels, f"{title} (X-Z)", WIDTH)
        total_width = 2 * WIDTH
    body = "\n".join(parts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_width}" '
        f'height="{HEIGHT}" viewBox="0 0 {total_width} {HEIGHT}">\n'
        f'<rect width="{total_width}" height="{HEIGHT}" fill="white"/>\n'
        f"{body}\n</svg>\n"
    )
