"""Static SVG picture of the three diameter circles."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .balls import to_complex
from .klein import annulus_bounds, circle_disjointness
from .rep import HalfTurnTriple, diameter_circle, fixed_points

COLORS = ("#1f77b4", "#d62728", "#2ca02c")


def _f(x: float) -> str:
    return f"{x:.6g}"


def plot_circles(t: HalfTurnTriple, size: int = 600) -> str:
    """SVG with the diameter circles, their fixed points and, for regular triples, the annulus [R1, R2]."""
    circles = [diameter_circle(m, t.precision) for m in t.matrices]
    data = [(to_complex(c.center), float(c.radius.mid())) for c in circles]
    extent = max(abs(z) + r for z, r in data)
    half = 1.2 * extent
    status = circle_disjointness(t).status

    items = []
    if t.regular:
        x = abs(to_complex(t.beta))
        if x > 1:
            b = annulus_bounds(x)
            r1, r2 = float(b.r1.mid()), float(b.r2.mid())
            if r2 > r1 > 0:
                items.append(
                    f'<path d="M {_f(r2)} 0 A {_f(r2)} {_f(r2)} 0 1 0 {_f(-r2)} 0 A {_f(r2)} {_f(r2)} 0 1 0 {_f(r2)} 0 Z '
                    f'M {_f(r1)} 0 A {_f(r1)} {_f(r1)} 0 1 1 {_f(-r1)} 0 A {_f(r1)} {_f(r1)} 0 1 1 {_f(r1)} 0 Z" '
                    'fill="#999" fill-opacity="0.25" fill-rule="evenodd" stroke="none" class="annulus"/>'
                )
    sw = half / 300
    for k, ((z, r), m) in enumerate(zip(data, t.matrices)):
        color = COLORS[k]
        items.append(
            f'<circle cx="{_f(z.real)}" cy="{_f(z.imag)}" r="{_f(r)}" fill="none" '
            f'stroke="{color}" stroke-width="{_f(sw)}" class="C{k}"/>'
        )
        for p in fixed_points(m, t.precision):
            pz = to_complex(p)
            items.append(f'<circle cx="{_f(pz.real)}" cy="{_f(pz.imag)}" r="{_f(3 * sw)}" fill="{color}"/>')
    title = escape(f"rho = {', '.join(t.params.labels())}; {status}")
    body = "\n    ".join(items)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_f(-half)} {_f(-half)} {_f(2 * half)} {_f(2 * half)}">\n'
        f"  <title>{title}</title>\n"
        # flip so the imaginary axis points up
        '  <g transform="scale(1,-1)">\n'
        f"    {body}\n"
        "  </g>\n"
        "</svg>\n"
    )
