"""Static vector plots of spectra: self-contained SVG or a gnuplot script.

Everything is emitted with fixed canvas geometry, a fixed palette order
(Coulomb, Poincare, symmetric, Lorentzian reference, then any custom
mixtures by name) and fixed float formatting, so identical inputs produce
byte-identical documents.  When several spectra arrive on different grids
they are linearly interpolated onto the first spectrum's grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .spectra import Spectrum

__all__ = ["PlotStyle", "emit_svg", "emit_gnuplot", "curve_order"]

_CANVAS_W, _CANVAS_H = 880.0, 560.0
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 80.0, 30.0, 58.0, 64.0

_BASE_ORDER = {"coulomb": 0, "poincare": 1, "symmetric": 2, "lorentzian": 3}
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#7f7f7f",
            "#9467bd", "#8c564b", "#e377c2", "#17becf")


@dataclass(frozen=True)
class PlotStyle:
    title: str = ""
    subtitle: str = ""
    xlabel: str = "omega_k"
    ylabel: str = "S"
    log_scale: bool = False  # plot ln(S) instead of S


def curve_order(spectra: list[Spectrum]) -> list[Spectrum]:
    """Fixed legend/draw order: named representations first, then by name."""
    def key(spec: Spectrum):
        name = str(spec.metadata.get("representation", ""))
        return (_BASE_ORDER.get(name, len(_BASE_ORDER)), name)

    return sorted(spectra, key=key)


def _resampled(spectra: list[Spectrum]):
    base = spectra[0].grid
    curves = []
    for spec in spectra:
        name = str(spec.metadata.get("representation", "?"))
        if spec.grid.shape == base.shape and np.array_equal(spec.grid, base):
            values = spec.values
        else:
            values = np.interp(base, spec.grid, spec.values)
        curves.append((name, values))
    return base, curves


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(0.0 if abs(t) < 1e-15 * span else t)
        t += step
    return ticks


def emit_svg(spectra: list[Spectrum], style: PlotStyle) -> str:
    """Render spectra to a self-contained SVG string."""
    if not spectra:
        raise ConfigurationError("nothing to plot")
    spectra = curve_order(spectra)
    grid, curves = _resampled(spectra)
    if style.log_scale:
        transformed = []
        for name, values in curves:
            if np.any(values <= 0.0):
                raise ConfigurationError(
                    "log-scale plots need strictly positive values"
                )
            transformed.append((name, np.log(values)))
        curves = transformed

    x_lo, x_hi = float(grid[0]), float(grid[-1])
    all_values = np.concatenate([v for _, v in curves])
    y_lo, y_hi = float(np.min(all_values)), float(np.max(all_values))
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    plot_w = _CANVAS_W - _MARGIN_L - _MARGIN_R
    plot_h = _CANVAS_H - _MARGIN_T - _MARGIN_B

    def sx(x):
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_CANVAS_W:.0f}" '
        f'height="{_CANVAS_H:.0f}" viewBox="0 0 {_CANVAS_W:.0f} {_CANVAS_H:.0f}">',
        f'<rect width="{_CANVAS_W:.0f}" height="{_CANVAS_H:.0f}" fill="white"/>',
    ]
    if style.title:
        parts.append(
            f'<text x="{_CANVAS_W / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{style.title}</text>'
        )
    if style.subtitle:
        parts.append(
            f'<text x="{_CANVAS_W / 2:.1f}" y="44" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11" fill="#555">'
            f'{style.subtitle}</text>'
        )

    # Frame and ticks.
    x0, y0 = sx(x_lo), sy(y_lo)
    x1, y1 = sx(x_hi), sy(y_hi)
    parts.append(
        f'<rect x="{x0:.1f}" y="{y1:.1f}" width="{x1 - x0:.1f}" '
        f'height="{y0 - y1:.1f}" fill="none" stroke="black" stroke-width="1"/>'
    )
    for t in _nice_ticks(x_lo, x_hi):
        px = sx(t)
        parts.append(
            f'<line x1="{px:.2f}" y1="{y0:.1f}" x2="{px:.2f}" '
            f'y2="{y0 + 5:.1f}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{y0 + 20:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:.6g}</text>'
        )
    for t in _nice_ticks(y_lo, y_hi):
        py = sy(t)
        parts.append(
            f'<line x1="{x0 - 5:.1f}" y1="{py:.2f}" x2="{x0:.1f}" '
            f'y2="{py:.2f}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 9:.1f}" y="{py + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{t:.6g}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.1f}" y="{_CANVAS_H - 18:.1f}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="13">'
        f'{style.xlabel}</text>'
    )
    ylabel = f"ln({style.ylabel})" if style.log_scale else style.ylabel
    parts.append(
        f'<text x="22" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 22 {(y0 + y1) / 2:.1f})">{ylabel}</text>'
    )

    # Curves.
    for idx, (name, values) in enumerate(curves):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(
            f"{sx(x):.3f},{sy(v):.3f}" for x, v in zip(grid, values)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.6"/>'
        )

    # Legend (skipped for a single unlabeled curve).
    if len(curves) > 1 or curves[0][0] not in ("", "?"):
        lx = x1 - 170.0
        ly = y1 + 14.0
        for idx, (name, _) in enumerate(curves):
            color = _PALETTE[idx % len(_PALETTE)]
            yy = ly + 18.0 * idx
            parts.append(
                f'<line x1="{lx:.1f}" y1="{yy:.1f}" x2="{lx + 26:.1f}" '
                f'y2="{yy:.1f}" stroke="{color}" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{lx + 32:.1f}" y="{yy + 4:.1f}" '
                f'font-family="sans-serif" font-size="12">{name}</text>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_gnuplot(spectra: list[Spectrum], style: PlotStyle,
                 dat_name: str) -> tuple[str, str]:
    """Return (data file text, gnuplot script text)."""
    if not spectra:
        raise ConfigurationError("nothing to plot")
    spectra = curve_order(spectra)
    grid, curves = _resampled(spectra)
    header = "# omega " + " ".join(name for name, _ in curves)
    rows = [header]
    for i, x in enumerate(grid):
        rows.append(
            " ".join([f"{x:.17g}"] + [f"{v[i]:.17g}" for _, v in curves])
        )
    dat = "\n".join(rows) + "\n"

    plots = []
    for idx, (name, _) in enumerate(curves):
        col = idx + 2
        expr = f"(log(${col}))" if style.log_scale else f"{col}"
        using = f"1:{expr}" if style.log_scale else f"1:{col}"
        plots.append(f"'{dat_name}' using {using} with lines title '{name}'")
    ylabel = f"ln({style.ylabel})" if style.log_scale else style.ylabel
    script = "\n".join(
        [
            "set terminal svg size 880,560",
            f"set title '{style.title}'",
            f"set xlabel '{style.xlabel}'",
            f"set ylabel '{ylabel}'",
            "set key top right",
            "plot " + ", \\\n     ".join(plots),
            "",
        ]
    )
    return dat, script
