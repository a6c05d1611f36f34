"""Spontaneous-emission lineshapes, decay rates and level shifts.

Mode sums over the photon continuum are performed with the weight

    W(omega) = omega**2 / (3 pi**2)

which is the isotropic mode density omega**2 times the polarization and
angular sum of |v . e_k|^2, i.e. (8 pi / 3), divided by (2 pi)**3.  The
regularization volume never appears.  With this weight the golden-rule
decay rate of a transition with frequency w and dipole magnitude d is
w**3 d**2 / (3 pi) in natural units, identically in every representation.

The atom models here carry their dipole along a single axis; the quadratic
(diagonal) interaction term in the Coulomb-route total shift is weighted
along that same axis, which makes the axis sum rule value 1/(2 m) exactly
the condition for the Coulomb- and Poincare-route shifts to coincide mode
by mode.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .atoms import AtomModel
from .errors import ConfigurationError, DomainError
from .quadrature import pv_quad, smooth_quad
from .representations import POINCARE, GaugeRepresentation, coupling_pair

__all__ = [
    "LineshapeParams",
    "Spectrum",
    "numerator",
    "numerator_from_first_principles",
    "gamma_onshell",
    "gamma_offshell",
    "delta_offshell",
    "total_shift",
    "total_shift_integrand",
    "lamb_shift",
    "lineshape_S",
    "lorentzian_density",
    "write_spectrum_csv",
    "read_spectrum_csv",
]

DEFAULT_CUTOFF = 1000.0  # in units of the reference transition frequency

CSV_COLUMNS = ("omega_k", "S", "representation", "gamma", "omega_eg",
               "lamb_shift", "cutoff")


def _check_positive(value, name: str):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"{name} must be finite and positive")
    return arr


# -- lineshape numerators --------------------------------------------------


def numerator(rep: GaugeRepresentation, omega_k, omega_eg: float):
    """Frequency dependence of the lineshape numerator, normalized on shell.

    Closed forms: omega_k/omega_eg (Coulomb), (omega_k/omega_eg)**3
    (Poincare), 4 omega_k**3 / (omega_eg (omega_eg + omega_k)**2)
    (symmetric).  A custom constant-alpha representation falls back to the
    first-principles construction.
    """
    omega_k = _check_positive(omega_k, "omega_k")
    _check_positive(omega_eg, "omega_eg")
    if rep.kind == "coulomb":
        out = omega_k / omega_eg
    elif rep.kind == "poincare":
        out = (omega_k / omega_eg) ** 3
    elif rep.kind == "symmetric":
        out = 4.0 * omega_k**3 / (omega_eg * (omega_eg + omega_k) ** 2)
    else:
        out = numerator_from_first_principles(rep, omega_k, omega_eg)
    return out if np.ndim(out) else float(out)


def numerator_from_first_principles(rep, omega_k, omega_eg: float):
    """Numerator built from mode density times squared coupling.

    rho(omega_k) |u_minus(omega_k)|^2 divided by its on-shell value.  For
    the named representations this reproduces the closed forms of
    :func:`numerator` and serves as the cross-check route; for a custom
    constant alpha it is the definition.
    """
    omega_k = _check_positive(omega_k, "omega_k")
    _check_positive(omega_eg, "omega_eg")
    u = coupling_pair(rep, omega_k, omega_eg).u_minus
    u_on = coupling_pair(rep, omega_eg, omega_eg).u_minus
    out = (omega_k**2 * np.asarray(u) ** 2) / (omega_eg**2 * u_on**2)
    return out if np.ndim(out) else float(out)


# -- decay rates -------------------------------------------------------------


def gamma_onshell(
    model: AtomModel, upper: str, lower: str,
    rep: GaugeRepresentation = POINCARE,
) -> float:
    """Golden-rule decay rate of the transition upper -> lower.

    The value w**3 |d|**2 / (3 pi) is representation independent; ``rep``
    selects the evaluation route (momentum elements for Coulomb, dipole
    elements otherwise) so the equivalence can be checked numerically.
    """
    w = model.omega(upper, lower)
    if w <= 0.0:
        raise DomainError("upper level must lie above lower level")
    if rep.kind == "coulomb":
        p2 = float(np.sum(np.abs(model.momentum(lower, upper)) ** 2))
        return model.charge**2 * p2 * w / (3.0 * math.pi * model.mass**2)
    d2 = float(np.sum(np.abs(model.dipole(lower, upper)) ** 2))
    u_on = coupling_pair(rep, w, w).u_minus
    return w**3 * d2 * u_on**2 / (3.0 * math.pi)


def _channel_weight(rep, emitted: float, w_abs: float, downward: bool) -> float:
    """Squared coupling of an emission channel, relative to on shell."""
    pair = coupling_pair(rep, emitted, w_abs)
    u = pair.u_minus if downward else pair.u_plus
    u_on = coupling_pair(rep, w_abs, w_abs).u_minus
    return (emitted**2 * u**2) / (w_abs**2 * u_on**2)


def gamma_offshell(
    omega: float, model: AtomModel, rep: GaugeRepresentation,
    state: str | None = None,
) -> float:
    """Continuum decay rate Gamma(omega) at total energy ``omega``.

    Every dipole-connected partner n of ``state`` (default: the topmost
    level) with positive emitted frequency omega - omega_n contributes its
    golden-rule rate scaled by the representation's off-shell weight.
    Returns 0 below all thresholds.
    """
    if state is None:
        state = model.top
    total = 0.0
    for tr in model.transitions_from(state):
        emitted = omega - model.energy(tr.label)
        if emitted <= 0.0:
            continue
        w_abs = abs(tr.omega)
        d2 = float(np.sum(np.abs(tr.dipole) ** 2))
        base = w_abs**3 * d2 / (3.0 * math.pi)
        total += base * _channel_weight(rep, emitted, w_abs, downward=tr.omega < 0.0)
    return total


# -- level shifts ------------------------------------------------------------


def _pv_over_shift_kernel(gfun, omega_ns: float, cutoff: float, n: int) -> float:
    """PV int_0^cutoff gfun(w) / (omega_ns + w) dw."""
    if omega_ns > 0.0:
        return smooth_quad(lambda w: gfun(w) / (omega_ns + w), 0.0, cutoff, n,
                           toward="lo")
    # Pole at w = -omega_ns:  1/(omega_ns + w) = -1/(pole - w).
    return -pv_quad(gfun, -omega_ns, 0.0, cutoff, n)


def _require_cutoff(model: AtomModel, cutoff: float):
    w_max = max(
        (abs(a.energy - b.energy) for a in model.levels for b in model.levels),
        default=0.0,
    )
    if cutoff <= w_max:
        raise ConfigurationError(
            f"cutoff {cutoff} must exceed every transition frequency ({w_max})"
        )


def delta_offshell(
    omega: float, model: AtomModel, rep: GaugeRepresentation, cutoff: float,
    state: str | None = None, n: int = 4096,
) -> float:
    """Second-order level-shift function Delta(omega) at total energy omega.

    Principal-value integral over the mode continuum up to ``cutoff``.
    Downward transitions couple through u_minus, upward ones through
    u_plus; in the symmetric representation the upward (counter-rotating)
    channels therefore drop out.  Off shell the result is representation
    dependent.
    """
    _require_cutoff(model, cutoff)
    if state is None:
        state = model.top
    total = 0.0
    for tr in model.transitions_from(state):
        w_abs = abs(tr.omega)
        d2 = float(np.sum(np.abs(tr.dipole) ** 2))
        if d2 == 0.0:
            continue
        downward = tr.omega < 0.0

        def weight(wk, w_abs=w_abs, downward=downward):
            wk = np.asarray(wk, dtype=float)
            positive = wk > 0.0
            pair = coupling_pair(rep, np.where(positive, wk, 1.0), w_abs)
            u = pair.u_minus if downward else pair.u_plus
            # w^2 u^2 -> 0 as w -> 0+, so 0 is the continuous endpoint value.
            return np.where(positive, wk**2 * np.asarray(u) ** 2, 0.0)

        coeff = w_abs * d2 / (6.0 * math.pi**2)
        pole = omega - model.energy(tr.label)  # denominator pole - wk
        total += coeff * pv_quad(weight, pole, 0.0, cutoff, n)
    return total


def total_shift_integrand(
    model: AtomModel, state: str, rep: GaugeRepresentation, omega_modes,
) -> np.ndarray:
    """Per-mode-frequency integrand of the on-shell total level shift.

    Includes the first-order diagonal term: the quadratic vector-potential
    term on the Coulomb route, the squared-polarization term on the
    Poincare route (folded into omega_ns/(omega_ns + w)).  Only these two
    routes define the diagonal term; other representations are rejected.
    """
    w = _check_positive(omega_modes, "mode frequency")
    weight = w**2 / (3.0 * math.pi**2)
    if rep.kind == "coulomb":
        bracket = np.full_like(w, 0.5)
        for tr in model.transitions_from(state):
            p2 = float(np.sum(np.abs(model.momentum(tr.label, state)) ** 2))
            bracket -= p2 / model.mass / (tr.omega + w)
        return weight * model.charge**2 / (2.0 * model.mass * w) * bracket
    if rep.kind == "poincare":
        out = np.zeros_like(w)
        for tr in model.transitions_from(state):
            d2 = float(np.sum(np.abs(tr.dipole) ** 2))
            out += 0.5 * d2 * tr.omega / (tr.omega + w)
        return weight * out
    raise DomainError(
        "the diagonal interaction term is defined only on the coulomb and "
        "poincare routes"
    )


def total_shift(
    model: AtomModel, state: str, rep: GaugeRepresentation, cutoff: float,
    n: int = 4096,
) -> float:
    """On-shell total shift of ``state``: diagonal term plus second-order sum.

    Cutoff dependent (quadratically through the diagonal term); the
    TRK-saturating oscillator model yields the same value on the Coulomb
    and Poincare routes, a two-level model does not.
    """
    _require_cutoff(model, cutoff)
    if rep.kind == "coulomb":
        total = smooth_quad(
            lambda w: model.charge**2 * w / (12.0 * math.pi**2 * model.mass),
            0.0, cutoff, n,
        )
        for tr in model.transitions_from(state):
            p2 = float(np.sum(np.abs(model.momentum(tr.label, state)) ** 2))
            if p2 == 0.0:
                continue
            coeff = model.charge**2 * p2 / (6.0 * math.pi**2 * model.mass**2)
            total -= coeff * _pv_over_shift_kernel(lambda w: w, tr.omega, cutoff, n)
        return total
    if rep.kind == "poincare":
        total = 0.0
        for tr in model.transitions_from(state):
            d2 = float(np.sum(np.abs(tr.dipole) ** 2))
            if d2 == 0.0:
                continue
            coeff = 0.5 * d2 * tr.omega / (3.0 * math.pi**2)
            total += coeff * _pv_over_shift_kernel(lambda w: w**2, tr.omega,
                                                   cutoff, n)
        return total
    raise DomainError(
        "the diagonal interaction term is defined only on the coulomb and "
        "poincare routes"
    )


def lamb_shift(model: AtomModel, state: str, cutoff: float, n: int = 4096) -> float:
    """Mass-renormalized second-order shift of ``state`` (cutoff in program units).

    The per-transition kernel integrates to omega_ns^3 |r_ns|^2 / (6 pi^2)
    times log|(omega_ns + cutoff)/omega_ns|, so the value grows
    logarithmically with the cutoff; callers should echo the cutoff next to
    the number.
    """
    _require_cutoff(model, cutoff)
    total = 0.0
    for tr in model.transitions_from(state):
        p2 = float(np.sum(np.abs(model.momentum(tr.label, state)) ** 2))
        if p2 == 0.0:
            continue
        coeff = model.charge**2 * tr.omega * p2 / (6.0 * math.pi**2 * model.mass**2)
        total += coeff * _pv_over_shift_kernel(lambda w: np.ones_like(w),
                                               tr.omega, cutoff, n)
    return total


# -- the spectrum ------------------------------------------------------------


@dataclass(frozen=True)
class LineshapeParams:
    """Inputs of the emission lineshape.

    ``lamb_shift`` may be zero to suppress the line displacement.  With
    ``variable_width`` (experimental) the Lorentzian denominator uses the
    frequency-dependent width Gamma * numerator(omega_k) instead of the
    constant on-shell value the plotted curves use.
    """

    rep: GaugeRepresentation
    omega_eg: float
    gamma: float
    lamb_shift: float = 0.0
    variable_width: bool = False

    def __post_init__(self):
        _check_positive(self.omega_eg, "omega_eg")
        _check_positive(self.gamma, "gamma")
        if not np.isfinite(self.lamb_shift):
            raise DomainError("lamb_shift must be finite")


@dataclass
class Spectrum:
    """A sampled spectral density with provenance metadata.

    ``metadata`` echoes the generating parameters (representation, gamma,
    omega_eg, lamb_shift, cutoff, ...).  The density is NOT normalized to
    unit area; the numerically integrated area is recorded in the metadata
    instead, since the area itself differs between representations.
    """

    grid: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)
    n_factor: np.ndarray | None = None

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise DomainError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.grid) <= 0.0):
            raise DomainError("grid must be strictly increasing")
        if np.any(self.values < 0.0) or not np.all(np.isfinite(self.values)):
            raise DomainError("spectral density must be finite and non-negative")
        if self.n_factor is not None:
            self.n_factor = np.asarray(self.n_factor, dtype=float)
            if self.n_factor.shape != self.grid.shape:
                raise DomainError("n_factor column must match the grid length")
        self.metadata.setdefault("area", float(np.trapezoid(self.values, self.grid)))
        self.metadata.setdefault(
            "normalization", "spectral density; area reported, not normalized"
        )


def lorentzian_density(delta, gamma: float):
    """(gamma / 2 pi) / (delta**2 + gamma**2 / 4); shared by all spectra."""
    delta = np.asarray(delta, dtype=float)
    return (gamma / (2.0 * math.pi)) / (delta**2 + gamma**2 / 4.0)


def lineshape_S(params: LineshapeParams, grid) -> Spectrum:
    """Emission lineshape S(omega_k) on the given frequency grid."""
    grid = _check_positive(np.asarray(grid, dtype=float), "grid")
    num = np.asarray(numerator(params.rep, grid, params.omega_eg))
    delta = grid - params.omega_eg - params.lamb_shift
    if params.variable_width:
        gamma_w = params.gamma * num
        values = num * (params.gamma / (2.0 * math.pi)) / (
            delta**2 + gamma_w**2 / 4.0
        )
    else:
        values = num * lorentzian_density(delta, params.gamma)
    meta = {
        "representation": params.rep.name,
        "gamma": params.gamma,
        "omega_eg": params.omega_eg,
        "lamb_shift": params.lamb_shift,
        "cutoff": DEFAULT_CUTOFF,
        "kind": "lineshape",
    }
    if params.variable_width:
        meta["variable_width"] = True
    return Spectrum(grid=grid, values=values, metadata=meta)


# -- serialization -----------------------------------------------------------


def _fmt(value) -> str:
    return f"{float(value):.17g}"


def read_spectrum_csv(path) -> Spectrum:
    """Read back a spectrum written by :func:`write_spectrum_csv`."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [ln.strip() for ln in handle if ln.strip()]
    if not lines:
        raise ConfigurationError(f"{path}: empty spectrum file")
    header = lines[0].split(",")
    if header[: len(CSV_COLUMNS)] != list(CSV_COLUMNS):
        raise ConfigurationError(f"{path}: unexpected CSV header")
    has_n = len(header) > len(CSV_COLUMNS) and header[-1] == "n_factor"
    grid, values, nfac = [], [], []
    rep = ""
    constants = [0.0, 0.0, 0.0, 0.0]
    try:
        for line in lines[1:]:
            cells = line.split(",")
            grid.append(float(cells[0]))
            values.append(float(cells[1]))
            rep = cells[2]
            constants = [float(c) for c in cells[3:7]]
            if has_n:
                nfac.append(float(cells[7]))
    except (ValueError, IndexError) as exc:
        raise ConfigurationError(f"{path}: malformed spectrum row") from exc
    meta = {
        "representation": rep,
        "gamma": constants[0],
        "omega_eg": constants[1],
        "lamb_shift": constants[2],
        "cutoff": constants[3],
    }
    return Spectrum(
        grid=np.array(grid),
        values=np.array(values),
        metadata=meta,
        n_factor=np.array(nfac) if has_n else None,
    )


def write_spectrum_csv(spectrum: Spectrum, path) -> None:
    """Write the fixed CSV schema; atomic (write-then-rename)."""
    meta = spectrum.metadata
    header = list(CSV_COLUMNS)
    if spectrum.n_factor is not None:
        header.append("n_factor")
    rows = [",".join(header)]
    rep = str(meta.get("representation", ""))
    constants = [
        _fmt(meta.get("gamma", 0.0)),
        _fmt(meta.get("omega_eg", 0.0)),
        _fmt(meta.get("lamb_shift", 0.0)),
        _fmt(meta.get("cutoff", DEFAULT_CUTOFF)),
    ]
    for i, (w, s) in enumerate(zip(spectrum.grid, spectrum.values)):
        row = [_fmt(w), _fmt(s), rep, *constants]
        if spectrum.n_factor is not None:
            row.append(_fmt(spectrum.n_factor[i]))
        rows.append(",".join(row))
    text = "\n".join(rows) + "\n"
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    os.replace(tmp, path)
