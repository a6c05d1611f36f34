"""Resonance-fluorescence rates and the stimulated Lamb-line sweep.

The scattering rate for a sharp incident line carries a representation-
dependent frequency factor n(omega_0, omega_eg), normalized to 1 on
resonance; the stimulated microwave transition followed by a fast cascade
carries the analogous factor n'(omega_0, omega, omega').  Closed forms are
used for the named representations, and a first-principles route (off-shell
width times squared absorption coupling over the incident frequency) is
exposed for cross-checking and for arbitrary constant-alpha mixtures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atoms import AtomModel
from .errors import ConfigurationError, DomainError
from .representations import GaugeRepresentation, coupling_pair
from .spectra import (
    Spectrum,
    gamma_offshell,
    gamma_onshell,
    numerator_from_first_principles,
    DEFAULT_CUTOFF,
)

__all__ = [
    "SharpLineScenario",
    "LambLineScenario",
    "n_factor",
    "n_factor_from_rate_route",
    "fluorescence_rate",
    "fluorescence_sweep",
    "damped_rate_general",
    "lamb_n_factor",
    "lamb_n_factor_from_rate_route",
    "lamb_rate",
    "lamb_rate_sweep",
    "lamb_hydrogen_preset",
]


def _positive(value, name):
    if not np.all(np.isfinite(np.asarray(value, dtype=float))) or np.any(
        np.asarray(value) <= 0.0
    ):
        raise DomainError(f"{name} must be finite and positive")


def _non_negative(value, name):
    if not np.isfinite(value) or value < 0.0:
        raise DomainError(f"{name} must be finite and non-negative")


# -- sharp incident line -----------------------------------------------------


def n_factor(rep: GaugeRepresentation, omega_0, omega_eg: float):
    """Representation factor of the fluorescence rate, 1 on resonance.

    Closed forms: omega_eg/omega_0 (Coulomb), (omega_0/omega_eg)**3
    (Poincare), 16 omega_eg omega_0**3 / (omega_eg + omega_0)**4
    (symmetric); constant-alpha mixtures use the first-principles route.
    """
    omega_0 = np.asarray(omega_0, dtype=float)
    _positive(omega_0, "omega_0")
    _positive(omega_eg, "omega_eg")
    if rep.kind == "coulomb":
        out = omega_eg / omega_0
    elif rep.kind == "poincare":
        out = (omega_0 / omega_eg) ** 3
    elif rep.kind == "symmetric":
        out = 16.0 * omega_eg * omega_0**3 / (omega_eg + omega_0) ** 4
    else:
        out = n_factor_from_rate_route(rep, omega_0, omega_eg)
    return out if np.ndim(out) else float(out)


def n_factor_from_rate_route(rep, omega_0, omega_eg: float):
    """n built from its constituents: off-shell width, squared absorption
    coupling, and the 1/omega_0 flux factor, normalized on resonance."""
    omega_0 = np.asarray(omega_0, dtype=float)
    _positive(omega_0, "omega_0")
    _positive(omega_eg, "omega_eg")
    width_ratio = numerator_from_first_principles(rep, omega_0, omega_eg)
    u = coupling_pair(rep, omega_0, omega_eg).u_minus
    u_on = coupling_pair(rep, omega_eg, omega_eg).u_minus
    out = width_ratio * (np.asarray(u) ** 2 / u_on**2) * (omega_eg / omega_0)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class SharpLineScenario:
    """Atom driven by monochromatic incident radiation of intensity S."""

    intensity: float
    omega_0: float
    omega_eg: float
    gamma: float
    dipole_proj: float
    rep: GaugeRepresentation

    def __post_init__(self):
        _non_negative(self.intensity, "intensity")
        _positive(self.omega_0, "omega_0")
        _positive(self.omega_eg, "omega_eg")
        _positive(self.gamma, "gamma")
        _non_negative(self.dipole_proj, "dipole_proj")


def _rate_kernel(intensity, gamma_emit, gamma_damp, d2, n, detuning):
    """Shared arithmetic of every damped scattering rate."""
    return (
        intensity * gamma_emit * d2 / 2.0 * n / (detuning**2 + gamma_damp**2 / 4.0)
    )


def fluorescence_rate(scenario: SharpLineScenario) -> float:
    """Total scattering rate out of the initial state for a sharp line."""
    n = n_factor(scenario.rep, scenario.omega_0, scenario.omega_eg)
    return float(
        _rate_kernel(
            scenario.intensity,
            scenario.gamma,
            scenario.gamma,
            scenario.dipole_proj**2,
            n,
            scenario.omega_0 - scenario.omega_eg,
        )
    )


def fluorescence_sweep(scenario: SharpLineScenario, omega_0_grid) -> Spectrum:
    """Rate as a function of incident frequency, with the n column attached."""
    grid = np.asarray(omega_0_grid, dtype=float)
    _positive(grid, "omega_0 grid")
    n = np.asarray(n_factor(scenario.rep, grid, scenario.omega_eg))
    values = _rate_kernel(
        scenario.intensity,
        scenario.gamma,
        scenario.gamma,
        scenario.dipole_proj**2,
        n,
        grid - scenario.omega_eg,
    )
    meta = {
        "representation": scenario.rep.name,
        "gamma": scenario.gamma,
        "omega_eg": scenario.omega_eg,
        "lamb_shift": 0.0,
        "cutoff": DEFAULT_CUTOFF,
        "intensity": scenario.intensity,
        "dipole_proj": scenario.dipole_proj,
        "kind": "fluorescence",
    }
    return Spectrum(grid=grid, values=values, metadata=meta, n_factor=n)


def damped_rate_general(
    model: AtomModel,
    rep: GaugeRepresentation,
    omega: float,
    incident_spectrum,
) -> float:
    """Multi-channel damped scattering rate for a sampled incident spectrum.

    ``omega`` is the energy of the initial atomic level (resolved against
    the model); ``incident_spectrum`` is a sequence of (frequency,
    intensity) lines.  Each line drives every dipole-connected level above
    the initial one; the damping width of an intermediate level is its
    off-shell continuum width evaluated at the level energy, and the
    emission factor is the partial width back to the initial state.  For a
    single sharp line on a two-level atom this reduces to
    :func:`fluorescence_rate`.
    """
    lines = list(incident_spectrum)
    if not lines:
        raise ConfigurationError("incident spectrum must contain at least one line")
    initial = None
    for lv in model.levels:
        if lv.energy == omega:
            initial = lv.label
            break
    if initial is None:
        raise DomainError(f"no atomic level has energy {omega!r}")

    total = 0.0
    for omega_0, intensity in lines:
        _positive(omega_0, "incident line frequency")
        _non_negative(intensity, "incident line intensity")
        for tr in model.transitions_from(initial):
            if tr.omega <= 0.0:
                continue  # only levels above the initial state absorb
            d2 = float(np.sum(np.abs(tr.dipole) ** 2))
            if d2 == 0.0:
                continue
            gamma_damp = gamma_offshell(
                model.energy(tr.label), model, rep, state=tr.label
            )
            gamma_emit = gamma_onshell(model, tr.label, initial, rep=rep)
            n = n_factor(rep, omega_0, tr.omega)
            total += _rate_kernel(
                intensity, gamma_emit, gamma_damp, d2, n, omega_0 - tr.omega
            )
    return float(total)


# -- stimulated decay of a metastable state ----------------------------------


def lamb_n_factor(rep: GaugeRepresentation, omega_0, omega: float, omega_prime: float):
    """Representation factor n' of the stimulated-decay line, 1 at omega_0 = omega.

    ``omega`` is the small splitting being driven, ``omega_prime`` the fast
    cascade transition; the emitted frequency is omega + omega' - omega_0
    and must be positive.
    """
    omega_0 = np.asarray(omega_0, dtype=float)
    _positive(omega_0, "omega_0")
    _positive(omega, "omega")
    _positive(omega_prime, "omega_prime")
    emitted = omega + omega_prime - omega_0
    if np.any(emitted <= 0.0):
        raise DomainError("emitted frequency omega + omega' - omega_0 must be positive")
    if rep.kind == "coulomb":
        out = (emitted / omega_prime) * (omega**2 / omega_0**2)
    elif rep.kind == "poincare":
        out = (emitted / omega_prime) ** 3
    elif rep.kind == "symmetric":
        out = (
            4.0 * emitted**3 / (omega_prime * (omega + 2.0 * omega_prime - omega_0) ** 2)
        ) * (4.0 * omega**2 / (omega + omega_0) ** 2)
    else:
        out = lamb_n_factor_from_rate_route(rep, omega_0, omega, omega_prime)
    return out if np.ndim(out) else float(out)


def lamb_n_factor_from_rate_route(rep, omega_0, omega, omega_prime):
    """n' from its constituents: off-shell cascade width at the emitted
    frequency, squared absorption coupling on the driven transition, and
    the flux factor omega/omega_0."""
    omega_0 = np.asarray(omega_0, dtype=float)
    emitted = omega + omega_prime - omega_0
    if np.any(emitted <= 0.0):
        raise DomainError("emitted frequency omega + omega' - omega_0 must be positive")
    width_ratio = numerator_from_first_principles(rep, emitted, omega_prime)
    u = coupling_pair(rep, omega_0, omega).u_minus
    u_on = coupling_pair(rep, omega, omega).u_minus
    out = width_ratio * (np.asarray(u) ** 2 / u_on**2) * (omega / omega_0)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class LambLineScenario:
    """Stimulated decay of a metastable level through a fast cascade.

    ``omega`` is the driven splitting, ``omega_prime`` the cascade
    transition frequency (normally much larger), ``gamma`` the cascade
    width.  ``omega_0`` is the nominal drive frequency and defaults to
    resonance.
    """

    intensity: float
    omega: float
    omega_prime: float
    gamma: float
    dipole_proj: float
    rep: GaugeRepresentation
    omega_0: float | None = None

    def __post_init__(self):
        _non_negative(self.intensity, "intensity")
        _positive(self.omega, "omega")
        _positive(self.omega_prime, "omega_prime")
        _positive(self.gamma, "gamma")
        _non_negative(self.dipole_proj, "dipole_proj")
        if self.omega_0 is not None:
            _positive(self.omega_0, "omega_0")


def lamb_rate(scenario: LambLineScenario) -> float:
    """Stimulated-decay rate at the scenario's drive frequency."""
    omega_0 = scenario.omega if scenario.omega_0 is None else scenario.omega_0
    n = lamb_n_factor(scenario.rep, omega_0, scenario.omega, scenario.omega_prime)
    return float(
        _rate_kernel(
            scenario.intensity,
            scenario.gamma,
            scenario.gamma,
            scenario.dipole_proj**2,
            n,
            omega_0 - scenario.omega,
        )
    )


def lamb_rate_sweep(scenario: LambLineScenario, omega_0_grid) -> Spectrum:
    """Rate as a function of drive frequency, with the n' column attached."""
    grid = np.asarray(omega_0_grid, dtype=float)
    _positive(grid, "omega_0 grid")
    n = np.asarray(
        lamb_n_factor(scenario.rep, grid, scenario.omega, scenario.omega_prime)
    )
    values = _rate_kernel(
        scenario.intensity,
        scenario.gamma,
        scenario.gamma,
        scenario.dipole_proj**2,
        n,
        grid - scenario.omega,
    )
    meta = {
        "representation": scenario.rep.name,
        "gamma": scenario.gamma,
        "omega_eg": scenario.omega,
        "lamb_shift": 0.0,
        "cutoff": DEFAULT_CUTOFF,
        "intensity": scenario.intensity,
        "dipole_proj": scenario.dipole_proj,
        "omega_prime": scenario.omega_prime,
        "kind": "lamb-line",
    }
    return Spectrum(grid=grid, values=values, metadata=meta, n_factor=n)


def lamb_hydrogen_preset(
    rep: GaugeRepresentation, intensity: float = 1.0
) -> LambLineScenario:
    """Named preset for the stimulated-decay sweep.

    The ratios (omega'/omega = 1e3, gamma/omega = 0.6) are legibility
    placeholders chosen to make the plotted asymmetries visible; they are
    NOT physical hydrogen values.  Override any field as needed.
    """
    return LambLineScenario(
        intensity=intensity,
        omega=1.0,
        omega_prime=1000.0,
        gamma=0.6,
        dipole_proj=1.0,
        rep=rep,
    )
