"""Semi-classically driven two-level atom: pulse dynamics and emission.

A rectangular drive of amplitude Omega and duration pi/Omega (a pi-pulse)
excites the atom; afterwards the excited amplitude decays exponentially at
rate Gamma/2 and the photon-mode amplitudes accumulate a Lorentzian tail.
Mode amplitudes are tracked in reduced form: the per-mode coupling
prefactor (-i g* u_minus) is factored out and reattached by the spectrum
assembler through the identity

    rho(w) (L/2pi)^3 sum_pol int dTheta |g u_minus|^2
        = (Gamma / 2 pi) * numerator(w),

so no regularization volume ever appears.

Convention: the drive enters the amplitude equations as a Hermitian
coupling, i db/dt = V(t) b, so a resonant pi-pulse leaves b_e(0) = -i.
The closed-form emission amplitude carries the matching phase on its
pulse-window term, which keeps it consistent with the integrated dynamics
and makes the pulse contribution add in quadrature with the Lorentzian
tail at line center.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConfigurationError, DomainError
from .representations import GaugeRepresentation, coupling_pair
from .spectra import (
    DEFAULT_CUTOFF,
    Spectrum,
    lorentzian_density,
    numerator,
)

__all__ = [
    "Envelope",
    "rectangular_envelope",
    "PulseConfig",
    "DetuningSet",
    "AmplitudeState",
    "PulseTrajectory",
    "laser_coupling_pair",
    "excited_amplitude_during_pulse",
    "ground_amplitude_during_pulse",
    "closed_form_amplitude",
    "resonant_amplitude",
    "integrate_dynamics",
    "pulse_spectrum",
    "lorentzian_reference_spectrum",
    "detuning_sensitivity_scan",
    "rk4_fixed",
]


@dataclass(frozen=True)
class Envelope:
    """Drive envelope: amplitude(t) between start and end, zero outside."""

    start: float
    end: float
    amplitude: Callable[[float], float]


def rectangular_envelope(rabi: float) -> Envelope:
    """Constant amplitude ``rabi`` on [-pi/rabi, 0]: a resonant pi-pulse."""
    start = -math.pi / rabi
    return Envelope(start=start, end=0.0,
                    amplitude=lambda t: rabi if start <= t <= 0.0 else 0.0)


@dataclass(frozen=True)
class PulseConfig:
    """Laser drive parameters.

    ``alpha_laser`` overrides the representation's mixing constant for the
    drive coupling only (None: derive it from the representation at the
    carrier frequency).  ``envelope`` defaults to the rectangular pi-pulse;
    alternative envelopes plug in through :class:`Envelope` but only affect
    the integrated dynamics, not the rectangular closed forms.
    """

    rabi: float
    omega_l: float
    alpha_laser: float | None = None
    envelope: Envelope | None = None

    def __post_init__(self):
        if not np.isfinite(self.rabi) or self.rabi <= 0.0:
            raise DomainError("rabi amplitude must be finite and positive")
        if not np.isfinite(self.omega_l) or self.omega_l <= 0.0:
            raise DomainError("laser carrier frequency must be finite and positive")
        if self.alpha_laser is not None and not np.isfinite(self.alpha_laser):
            raise DomainError("alpha_laser must be finite")
        if self.envelope is None:
            object.__setattr__(self, "envelope", rectangular_envelope(self.rabi))

    @property
    def duration(self) -> float:
        return math.pi / self.rabi


def laser_coupling_pair(config: PulseConfig, rep: GaugeRepresentation,
                        omega_0: float):
    """Drive couplings u_l(+/-) at the carrier frequency.

    On resonance u_minus equals 1 in every representation, so a resonant
    pulse drives identically no matter the gauge.
    """
    if config.alpha_laser is None:
        return coupling_pair(rep, config.omega_l, omega_0)
    a = config.alpha_laser
    down = math.sqrt(omega_0 / config.omega_l)
    up = math.sqrt(config.omega_l / omega_0)
    return (1.0 - a) * down - a * up, (1.0 - a) * down + a * up


@dataclass(frozen=True)
class DetuningSet:
    """Laser/mode detunings.

    ``delta_kl`` is *defined* as delta_l - delta_k, so the closure
    delta_k + delta_kl = delta_l is an identity of the construction
    (numerically exact in the form delta_kl == delta_l - delta_k; no
    float expression of a three-term sum can be exact in every order).
    """

    delta_l: float
    delta_k: float
    delta_kl: float
    mu: float

    @classmethod
    def build(cls, config: PulseConfig, rep: GaugeRepresentation,
              omega_0: float, omega_k: float) -> "DetuningSet":
        delta_l = omega_0 - config.omega_l
        delta_k = omega_0 - omega_k
        u_l = laser_coupling_pair(config, rep, omega_0)[1]
        mu = math.hypot(config.rabi * u_l, delta_l)
        return cls(delta_l=delta_l, delta_k=delta_k,
                   delta_kl=delta_l - delta_k, mu=mu)


# -- closed forms ------------------------------------------------------------


def excited_amplitude_during_pulse(t, config: PulseConfig,
                                   rep: GaugeRepresentation, omega_0: float):
    """Excited amplitude inside the rectangular pulse window.

    b_e(t) = -i (Omega u_l / mu) exp(i delta_l (t - pi/Omega)/2)
             sin((mu/2)(t + pi/Omega)),   -pi/Omega <= t <= 0.
    """
    t_arr = np.asarray(t, dtype=float)
    T = config.duration
    if np.any(t_arr < -T - 1e-12) or np.any(t_arr > 1e-12):
        raise DomainError("time outside the pulse window [-pi/Omega, 0]")
    u_l = laser_coupling_pair(config, rep, omega_0)[1]
    delta_l = omega_0 - config.omega_l
    mu = math.hypot(config.rabi * u_l, delta_l)
    out = (
        -1j
        * (config.rabi * u_l / mu)
        * np.exp(1j * delta_l * (t_arr - T) / 2.0)
        * np.sin(0.5 * mu * (t_arr + T))
    )
    return out if out.ndim else complex(out)


def ground_amplitude_during_pulse(t, config: PulseConfig,
                                  rep: GaugeRepresentation, omega_0: float):
    """Ground amplitude inside the pulse window (unitary partner of
    :func:`excited_amplitude_during_pulse`)."""
    t_arr = np.asarray(t, dtype=float)
    T = config.duration
    if np.any(t_arr < -T - 1e-12) or np.any(t_arr > 1e-12):
        raise DomainError("time outside the pulse window [-pi/Omega, 0]")
    u_l = laser_coupling_pair(config, rep, omega_0)[1]
    delta_l = omega_0 - config.omega_l
    mu = math.hypot(config.rabi * u_l, delta_l)
    tau = 0.5 * mu * (t_arr + T)
    out = (np.cos(tau) + 1j * (delta_l / mu) * np.sin(tau)) * np.exp(
        -1j * delta_l * (t_arr + T) / 2.0
    )
    return out if out.ndim else complex(out)


def _expm1_over(eps):
    """(exp(i eps) - 1) / eps for real eps, stable through eps = 0."""
    eps = np.asarray(eps, dtype=float)
    return 1j * np.exp(0.5j * eps) * np.sinc(eps / (2.0 * math.pi))


def _reduced_kernel(P, theta: float):
    """[exp(iP) - cos(theta) - i (P/theta) sin(theta)] / (theta^2 - P^2).

    The zeros of the denominator at P = +/- theta are removable; near them
    the expression is evaluated through an exact factorization (no series
    truncation), so the result is smooth to machine precision across the
    whole line.
    """
    P = np.asarray(P, dtype=float)
    out = np.empty(P.shape, dtype=complex)
    sin_term = 1j * math.sin(theta) / theta
    d_plus = P - theta
    d_minus = P + theta
    near_p = np.abs(d_plus) < 0.5 * theta
    near_m = np.logical_and(np.abs(d_minus) < 0.5 * theta, ~near_p)
    direct = ~(near_p | near_m)
    if np.any(near_p):
        eps = d_plus[near_p]
        out[near_p] = -(
            np.exp(1j * theta) * _expm1_over(eps) - sin_term
        ) / (2.0 * theta + eps)
    if np.any(near_m):
        eps = d_minus[near_m]
        out[near_m] = (
            np.exp(-1j * theta) * _expm1_over(eps) - sin_term
        ) / (2.0 * theta - eps)
    if np.any(direct):
        p = P[direct]
        out[direct] = (
            np.exp(1j * p) - math.cos(theta) - sin_term * p
        ) / ((theta - p) * (theta + p))
    return out


def closed_form_amplitude(omega_k, config: PulseConfig,
                          rep: GaugeRepresentation, omega_0: float,
                          gamma: float):
    """Long-time reduced emission amplitude for general laser detuning.

    Lorentzian tail 1/(i delta_k + Gamma/2) plus the pulse-window term,
    whose removable singularity on (Omega u_l)^2 + 4 delta_k delta_kl = 0
    is handled exactly.  Only the detuning of ``omega_k`` enters here;
    frequency positivity is enforced where mode couplings are attached.
    """
    if gamma <= 0.0:
        raise DomainError("gamma must be positive")
    omega_k = np.asarray(omega_k, dtype=float)
    delta_k = omega_0 - omega_k
    u_l = laser_coupling_pair(config, rep, omega_0)[1]
    delta_l = omega_0 - config.omega_l
    mu = math.hypot(config.rabi * u_l, delta_l)
    T = config.duration

    tail = 1.0 / (1j * delta_k + 0.5 * gamma)
    theta = 0.5 * mu * T
    P = 0.5 * (2.0 * delta_k - delta_l) * T
    pulse = (
        -1j
        * 2.0
        * config.rabi
        * u_l
        * np.exp(-0.5j * delta_l * T)
        * (T**2 / 4.0)
        * _reduced_kernel(P, theta)
    )
    out = tail + pulse
    return out if out.ndim else complex(out)


def resonant_amplitude(omega_k, rabi: float, omega_0: float, gamma: float):
    """Reduced emission amplitude for a resonant pi-pulse, evaluated from
    its simplified form (an independent route to
    :func:`closed_form_amplitude` at zero laser detuning).

    Pulse term: 2 (Omega e^{i pi delta_k / Omega} - 2 i delta_k)
    / (Omega^2 - 4 delta_k^2), with exact handling of delta_k = +/- Omega/2.
    """
    if gamma <= 0.0 or rabi <= 0.0:
        raise DomainError("gamma and rabi must be positive")
    omega_k = np.asarray(omega_k, dtype=float)
    delta_k = omega_0 - omega_k

    tail = 1.0 / (1j * delta_k + 0.5 * gamma)
    term = np.empty(delta_k.shape, dtype=complex)
    d_plus = delta_k - 0.5 * rabi
    d_minus = delta_k + 0.5 * rabi
    near_p = np.abs(d_plus) < 0.25 * rabi
    near_m = np.logical_and(np.abs(d_minus) < 0.25 * rabi, ~near_p)
    direct = ~(near_p | near_m)
    if np.any(near_p):
        d = d_plus[near_p]
        term[near_p] = -(
            1j * math.pi * _expm1_over(math.pi * d / rabi) - 2j
        ) / (2.0 * (rabi + d))
    if np.any(near_m):
        d = d_minus[near_m]
        term[near_m] = (
            -1j * math.pi * _expm1_over(math.pi * d / rabi) - 2j
        ) / (2.0 * (rabi - d))
    if np.any(direct):
        d = delta_k[direct]
        term[direct] = (
            2.0 * (rabi * np.exp(1j * math.pi * d / rabi) - 2j * d)
            / (rabi**2 - 4.0 * d**2)
        )
    out = tail + (-1j) * term
    return out if out.ndim else complex(out)


# -- integrated dynamics -----------------------------------------------------


@dataclass(frozen=True)
class AmplitudeState:
    """Snapshot of the amplitudes; mode amplitudes are reduced (the per-mode
    coupling prefactor is factored out)."""

    b_g0: complex
    b_e0: complex
    b_gk: dict[float, complex] = field(default_factory=dict)


@dataclass
class PulseTrajectory:
    """Sampled amplitudes over the pulse window plus long-time mode output."""

    times: np.ndarray
    b_g: np.ndarray
    b_e: np.ndarray
    mode_grid: np.ndarray
    beta_pulse_end: np.ndarray
    beta_final: np.ndarray
    rwa: bool
    include_field_during_pulse: bool
    post_times: np.ndarray | None = None
    post_b_e: np.ndarray | None = None

    def final_state(self) -> AmplitudeState:
        return AmplitudeState(
            b_g0=complex(self.b_g[-1]),
            b_e0=complex(self.b_e[-1]),
            b_gk={float(w): complex(b)
                  for w, b in zip(self.mode_grid, self.beta_final)},
        )

    def to_csv(self, path) -> None:
        """Dump the atomic amplitudes: t,re_bg0,im_bg0,re_be0,im_be0."""
        rows = ["t,re_bg0,im_bg0,re_be0,im_be0"]
        for t, g, e in zip(self.times, self.b_g, self.b_e):
            rows.append(
                ",".join(
                    f"{v:.17g}" for v in (t, g.real, g.imag, e.real, e.imag)
                )
            )
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(rows) + "\n")
        os.replace(tmp, path)


def rk4_fixed(rhs, y0: np.ndarray, t0: float, t1: float, steps: int) -> np.ndarray:
    """Classical fixed-step RK4; regression cross-check for the adaptive path."""
    y = np.array(y0, dtype=complex)
    h = (t1 - t0) / steps
    t = t0
    for _ in range(steps):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return y


def _mode_weights(mode_grid: np.ndarray, rep, omega_0: float,
                  gamma: float) -> np.ndarray:
    """|G_j|^2 for discretized modes: (Gamma/2pi) numerator(w_j) dw_j."""
    if np.any(mode_grid <= 0.0):
        raise DomainError("field back-reaction needs a positive mode grid")
    dw = np.gradient(mode_grid)
    num = np.asarray(numerator(rep, mode_grid, omega_0))
    return gamma / (2.0 * math.pi) * num * dw


def integrate_dynamics(
    config: PulseConfig,
    rep: GaugeRepresentation,
    omega_0: float,
    gamma: float,
    mode_grid=(),
    *,
    rwa: bool = True,
    include_field_during_pulse: bool = False,
    samples: int = 401,
    rtol: float = 1e-11,
    atol: float = 1e-13,
    post_horizon: float | None = None,
) -> PulseTrajectory:
    """Integrate the coupled amplitude equations through the pulse window.

    Default behaviour matches the closed forms: the field does not react
    back on the atom during the pulse, and for t >= 0 the excited state
    follows the exponential-decay ansatz, so each reduced mode amplitude
    picks up the analytic Lorentzian tail.  With
    ``include_field_during_pulse`` the discretized modes are retained in
    the atom equations during the pulse and the decay is integrated
    explicitly afterwards (a beyond-closed-form check).

    Modes enter only through their detunings unless back-reaction is on.
    """
    if gamma <= 0.0 or omega_0 <= 0.0:
        raise DomainError("gamma and omega_0 must be positive")
    mode_grid = np.asarray(mode_grid, dtype=float)
    delta_modes = omega_0 - mode_grid
    u_plus, u_minus = laser_coupling_pair(config, rep, omega_0)
    delta_l = omega_0 - config.omega_l
    env = config.envelope
    nmodes = len(mode_grid)
    weights = (
        _mode_weights(mode_grid, rep, omega_0, gamma)
        if include_field_during_pulse and nmodes
        else np.zeros(nmodes)
    )

    def rhs(t, y):
        b_g, b_e = y[0], y[1]
        amp = env.amplitude(t)
        dy = np.zeros_like(y)
        if amp != 0.0:
            if rwa:
                drive = 0.5 * amp * u_minus * np.exp(1j * delta_l * t)
                dy[0] = -1j * np.conj(drive) * b_e
                dy[1] = -1j * drive * b_g
            else:
                phase_l = np.exp(1j * config.omega_l * t)
                phase_0 = np.exp(1j * omega_0 * t)
                up = 0.5 * amp * (u_plus * phase_l + u_minus / phase_l) * phase_0
                dy[0] = -1j * np.conj(up) * b_e
                dy[1] = -1j * up * b_g
        if nmodes:
            osc = np.exp(-1j * delta_modes * t)
            dy[2:] = osc * b_e
            if include_field_during_pulse:
                dy[1] += -np.sum(weights * y[2:] / osc)
        return dy

    y0 = np.zeros(2 + nmodes, dtype=complex)
    y0[0] = 1.0
    t_eval = np.linspace(env.start, env.end, samples)
    sol = solve_ivp(
        rhs, (env.start, env.end), y0, method="DOP853",
        t_eval=t_eval, rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise ConfigurationError(f"integrator failed: {sol.message}")

    beta_end = sol.y[2:, -1] if nmodes else np.zeros(0, dtype=complex)
    post_times = post_b_e = None
    if include_field_during_pulse and nmodes:
        horizon = post_horizon if post_horizon is not None else 8.0 / gamma
        post_eval = np.linspace(0.0, horizon, samples)
        post = solve_ivp(
            rhs, (0.0, horizon), sol.y[:, -1], method="DOP853",
            t_eval=post_eval, rtol=rtol, atol=atol,
        )
        if not post.success:
            raise ConfigurationError(f"integrator failed: {post.message}")
        beta_final = post.y[2:, -1]
        post_times, post_b_e = post.t, post.y[1]
    else:
        # Exponential-decay continuation for t >= 0, integrated analytically.
        beta_final = beta_end + 1.0 / (1j * delta_modes + 0.5 * gamma)

    return PulseTrajectory(
        times=sol.t,
        b_g=sol.y[0],
        b_e=sol.y[1],
        mode_grid=mode_grid,
        beta_pulse_end=beta_end,
        beta_final=beta_final,
        rwa=rwa,
        include_field_during_pulse=include_field_during_pulse,
        post_times=post_times,
        post_b_e=post_b_e,
    )


# -- spectra -----------------------------------------------------------------


def pulse_spectrum(
    config: PulseConfig,
    rep: GaugeRepresentation,
    omega_0: float,
    gamma: float,
    grid,
    *,
    include_laser: bool = True,
) -> Spectrum:
    """Emission spectrum after the pulse.

    S(w) = numerator(rep, w, omega_0) * (Gamma/2pi) * |beta(w)|^2 with beta
    the reduced amplitude.  With ``include_laser=False`` the pulse-window
    term is dropped and the spectrum reduces, bit for bit, to the plain
    emission lineshape.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0.0):
        raise DomainError("spectrum grid must be positive")
    num = np.asarray(numerator(rep, grid, omega_0))
    delta_l = omega_0 - config.omega_l
    if include_laser:
        beta = closed_form_amplitude(grid, config, rep, omega_0, gamma)
        values = num * (gamma / (2.0 * math.pi)) * np.abs(beta) ** 2
    else:
        values = num * lorentzian_density(grid - omega_0, gamma)
    meta = {
        "representation": rep.name,
        "gamma": gamma,
        "omega_eg": omega_0,
        "lamb_shift": 0.0,
        "cutoff": DEFAULT_CUTOFF,
        "rabi": config.rabi,
        "delta_l": delta_l,
        "include_laser": include_laser,
        "kind": "pulse",
    }
    if _zero_locus_on_grid(config, rep, omega_0, grid):
        meta["denominator_zero_on_grid"] = True
    return Spectrum(grid=grid, values=values, metadata=meta)


def _zero_locus_on_grid(config, rep, omega_0, grid) -> bool:
    """Whether (Omega u_l)^2 + 4 delta_k delta_kl changes sign on the grid
    (the removable-singularity locus crosses the requested frequencies)."""
    delta_k = omega_0 - np.asarray(grid, dtype=float)
    u_l = laser_coupling_pair(config, rep, omega_0)[1]
    delta_l = omega_0 - config.omega_l
    D = (config.rabi * u_l) ** 2 + 4.0 * delta_k * (delta_l - delta_k)
    return bool(np.any(D <= 0.0))


def lorentzian_reference_spectrum(omega_0: float, gamma: float, grid) -> Spectrum:
    """Bare Lorentzian (Gamma/2pi)/(delta_k^2 + Gamma^2/4) as a reference curve."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0.0):
        raise DomainError("spectrum grid must be positive")
    values = lorentzian_density(grid - omega_0, gamma)
    meta = {
        "representation": "lorentzian",
        "gamma": gamma,
        "omega_eg": omega_0,
        "lamb_shift": 0.0,
        "cutoff": DEFAULT_CUTOFF,
        "kind": "reference",
    }
    return Spectrum(grid=grid, values=values, metadata=meta)


def detuning_sensitivity_scan(
    config_base: PulseConfig,
    rep_list,
    delta_l_list,
    grid,
    omega_0: float = 1.0,
    gamma: float = 0.1,
) -> list[dict]:
    """Quantify how weakly the spectrum depends on the laser detuning.

    For each representation and each detuning, reports the maximum
    pointwise relative deviation from that representation's zero-detuning
    spectrum.  Characterization output: no thresholds are enforced here.
    """
    rows = []
    for rep in rep_list:
        base_cfg = PulseConfig(rabi=config_base.rabi, omega_l=omega_0,
                               alpha_laser=config_base.alpha_laser)
        base = pulse_spectrum(base_cfg, rep, omega_0, gamma, grid)
        for delta_l in delta_l_list:
            cfg = PulseConfig(rabi=config_base.rabi, omega_l=omega_0 - delta_l,
                              alpha_laser=config_base.alpha_laser)
            spec = pulse_spectrum(cfg, rep, omega_0, gamma, grid)
            dev = np.max(np.abs(spec.values - base.values) / base.values)
            rows.append(
                {
                    "representation": rep.name,
                    "delta_l": float(delta_l),
                    "max_rel_deviation": float(dev),
                }
            )
    return rows
