"""Atomic level models: energies and dipole matrix elements.

An :class:`AtomModel` stores level energies and a Hermitian map of dipole
matrix elements (complex 3-vectors).  Position and momentum elements are
always derived from the dipoles,

    r_nm = -d_nm / e,        p_nm = i m omega_nm r_nm,

never stored independently, so the position/momentum relation used by the
gauge-invariance checks holds by construction.

Two builders are provided: a two-level atom (the workhorse of the emission
and pulse calculations) and a harmonic ladder whose interior states satisfy
the Thomas-Reiche-Kuhn sum rule exactly, which is what makes the Coulomb-
and Poincare-route level shifts coincide mode by mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import ConfigurationError, DomainError, ScenarioError

__all__ = [
    "Level",
    "AtomModel",
    "build_two_level",
    "build_oscillator",
    "trk_sum",
    "load_atom_model",
]

Vec3 = np.ndarray


class Level(NamedTuple):
    label: str
    energy: float


class Transition(NamedTuple):
    """A dipole-connected partner level, seen from some reference state."""

    label: str
    omega: float  # energy(label) - energy(reference)
    dipole: Vec3  # d_{label,reference}


def _as_vec3(value) -> Vec3:
    vec = np.asarray(value, dtype=complex)
    if vec.shape != (3,):
        raise DomainError(f"dipole element must be a 3-vector, got shape {vec.shape}")
    if not np.all(np.isfinite(vec.view(float))):
        raise DomainError("dipole element must be finite")
    vec.setflags(write=False)
    return vec


@dataclass(frozen=True)
class AtomModel:
    """Immutable level scheme with Hermitian dipole couplings.

    ``levels`` must be ordered by strictly increasing energy.  ``dipoles``
    maps ordered label pairs (n, m) to d_nm; missing Hermitian partners
    are filled in automatically.
    """

    levels: tuple[Level, ...]
    dipoles: dict[tuple[str, str], Vec3]
    mass: float = 1.0
    charge: float = 1.0

    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.mass <= 0 or self.charge <= 0:
            raise DomainError("mass and charge must be positive")
        labels = [lv.label for lv in self.levels]
        if len(set(labels)) != len(labels):
            raise DomainError("level labels must be unique")
        energies = [lv.energy for lv in self.levels]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise DomainError("level energies must be strictly increasing")

        full: dict[tuple[str, str], Vec3] = {}
        for (n, m), value in self.dipoles.items():
            if n not in labels or m not in labels:
                raise DomainError(f"dipole element references unknown level ({n},{m})")
            if n == m:
                raise DomainError("dipole elements must connect distinct levels")
            vec = _as_vec3(value)
            for key, val in (((n, m), vec), ((m, n), _as_vec3(np.conj(vec)))):
                if key in full and not np.allclose(full[key], val, rtol=0, atol=1e-14):
                    raise DomainError(
                        f"dipole map is not Hermitian at ({key[0]},{key[1]})"
                    )
                full[key] = val
        object.__setattr__(self, "dipoles", full)
        object.__setattr__(self, "_index", {lb: i for i, lb in enumerate(labels)})

    # -- lookups ---------------------------------------------------------

    def labels(self) -> tuple[str, ...]:
        return tuple(lv.label for lv in self.levels)

    def _require(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DomainError(f"unknown level label {label!r}") from None

    def energy(self, label: str) -> float:
        return self.levels[self._require(label)].energy

    def omega(self, n: str, m: str) -> float:
        """Transition frequency omega_nm = omega_n - omega_m (antisymmetric)."""
        return self.energy(n) - self.energy(m)

    def dipole(self, n: str, m: str) -> Vec3:
        """d_nm; zero vector when the pair is not dipole-connected."""
        self._require(n), self._require(m)
        return self.dipoles.get((n, m), np.zeros(3, dtype=complex))

    def position(self, n: str, m: str) -> Vec3:
        return -self.dipole(n, m) / self.charge

    def momentum(self, n: str, m: str) -> Vec3:
        return 1j * self.mass * self.omega(n, m) * self.position(n, m)

    def transitions_from(self, state: str) -> Iterator[Transition]:
        """All dipole-connected partners of ``state``."""
        self._require(state)
        for (n, m), vec in sorted(self.dipoles.items()):
            if m == state:
                yield Transition(n, self.omega(n, state), vec)

    @property
    def top(self) -> str:
        """Label of the highest-energy level."""
        return self.levels[-1].label


def build_two_level(
    omega_eg: float, d_eg: float, *, mass: float = 1.0, charge: float = 1.0,
    axis=(0.0, 0.0, 1.0),
) -> AtomModel:
    """Two levels ``g`` (energy 0) and ``e`` (energy omega_eg).

    ``d_eg`` is the real dipole magnitude along ``axis``; polarization
    geometry is handled downstream by angular factors.
    """
    if not np.isfinite(omega_eg) or omega_eg <= 0:
        raise DomainError("transition frequency must be positive")
    if d_eg < 0:
        raise DomainError("dipole magnitude must be non-negative")
    axis = _unit_axis(axis)
    dipoles = {}
    if d_eg > 0:
        dipoles[("e", "g")] = d_eg * axis.astype(complex)
    return AtomModel(
        levels=(Level("g", 0.0), Level("e", float(omega_eg))),
        dipoles=dipoles,
        mass=mass,
        charge=charge,
    )


def build_oscillator(
    omega: float, mass: float, n_levels: int, *, charge: float = 1.0,
    axis=(0.0, 0.0, 1.0),
) -> AtomModel:
    """Harmonic ladder: omega_n = n omega, x_{n,n+1} = sqrt((n+1)/(2 m omega)).

    Levels are labelled "0", "1", ....  Only nearest neighbours are
    dipole-connected (selection rule).  Interior states of this model
    saturate the TRK sum rule along ``axis``: trk_sum == 1/(2 mass).
    """
    if n_levels < 3:
        raise ConfigurationError("an oscillator ladder needs at least 3 levels")
    if omega <= 0 or mass <= 0:
        raise DomainError("oscillator frequency and mass must be positive")
    axis = _unit_axis(axis)
    levels = tuple(Level(str(n), n * float(omega)) for n in range(n_levels))
    dipoles = {}
    for n in range(n_levels - 1):
        x = np.sqrt((n + 1) / (2.0 * mass * omega))
        # d = -e x; the sign is irrelevant to every |d|^2 sum downstream.
        dipoles[(str(n + 1), str(n))] = -charge * x * axis.astype(complex)
    return AtomModel(levels=levels, dipoles=dipoles, mass=mass, charge=charge)


def _unit_axis(axis) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if axis.shape != (3,) or norm == 0:
        raise DomainError("axis must be a non-zero 3-vector")
    return axis / norm


def trk_sum(model: AtomModel, state: str, axis=(0.0, 0.0, 1.0)) -> float:
    """Oscillator-strength sum  sum_n omega_ns |r_ns . axis|^2.

    Equals 1/(2 mass) when the model saturates the sum rule along ``axis``;
    that is exactly the condition under which the Coulomb- and Poincare-route
    total level shifts coincide.  A two-level model gives the negative value
    -omega_eg |r_eg . axis|^2 from its single downward term, which is why
    two-level shift invariance fails.
    """
    axis = _unit_axis(axis)
    total = 0.0
    for tr in model.transitions_from(state):
        r = -tr.dipole / model.charge
        total += tr.omega * float(np.abs(np.dot(r, axis)) ** 2)
    return total


# -- file loading --------------------------------------------------------
#
# Plain text, one statement per line:
#
#   mass: 1.0
#   charge: 1.0
#   level: g 0.0
#   level: e 1.0
#   dipole: e g 0 0 1            # real 3-vector
#   dipole: e g 0 0 1  0 0 0.5   # re / im 3-vectors
#
# '#' starts a comment; unknown keys are rejected.


def load_atom_model(path) -> AtomModel:
    """Read an :class:`AtomModel` from the structured text format above."""
    levels: list[Level] = []
    dipoles: dict[tuple[str, str], Vec3] = {}
    mass = 1.0
    charge = 1.0
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise ScenarioError("expected 'key: value'", lineno)
            key, value = (part.strip() for part in line.split(":", 1))
            if key == "mass":
                mass = _parse_float(value, lineno)
            elif key == "charge":
                charge = _parse_float(value, lineno)
            elif key == "level":
                parts = value.split()
                if len(parts) != 2:
                    raise ScenarioError("level takes 'label energy'", lineno)
                levels.append(Level(parts[0], _parse_float(parts[1], lineno)))
            elif key == "dipole":
                parts = value.split()
                if len(parts) not in (5, 8):
                    raise ScenarioError(
                        "dipole takes 'n m re re re [im im im]'", lineno
                    )
                n, m = parts[0], parts[1]
                comps = [_parse_float(p, lineno) for p in parts[2:]]
                re = np.array(comps[:3])
                im = np.array(comps[3:6]) if len(comps) == 6 else np.zeros(3)
                dipoles[(n, m)] = re + 1j * im
            else:
                raise ScenarioError(f"unknown key {key!r}", lineno)
    levels.sort(key=lambda lv: lv.energy)
    try:
        return AtomModel(tuple(levels), dipoles, mass=mass, charge=charge)
    except DomainError as exc:
        raise ScenarioError(str(exc)) from exc


def _parse_float(text: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ScenarioError(f"bad number {text!r}", lineno) from None
