"""Gauge-family spontaneous-emission lineshapes and driven-atom spectra.

Natural units (hbar = c = epsilon_0 = 1); frequencies in units of a
reference transition frequency unless stated otherwise.
"""

__version__ = "0.1.0"

from .atoms import (  # noqa: F401
    AtomModel,
    Level,
    build_oscillator,
    build_two_level,
    load_atom_model,
    trk_sum,
)
from .errors import (  # noqa: F401
    ConfigurationError,
    DomainError,
    ScenarioError,
    VerificationFailure,
)
from .fluorescence import (  # noqa: F401
    LambLineScenario,
    SharpLineScenario,
    damped_rate_general,
    fluorescence_rate,
    fluorescence_sweep,
    lamb_hydrogen_preset,
    lamb_n_factor,
    lamb_rate,
    lamb_rate_sweep,
    n_factor,
)
from .pulse import (  # noqa: F401
    AmplitudeState,
    DetuningSet,
    Envelope,
    PulseConfig,
    PulseTrajectory,
    closed_form_amplitude,
    detuning_sensitivity_scan,
    excited_amplitude_during_pulse,
    integrate_dynamics,
    lorentzian_reference_spectrum,
    pulse_spectrum,
    rectangular_envelope,
    resonant_amplitude,
)
from .representations import (  # noqa: F401
    COULOMB,
    POINCARE,
    SYMMETRIC,
    CouplingPair,
    GaugeRepresentation,
    alpha_k,
    coupling_pair,
)
from .spectra import (  # noqa: F401
    DEFAULT_CUTOFF,
    LineshapeParams,
    Spectrum,
    delta_offshell,
    gamma_offshell,
    gamma_onshell,
    lamb_shift,
    lineshape_S,
    numerator,
    numerator_from_first_principles,
    read_spectrum_csv,
    total_shift,
    total_shift_integrand,
    write_spectrum_csv,
)
from .verify import (  # noqa: F401
    REQUIRED_CHECKS,
    CheckResult,
    VerificationReport,
    missing_checks,
    run_all_checks,
)
