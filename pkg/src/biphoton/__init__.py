"""Single-mode biphoton qutrits: Fock-space engine, Poincare-sphere
factorization and the tuned Braun-Twiss orthogonality test."""

from .braun_twiss import (
    CoincidenceResult,
    DetectorTuning,
    coincidence_probability,
    orthogonality_test,
    pairing_probability,
    singles_intensity,
    split,
    visibility_scan,
)
from .errors import (
    AllArmsDark,
    BiphotonError,
    ConfigError,
    CutoffExceeded,
    DimensionMismatch,
    NormalizationError,
    UnknownName,
    ZeroState,
)
from .montecarlo import CountRecord, ExperimentConfig, reproduce_table, run
from .qutrit import (
    MODES,
    BiphotonState,
    PoincarePair,
    PolarizationMode,
    degree_of_polarization,
    from_modes,
    is_orthogonal,
    mean_stokes,
    overlap,
    random_state,
    standard_state,
    to_modes,
)
from .source import SourceConfig, emit, settings_for

__version__ = "0.1.0"
