"""Monte Carlo photon counting for the tuned Braun-Twiss setup.

Pairs arrive as a Poisson stream. Per pair, the joint click pattern of the
two (non-number-resolving) detectors is drawn from a four-way categorical:
both click (true coincidence), only detector 1, only detector 2, neither.
The marginal click probabilities come from the exact two-photon state
behind each filter; the joint one is the selected coincidence observable
times both efficiencies. Dark counts add to the singles and accidental
coincidences are an independent Poisson stream at rate ``R1 * R2 * window``.

Default apparatus constants are fitted, not measured: the pair rate and
efficiencies put the matched HV row at 4.0 counts/s including the
accidental floor, and dark rates plus window put that floor near 0.3/s.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from . import fock
from .braun_twiss import ARM_MODES, DetectorTuning, coincidence_probability, split
from .errors import ConfigError
from .fock import ModeMap
from .qutrit import BiphotonState, degree_of_polarization, named_mode, standard_state


# per-pair probabilities below this are rounding residue of an exact zero
ORTHOGONAL_FLOOR = 1e-20


class Observable(str, enum.Enum):
    OVERLAP2 = "overlap2"
    EXACT = "exact"


@dataclass(frozen=True)
class ExperimentConfig:
    pair_rate: float = 1480.0
    integration_time: float = 100.0
    efficiency1: float = 0.1
    efficiency2: float = 0.1
    dark_rate1: float = 2000.0
    dark_rate2: float = 2000.0
    coincidence_window: float = 7.0e-8
    observable: Observable = Observable.OVERLAP2
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "observable", Observable(self.observable))
        for name in ("pair_rate", "integration_time", "dark_rate1", "dark_rate2",
                     "coincidence_window"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        for name in ("efficiency1", "efficiency2"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f.name: f for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"unknown montecarlo key {key!r}")
        kwargs = {}
        for key, value in data.items():
            if key == "observable":
                try:
                    kwargs[key] = Observable(value)
                except ValueError:
                    raise ConfigError(f"observable must be overlap2 or exact, got {value!r}") from None
            elif key == "seed":
                kwargs[key] = int(value)
            else:
                kwargs[key] = float(value)
        return cls(**kwargs)


@dataclass(frozen=True)
class CountRecord:
    singles1: int
    singles2: int
    coincidences: int
    true_coincidences: int
    accidental_estimate: float
    duration: float

    def __add__(self, other: CountRecord) -> CountRecord:
        return CountRecord(
            self.singles1 + other.singles1,
            self.singles2 + other.singles2,
            self.coincidences + other.coincidences,
            self.true_coincidences + other.true_coincidences,
            self.accidental_estimate + other.accidental_estimate,
            self.duration + other.duration,
        )

    @property
    def rate(self) -> float:
        return self.coincidences / self.duration if self.duration else 0.0

    @property
    def stderr(self) -> float:
        return math.sqrt(self.coincidences) / self.duration if self.duration else 0.0


def accidental_rate(singles1_rate: float, singles2_rate: float, window: float) -> float:
    """Uncorrelated-coincidence rate ``R1 * R2 * window``."""
    if min(singles1_rate, singles2_rate, window) < 0:
        raise ValueError("rates and window must be non-negative")
    return singles1_rate * singles2_rate * window


def filtered_counts(state: BiphotonState, tuning: DetectorTuning) -> dict[tuple[int, int], float]:
    """Joint distribution of photon numbers passing the arm-1 and arm-2 filters."""
    # rotate each arm's polarization basis so the filter mode is the first of the pair
    m = np.zeros((4, 4), dtype=complex)
    for arm in (1, 2):
        mode = tuning.mode(arm)
        frame = np.column_stack([mode.jones(), mode.orthogonal().jones()])
        h, v = ARM_MODES[arm]
        m[np.ix_([h, v], [h, v])] = frame.conj().T
    rotated = fock.apply_mode_map(split(state), ModeMap(m))
    dist: dict[tuple[int, int], float] = {}
    for occ, amp in rotated:
        key = (occ[0], occ[2])
        dist[key] = dist.get(key, 0.0) + abs(amp) ** 2
    return dist


def pair_probabilities(state: BiphotonState, tuning: DetectorTuning,
                       config: ExperimentConfig) -> np.ndarray:
    """Per-pair probabilities of (both, only 1, only 2, neither) clicking."""
    result = coincidence_probability(state, tuning)
    if config.observable is Observable.EXACT:
        p_cc = result.exact_probability
    else:
        # a quarter of pairs split one-per-arm onto matched filters
        p_cc = result.overlap_squared / 4
    if p_cc < ORTHOGONAL_FLOOR:
        p_cc = 0.0
    eta1, eta2 = config.efficiency1, config.efficiency2
    dist = filtered_counts(state, tuning)
    q1 = sum(p * (1 - (1 - eta1) ** n1) for (n1, _), p in dist.items())
    q2 = sum(p * (1 - (1 - eta2) ** n2) for (_, n2), p in dist.items())
    both = p_cc * eta1 * eta2
    probs = np.array([both, q1 - both, q2 - both, 1 - q1 - q2 + both])
    return np.clip(probs, 0.0, None) / np.clip(probs, 0.0, None).sum()


def expected_rates(state: BiphotonState, tuning: DetectorTuning,
                   config: ExperimentConfig) -> dict[str, float]:
    both, only1, only2, _ = pair_probabilities(state, tuning, config)
    r1 = config.pair_rate * (both + only1) + config.dark_rate1
    r2 = config.pair_rate * (both + only2) + config.dark_rate2
    true = config.pair_rate * both
    acc = accidental_rate(r1, r2, config.coincidence_window)
    return {"singles1": r1, "singles2": r2, "true": true, "accidental": acc,
            "coincidence": true + acc}


def run(state: BiphotonState, tuning: DetectorTuning, config: ExperimentConfig) -> CountRecord:
    """Simulate one integration period; deterministic in ``config.seed``."""
    rng = np.random.default_rng(config.seed)
    T = config.integration_time
    probs = pair_probabilities(state, tuning, config)
    n_pairs = rng.poisson(config.pair_rate * T)
    both, only1, only2, _ = rng.multinomial(n_pairs, probs)
    dark1 = rng.poisson(config.dark_rate1 * T)
    dark2 = rng.poisson(config.dark_rate2 * T)
    rates = expected_rates(state, tuning, config)
    accidentals = rng.poisson(rates["accidental"] * T)
    singles1 = int(both + only1 + dark1)
    singles2 = int(both + only2 + dark2)
    estimate = (accidental_rate(singles1 / T, singles2 / T, config.coincidence_window) * T
                if T > 0 else 0.0)
    return CountRecord(singles1, singles2, int(both + accidentals), int(both), estimate, T)


def run_seeds(state: BiphotonState, tuning: DetectorTuning, config: ExperimentConfig,
              n_seeds: int) -> CountRecord:
    """Sum of ``n_seeds`` runs with seeds ``config.seed, config.seed + 1, ...``."""
    total = None
    for k in range(n_seeds):
        rec = run(state, tuning, replace(config, seed=config.seed + k))
        total = rec if total is None else total + rec
    return total


def _tuning(a: str, b: str) -> DetectorTuning:
    return DetectorTuning(named_mode(a), named_mode(b))


# (input state, detector tuning) in the published table order
TABLE_ROWS: list[tuple[str, tuple[str, str]]] = [
    ("HV", ("H", "V")),
    ("RL", ("H", "V")),
    ("DDb", ("H", "V")),
    ("HV", ("D", "Db")),
    ("DDb", ("D", "Db")),
    ("HV", ("H", "H")),
    ("DDb", ("H", "H")),
]


ROW_SEED_STRIDE = 1000


@dataclass(frozen=True)
class TableRow:
    input: str
    detected: str
    p_in: float
    p_det: float
    rate: float
    stderr: float


def table_cases() -> list[tuple[str, str, BiphotonState, DetectorTuning]]:
    return [(name, a + b, standard_state(name), _tuning(a, b)) for name, (a, b) in TABLE_ROWS]


def reproduce_table(config: ExperimentConfig = ExperimentConfig(), n_seeds: int = 1) -> list[TableRow]:
    """Simulated coincidence rates for the seven published (input, tuning) rows.

    Each row pools ``n_seeds`` runs, row ``i`` starting at seed
    ``config.seed + ROW_SEED_STRIDE * i``; the error is the Poisson standard error
    of the pooled count.
    """
    rows = []
    for i, (name, detected, state, tuning) in enumerate(table_cases()):
        # independent streams per row
        rec = run_seeds(state, tuning, replace(config, seed=config.seed + ROW_SEED_STRIDE * i),
                        n_seeds)
        rows.append(TableRow(name, detected, degree_of_polarization(state),
                             degree_of_polarization(tuning.target()), rec.rate, rec.stderr))
    return rows


def ideal_table() -> list[tuple[str, str, float, float, float, float]]:
    """Per-pair probabilities (exact, overlap squared) for the table rows."""
    rows = []
    for name, detected, state, tuning in table_cases():
        res = coincidence_probability(state, tuning)
        rows.append((name, detected, degree_of_polarization(state),
                     degree_of_polarization(tuning.target()),
                     res.exact_probability, res.overlap_squared))
    return rows

