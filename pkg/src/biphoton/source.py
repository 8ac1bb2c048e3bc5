"""Three-arm nonlinear interferometer used to prepare arbitrary qutrits.

Each arm holds a crystal emitting one basis state. In the low-gain regime
the biphoton amplitude is linear in the pump field amplitude, so the arm's
pump amplitude and mirror phase set ``|c_i|`` and ``arg c_i`` directly.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

from .errors import AllArmsDark, ConfigError
from .qutrit import BiphotonState


class BasisState(enum.Enum):
    HH = "20"
    HV = "11"
    VV = "02"

    @property
    def index(self) -> int:
        return list(BasisState).index(self)


@dataclass(frozen=True)
class ArmSetting:
    pump_amplitude: float
    phase: float
    basis_state: BasisState

    def __post_init__(self):
        if self.pump_amplitude < 0:
            raise ConfigError(f"pump amplitude must be non-negative, got {self.pump_amplitude}")
        if not isinstance(self.basis_state, BasisState):
            object.__setattr__(self, "basis_state", BasisState(self.basis_state))


@dataclass(frozen=True)
class SourceConfig:
    arms: tuple[ArmSetting, ArmSetting, ArmSetting]

    def __post_init__(self):
        arms = tuple(self.arms)
        if len(arms) != 3:
            raise ConfigError(f"source needs exactly three arms, got {len(arms)}")
        if sorted(a.basis_state.index for a in arms) != [0, 1, 2]:
            raise ConfigError("each basis state must be produced by exactly one arm")
        object.__setattr__(self, "arms", arms)

    @classmethod
    def from_lists(cls, amplitudes, phases=(0.0, 0.0, 0.0)) -> SourceConfig:
        """Arms in basis order |2,0>, |1,1>, |0,2>."""
        return cls(tuple(ArmSetting(float(a), float(p), b)
                         for a, p, b in zip(amplitudes, phases, BasisState)))


def emit(config: SourceConfig) -> BiphotonState:
    if all(arm.pump_amplitude == 0 for arm in config.arms):
        raise AllArmsDark("every arm has zero pump amplitude")
    c = [0j, 0j, 0j]
    for arm in config.arms:
        c[arm.basis_state.index] = arm.pump_amplitude * cmath.exp(1j * arm.phase)
    return BiphotonState.normalized(*c)


def settings_for(target: BiphotonState) -> SourceConfig:
    """Arm settings whose emission equals ``target`` up to global phase."""
    amps = [abs(c) for c in target.amplitudes]
    phases = [cmath.phase(c) if abs(c) > 0 else 0.0 for c in target.amplitudes]
    return SourceConfig.from_lists(amps, phases)
