"""Braun-Twiss coincidence scheme with polarization filters in both arms.

A biphoton enters a 50/50 nonpolarizing beam splitter. Arm 1 passes only
the polarization mode ``a``, arm 2 only ``b``; the device is then "tuned"
to the biphoton ``Psi_ab``. The coincidence probability vanishes exactly
when the input is orthogonal to ``Psi_ab``.

Fock modes after the splitter are ordered (arm1-H, arm1-V, arm2-H, arm2-V).
The splitter sends ``a_H^dag -> (a_1H^dag + i a_2H^dag)/sqrt2`` and likewise
for V; the unused input port (vacuum) takes the conjugate route so the full
4x4 map is unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import fock
from .fock import FockState, ModeMap
from .qutrit import (
    BiphotonState,
    PolarizationMode,
    from_modes,
    mean_stokes,
    mode_overlap,
    overlap,
    to_modes,
)

ARM_MODES = {1: (0, 1), 2: (2, 3)}

_r = 1 / math.sqrt(2)
SPLITTER = ModeMap(np.array([
    [_r, 0, 1j * _r, 0],
    [0, _r, 0, 1j * _r],
    [1j * _r, 0, _r, 0],
    [0, 1j * _r, 0, _r],
]))


@dataclass(frozen=True)
class DetectorTuning:
    """Filter modes: ``arm1_mode`` (a) in arm 1, ``arm2_mode`` (b) in arm 2."""

    arm1_mode: PolarizationMode
    arm2_mode: PolarizationMode

    def target(self) -> BiphotonState:
        """The biphoton ``Psi_ab`` the device is tuned to."""
        return from_modes(self.arm1_mode, self.arm2_mode)

    def mode(self, arm: int) -> PolarizationMode:
        return self.arm1_mode if arm == 1 else self.arm2_mode


@dataclass(frozen=True)
class CoincidenceResult:
    exact_probability: float
    overlap_squared: float
    same_arm_probability: float
    amplitude: complex


def _embed(state: BiphotonState) -> FockState:
    return FockState(4, 2, {(2, 0, 0, 0): state.c1, (1, 1, 0, 0): state.c2,
                            (0, 2, 0, 0): state.c3})


def split(state: BiphotonState) -> FockState:
    """Four-mode state after the beam splitter."""
    return fock.apply_mode_map(_embed(state), SPLITTER)


def _arm_coefficients(arm: int, mode: PolarizationMode) -> np.ndarray:
    coeffs = np.zeros(4, dtype=complex)
    h, v = ARM_MODES[arm]
    coeffs[h], coeffs[v] = mode.jones()
    return coeffs


def detection_state(tuning: DetectorTuning) -> FockState:
    """``a_1^dag b_2^dag |vac>``: one photon through each filter."""
    ket = fock.vacuum(4, 2)
    ket = fock.create_combination(ket, _arm_coefficients(2, tuning.arm2_mode))
    return fock.create_combination(ket, _arm_coefficients(1, tuning.arm1_mode))


def same_arm(occ) -> bool:
    return occ[0] + occ[1] == 2 or occ[2] + occ[3] == 2


def one_per_arm(occ) -> bool:
    return occ[0] + occ[1] == 1 and occ[2] + occ[3] == 1


def coincidence_probability(state: BiphotonState, tuning: DetectorTuning) -> CoincidenceResult:
    """Exact coincidence probability per incident pair, via the Fock engine."""
    out = split(state)
    amplitude = fock.inner(detection_state(tuning), out)
    return CoincidenceResult(
        exact_probability=abs(amplitude) ** 2,
        overlap_squared=abs(overlap(tuning.target(), state)) ** 2,
        same_arm_probability=fock.outcome_probability(out, same_arm),
        amplitude=amplitude,
    )


def pairing_probability(state: BiphotonState, tuning: DetectorTuning) -> float:
    """Coincidence probability from the single-photon overlaps of a factorization.

    ``|<a|c><b|d> + <a|d><b|c>|^2 / (4 (1 + |<c|d>|^2))`` with (c, d) the
    Majorana modes of ``state``. Independent of the Fock engine.
    """
    c, d = to_modes(state)
    a, b = tuning.arm1_mode, tuning.arm2_mode
    num = mode_overlap(a, c) * mode_overlap(b, d) + mode_overlap(a, d) * mode_overlap(b, c)
    return abs(num) ** 2 / (4 * (1 + abs(mode_overlap(c, d)) ** 2))


def orthogonality_test(state: BiphotonState, tuning: DetectorTuning, tol: float = 1e-10) -> bool:
    """True when the tuned device registers no coincidences."""
    return coincidence_probability(state, tuning).exact_probability < tol * tol


def singles_intensity(state: BiphotonState, arm: int, analyzer: PolarizationMode) -> float:
    """Mean photon number in ``analyzer`` mode of ``arm`` after the splitter."""
    if arm not in ARM_MODES:
        raise ValueError(f"arm must be 1 or 2, got {arm}")
    return _analyzer_number(split(state), arm, analyzer)


def _analyzer_number(out: FockState, arm: int, analyzer: PolarizationMode) -> float:
    lowered = fock.annihilate_combination(out, _arm_coefficients(arm, analyzer).conj())
    return lowered.norm() ** 2


def singles_from_stokes(stokes: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Closed-form singles intensity ``(1 + S.n/2)/2`` for unit vectors ``directions``."""
    return (1 + directions @ stokes / 2) / 2


@dataclass(frozen=True)
class VisibilityScan:
    max: float
    min: float
    visibility: float


def visibility_scan(state: BiphotonState, arm: int = 1) -> VisibilityScan:
    """Extremes of the singles intensity over all analyzer settings.

    The intensity is affine in the analyzer's sphere direction, so the
    extremes sit along plus and minus the mean Stokes vector. Both arms see
    the same pattern.
    """
    if arm not in ARM_MODES:
        raise ValueError(f"arm must be 1 or 2, got {arm}")
    s = float(np.linalg.norm(mean_stokes(state)))
    hi, lo = (1 + s / 2) / 2, (1 - s / 2) / 2
    return VisibilityScan(hi, lo, (hi - lo) / (hi + lo))


def sphere_grid(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid angles (poles included) flattened to 1-D arrays."""
    theta = np.linspace(0, math.pi, n_theta)
    phi = np.linspace(0, 2 * math.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    return tt.ravel(), pp.ravel()


def grid_scan(state: BiphotonState, n_theta: int = 100, n_phi: int = 100) -> np.ndarray:
    """Rows of (theta, phi, intensity) over a sphere grid."""
    theta, phi = sphere_grid(n_theta, n_phi)
    dirs = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], 1)
    return np.column_stack([theta, phi, singles_from_stokes(mean_stokes(state), dirs)])


def numeric_visibility(state: BiphotonState, arm: int = 1,
                       n_theta: int = 100, n_phi: int = 100) -> VisibilityScan:
    """Brute-force extremes of the singles intensity.

    Evaluates the Fock-engine intensity on a sphere grid, then polishes the
    best grid points with Nelder-Mead. Makes no use of the Stokes vector.
    """
    out = split(state)

    def intensity(x) -> float:
        return _analyzer_number(out, arm, PolarizationMode.from_jones(
            [math.cos(x[0] / 2), np.exp(1j * x[1]) * math.sin(x[0] / 2)]))

    theta, phi = sphere_grid(n_theta, n_phi)
    values = np.array([intensity(x) for x in zip(theta, phi)])
    found = []
    for sign, idx in ((-1.0, values.argmax()), (1.0, values.argmin())):
        res = minimize(lambda x: sign * intensity(x), [theta[idx], phi[idx]],
                       method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 2000})
        found.append(sign * res.fun)
    hi = max(found[0], values.max())
    lo = min(found[1], values.min())
    return VisibilityScan(hi, lo, (hi - lo) / (hi + lo))
