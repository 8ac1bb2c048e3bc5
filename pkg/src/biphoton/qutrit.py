"""Single-mode biphoton polarization states (qutrits).

A biphoton is a two-photon state in one spatial mode,

    c1 |2,0> + c2 |1,1> + c3 |0,2>

in the H/V occupation basis. Every such state factorizes, up to
normalization and a global phase, into a product of two creation operators
``a^dag(u) a^dag(v) |vac>``; the polarization modes ``u`` and ``v`` are two
points on the Poincare sphere (the Majorana representation).

Jones conventions used throughout::

    H = (1, 0)            V = (0, 1)
    D = (1, 1)/sqrt2      Db = (1, -1)/sqrt2
    R = (1, i)/sqrt2      L = (1, -i)/sqrt2

and a mode with sphere angles (theta, phi) has Jones vector
``(cos(theta/2), exp(i phi) sin(theta/2))``.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, UnknownName, ZeroState
from .fock import FockState

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
TWO_PI = 2 * math.pi

# below this an amplitude is treated as an exact zero by the factorization
DEGENERATE = 1e-12


def _wrap_phi(phi: float) -> float:
    phi = math.fmod(phi, TWO_PI)
    if phi < 0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi -= TWO_PI
    return phi


@dataclass(frozen=True)
class PolarizationMode:
    """One photon's polarization as a point on the Poincare sphere."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(float(self.theta), 0.0), math.pi))
        object.__setattr__(self, "phi", _wrap_phi(float(self.phi)))

    def jones(self) -> np.ndarray:
        # exact at the poles so H and V stay exactly orthogonal
        if self.theta == 0.0:
            return np.array([1.0 + 0j, 0j])
        if self.theta == math.pi:
            return np.array([0j, cmath.exp(1j * self.phi)])
        half = self.theta / 2
        return np.array([math.cos(half), cmath.exp(1j * self.phi) * math.sin(half)])

    def bloch(self) -> np.ndarray:
        """Unit vector on the Poincare sphere."""
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def orthogonal(self) -> PolarizationMode:
        """The antipodal mode."""
        return PolarizationMode(math.pi - self.theta, self.phi + math.pi)

    def same_as(self, other: PolarizationMode, tol: float = 1e-12) -> bool:
        """Equality up to global phase."""
        return abs(mode_overlap(self, other)) > 1 - tol

    @classmethod
    def from_jones(cls, vector) -> PolarizationMode:
        h, v = complex(vector[0]), complex(vector[1])
        norm = math.hypot(abs(h), abs(v))
        if norm < DEGENERATE:
            raise ZeroState("zero Jones vector")
        h, v = h / norm, v / norm
        theta = 2 * math.atan2(abs(v), abs(h))
        phi = cmath.phase(v) - cmath.phase(h) if abs(v) > 0 and abs(h) > 0 else 0.0
        return cls(theta, phi)

    @classmethod
    def from_ratio(cls, z: complex) -> PolarizationMode:
        """Mode with Jones vector proportional to ``(1, z)``; ``z = inf`` gives V."""
        if cmath.isinf(z):
            return cls(math.pi, 0.0)
        return cls(2 * math.atan(abs(z)), cmath.phase(z) if z != 0 else 0.0)


def mode_overlap(u: PolarizationMode, v: PolarizationMode) -> complex:
    """``<u|v>`` for single-photon Jones vectors."""
    return complex(np.vdot(u.jones(), v.jones()))


MODES: dict[str, PolarizationMode] = {
    "H": PolarizationMode(0.0, 0.0),
    "V": PolarizationMode(math.pi, 0.0),
    "D": PolarizationMode(math.pi / 2, 0.0),
    "Db": PolarizationMode(math.pi / 2, math.pi),
    "R": PolarizationMode(math.pi / 2, math.pi / 2),
    "L": PolarizationMode(math.pi / 2, 3 * math.pi / 2),
}


def named_mode(name: str) -> PolarizationMode:
    key = name.strip()
    aliases = {"Dbar": "Db", "D-": "Db", "A": "Db"}
    key = aliases.get(key, key)
    try:
        return MODES[key]
    except KeyError:
        raise UnknownName(f"unknown polarization mode {name!r}; known: {', '.join(MODES)}") from None


def mode_name(mode: PolarizationMode, tol: float = 1e-9) -> str | None:
    for name, ref in MODES.items():
        if mode.same_as(ref, tol):
            return name
    return None


@dataclass(frozen=True)
class BiphotonState:
    """Normalized amplitudes over ``|2,0>, |1,1>, |0,2>``.

    The global phase is kept as given. Construct with raw amplitudes that
    are already normalized, or use :meth:`normalized`.
    """

    c1: complex
    c2: complex
    c3: complex

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        norm2 = abs(self.c1) ** 2 + abs(self.c2) ** 2 + abs(self.c3) ** 2
        if abs(norm2 - 1) > 1e-9:
            raise NormalizationError(f"amplitudes have squared norm {norm2!r}, expected 1")

    @classmethod
    def normalized(cls, c1: complex, c2: complex, c3: complex) -> BiphotonState:
        norm = math.sqrt(abs(c1) ** 2 + abs(c2) ** 2 + abs(c3) ** 2)
        if norm < DEGENERATE:
            raise ZeroState("all amplitudes vanish")
        return cls(c1 / norm, c2 / norm, c3 / norm)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    def to_fock(self, cutoff: int = 2) -> FockState:
        """Two-mode (H, V) Fock embedding."""
        return FockState(2, cutoff, {(2, 0): self.c1, (1, 1): self.c2, (0, 2): self.c3})

    def phase_shifted(self, phase: float) -> BiphotonState:
        f = cmath.exp(1j * phase)
        return BiphotonState(f * self.c1, f * self.c2, f * self.c3)


@dataclass(frozen=True)
class PoincarePair:
    """Unordered pair of modes plus the global phase of the factorization.

    ``from_modes(first, second)`` times ``exp(i*global_phase)`` is the state
    the pair was extracted from.
    """

    first: PolarizationMode
    second: PolarizationMode
    global_phase: float = 0.0

    def __post_init__(self):
        a, b = self.first, self.second
        if (b.theta, b.phi) < (a.theta, a.phi):
            object.__setattr__(self, "first", b)
            object.__setattr__(self, "second", a)

    def __iter__(self):
        return iter((self.first, self.second))

    def overlap_magnitude(self) -> float:
        return abs(mode_overlap(self.first, self.second))

    def angle(self) -> float:
        """Angle between the two points as seen from the sphere center."""
        return 2 * math.acos(min(1.0, self.overlap_magnitude()))

    def state(self) -> BiphotonState:
        return from_modes(self.first, self.second).phase_shifted(self.global_phase)


def from_modes(u: PolarizationMode, v: PolarizationMode) -> BiphotonState:
    """Normalized ``a^dag(u) a^dag(v)|vac>``."""
    uh, uv = u.jones()
    vh, vv = v.jones()
    norm = math.sqrt(1 + abs(mode_overlap(u, v)) ** 2)
    # products grouped so swapping u and v is bit-for-bit symmetric
    return BiphotonState.normalized(
        SQRT2 * (uh * vh) / norm, (uh * vv + uv * vh) / norm, SQRT2 * (uv * vv) / norm)


def majorana_roots(state: BiphotonState) -> tuple[complex, complex]:
    """Roots of ``(c1/sqrt2) z^2 - c2 z + c3/sqrt2`` with ``z = e^{i phi} tan(theta/2)``.

    A vanishing leading coefficient contributes a root at infinity.
    """
    a, b, c = state.c1 / SQRT2, -state.c2, state.c3 / SQRT2
    if abs(state.c1) < DEGENERATE:
        if abs(state.c2) < DEGENERATE:
            return complex("inf"), complex("inf")
        return -c / b, complex("inf")
    disc = cmath.sqrt(b * b - 4 * a * c)
    # pick the sign that avoids cancellation
    if (b.conjugate() * disc).real < 0:
        disc = -disc
    q = -(b + disc) / 2
    if q == 0:
        return 0j, 0j
    return q / a, c / q


def to_modes(state: BiphotonState, diagnose: bool = False) -> PoincarePair:
    """Factorize a biphoton into its pair of Poincare-sphere modes."""
    norm = float(np.linalg.norm(state.amplitudes))
    if norm < DEGENERATE:
        raise ZeroState("cannot factorize a zero state")
    z1, z2 = majorana_roots(state)
    u, v = PolarizationMode.from_ratio(z1), PolarizationMode.from_ratio(z2)
    rebuilt = from_modes(u, v)
    phase = cmath.phase(np.vdot(rebuilt.amplitudes, state.amplitudes))
    pair = PoincarePair(u, v, phase)
    if diagnose:
        compare_printed_angles(state, pair)
    return pair


def printed_angles(state: BiphotonState) -> list[tuple[float, float]]:
    """Evaluate the textbook closed-form angle expressions (diagnostic only).

    Phases are taken relative to ``arg c1``. The polar-angle expression
    contains a bare azimuth; each candidate azimuth is substituted there.
    Returns up to four (theta, phi) candidates; NaN marks an argument that
    falls outside the domain of arccos or sqrt.
    """
    m1, m2, m3 = (abs(c) for c in state.amplitudes)
    ref = cmath.phase(state.c1) if m1 > 0 else 0.0
    p2 = cmath.phase(state.c2) - ref
    p3 = cmath.phase(state.c3) - ref
    with np.errstate(all="ignore"):
        inner_root = np.sqrt(1 + m2**4 / (4 * m1**2 * m3**2)
                             - m2**2 / (m1 * m3) * math.cos(2 * p2 - p3))
        arg = m2**2 / (2 * m1 * m3) - inner_root
        spread = 0.5 * np.arccos(arg)
        out = []
        for phi in (p3 / 2 + spread, p3 / 2 - spread):
            cosd = math.cos(2 * phi - p3) if np.isfinite(phi) else float("nan")
            radical = np.sqrt((m2**2 - m1 * m3 * cosd) ** 2 - m1**2 * m3**2)
            denom = 1 + m2**2 - 2 * m1 * m3 * cosd
            for sign in (1, -1):
                theta = np.arccos((m1**2 - m3**2 + sign * 2 * radical) / denom)
                out.append((float(theta), float(phi)))
    return out


def compare_printed_angles(state: BiphotonState, pair: PoincarePair) -> float:
    """Largest mismatch between the closed form and the root-based pair.

    Logs and returns the mismatch; the root-based result is never altered.
    """
    candidates = printed_angles(state)
    worst = 0.0
    for mode in pair:
        best = math.inf
        for theta, phi in candidates:
            if not (math.isfinite(theta) and math.isfinite(phi)):
                continue
            d_phi = abs(_wrap_phi(phi - mode.phi + math.pi) - math.pi)
            if mode.theta < 1e-9 or mode.theta > math.pi - 1e-9:
                d_phi = 0.0
            best = min(best, abs(theta - mode.theta) + d_phi)
        worst = max(worst, best)
    if worst > 1e-9:
        logger.info("closed-form angles disagree with the Majorana roots by %.3g for %s",
                    worst, state)
    return worst


def overlap(s1: BiphotonState, s2: BiphotonState) -> complex:
    """``<s1|s2>``."""
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def pairing_overlap(a: PolarizationMode, b: PolarizationMode,
                    c: PolarizationMode, d: PolarizationMode) -> complex:
    """``<Psi_ab|Psi_cd>`` from single-photon overlaps (the two-photon permanent)."""
    num = mode_overlap(a, c) * mode_overlap(b, d) + mode_overlap(a, d) * mode_overlap(b, c)
    den = math.sqrt((1 + abs(mode_overlap(a, b)) ** 2) * (1 + abs(mode_overlap(c, d)) ** 2))
    return num / den


def is_orthogonal(s1: BiphotonState, s2: BiphotonState, tol: float = 1e-10) -> bool:
    return abs(overlap(s1, s2)) < tol


def degree_of_polarization(state: BiphotonState) -> float:
    """``2 cos(alpha/2) / (1 + cos^2(alpha/2))`` for the sphere angle alpha of the pair."""
    x = min(1.0, to_modes(state).overlap_magnitude())
    return 2 * x / (1 + x * x)


def mean_stokes(state: BiphotonState) -> np.ndarray:
    """Total Stokes vector of the two photons; its length is at most 2."""
    c1, c2, c3 = state.amplitudes
    # <a_H^dag a_V> on the two-photon state
    coherence = SQRT2 * (c1.conjugate() * c2 + c2.conjugate() * c3)
    return np.array([2 * coherence.real, 2 * coherence.imag, 2 * (abs(c1) ** 2 - abs(c3) ** 2)])


def split_state_name(name: str) -> tuple[str, str]:
    """Split a compact pair name such as ``"HV"`` or ``"DDb"`` into mode tokens.

    ``"D,Db"`` style separated names are accepted too. The compact name
    ``"DD"`` follows the table shorthand and means the D/Db pair; spell out
    ``"D,D"`` for two diagonal photons.
    """
    text = name.strip()
    for sep in (",", " ", "/"):
        if sep in text:
            parts = [p for p in text.split(sep) if p]
            if len(parts) != 2:
                raise UnknownName(f"state name {name!r} must name exactly two modes")
            return parts[0], parts[1]
    shorthand = {"DD": ("D", "Db"), "DDbar": ("D", "Db")}
    if text in shorthand:
        return shorthand[text]
    tokens = []
    rest = text
    while rest:
        for tok in sorted(MODES, key=len, reverse=True):
            if rest.startswith(tok):
                tokens.append(tok)
                rest = rest[len(tok):]
                break
        else:
            raise UnknownName(f"unknown state name {name!r}")
    if len(tokens) != 2:
        raise UnknownName(f"state name {name!r} must name exactly two modes")
    return tokens[0], tokens[1]


def standard_state(name: str) -> BiphotonState:
    """Named biphoton such as ``HV``, ``RL``, ``DDbar``, ``HH``."""
    first, second = split_state_name(name)
    return from_modes(named_mode(first), named_mode(second))


def random_state(seed: int) -> BiphotonState:
    """Haar-random qutrit, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return _random_from(rng)


def random_states(count: int, seed: int) -> list[BiphotonState]:
    rng = np.random.default_rng(seed)
    return [_random_from(rng) for _ in range(count)]


def _random_from(rng: np.random.Generator) -> BiphotonState:
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    return BiphotonState.normalized(*z)


def random_mode(rng: np.random.Generator) -> PolarizationMode:
    """Mode uniformly distributed on the Poincare sphere."""
    return PolarizationMode(math.acos(rng.uniform(-1, 1)), rng.uniform(0, TWO_PI))
