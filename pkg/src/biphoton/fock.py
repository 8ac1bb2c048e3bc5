"""Sparse few-photon bosonic Fock-space kernel.

States are stored as a mapping from occupation vectors to complex
amplitudes. Everything is exact linear algebra on the occupation basis;
nothing is ever truncated silently, so a creation operator that would
exceed the photon cutoff raises :class:`CutoffExceeded`.

The engine is deliberately small-scale: it is meant for two-photon
problems on a handful of modes where clarity beats speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import CutoffExceeded, DimensionMismatch

Occupation = tuple[int, ...]

# amplitudes smaller than this are dropped after every operation
PRUNE = 1e-15


@dataclass(frozen=True)
class FockState:
    """Complex amplitudes over occupation vectors of ``mode_count`` modes.

    Instances are immutable; every operation returns a new state. Terms are
    kept in lexicographic order of their occupation vectors so iteration is
    deterministic.
    """

    mode_count: int
    cutoff: int
    amplitudes: Mapping[Occupation, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode_count must be >= 1")
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        clean: dict[Occupation, complex] = {}
        for occ, amp in sorted(self.amplitudes.items()):
            occ = tuple(int(n) for n in occ)
            if len(occ) != self.mode_count:
                raise DimensionMismatch(
                    f"occupation {occ} has {len(occ)} modes, expected {self.mode_count}")
            if min(occ) < 0:
                raise ValueError(f"negative occupation in {occ}")
            if sum(occ) > self.cutoff:
                raise CutoffExceeded(f"occupation {occ} exceeds cutoff {self.cutoff}")
            if abs(amp) >= PRUNE:
                clean[occ] = complex(amp)
        object.__setattr__(self, "amplitudes", clean)

    def __iter__(self) -> Iterator[tuple[Occupation, complex]]:
        return iter(self.amplitudes.items())

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __getitem__(self, occ: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(occ), 0j)

    def __add__(self, other: FockState) -> FockState:
        _check_compatible(self, other)
        out = dict(self.amplitudes)
        for occ, amp in other:
            out[occ] = out.get(occ, 0j) + amp
        return self._like(out)

    def __sub__(self, other: FockState) -> FockState:
        return self + other.scale(-1)

    def scale(self, factor: complex) -> FockState:
        return self._like({occ: factor * amp for occ, amp in self})

    def norm(self) -> float:
        return math.sqrt(sum(abs(amp) ** 2 for _, amp in self))

    def normalized(self) -> FockState:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("cannot normalize the zero state")
        return self.scale(1 / n)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() ** 2 - 1) <= tol

    def allclose(self, other: FockState, atol: float = 1e-12) -> bool:
        _check_compatible(self, other)
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def to_vector(self) -> np.ndarray:
        """Dense amplitude vector over :func:`basis` ordering."""
        index = {occ: i for i, occ in enumerate(basis(self.mode_count, self.cutoff))}
        vec = np.zeros(len(index), dtype=complex)
        for occ, amp in self:
            vec[index[occ]] = amp
        return vec

    def _like(self, amplitudes: Mapping[Occupation, complex]) -> FockState:
        return FockState(self.mode_count, self.cutoff, amplitudes)


@dataclass(frozen=True)
class ModeMap:
    """Linear map of creation operators, ``a_j^dag -> sum_k U[k, j] a_k^dag``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"mode map must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def mode_count(self) -> int:
        return self.matrix.shape[0]

    def is_unitary(self, tol: float = 1e-12) -> bool:
        m = self.matrix
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(len(m)))) < tol)

    def dagger(self) -> ModeMap:
        return ModeMap(self.matrix.conj().T)

    @classmethod
    def identity(cls, mode_count: int) -> ModeMap:
        return cls(np.eye(mode_count, dtype=complex))


def basis(mode_count: int, cutoff: int) -> list[Occupation]:
    """All occupation vectors with total photon number <= cutoff, lexicographic."""

    def rec(prefix: Occupation, left: int, remaining_modes: int):
        if remaining_modes == 0:
            yield prefix
            return
        for n in range(left + 1):
            yield from rec(prefix + (n,), left - n, remaining_modes - 1)

    return sorted(rec((), cutoff, mode_count))


def vacuum(mode_count: int, cutoff: int = 2) -> FockState:
    return FockState(mode_count, cutoff, {(0,) * mode_count: 1.0})


def basis_state(occupation: Sequence[int], cutoff: int = 2) -> FockState:
    """Normalized occupation-number ket ``|n_0, n_1, ...>``."""
    occ = tuple(occupation)
    return FockState(len(occ), cutoff, {occ: 1.0})


def _check_mode(state: FockState, mode: int):
    if not 0 <= mode < state.mode_count:
        raise IndexError(f"mode {mode} out of range for {state.mode_count} modes")


def _check_compatible(lhs: FockState, rhs: FockState):
    if lhs.mode_count != rhs.mode_count or lhs.cutoff != rhs.cutoff:
        raise DimensionMismatch(
            f"incompatible spaces: ({lhs.mode_count} modes, cutoff {lhs.cutoff}) vs "
            f"({rhs.mode_count} modes, cutoff {rhs.cutoff})")


def create(state: FockState, mode: int) -> FockState:
    """Apply the creation operator of ``mode``; factor sqrt(n + 1)."""
    _check_mode(state, mode)
    out = {}
    for occ, amp in state:
        if sum(occ) + 1 > state.cutoff:
            raise CutoffExceeded(
                f"creating a photon in mode {mode} on {occ} exceeds cutoff {state.cutoff}")
        n = occ[mode]
        new = occ[:mode] + (n + 1,) + occ[mode + 1:]
        out[new] = amp * math.sqrt(n + 1)
    return state._like(out)


def annihilate(state: FockState, mode: int) -> FockState:
    """Apply the annihilation operator of ``mode``; factor sqrt(n)."""
    _check_mode(state, mode)
    out = {}
    for occ, amp in state:
        n = occ[mode]
        if n == 0:
            continue
        new = occ[:mode] + (n - 1,) + occ[mode + 1:]
        out[new] = amp * math.sqrt(n)
    return state._like(out)


def create_combination(state: FockState, coefficients: Sequence[complex]) -> FockState:
    """Apply ``sum_k coefficients[k] * a_k^dag``."""
    if len(coefficients) != state.mode_count:
        raise DimensionMismatch(
            f"{len(coefficients)} coefficients for {state.mode_count} modes")
    out: dict[Occupation, complex] = {}
    for k, coeff in enumerate(coefficients):
        if coeff == 0:
            continue
        for occ, amp in create(state, k):
            out[occ] = out.get(occ, 0j) + coeff * amp
    return state._like(out)


def annihilate_combination(state: FockState, coefficients: Sequence[complex]) -> FockState:
    """Apply ``sum_k coefficients[k] * a_k``."""
    if len(coefficients) != state.mode_count:
        raise DimensionMismatch(
            f"{len(coefficients)} coefficients for {state.mode_count} modes")
    out: dict[Occupation, complex] = {}
    for k, coeff in enumerate(coefficients):
        if coeff == 0:
            continue
        for occ, amp in annihilate(state, k):
            out[occ] = out.get(occ, 0j) + coeff * amp
    return state._like(out)


def inner(lhs: FockState, rhs: FockState) -> complex:
    """Hermitian inner product ``<lhs|rhs>`` (antilinear in ``lhs``)."""
    _check_compatible(lhs, rhs)
    return sum((amp.conjugate() * rhs[occ] for occ, amp in lhs), 0j)


def apply_mode_map(state: FockState, mode_map: ModeMap) -> FockState:
    """Lift a linear map of creation operators to the Fock space.

    Each basis term ``prod_j (a_j^dag)^{n_j} / sqrt(prod n_j!) |vac>`` is
    re-expanded with every ``a_j^dag`` replaced by its image, then the terms
    are summed.
    """
    if mode_map.mode_count != state.mode_count:
        raise DimensionMismatch(
            f"{mode_map.mode_count}-mode map applied to {state.mode_count}-mode state")
    columns = [[(k, c) for k, c in enumerate(mode_map.matrix[:, j]) if c != 0]
               for j in range(state.mode_count)]
    out: dict[Occupation, complex] = {}
    for occ, amp in state:
        norm = math.sqrt(math.prod(math.factorial(n) for n in occ))
        term: dict[Occupation, complex] = {(0,) * state.mode_count: amp / norm}
        for j, n in enumerate(occ):
            for _ in range(n):
                term = _create_terms(term, columns[j])
        for key, value in term.items():
            out[key] = out.get(key, 0j) + value
    return state._like(out)


def _create_terms(terms: dict[Occupation, complex],
                  column: list[tuple[int, complex]]) -> dict[Occupation, complex]:
    """Sparse ``sum_k c_k a_k^dag`` on raw terms; cutoff is checked by the caller's state."""
    out: dict[Occupation, complex] = {}
    for occ, amp in terms.items():
        for k, coeff in column:
            n = occ[k]
            new = occ[:k] + (n + 1,) + occ[k + 1:]
            out[new] = out.get(new, 0j) + coeff * amp * math.sqrt(n + 1)
    return out


def number_expectation(state: FockState, mode: int) -> float:
    _check_mode(state, mode)
    return float(sum(occ[mode] * abs(amp) ** 2 for occ, amp in state))


def outcome_probability(state: FockState, pattern: Callable[[Occupation], bool]) -> float:
    """Total probability of the basis terms whose occupation satisfies ``pattern``."""
    return float(sum(abs(amp) ** 2 for occ, amp in state if pattern(occ)))
