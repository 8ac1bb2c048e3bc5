import itertools
import math

import numpy as np
import pytest

from biphoton import fock
from biphoton.errors import CutoffExceeded, DimensionMismatch
from biphoton.fock import FockState, ModeMap, annihilate, create, inner, vacuum

from conftest import random_unitary

H, V = 0, 1


def permanent(m):
    n = len(m)
    return sum(math.prod(m[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def dense_mode_map(state, U):
    """Brute-force oracle: <out|U|in> = Per(U[out, in]) / sqrt(prod out! prod in!)."""
    out = {}
    for occ_in, amp in state:
        cols = [j for j, n in enumerate(occ_in) for _ in range(n)]
        for occ_out in fock.basis(state.mode_count, state.cutoff):
            if sum(occ_out) != sum(occ_in):
                continue
            rows = [k for k, n in enumerate(occ_out) for _ in range(n)]
            sub = U[np.ix_(rows, cols)] if rows else np.ones((0, 0))
            norm = math.sqrt(math.prod(math.factorial(n) for n in occ_in)
                             * math.prod(math.factorial(n) for n in occ_out))
            val = (permanent(sub) if rows else 1.0) / norm
            out[occ_out] = out.get(occ_out, 0j) + amp * val
    return FockState(state.mode_count, state.cutoff, out)


def random_fock(mode_count, cutoff, rng, photons=None):
    occs = [o for o in fock.basis(mode_count, cutoff) if photons is None or sum(o) == photons]
    amps = rng.normal(size=len(occs)) + 1j * rng.normal(size=len(occs))
    return FockState(mode_count, cutoff, dict(zip(occs, amps))).normalized()


def test_vacuum():
    vac = vacuum(4, 2)
    assert dict(vac.amplitudes) == {(0, 0, 0, 0): 1}
    assert vacuum(2, 2).norm() == 1


def test_ladder_factors():
    one = create(vacuum(1, 2), 0)
    two = create(one, 0)
    assert one[(1,)] == 1
    assert two[(2,)] == pytest.approx(math.sqrt(2), abs=1e-15)
    assert two.norm() == pytest.approx(math.sqrt(2))


def test_create_respects_cutoff():
    s = fock.basis_state((1, 1), cutoff=2)
    with pytest.raises(CutoffExceeded):
        create(s, H)
    with pytest.raises(CutoffExceeded):
        FockState(2, 1, {(1, 1): 1.0})


def test_annihilate():
    assert annihilate(fock.basis_state((1, 0)), H).allclose(vacuum(2, 2))
    assert len(annihilate(vacuum(2), H)) == 0
    assert annihilate(vacuum(2), H).norm() == 0


def test_inner():
    h, v = fock.basis_state((1, 0)), fock.basis_state((0, 1))
    assert inner(h, v) == 0
    s = random_fock(2, 2, np.random.default_rng(0))
    assert inner(s, s) == pytest.approx(1)
    with pytest.raises(DimensionMismatch):
        inner(vacuum(2), vacuum(3))


def test_four_operator_vacuum_expectation():
    # <vac| a_H a_V a_H^dag a_V^dag |vac> = 1
    ket = create(create(vacuum(2), V), H)
    assert inner(vacuum(2), annihilate(annihilate(ket, V), H)) == pytest.approx(1)


def test_inner_conjugate_symmetric(rng):
    a, b = random_fock(3, 2, rng), random_fock(3, 2, rng)
    assert inner(a, b) == pytest.approx(inner(b, a).conjugate(), abs=1e-14)


def test_commutator_on_basis_states():
    # (a a^dag - a^dag a)|n> = |n> on every mode, cutoff 3 leaves room for one creation
    for occ in fock.basis(2, 2):
        s = FockState(2, 3, {occ: 1.0})
        for m in range(2):
            diff = annihilate(create(s, m), m) - create(annihilate(s, m), m)
            assert diff.allclose(s, 1e-14)


def test_number_expectation():
    assert fock.number_expectation(fock.basis_state((1, 0)), H) == 1
    assert fock.number_expectation(fock.basis_state((2, 0)), V) == 0
    noon = FockState(2, 2, {(2, 0): 1 / math.sqrt(2), (0, 2): 1 / math.sqrt(2)})
    assert fock.number_expectation(noon, H) == pytest.approx(1)


def test_outcome_probability():
    s = random_fock(2, 2, np.random.default_rng(3), photons=2)
    assert fock.outcome_probability(s, lambda occ: sum(occ) == 2) == pytest.approx(1)


def test_identity_map():
    s = random_fock(3, 2, np.random.default_rng(5))
    assert fock.apply_mode_map(s, ModeMap.identity(3)).allclose(s, 1e-15)


def test_hong_ou_mandel():
    bs = ModeMap(np.array([[1, 1j], [1j, 1]]) / math.sqrt(2))
    out = fock.apply_mode_map(fock.basis_state((1, 1)), bs)
    assert out[(1, 1)] == 0
    assert out[(2, 0)] == pytest.approx(1j / math.sqrt(2))
    assert out[(0, 2)] == pytest.approx(1j / math.sqrt(2))


def test_single_input_lift():
    bs = ModeMap(np.array([[1, 1j], [1j, 1]]) / math.sqrt(2))
    out = fock.apply_mode_map(fock.basis_state((2, 0)), bs)
    assert out[(1, 1)] == pytest.approx(1j / math.sqrt(2))
    assert out[(2, 0)] == pytest.approx(0.5)
    assert out[(0, 2)] == pytest.approx(-0.5)


def test_mode_map_dimension_check():
    with pytest.raises(DimensionMismatch):
        fock.apply_mode_map(vacuum(2), ModeMap.identity(3))


@pytest.mark.parametrize("seed", range(8))
def test_mode_map_matches_permanent_oracle(seed):
    rng = np.random.default_rng(seed)
    s = random_fock(3, 2, rng)
    U = random_unitary(3, seed)
    assert fock.apply_mode_map(s, ModeMap(U)).allclose(dense_mode_map(s, U), 1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_unitary_maps_preserve_structure(seed):
    rng = np.random.default_rng(100 + seed)
    U = ModeMap(random_unitary(4, seed))
    assert U.is_unitary()
    a, b = random_fock(4, 2, rng), random_fock(4, 2, rng)
    ua, ub = fock.apply_mode_map(a, U), fock.apply_mode_map(b, U)
    assert abs(inner(ua, ub) - inner(a, b)) < 1e-12
    assert fock.apply_mode_map(ua, U.dagger()).allclose(a, 1e-12)
    total = sum(fock.number_expectation(a, m) for m in range(4))
    assert sum(fock.number_expectation(ua, m) for m in range(4)) == pytest.approx(total, abs=1e-12)


def test_pruning_and_order():
    s = FockState(2, 2, {(0, 2): 1.0, (2, 0): 1e-16, (1, 1): 0.5})
    assert list(s.amplitudes) == [(0, 2), (1, 1)]
