import math

import numpy as np
import pytest

from biphoton import braun_twiss as bt
from biphoton import fock
from biphoton.qutrit import (
    MODES,
    PolarizationMode,
    degree_of_polarization,
    from_modes,
    is_orthogonal,
    mean_stokes,
    random_state,
    random_states,
    standard_state,
    to_modes,
)

from conftest import random_tuning

H, V, D, Db, R = (MODES[k] for k in ("H", "V", "D", "Db", "R"))


def tuned(a, b):
    return bt.DetectorTuning(MODES[a], MODES[b])


def test_splitter_is_unitary():
    assert bt.SPLITTER.is_unitary()


def test_split_structure():
    out = bt.split(standard_state("HV"))
    # modes: 1H, 1V, 2H, 2V
    assert out[(1, 0, 0, 1)] == pytest.approx(0.5j)
    assert out[(0, 1, 1, 0)] == pytest.approx(0.5j)
    assert out.norm() == pytest.approx(1)
    assert all(sum(occ) == 2 for occ, _ in out)


def test_one_per_arm_is_half():
    for s in random_states(50, 1):
        assert fock.outcome_probability(bt.split(s), bt.one_per_arm) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("state, tuning, exact, ov2", [
    ("HV", ("H", "V"), 0.25, 1.0),
    ("RL", ("H", "V"), 0.0, 0.0),
    ("DDb", ("H", "H"), 0.25, 0.5),
    ("DDb", ("D", "Db"), 0.25, 1.0),
])
def test_coincidence_examples(state, tuning, exact, ov2):
    res = bt.coincidence_probability(standard_state(state), tuned(*tuning))
    assert res.exact_probability == pytest.approx(exact, abs=1e-12)
    assert res.overlap_squared == pytest.approx(ov2, abs=1e-12)
    assert res.same_arm_probability == pytest.approx(0.5, abs=1e-12)
    assert res.exact_probability == pytest.approx(abs(res.amplitude) ** 2)


@pytest.mark.parametrize("state, tuning, expected", [
    ("RL", ("H", "V"), True),
    ("HV", ("H", "H"), True),
    ("DDb", ("H", "H"), False),
    ("HV", ("H", "V"), False),
])
def test_orthogonality_examples(state, tuning, expected):
    assert bt.orthogonality_test(standard_state(state), tuned(*tuning)) is expected


def test_two_paths_and_identity(rng):
    for i in range(300):
        s, t = random_state(i), random_tuning(rng)
        res = bt.coincidence_probability(s, t)
        assert abs(res.exact_probability - bt.pairing_probability(s, t)) < 1e-12
        ab = abs(np.vdot(t.arm1_mode.jones(), t.arm2_mode.jones())) ** 2
        assert abs(res.exact_probability - res.overlap_squared * (1 + ab) / 4) < 1e-12


def test_factorization_independence(rng):
    from biphoton.qutrit import mode_overlap

    for i in range(50):
        s, t = random_state(i), random_tuning(rng)
        c, d = to_modes(s)
        a, b = t.arm1_mode, t.arm2_mode
        swapped = mode_overlap(a, d) * mode_overlap(b, c) + mode_overlap(a, c) * mode_overlap(b, d)
        expected = abs(swapped) ** 2 / (4 * (1 + abs(mode_overlap(d, c)) ** 2))
        assert bt.pairing_probability(s, t) == pytest.approx(expected, abs=1e-14)


def test_orthogonal_inputs_give_no_coincidences(rng):
    for _ in range(200):
        t = random_tuning(rng)
        target = t.target().amplitudes
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        z -= np.vdot(target, z) * target
        from biphoton.qutrit import BiphotonState
        s = BiphotonState.normalized(*z)
        assert is_orthogonal(t.target(), s)
        assert bt.orthogonality_test(s, t)


def test_singles_intensity_values():
    # expected photon number in the analyzer mode of one arm
    assert bt.singles_intensity(standard_state("HH"), 1, H) == pytest.approx(1.0)
    assert bt.singles_intensity(standard_state("HH"), 1, V) == pytest.approx(0.0, abs=1e-15)
    for arm in (1, 2):
        for m in (H, V, D, R, PolarizationMode(0.4, 1.9)):
            assert bt.singles_intensity(standard_state("HV"), arm, m) == pytest.approx(0.5)


def test_singles_match_stokes_formula(rng):
    for i in range(50):
        s = random_state(i)
        m = PolarizationMode(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))
        closed = bt.singles_from_stokes(mean_stokes(s), m.bloch())
        for arm in (1, 2):
            assert bt.singles_intensity(s, arm, m) == pytest.approx(closed, abs=1e-12)


@pytest.mark.parametrize("name, vis", [("HV", 0.0), ("HH", 1.0)])
def test_visibility_examples(name, vis):
    assert bt.visibility_scan(standard_state(name)).visibility == pytest.approx(vis, abs=1e-12)


def test_visibility_h_d():
    scan = bt.visibility_scan(from_modes(H, D), arm=2)
    assert scan.visibility == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_visibility_closed_form_vs_grid(seed):
    s = random_state(seed)
    closed = bt.visibility_scan(s)
    numeric = bt.numeric_visibility(s)
    assert numeric.max == pytest.approx(closed.max, abs=1e-6)
    assert numeric.min == pytest.approx(closed.min, abs=1e-6)
    assert closed.visibility == pytest.approx(degree_of_polarization(s), abs=1e-9)


def test_grid_scan_shape():
    rows = bt.grid_scan(standard_state("HH"), 5, 8)
    assert rows.shape == (40, 3)
    assert rows[:, 2].max() == pytest.approx(1.0)
