import math

import numpy as np
import pytest

import ompkit


def test_bb84_guessing_probability():
    sol = ompkit.solve(ompkit.reference.bb84())
    assert sol.p_guess == pytest.approx(0.5, abs=1e-8)
    assert sorted(sol.identified) == [0, 1, 2, 3]
    assert sol.povm_weights == pytest.approx([0.5] * 4, abs=1e-9)


def test_two_state_closed_form_matches_general_solver():
    s = ompkit.Ensemble([(0.5, [0, 0, 1]), (0.5, [1, 0, 0])])
    assert ompkit.solve_two_state(s).p_guess == pytest.approx(0.5 * (1 + 1 / math.sqrt(2)), abs=1e-12)
    assert ompkit.solve(s).p_guess == pytest.approx(0.5 * (1 + 1 / math.sqrt(2)), abs=1e-8)


def test_invalid_priors_raise():
    with pytest.raises(ompkit.OmpkitError):
        ompkit.Ensemble([(0.6, [0, 0, 1]), (0.5, [0, 0, -1])])


def test_depolarizing_is_omp_for_bb84():
    s = ompkit.reference.bb84()
    sol = ompkit.solve(s)
    rep = ompkit.check_omp(s, sol, ompkit.QubitChannel.depolarizing(0.2))
    assert rep.is_omp
    assert rep.delta == pytest.approx(0.05, abs=1e-10)
    assert rep.cross_check_ok


def test_z_rotation_preserves_only_the_z_measurement():
    s = ompkit.reference.bb84()
    sol = ompkit.solve(s)
    rot = ompkit.QubitChannel.unitary([0, 0, 1], math.pi / 7)
    assert ompkit.check_omp(s, sol, rot, [0, 1]).is_omp
    assert not ompkit.check_omp(s, sol, rot).is_omp


def test_three_mub_unital_family_is_depolarizing():
    s = ompkit.reference.three_mubs()
    sol = ompkit.solve(s)
    fam = ompkit.unital_family(ompkit.build_system(s, sol))
    assert fam.dim == 1
    kept = ompkit.sieve(fam, s, sol, count=200)
    assert kept
    for channel, delta in kept:
        np.testing.assert_allclose(channel.D, (1 - 6 * delta) * np.eye(3), atol=1e-8)


def test_choi_rejects_bloch_flip():
    flip = ompkit.QubitChannel(np.diag([1.0, 1.0, -1.0]), np.zeros(3))
    assert not flip.is_cptp()
    assert ompkit.QubitChannel.depolarizing(0.5).is_cptp()
