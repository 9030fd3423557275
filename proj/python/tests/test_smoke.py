from fractions import Fraction as Fr

import pytest

import kp_toolkit as kp


def test_free_energy_low_weight():
    F = kp.free_energy("3/2")
    assert F[((0.0, 3),)] == [Fr(1, 12)]
    assert F[((1.0, 1),)] == [Fr(1, 48), 0, Fr(1, 4)]
    assert F[((0.0, 1), (0.5, 1))] == [0, Fr(1, 2)]
    assert len(F) == 3


def test_bad_weight():
    with pytest.raises(ValueError):
        kp.free_energy("1/3")


def test_moments_two_routes():
    assert kp.gaussian_moment(2) == [0, 1, 0, 2]
    for j in range(1, 6):
        assert kp.gaussian_moment(j) == kp.wick_multitrace([2 * j])


def test_replica():
    assert kp.replica_sinh([3, 3]) == 3
    assert kp.replica_sinh([3, 3, 2]) == 18
    assert kp.wick_multitrace([3, 3, 2])[1] == 18


def test_correlators():
    assert kp.onepoint(3)[3] == [0, Fr(-1, 6), 0, Fr(-1, 6)]
    assert kp.twopoint(6)[(1, 2)] == [0, 0, 1]


def test_saddle():
    st = kp.numeric_c([4.0])
    assert abs(st["c"] + 0.537402) < 1e-5
    assert abs(kp.cubic_residual(30.0, [2.5, 3.0, 7.25], 0.05)) < 1e-8
    with pytest.raises(ArithmeticError):
        kp.numeric_c([2.5, 3.0, 7.25], -5.0)


def test_c_series():
    c = kp.c_series(6)
    assert c[((0.0, 1),)] == [-1]
    assert c[((0.0, 2), (2.0, 1))] == [Fr(-3, 8)]


def test_operators_and_oracles():
    assert kp.commutator_check(1, -1, 4)
    assert "d0 d0" in kp.gamma(2, 2)
    assert kp.p1_log_series(3)[3] == [Fr(5, 48), Fr(-1, 2), Fr(1, 4)]
    a, b = kp.airy_log_ratio(32.0), kp.airy_log_ratio(64.0)
    assert abs((a - b) / (32.0**-1.5 - 64.0**-1.5) - 5 / 48) < 0.02 * 5 / 48
