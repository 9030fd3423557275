"""Python access to the kp_toolkit core.

Coefficients come back as lists of Fraction, index = power of k (or of P for Wick counts).
"""

import json
from fractions import Fraction

from . import _kp
from ._kp import NoRootError, UsageError, commutator_check, cubic_residual, gamma, numeric_c, run_suite

__all__ = [
    "NoRootError",
    "UsageError",
    "airy_log_ratio",
    "c_series",
    "commutator_check",
    "cubic_residual",
    "free_energy",
    "gamma",
    "gaussian_moment",
    "numeric_c",
    "onepoint",
    "p1_log_series",
    "replica_sinh",
    "run_suite",
    "twopoint",
    "wick_multitrace",
]


def _poly(strings):
    return [Fraction(s) for s in strings]


def _series(text):
    data = json.loads(text)
    out = {}
    for term in data["terms"]:
        key = tuple((n / 2, e) for n, e in term["monomial"])
        out[key] = _poly(term["coeff"])
    return out


def free_energy(max_weight="3/2", size=5):
    """{((index, exponent), ...): [c0, c1, ...]}; index is the half-integer n of t_n."""
    return _series(_kp.free_energy_json(str(max_weight), size))


def c_series(w2):
    return _series(_kp.c_series_json(w2))


def gaussian_moment(j):
    return _poly(_kp.gaussian_moment(j))


def wick_multitrace(powers):
    return _poly(_kp.wick_multitrace(list(powers)))


def replica_sinh(powers):
    return Fraction(_kp.replica_sinh(list(powers)))


def onepoint(order):
    return [_poly(c) for c in _kp.onepoint(order)]


def twopoint(order):
    return {k: _poly(v) for k, v in _kp.twopoint(order).items()}


def p1_log_series(order):
    return [_poly(c) for c in _kp.p1_log_series(order)]


def airy_log_ratio(lam, k=0):
    return _kp.airy_log_ratio(float(lam), int(k))
