"""Exact rational-arithmetic reference implementations.

Deliberately naive: direct transcriptions of the defining formulas with
``fractions.Fraction``, sharing no code with the package.
"""

from fractions import Fraction as F


def _q(xs):
    return [F(x) for x in xs]


def mean(xs):
    xs = _q(xs)
    return sum(xs) / len(xs)


def abs_diff_sum(xs):
    xs = _q(xs)
    return sum(abs(a - b) for a in xs for b in xs)


def gmd(xs):
    return abs_diff_sum(xs) / (2 * len(xs) ** 2)


def gini(xs):
    return gmd(xs) / mean(xs)


def gini_signed(xs):
    return gmd(xs) / (sum(abs(x) for x in _q(xs)) / len(xs))


def variance(xs):
    m = mean(xs)
    return sum((x - m) ** 2 for x in _q(xs)) / len(xs)


def second_moment(xs):
    return sum(x * x for x in _q(xs)) / len(xs)


def index_i(xs):
    return variance(xs) / second_moment(xs)


def herfindahl(xs):
    xs = _q(xs)
    return sum(x * x for x in xs) / sum(xs) ** 2


def e2(xs):
    m = mean(xs)
    return (sum((x / m) ** 2 for x in _q(xs)) / len(xs) - 1) / 2


def decomposition(groups):
    """(total, within, between) E_2 by explicit group-mean substitution."""
    pooled = [x for g in groups for x in g]
    total = e2(pooled)
    between = e2([mean(g) for g in groups for _ in g])
    return total, total - between, between
