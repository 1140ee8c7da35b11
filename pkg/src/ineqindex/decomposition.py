"""Within/between subgroup decomposition of E_2, and through it of I.

With group sizes ``n_g``, means ``mu_g`` and overall mean ``mu``::

    E_2 = sum_g w_g E_2(group g) + E_2(group means),   w_g = (n_g / N) (mu_g / mu)**2

I is a monotone transform of E_2, ``I = 2 E_2 / (2 E_2 + 1)``, and is not itself
additive, so shares are reported on the E_2 scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .errors import EmptyGroup, InvalidSample, NonPositiveMean, NonPositiveValue, ZeroTotal


def _fsum(a) -> float:
    return math.fsum(np.asarray(a, dtype=np.float64).tolist())


def _e2(sum_sq_dev: float, n: int, mean: float) -> float:
    return 0.5 * (sum_sq_dev / n) / (mean * mean)


@dataclass
class GroupedSample:
    values: np.ndarray
    labels: list
    group_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        self.labels = list(self.labels)
        if len(self.labels) != self.values.size:
            raise InvalidSample(f"{len(self.labels)} labels for {self.values.size} values")
        if self.values.size == 0:
            raise EmptyGroup("no observations")
        if not np.all(np.isfinite(self.values)):
            raise InvalidSample("values contain NaN or infinite entries")
        index: dict[Hashable, list[int]] = {}
        for pos, label in enumerate(self.labels):
            index.setdefault(label, []).append(pos)
        self.group_index = {k: np.asarray(v) for k, v in index.items()}

    @classmethod
    def from_groups(cls, groups: Sequence[Sequence[float]], labels: Sequence[Hashable] | None = None):
        labels = list(range(len(groups))) if labels is None else list(labels)
        if any(len(g) == 0 for g in groups):
            raise EmptyGroup("every group must be nonempty")
        values = [v for g in groups for v in g]
        return cls(values, [lab for lab, g in zip(labels, groups) for _ in g])


@dataclass
class GroupRow:
    group: Hashable
    size: int
    mean: float
    e2: float | None  # None for an all-zero group (its weight is 0)
    weight: float


@dataclass
class DecompositionResult:
    total_e2: float
    within_e2: float
    between_e2: float
    per_group: list[GroupRow]
    total_i: float | None = None
    within_share: float | None = None
    between_share: float | None = None

    def as_dict(self) -> dict:
        return {
            "total_e2": self.total_e2,
            "within_e2": self.within_e2,
            "between_e2": self.between_e2,
            "total_i": self.total_i,
            "within_share": self.within_share,
            "between_share": self.between_share,
            "shares_scale": "E2",
            "per_group": [
                {"group": str(g.group), "size": g.size, "mean": g.mean, "e2": g.e2, "weight": g.weight}
                for g in self.per_group
            ],
        }


def decompose_e2(grouped: GroupedSample) -> DecompositionResult:
    x = grouped.values
    if np.any(x < 0):
        raise NonPositiveValue("decomposition requires nonnegative values")
    n = x.size
    mu = _fsum(x) / n
    if not mu > 0:
        raise NonPositiveMean("decomposition requires a positive overall mean")

    rows = []
    group_means = np.empty(n)
    within = []
    for label, pos in grouped.group_index.items():
        xg = x[pos]
        ng = xg.size
        mg = _fsum(xg) / ng
        group_means[pos] = mg
        weight = (ng / n) * (mg / mu) ** 2
        e2g = _e2(_fsum((xg - mg) ** 2), ng, mg) if mg > 0 else None
        if e2g is not None:
            within.append(weight * e2g)
        rows.append(GroupRow(label, ng, mg, e2g, weight))

    total = _e2(_fsum((x - mu) ** 2), n, mu)
    between = _e2(_fsum((group_means - mu) ** 2), n, mu)
    return DecompositionResult(total, math.fsum(within), between, rows)


def decompose_i(grouped: GroupedSample, *, strict: bool = False) -> DecompositionResult:
    """:func:`decompose_e2` plus ``total_i`` and within/between shares of E_2.

    When E_2 is zero the shares are undefined and left ``None``, or
    :class:`ZeroTotal` is raised if ``strict``.
    """
    res = decompose_e2(grouped)
    res.total_i = 2 * res.total_e2 / (2 * res.total_e2 + 1)
    if res.total_e2 > 0:
        res.within_share = res.within_e2 / res.total_e2
        res.between_share = res.between_e2 / res.total_e2
    elif strict:
        raise ZeroTotal("total E2 is zero; shares are undefined")
    return res
