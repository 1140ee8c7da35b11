"""Inequality and concentration statistics of a finite sample.

All sums go through :func:`math.fsum` on canonically ordered data, so results
are exactly invariant under permutation of the input and carry no
order-dependent rounding. Ratio indices first rescale by a power of two near
``max|x|``, which is exact and keeps squares of heavy-tailed draws from
overflowing.

Variances are population variances (divide by ``N``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllZero,
    DegenerateIndex,
    InvalidProbabilities,
    InvalidSample,
    LambdaOne,
    NonPositiveMean,
    NonPositiveSum,
    NonPositiveValue,
    OracleSizeExceeded,
    OutOfRange,
    TiedValues,
    ZeroMean,
)

#: Above this size the O(N^2) pairwise forms refuse to run unless ``oracle=True``.
PAIRWISE_LIMIT = 20_000
#: Default cap for :func:`i_p_index`, which has no sub-quadratic form.
I_P_LIMIT = 100_000

_BLOCK_ELEMENTS = 1 << 22


def _fsum(a: np.ndarray) -> float:
    return math.fsum(a.tolist())


def _exact_sum(a: np.ndarray) -> Fraction:
    """Sum as ``hi + lo`` (about 106 bits), so ratios of sums round once."""
    terms = a.tolist()
    hi = math.fsum(terms)
    terms.append(-hi)
    return Fraction(hi) + Fraction(math.fsum(terms))


@dataclass(frozen=True, eq=False)
class Sample:
    """A validated, immutable sample of finite reals, not all zero.

    The ascending copy is built lazily and cached.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if arr.size == 0:
            raise InvalidSample("sample must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise InvalidSample("sample contains NaN or infinite values")
        if not np.any(arr):
            raise AllZero("every value is zero")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    @cached_property
    def sorted(self) -> np.ndarray:
        s = np.sort(self.values, kind="stable")
        s.flags.writeable = False
        return s

    @cached_property
    def total(self) -> float:
        return _fsum(self.sorted)

    @property
    def mean(self) -> float:
        return self.total / self.n

    @cached_property
    def scale(self) -> float:
        # power of two, so dividing by it is exact; max|x| / scale lies in [1, 2)
        top = float(max(abs(self.sorted[0]), abs(self.sorted[-1])))
        return math.ldexp(1.0, math.frexp(top)[1] - 1)

    @cached_property
    def _scaled(self) -> np.ndarray:
        return self.sorted / self.scale


def as_sample(data) -> Sample:
    """Return ``data`` unchanged if it is a :class:`Sample`, else validate it into one."""
    if isinstance(data, Sample):
        return data
    return Sample(data)


def _require_positive_mean(s: Sample) -> None:
    if not s.total > 0:
        raise NonPositiveMean(f"mean is {s.mean!r}; the classic Gini needs a positive mean; use gini_signed (--signed)")


def _require_nonnegative(s: Sample, what: str) -> None:
    if s.sorted[0] < 0:
        raise NonPositiveValue(f"{what} requires nonnegative values")


# -- mean difference and Gini -------------------------------------------------


def _weighted_spread(s: Sample) -> float:
    """Return sum_k (2k - N - 1) x_(k) = (1/2) sum_ij |x_i - x_j|.

    Rank k is paired with rank N+1-k so the terms are identical (up to exact
    negation) for X and -X.
    """
    x = s.sorted
    n = x.size
    k = np.arange(1, n // 2 + 1, dtype=np.float64)
    d = x[::-1][: n // 2] - x[: n // 2]
    return _fsum((n + 1 - 2 * k) * d)


def _pairwise_abs_sum(x: np.ndarray, p: float = 1.0) -> float:
    """Brute-force sum over all ordered pairs of |x_i - x_j|**p."""
    x = np.sort(x)
    step = max(1, _BLOCK_ELEMENTS // x.size)
    rows = []
    for start in range(0, x.size, step):
        block = np.abs(x[start : start + step, None] - x[None, :])
        if p != 1.0:
            block = block**p
        rows.append(block.sum(axis=1))
    return _fsum(np.concatenate(rows))


def _check_pairwise_size(n: int, oracle: bool, limit: int = PAIRWISE_LIMIT) -> None:
    if n > limit and not oracle:
        raise OracleSizeExceeded(f"N={n} exceeds the O(N^2) limit {limit}; pass oracle=True to force it")


def gmd(sample, *, method: str = "sorted", oracle: bool = False) -> float:
    """Gini mean difference, ``sum_ij |x_i - x_j| / (2 N^2)``.

    ``method="pairwise"`` evaluates the double sum directly (quadratic cost).
    """
    s = as_sample(sample)
    n = s.n
    if method == "sorted":
        return _weighted_spread(s) / n**2
    if method == "pairwise":
        _check_pairwise_size(n, oracle)
        return _pairwise_abs_sum(s.values) / (2 * n**2)
    raise ValueError(f"unknown method {method!r}")


def gini_pairwise(sample, *, oracle: bool = False) -> float:
    """Classic Gini index by brute force over all pairs.

    Reference implementation; refuses samples above :data:`PAIRWISE_LIMIT`
    unless ``oracle=True``.
    """
    s = as_sample(sample)
    _require_positive_mean(s)
    _check_pairwise_size(s.n, oracle)
    return _pairwise_abs_sum(s.values) / (2 * s.n**2) / s.mean


def gini_sorted(sample) -> float:
    """Classic Gini index from the ascending order statistics.

    Equivalent to ``(2/N) sum i x_(i) / sum x - (N+1)/N``, computed as
    ``sum (2i - N - 1) x_(i) / (N sum x)`` to avoid cancellation.
    """
    s = as_sample(sample)
    _require_positive_mean(s)
    g = _weighted_spread(s) / (s.n * s.total)
    return min(max(g, 0.0), 1.0)


gini = gini_sorted


def gini_signed(sample) -> float:
    """Gini index normalised by the mean absolute value.

    Defined for any nonzero sample; equals :func:`gini_sorted` on nonnegative
    data and satisfies ``gini_signed(X) == gini_signed(-X)``.
    """
    s = as_sample(sample)
    mean_abs = _fsum(np.abs(s.sorted)) / s.n
    g = gmd(s) / mean_abs
    return min(max(g, 0.0), 1.0)


# -- second-moment family -----------------------------------------------------


def mean(sample) -> float:
    return as_sample(sample).mean


def second_moment(sample) -> float:
    s = as_sample(sample)
    return _fsum(s._scaled**2) / s.n * s.scale * s.scale


def _centered_ss(s: Sample) -> Fraction:
    """Sum of squared deviations of the scaled sample (two-pass).

    The mean is correctly rounded and the result is a near-exact sum, so
    replicating the sample k times scales it by exactly k.
    """
    y = s._scaled
    mu = float(_exact_sum(y) / s.n)
    return _exact_sum((y - mu) ** 2)


def variance(sample) -> float:
    s = as_sample(sample)
    return float(_centered_ss(s) / s.n) * s.scale * s.scale


def index_i(sample) -> float:
    """Variance over second moment, ``var(X) / mean(X**2)``.

    Equal to ``1 - (sum x)**2 / (N sum x**2)``. Exactly 1 for a zero-mean
    sample, 0 for a constant one.
    """
    s = as_sample(sample)
    y = s._scaled
    return min(max(float(_centered_ss(s) / _exact_sum(y * y)), 0.0), 1.0)


def equality_fraction(sample) -> float:
    """``1 - I``, i.e. the effective number of elements ``1/H`` divided by ``N``.

    Computed directly as ``(sum x)**2 / (N sum x**2)`` so it keeps full
    relative precision when ``I`` is close to 1.
    """
    s = as_sample(sample)
    y = s._scaled
    s1 = _exact_sum(y)
    return float(s1 * s1 / (s.n * _exact_sum(y * y)))


def herfindahl(sample) -> float:
    """Herfindahl-Hirschman concentration ``sum x**2 / (sum x)**2``."""
    s = as_sample(sample)
    _require_nonnegative(s, "herfindahl")
    y = s._scaled
    s1 = _fsum(y)
    if not s1 > 0:
        raise NonPositiveSum("herfindahl requires a positive sum")
    return _fsum(y * y) / (s1 * s1)


def cv_squared(sample) -> float:
    """Squared coefficient of variation ``var / mean**2``."""
    s = as_sample(sample)
    y = s._scaled
    s1 = _exact_sum(y)
    if s1 == 0:
        raise ZeroMean("coefficient of variation is undefined for a zero-mean sample")
    return float(_centered_ss(s) * s.n / (s1 * s1))


def share_probabilities(sample) -> np.ndarray:
    """The "rich-get-richer" probabilities ``x_i / sum x`` of a nonnegative sample."""
    s = as_sample(sample)
    _require_nonnegative(s, "share probabilities")
    return s.values / s.total


def renyi_entropy(probabilities: Sequence[float], lam: float) -> float:
    """Renyi entropy of order ``lam`` (natural log). Zero-probability cells are ignored."""
    p = np.asarray(probabilities, dtype=np.float64).reshape(-1)
    if p.size == 0 or not np.all(np.isfinite(p)) or np.any(p < 0):
        raise InvalidProbabilities("probabilities must be finite and nonnegative")
    if abs(_fsum(p) - 1.0) > 1e-9:
        raise InvalidProbabilities(f"probabilities sum to {_fsum(p)!r}, not 1")
    if lam < 0:
        raise OutOfRange("lambda must be >= 0")
    if lam == 1:
        raise LambdaOne("lambda = 1 is excluded; take the Shannon limit separately")
    p = p[p > 0]
    return math.log(_fsum(p**lam)) / (1.0 - lam)


def generalized_entropy(sample, theta: float) -> float:
    """Generalised entropy inequality measure of order ``theta``.

    ``theta`` of 0 and 1 give the mean log deviation and the Theil index (the
    analytic limits). ``theta=2`` is half the squared coefficient of variation.
    """
    s = as_sample(sample)
    x = s.sorted
    if theta <= 0:
        if x[0] <= 0:
            raise NonPositiveValue(f"theta={theta} requires strictly positive values")
    else:
        _require_nonnegative(s, "generalized entropy")
        if not s.total > 0:
            raise NonPositiveMean("generalized entropy requires a positive mean")
    if theta == 2:
        return cv_squared(s) / 2
    r = s._scaled / (_fsum(s._scaled) / s.n)
    if theta == 1:
        pos = r[r > 0]
        return max(_fsum(pos * np.log(pos)) / s.n, 0.0)
    if theta == 0:
        return max(-_fsum(np.log(r)) / s.n, 0.0)
    return max((_fsum(r**theta) / s.n - 1.0) / (theta * (theta - 1.0)), 0.0)


def i_p_index(sample, p: float, *, max_n: int | None = I_P_LIMIT) -> float:
    """Normalised ``p``-th power dispersion, ``(1/2) E|X - X'|**p / E|X|**p``.

    Always evaluated over all pairs, O(N^2); ``max_n=None`` lifts the size cap.
    ``p=1`` recovers :func:`gini_signed` and ``p=2`` recovers :func:`index_i`.
    """
    if p < 1:
        raise OutOfRange("p must be >= 1")
    s = as_sample(sample)
    if max_n is not None and s.n > max_n:
        raise OracleSizeExceeded(f"N={s.n} exceeds max_n={max_n}")
    y = s._scaled
    num = _pairwise_abs_sum(y, p) / (2 * s.n**2)
    den = _fsum(np.abs(y) ** p) / s.n
    return min(max(num / den, 0.0), 1.0)


# -- sensitivities ------------------------------------------------------------


@dataclass(frozen=True)
class SensitivityVector:
    """Partial derivatives, one per observation.

    ``by="rank"``: ``partials[k]`` is w.r.t. the (k+1)-th smallest value and
    ``order[k]`` is that value's position in the input. ``by="index"``:
    ``partials[i]`` is w.r.t. input position ``i``.
    """

    partials: np.ndarray
    by: str
    order: np.ndarray | None = None


def gmd_sensitivity(sample) -> SensitivityVector:
    """Partials of the GMD w.r.t. each order statistic under rank-preserving change."""
    s = as_sample(sample)
    n = s.n
    if n > 1 and not np.all(np.diff(s.sorted) > 0):
        raise TiedValues("tied values make ranks ambiguous")
    k = np.arange(1, n + 1, dtype=np.float64)
    partials = 2.0 / n**2 * (k - (n + 1) / 2)
    return SensitivityVector(partials, "rank", np.argsort(s.values, kind="stable"))


def variance_sensitivity(sample) -> SensitivityVector:
    s = as_sample(sample)
    return SensitivityVector(2.0 / s.n * (s.values - s.mean), "index")


# -- bounds and conversions ---------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    prob_zero: float
    index_i: float
    holds: bool


def second_moment_bound_check(sample) -> BoundCheck:
    """Check ``P(X = 0) <= I(X)`` on a nonnegative sample."""
    s = as_sample(sample)
    _require_nonnegative(s, "the second-moment bound")
    p0 = int(np.count_nonzero(s.values == 0)) / s.n
    i = index_i(s)
    return BoundCheck(p0, i, p0 <= i + 1e-12)


@dataclass(frozen=True)
class Conversions:
    nh: float
    cv2: float
    e2: float
    r2: float


def convert_from_i(i: float, n: int) -> Conversions:
    """Map ``I`` to ``N*H``, ``CV**2``, ``E_2`` and the order-2 Renyi entropy."""
    if n < 1:
        raise OutOfRange("n must be >= 1")
    if i == 1:
        raise DegenerateIndex("I = 1: N*H, CV^2 and E_2 all diverge")
    if not 0 <= i < 1:
        raise OutOfRange(f"I must lie in [0, 1), got {i!r}")
    c = 1.0 - i
    return Conversions(nh=1.0 / c, cv2=i / c, e2=i / (2 * c), r2=math.log(n * c))


# -- report -------------------------------------------------------------------

INDEX_ALIASES = {
    "g": "gini",
    "gini": "gini",
    "gs": "gini_signed",
    "gini_signed": "gini_signed",
    "gmd": "gmd",
    "i": "index_i",
    "index_i": "index_i",
    "h": "herfindahl",
    "herfindahl": "herfindahl",
    "cv2": "cv_squared",
    "cv_squared": "cv_squared",
    "e2": "e2",
    "r2": "renyi2",
    "renyi2": "renyi2",
    "mean": "mean",
    "second_moment": "second_moment",
}


@dataclass
class IndexReport:
    """Every index computed for one sample. ``None`` marks a field not computed."""

    n: int
    gini: float | None = None
    gini_signed: float | None = None
    gmd: float | None = None
    index_i: float | None = None
    herfindahl: float | None = None
    cv_squared: float | None = None
    e2: float | None = None
    renyi2: float | None = None
    mean: float | None = None
    second_moment: float | None = None
    signed: bool = False
    metadata: dict = field(default_factory=dict)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls) if f.name not in ("n", "signed", "metadata")]

    def as_dict(self) -> dict:
        out = {"n": self.n, "signed": self.signed}
        out.update({k: getattr(self, k) for k in self.field_names() if getattr(self, k) is not None})
        if self.metadata:
            out["metadata"] = dict(self.metadata)
        return out


def resolve_indices(names: Iterable[str]) -> list[str]:
    out = []
    for name in names:
        key = name.strip().lower()
        if key not in INDEX_ALIASES:
            raise KeyError(f"unknown index {name!r}; choose from {sorted(set(INDEX_ALIASES))}")
        if INDEX_ALIASES[key] not in out:
            out.append(INDEX_ALIASES[key])
    return out


def index_report(sample, indices: Iterable[str] | None = None, *, signed: bool = False) -> IndexReport:
    """Compute an :class:`IndexReport`.

    With ``indices=None`` every field is attempted; fields whose definition
    does not apply (e.g. ``herfindahl`` on signed data) are left ``None``,
    except the classic Gini, whose failure is raised so the caller learns to
    switch to ``signed=True``. Explicitly requested fields always raise.
    With ``signed=True`` the ``gini`` field holds the signed Gini.
    """
    s = as_sample(sample)
    explicit = indices is not None
    wanted = resolve_indices(indices) if explicit else IndexReport.field_names()

    def _renyi2(x):
        return -math.log(herfindahl(x))

    compute = {
        "gini": gini_signed if signed else gini_sorted,
        "gini_signed": gini_signed,
        "gmd": gmd,
        "index_i": index_i,
        "herfindahl": herfindahl,
        "cv_squared": cv_squared,
        "e2": lambda x: generalized_entropy(x, 2),
        "renyi2": _renyi2,
        "mean": mean,
        "second_moment": second_moment,
    }
    report = IndexReport(n=s.n, signed=signed)
    for name in wanted:
        try:
            setattr(report, name, compute[name](s))
        except (NonPositiveMean, NonPositiveSum, NonPositiveValue, ZeroMean):
            if explicit or name == "gini":
                raise
    return report
