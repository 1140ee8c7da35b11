"""Reference distributions: seeded samplers and closed-form index values.

Sampling uses NumPy's PCG64 bit generator. Uniforms are drawn on the open
interval (0, 1) as ``(k + 1/2) / 2**52`` with ``k`` a uniform 52-bit integer,
so inverse-CDF transforms never see 0 or 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidSpec
from .indices import Sample

GENERATOR = "numpy.random.PCG64"

_MASK64 = (1 << 64) - 1

# family name -> (ordered parameter names, defaults)
FAMILIES: dict[str, tuple[tuple[str, ...], dict[str, float]]] = {
    "pareto": (("alpha", "xmin"), {"xmin": 1.0}),
    "exponential": (("mean",), {"mean": 1.0}),
    "shifted_exponential": (("mean", "shift"), {"mean": 1.0, "shift": 0.0}),
    "bernoulli": (("p",), {}),
    "gaussian": (("mu", "sigma"), {"mu": 0.0, "sigma": 1.0}),
    "exp_of_exponential": (("mean",), {}),
}

_ALIASES = {"x_min": "xmin", "normal": "gaussian", "exp_exponential": "exp_of_exponential"}


@dataclass(frozen=True)
class DistributionSpec:
    """A parametric family plus its parameters.

    The canonical text form is ``family:name=value,...``, for instance
    ``pareto:alpha=1.5,xmin=1``.
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        family = _ALIASES.get(self.family.lower(), self.family.lower())
        if family not in FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        names, defaults = FAMILIES[family]
        params = dict(defaults)
        for key, value in self.params.items():
            key = _ALIASES.get(key, key)
            if key not in names:
                raise InvalidSpec(f"{family} takes parameters {names}, got {key!r}")
            params[key] = float(value)
        missing = [n for n in names if n not in params]
        if missing:
            raise InvalidSpec(f"{family} is missing parameters {missing}")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", {n: params[n] for n in names})
        self._validate()

    def _validate(self):
        p = self.params
        if not all(math.isfinite(v) for v in p.values()):
            raise InvalidSpec("parameters must be finite")
        f = self.family
        if f == "pareto" and not (p["alpha"] > 0 and p["xmin"] > 0):
            raise InvalidSpec("pareto needs alpha > 0 and xmin > 0")
        if f in ("exponential", "exp_of_exponential") and not p["mean"] > 0:
            raise InvalidSpec(f"{f} needs mean > 0")
        if f == "shifted_exponential" and not (p["mean"] > 0 and p["shift"] >= 0):
            raise InvalidSpec("shifted_exponential needs mean > 0 and shift >= 0")
        if f == "bernoulli" and not 0 < p["p"] < 1:
            raise InvalidSpec("bernoulli needs 0 < p < 1")
        if f == "gaussian" and not p["sigma"] > 0:
            raise InvalidSpec("gaussian needs sigma > 0")

    def __getitem__(self, key):
        return self.params[key]

    def __str__(self):
        return self.family + ":" + ",".join(f"{k}={v!r}" for k, v in self.params.items())

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        family, _, rest = text.strip().partition(":")
        params = {}
        for item in filter(None, (t.strip() for t in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq:
                raise InvalidSpec(f"malformed parameter {item!r} in {text!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise InvalidSpec(f"non-numeric value for {key.strip()!r} in {text!r}") from None
        return cls(family, params)

    @property
    def tail_alpha(self) -> float | None:
        """Pareto tail exponent, when the family is Pareto-distributed."""
        if self.family == "pareto":
            return self.params["alpha"]
        if self.family == "exp_of_exponential":
            return 1.0 / self.params["mean"]
        return None


def pareto(alpha: float, xmin: float = 1.0) -> DistributionSpec:
    return DistributionSpec("pareto", {"alpha": alpha, "xmin": xmin})


def exponential(mean: float = 1.0) -> DistributionSpec:
    return DistributionSpec("exponential", {"mean": mean})


# -- seeding ------------------------------------------------------------------


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 output function (Steele, Lea & Flood)."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(master: int, index: int) -> int:
    """Derive the seed of stream ``index`` from a master seed.

    ``splitmix64(splitmix64(master) ^ index)``, all arithmetic modulo 2**64.
    """
    return splitmix64(splitmix64(master & _MASK64) ^ (index & _MASK64))


def open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    k = rng.integers(0, 1 << 52, size=n, dtype=np.int64)
    return (k + 0.5) * 2.0**-52


def draw(spec: DistributionSpec, n: int, seed: int) -> np.ndarray:
    """Raw float array of ``n`` draws; deterministic in ``(spec, n, seed)``."""
    if n < 1:
        raise InvalidSpec("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed & _MASK64))
    p = spec.params
    f = spec.family
    if f == "gaussian":
        return p["mu"] + p["sigma"] * rng.standard_normal(n)
    u = open_uniform(rng, n)
    if f == "pareto":
        return p["xmin"] * u ** (-1.0 / p["alpha"])
    if f == "exponential":
        return -p["mean"] * np.log(u)
    if f == "shifted_exponential":
        return p["shift"] - p["mean"] * np.log(u)
    if f == "exp_of_exponential":
        return np.exp(-p["mean"] * np.log(u))
    if f == "bernoulli":
        return (u < p["p"]).astype(np.float64)
    raise InvalidSpec(f"no sampler for {f!r}")  # pragma: no cover


def sample(spec: DistributionSpec, n: int, seed: int) -> Sample:
    return Sample(draw(spec, n, seed))


# -- closed forms -------------------------------------------------------------


class Status(str, Enum):
    EXACT = "exact"
    LIMIT_ONLY = "limit_only"  # N -> infinity limit of the estimator
    BOUNDARY_CASE = "boundary_case"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class TheoreticalIndices:
    gini: float | None
    index_i: float | None
    gini_status: Status = Status.EXACT
    index_i_status: Status = Status.EXACT
    gini_kind: str = "classic"
    notes: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "gini": self.gini,
            "gini_status": self.gini_status.value,
            "gini_kind": self.gini_kind,
            "index_i": self.index_i,
            "index_i_status": self.index_i_status.value,
            "notes": list(self.notes),
        }


def pareto_moment(alpha: float, xmin: float, mu: float) -> float:
    """``E[X**mu]`` of a Pareto; ``math.inf`` (divergent) when ``mu >= alpha``."""
    if not (alpha > 0 and xmin > 0 and mu > 0):
        raise InvalidSpec("need alpha > 0, xmin > 0, mu > 0")
    if mu >= alpha:
        return math.inf
    return alpha * xmin**mu / (alpha - mu)


def pareto_gini(alpha: float) -> float:
    return 1.0 / (2 * alpha - 1) if alpha > 1 else 1.0


def pareto_index_i(alpha: float) -> float:
    return 1.0 / (alpha - 1) ** 2 if alpha > 2 else 1.0


def _pareto_theory(alpha: float) -> TheoreticalIndices:
    notes = []
    if alpha > 1:
        g, gs = pareto_gini(alpha), Status.EXACT
    else:
        g, gs = 1.0, Status.LIMIT_ONLY
        notes.append("alpha <= 1: infinite mean, G_N -> 1")
    if alpha > 2:
        i, is_ = pareto_index_i(alpha), Status.EXACT
    elif alpha == 2:
        i, is_ = 1.0, Status.BOUNDARY_CASE
        notes.append("alpha = 2: infinite variance at the Gaussian-domain boundary; limit 1 assumed")
    else:
        i, is_ = 1.0, Status.LIMIT_ONLY
        notes.append("alpha < 2: infinite variance, I_N -> 1")
    return TheoreticalIndices(g, i, gs, is_, notes=tuple(notes))


def _std_normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def theoretical_indices(spec: DistributionSpec) -> TheoreticalIndices:
    """Population Gini and ``I`` for ``spec``, with the status of each value."""
    p = spec.params
    f = spec.family
    if f in ("pareto", "exp_of_exponential"):
        return _pareto_theory(spec.tail_alpha)
    if f == "exponential":
        return TheoreticalIndices(0.5, 0.5)
    if f == "shifted_exponential":
        m, s = p["mean"], p["shift"]
        return TheoreticalIndices(0.5 * m / (m + s), m * m / (m * m + (m + s) ** 2))
    if f == "bernoulli":
        return TheoreticalIndices(1 - p["p"], 1 - p["p"])
    if f == "gaussian":
        mu, sigma = p["mu"], p["sigma"]
        half_mean_diff = sigma / math.sqrt(math.pi)
        z = mu / sigma
        mean_abs = sigma * math.sqrt(2 / math.pi) * math.exp(-z * z / 2) + mu * (1 - 2 * _std_normal_cdf(-z))
        return TheoreticalIndices(
            half_mean_diff / mean_abs,
            sigma**2 / (mu**2 + sigma**2),
            gini_kind="signed",
            notes=("gini is the signed (mean-absolute-value) Gini",),
        )
    raise InvalidSpec(f"no closed form for {f!r}")  # pragma: no cover


def crossover_alpha() -> float:
    """Pareto tail exponent above 2 where ``I(alpha) = G(alpha)``: the root of ``(a-1)**2 = 2a - 1``."""
    return 2.0 + math.sqrt(2.0)
