"""Monte Carlo experiments on the finite-sample behaviour of G_N and I_N.

Each replication draws its own sample from a seed derived as
``mix_seed(master_seed, replication)`` (or, for size grids,
``mix_seed(mix_seed(master_seed, grid_position), replication)``), so results do
not depend on execution order and replications may run in worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import distributions as dist
from .distributions import DistributionSpec, Status, mix_seed
from .errors import InequalityError, InvalidAlpha, InvalidConfig, OutOfRange
from .indices import Sample, equality_fraction, gini_signed, gini_sorted, index_i

SUMMARY_QUANTILES = (0.25, 0.5, 0.75)


@dataclass
class ExperimentConfig:
    """Parameters of one experiment.

    ``slope_tol`` and ``mean_tol`` are the tolerances used for the claim
    verdicts; they were calibrated on pilot runs (R = 50, grid 1e3..1e6).
    """

    spec: DistributionSpec
    sample_size: int = 100_000
    replications: int = 100
    master_seed: int = 0
    size_grid: tuple[int, ...] | None = None
    slope_tol: float = 0.15
    ratio_limit: float = 3.0
    mean_tol: float = 0.01
    bootstrap: int = 200
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.spec, str):
            self.spec = DistributionSpec.parse(self.spec)
        if self.sample_size < 2:
            raise InvalidConfig("sample_size must be >= 2")
        if self.replications < 1:
            raise InvalidConfig("replications must be >= 1")
        if self.size_grid is not None:
            grid = tuple(int(n) for n in self.size_grid)
            if len(grid) < 2 or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 2:
                raise InvalidConfig("size_grid must be strictly increasing with at least two sizes >= 2")
            self.size_grid = grid


@dataclass
class Row:
    replication: int
    seed: int
    n: int
    values: dict[str, float]


@dataclass
class SummaryStats:
    estimator: str
    n: int
    count: int
    mean: float
    sd: float
    min: float
    q25: float
    median: float
    q75: float
    max: float


@dataclass
class SlopeFit:
    """OLS fit of log(median) on log(N), with a bootstrap percentile band."""

    slope: float
    intercept: float
    r2: float
    ci_low: float
    ci_high: float


@dataclass
class Claim:
    name: str
    observed: float
    expected: float
    tol: float
    relation: str  # "approx", "lt", "gt", "increasing"
    passed: bool

    def verdict(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        exp = {"lt": "<", "gt": ">", "increasing": ">"}.get(self.relation, "")
        return f"{self.name}: {status} (observed={self.observed:.6g}, expected={exp}{self.expected:.6g}, tol={self.tol:g})"


def _approx(name, observed, expected, tol) -> Claim:
    return Claim(name, float(observed), float(expected), tol, "approx", bool(abs(observed - expected) <= tol))


def _less(name, observed, bound) -> Claim:
    return Claim(name, float(observed), float(bound), 0.0, "lt", bool(observed < bound))


@dataclass
class ExperimentResult:
    experiment: str
    spec: DistributionSpec | None
    rows: list[Row]
    summary: list[SummaryStats] = field(default_factory=list)
    slopes: dict[str, SlopeFit] = field(default_factory=dict)
    derived: dict[str, float] = field(default_factory=dict)
    claims: list[Claim] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def values(self, estimator: str, n: int | None = None) -> np.ndarray:
        return np.array(
            [r.values[estimator] for r in self.rows if estimator in r.values and (n is None or r.n == n)]
        )

    def stats(self, estimator: str, n: int | None = None) -> SummaryStats:
        for s in self.summary:
            if s.estimator == estimator and (n is None or s.n == n):
                return s
        raise KeyError((estimator, n))

    def summary_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "spec": None if self.spec is None else str(self.spec),
            "metadata": self.metadata,
            "summary": [asdict(s) for s in self.summary],
            "slopes": {k: asdict(v) for k, v in self.slopes.items()},
            "derived": self.derived,
            "claims": [asdict(c) for c in self.claims],
        }


def summarize(rows: Sequence[Row]) -> list[SummaryStats]:
    """Per (estimator, n) statistics; ``sd`` uses ``ddof=1`` (0 for a single row)."""
    groups: dict[tuple[str, int], list[float]] = {}
    for r in rows:
        for est, v in r.values.items():
            groups.setdefault((est, r.n), []).append(v)
    out = []
    for (est, n), vals in groups.items():
        a = np.asarray(vals, dtype=np.float64)
        q25, med, q75 = np.quantile(a, SUMMARY_QUANTILES)
        out.append(
            SummaryStats(
                est, n, a.size, math.fsum(vals) / a.size,
                float(a.std(ddof=1)) if a.size > 1 else 0.0,
                float(a.min()), float(q25), float(med), float(q75), float(a.max()),
            )
        )
    return out


# -- replication machinery ----------------------------------------------------


def _gini_any(x: Sample) -> float:
    return gini_sorted(x) if x.sorted[0] >= 0 else gini_signed(x)


def _stability_values(spec: DistributionSpec, n: int, seed: int) -> dict[str, float]:
    x = dist.sample(spec, n, seed)
    vals = {"gini": _gini_any(x), "index_i": index_i(x), "one_minus_i": equality_fraction(x)}
    if x.sorted[0] >= 0:
        vals["max_share"] = float(x.sorted[-1]) / x.total
    return vals


def _big_jump_values(spec: DistributionSpec, n: int, seed: int) -> dict[str, float]:
    x = dist.sample(spec, n, seed)
    top = float(x.sorted[-1])
    return {"sum_over_max": x.total / top, "max_share": top / x.total}


def _prop1_values(spec: DistributionSpec, n: int, seed: int) -> dict[str, float]:
    z = dist.sample(spec, n, seed)
    ez = Sample(np.exp(z.values))
    return {
        "gini_z": gini_sorted(z),
        "index_i_z": index_i(z),
        "gini_exp_z": gini_sorted(ez),
        "index_i_exp_z": index_i(ez),
    }


def _task(args):
    fn, spec_text, n, seed, rep = args
    spec = DistributionSpec.parse(spec_text)
    try:
        values = fn(spec, n, seed)
    except InequalityError as exc:
        raise type(exc)(f"replication {rep} (seed {seed}): {exc}") from exc
    return Row(rep, seed, n, values)


def _run(fn: Callable, spec: DistributionSpec, plan: list[tuple[int, int, int]], workers: int) -> list[Row]:
    """Evaluate ``fn`` for every ``(n, seed, replication)`` in ``plan``; rows come back in plan order."""
    tasks = [(fn, str(spec), n, seed, rep) for n, seed, rep in plan]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [_task(t) for t in tasks]


def _metadata(config: ExperimentConfig | None = None, **extra) -> dict:
    meta = {"generator": dist.GENERATOR, "seed_mixing": "splitmix64(splitmix64(master) ^ index)"}
    if config is not None:
        meta.update(
            spec=str(config.spec),
            sample_size=config.sample_size,
            replications=config.replications,
            master_seed=config.master_seed,
            size_grid=list(config.size_grid) if config.size_grid else None,
        )
    meta.update(extra)
    return meta


# -- experiments --------------------------------------------------------------


def run_stability(config: ExperimentConfig) -> ExperimentResult:
    """Dispersion of G_N and I_N across independent samples of one size."""
    plan = [(config.sample_size, mix_seed(config.master_seed, r), r) for r in range(config.replications)]
    rows = _run(_stability_values, config.spec, plan, config.workers)
    result = ExperimentResult("stability", config.spec, rows, summarize(rows), metadata=_metadata(config))

    g, i = result.stats("gini"), result.stats("index_i")
    result.derived.update(mean_gini=g.mean, sd_gini=g.sd, mean_index_i=i.mean, sd_index_i=i.sd)
    alpha = config.spec.tail_alpha
    if alpha is not None and alpha <= 1:
        result.claims.append(_less("sd(I)<sd(G)", i.sd, g.sd))
    elif alpha is not None and alpha > 2:
        result.claims.append(_less("sd(G)<sd(I)", g.sd, i.sd))
    theory = dist.theoretical_indices(config.spec)
    if theory.gini_status is Status.EXACT:
        result.claims.append(_approx("mean(G_N)", g.mean, theory.gini, config.mean_tol))
    if theory.index_i_status is Status.EXACT:
        result.claims.append(_approx("mean(I_N)", i.mean, theory.index_i, config.mean_tol))
    return result


def expected_rate(alpha: float) -> float | None:
    """Exponent of N in the decay of 1 - I_N for a Pareto; ``None`` at alpha = 1 (log-corrected)."""
    if alpha < 1:
        return -1.0
    if alpha == 1:
        return None
    if alpha < 2:
        return 1.0 - 2.0 / alpha
    return 0.0


def fit_loglog(ns: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares line through ``(log n, log y)``: slope, intercept, R^2."""
    lx, ly = np.log(np.asarray(ns, float)), np.log(np.asarray(ys, float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def run_convergence(config: ExperimentConfig) -> ExperimentResult:
    """Decay of median(1 - I_N) along ``config.size_grid`` for a Pareto."""
    alpha = config.spec.tail_alpha
    if alpha is None:
        raise InvalidConfig("convergence experiments need a Pareto-distributed spec")
    grid = config.size_grid
    if grid is None:
        raise InvalidConfig("convergence experiments need a size_grid")
    if math.log10(grid[-1] / grid[0]) < 1.5:
        raise InvalidConfig("size_grid must span at least 1.5 decades")

    plan = [
        (n, mix_seed(mix_seed(config.master_seed, j), r), r)
        for j, n in enumerate(grid)
        for r in range(config.replications)
    ]
    rows = _run(_stability_values, config.spec, plan, config.workers)
    result = ExperimentResult("convergence", config.spec, rows, summarize(rows), metadata=_metadata(config))

    ns = np.array(grid, dtype=np.float64)
    per_n = [result.values("one_minus_i", n) for n in grid]
    medians = np.array([np.median(v) for v in per_n])
    slope, intercept, r2 = fit_loglog(ns, medians)

    rng = np.random.Generator(np.random.PCG64(mix_seed(config.master_seed, 1 << 40)))
    boot = np.empty(config.bootstrap)
    for b in range(config.bootstrap):
        meds = [np.median(v[rng.integers(0, v.size, v.size)]) for v in per_n]
        boot[b] = fit_loglog(ns, meds)[0]
    lo, hi = np.quantile(boot, [0.025, 0.975]) if config.bootstrap else (math.nan, math.nan)
    result.slopes["one_minus_i"] = SlopeFit(slope, intercept, r2, float(lo), float(hi))

    log_ratio = ns * medians / np.log(ns) ** 2
    spread = float(log_ratio.max() / log_ratio.min())
    result.derived.update(slope=slope, log_corrected_spread=spread)
    for n, m in zip(grid, medians):
        result.derived[f"median_one_minus_i@{n}"] = float(m)

    rate = expected_rate(alpha)
    if rate is None:
        result.claims.append(_less("N*median(1-I_N)/log(N)^2 max/min", spread, config.ratio_limit))
    else:
        result.derived["expected_slope"] = rate
        result.claims.append(_approx("slope of median(1-I_N)", slope, rate, config.slope_tol))
    return result


def run_big_jump(alpha: float, n: int, replications: int, seed: int, *, workers: int = 1) -> ExperimentResult:
    """Sum-to-maximum ratio of Pareto samples with ``0 < alpha < 1``.

    ``derived["mean_ratio"]`` is the replication mean of ``sum/max`` and
    ``derived["theory"]`` its large-N limit ``1/(1 - alpha)``.
    """
    if not 0 < alpha < 1:
        raise InvalidAlpha(f"the one-big-jump limit needs 0 < alpha < 1, got {alpha}")
    config = ExperimentConfig(dist.pareto(alpha), n, replications, seed)
    plan = [(n, mix_seed(seed, r), r) for r in range(replications)]
    rows = _run(_big_jump_values, config.spec, plan, workers)
    result = ExperimentResult("bigjump", config.spec, rows, summarize(rows), metadata=_metadata(config))
    ratio, share = result.stats("sum_over_max"), result.stats("max_share")
    theory = 1.0 / (1.0 - alpha)
    result.derived.update(
        mean_ratio=ratio.mean,
        theory=theory,
        mean_max_share=share.mean,
        se_max_share=share.sd / math.sqrt(share.count),
    )
    result.claims += [
        _approx("mean(sum/max)", ratio.mean, theory, 0.15),
        _approx("mean(max/sum)", share.mean, 1.0 - alpha, 0.08),
    ]
    return result


def run_prop1_check(
    replications: int,
    n: int,
    seed: int,
    *,
    grid: Sequence[int] = (1_000, 10_000, 100_000),
    workers: int = 1,
) -> ExperimentResult:
    """Compare G and I on Z ~ Exponential(mean 2/3) and on exp(Z), a Pareto with alpha 1.5.

    Rows at size ``n`` give the headline comparison; rows at each size in
    ``grid`` track the drift of I_N(exp Z) towards 1.
    """
    spec = dist.exponential(2.0 / 3.0)
    sizes = sorted(set(int(m) for m in grid) | {int(n)})
    plan = [(m, mix_seed(mix_seed(seed, j), r), r) for j, m in enumerate(sizes) for r in range(replications)]
    rows = _run(_prop1_values, spec, plan, workers)
    result = ExperimentResult(
        "prop1", spec, rows, summarize(rows), metadata=_metadata(None, n=n, replications=replications, master_seed=seed, grid=list(grid))
    )
    med = {k: result.stats(k, n).median for k in ("gini_z", "index_i_z", "gini_exp_z", "index_i_exp_z")}
    result.derived.update({f"median_{k}": v for k, v in med.items()})
    drift = [result.stats("index_i_exp_z", m).median for m in sorted(set(int(m) for m in grid))]
    increasing = all(b > a for a, b in zip(drift, drift[1:]))
    result.derived["index_i_exp_z_increasing"] = float(increasing)
    result.claims += [
        _approx("G(Z)", med["gini_z"], 0.5, 0.01),
        _approx("G(exp Z)", med["gini_exp_z"], 0.5, 0.05),
        _approx("I(Z)", med["index_i_z"], 0.5, 0.01),
        Claim("I_N(exp Z) rises with N", drift[-1], drift[0], 0.0, "increasing", increasing),
    ]
    return result


# -- top-share approximation --------------------------------------------------


def atkinson_approx(gini_rest: float, top_share: float) -> float:
    """Gini of a population whose infinitesimal top group holds share ``top_share``."""
    if not (0 <= gini_rest <= 1 and 0 <= top_share <= 1):
        raise OutOfRange("both arguments must lie in [0, 1]")
    return gini_rest * (1 - top_share) + top_share


@dataclass(frozen=True)
class TopShareCheck:
    gini_full: float
    gini_rest: float
    top_share: float
    approx: float


def atkinson_reconstruction(sample) -> TopShareCheck:
    """Drop the largest observation and rebuild the full-sample Gini from the rest."""
    x = sample if isinstance(sample, Sample) else Sample(sample)
    rest = Sample(x.sorted[:-1])
    share = float(x.sorted[-1]) / x.total
    g_rest = gini_sorted(rest)
    return TopShareCheck(gini_sorted(x), g_rest, share, atkinson_approx(g_rest, share))
