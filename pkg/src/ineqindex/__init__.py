"""Inequality measurement for heavy-tailed data: the Gini index next to var/E[X^2]."""

from . import distributions, lab
from .decomposition import GroupedSample, decompose_e2, decompose_i
from .distributions import DistributionSpec, crossover_alpha, pareto_moment, sample, theoretical_indices
from .errors import InequalityError
from .indices import (
    IndexReport,
    Sample,
    convert_from_i,
    cv_squared,
    equality_fraction,
    generalized_entropy,
    gini,
    gini_pairwise,
    gini_signed,
    gini_sorted,
    gmd,
    gmd_sensitivity,
    herfindahl,
    i_p_index,
    index_i,
    index_report,
    renyi_entropy,
    second_moment_bound_check,
    variance_sensitivity,
)

__version__ = "0.1.0"
