from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ineqindex.decomposition import GroupedSample, decompose_e2, decompose_i
from ineqindex.errors import EmptyGroup, InvalidSample, NonPositiveMean, ZeroTotal
from ineqindex.indices import generalized_entropy, index_i

groups_strategy = st.lists(
    st.lists(st.one_of(st.just(0.0), st.floats(1e-2, 1e4)), min_size=1, max_size=15),
    min_size=1,
    max_size=8,
).filter(lambda gs: any(v for g in gs for v in g))


class TestWorkedExample:
    groups = [[1, 3], [2, 6]]

    def test_oracle(self):
        total, within, between = oracles.decomposition(self.groups)
        assert (total, within, between) == (Fraction(7, 36), Fraction(5, 36), Fraction(1, 18))
        assert oracles.index_i([1, 3, 2, 6]) == Fraction(7, 25)

    def test_matches_oracle(self):
        res = decompose_i(GroupedSample.from_groups(self.groups))
        assert res.total_e2 == float(Fraction(7, 36))
        assert res.between_e2 == float(Fraction(1, 18))
        assert res.within_e2 == pytest.approx(5 / 36, rel=1e-15)
        assert res.total_i == pytest.approx(0.28, rel=1e-15)
        assert res.within_share == pytest.approx(5 / 7, rel=1e-14)
        assert res.between_share == pytest.approx(2 / 7, rel=1e-14)

    def test_weights(self):
        res = decompose_e2(GroupedSample.from_groups(self.groups))
        w = {g.group: g.weight for g in res.per_group}
        assert w[0] == pytest.approx(0.5 * (2 / 3) ** 2)
        assert w[1] == pytest.approx(0.5 * (4 / 3) ** 2)
        within = sum(g.weight * g.e2 for g in res.per_group)
        assert within == pytest.approx(res.within_e2, rel=1e-15)


class TestEdgeCases:
    def test_identical_constant_groups(self):
        res = decompose_i(GroupedSample.from_groups([[2, 2], [2, 2, 2]]))
        assert (res.total_e2, res.within_e2, res.between_e2) == (0.0, 0.0, 0.0)
        assert res.within_share is None
        with pytest.raises(ZeroTotal):
            decompose_i(GroupedSample.from_groups([[2, 2], [2]]), strict=True)

    def test_single_group(self):
        res = decompose_i(GroupedSample([1, 4, 9], ["a"] * 3))
        assert res.between_e2 == 0.0 and res.between_share == 0.0
        assert res.within_e2 == pytest.approx(res.total_e2, rel=1e-15)

    def test_singletons(self):
        res = decompose_i(GroupedSample([1, 4, 9], ["a", "b", "c"]))
        assert res.within_e2 == 0.0 and res.within_share == 0.0

    def test_all_zero_group(self):
        res = decompose_e2(GroupedSample([0, 0, 1, 3], ["z", "z", "p", "p"]))
        z = next(g for g in res.per_group if g.group == "z")
        assert z.e2 is None and z.weight == 0.0
        assert res.within_e2 + res.between_e2 == pytest.approx(res.total_e2, rel=1e-12)

    def test_errors(self):
        with pytest.raises(EmptyGroup):
            GroupedSample.from_groups([[1.0], []])
        with pytest.raises(InvalidSample):
            GroupedSample([1.0, 2.0], ["a"])
        with pytest.raises(NonPositiveMean):
            decompose_e2(GroupedSample([0.0, 0.0], ["a", "b"]))


class TestProperties:
    @given(groups_strategy)
    def test_additivity(self, groups):
        res = decompose_e2(GroupedSample.from_groups(groups))
        assert res.within_e2 + res.between_e2 == pytest.approx(res.total_e2, rel=1e-10, abs=1e-15)
        exact = oracles.decomposition(groups)
        assert res.total_e2 == pytest.approx(float(exact[0]), rel=1e-10, abs=1e-15)
        assert res.between_e2 == pytest.approx(float(exact[2]), rel=1e-10, abs=1e-15)

    @given(groups_strategy)
    def test_total_matches_core(self, groups):
        gs = GroupedSample.from_groups(groups)
        res = decompose_i(gs)
        assert res.total_e2 == pytest.approx(generalized_entropy(gs.values, 2), rel=1e-10, abs=1e-15)
        assert res.total_i == pytest.approx(index_i(gs.values), abs=1e-10)

    @given(groups_strategy, st.floats(1e-3, 1e3))
    def test_scale_invariance(self, groups, lam):
        a = decompose_e2(GroupedSample.from_groups(groups))
        b = decompose_e2(GroupedSample.from_groups([[lam * v for v in g] for g in groups]))
        for x, y in [(a.total_e2, b.total_e2), (a.within_e2, b.within_e2), (a.between_e2, b.between_e2)]:
            assert y == pytest.approx(x, rel=1e-9, abs=1e-14)

    @given(groups_strategy)
    def test_merging_kills_between(self, groups):
        gs = GroupedSample.from_groups(groups)
        merged = decompose_e2(GroupedSample(gs.values, [0] * gs.values.size))
        assert merged.between_e2 == 0.0
        assert merged.total_e2 == pytest.approx(decompose_e2(gs).total_e2, rel=1e-12, abs=1e-15)

    def test_mean_preserving_relabel(self, rng):
        # two groups with equal means; swapping members that keep each mean fixed
        a = [1.0, 5.0, 3.0]
        b = [2.0, 4.0, 3.0]
        before = decompose_e2(GroupedSample.from_groups([a, b]))
        after = decompose_e2(GroupedSample.from_groups([[1.0, 5.0, 3.0], [4.0, 2.0, 3.0]]))
        swapped = decompose_e2(GroupedSample.from_groups([[2.0, 4.0, 3.0], [1.0, 5.0, 3.0]]))
        assert before.between_e2 == after.between_e2 == swapped.between_e2

    def test_random_large(self, rng):
        x = rng.pareto(1.5, 10_000) + 1
        labels = rng.integers(0, 50, x.size)
        res = decompose_e2(GroupedSample(x, labels))
        assert res.within_e2 + res.between_e2 == pytest.approx(res.total_e2, rel=1e-10)
        assert np.isclose(sum(g.size for g in res.per_group), x.size)
