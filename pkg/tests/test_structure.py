from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tricap import (
    GuardExceededError,
    PointSet,
    Subspace,
    TritVector,
    bsg_probe,
    build_levels,
    comity_scan,
    decompose_fibers,
    delta_g,
    fiber_plancherel_check,
    greedy_random_capset,
    komity,
    komity_reference,
    random_point_set,
    span_hull,
)

import oracles
from conftest import tuples_of

small_sets = st.tuples(st.integers(3, 5), st.integers(0, 99_999)).map(
    lambda t: random_point_set(t[0], 2 + t[1] % min(30, 3 ** t[0] - 2), t[1])
)


class TestLevels:
    @given(small_sets)
    def test_bands_partition_differences(self, ps):
        levels = build_levels(ps)
        ref = oracles.naive_diff_counts(tuples_of(ps))
        seen = {}
        total_pairs = 0
        for band in levels:
            total_pairs += band.pair_count
            for v in band.diffs.vectors():
                d = oracles.digits(str(v))
                assert d not in seen
                m = ref[d]
                assert band.m_lo <= m < 2 * band.m_lo
                seen[d] = m
        assert total_pairs == ps.size**2
        assert seen.keys() == ref.keys()

    @given(small_sets)
    def test_heaviest_band(self, ps):
        levels = build_levels(ps)
        top = levels.heaviest()
        assert top.pair_count == max(b.pair_count for b in levels)

    def test_band_exponent_subspace(self):
        w = Subspace.span([TritVector.unit(4, 0), TritVector.unit(4, 1)])
        ps = PointSet.from_vectors(w.enumerate_points())
        levels = build_levels(ps)
        # every difference of a subspace has multiplicity |S|, one band
        assert len(list(levels)) == 1
        band = levels.heaviest()
        assert band.m_lo <= ps.size < 2 * band.m_lo
        assert band.diffs.size == ps.size


class TestDeltaG:
    @given(small_sets)
    def test_neighborhood_size_is_multiplicity(self, ps):
        levels = build_levels(ps)
        band = levels.heaviest()
        ref = oracles.naive_diff_counts(tuples_of(ps))
        for v in band.diffs.vectors()[:6]:
            hood = delta_g(band, v)
            assert hood.size == ref[oracles.digits(str(v))]
            for a in hood.vectors():
                assert ps.contains(a) and ps.contains(a - v)

    def test_rejects_foreign_difference(self):
        ps = PointSet.from_strings(["000", "001"])
        band = build_levels(ps).heaviest()
        with pytest.raises(ValueError):
            delta_g(band, TritVector.from_string("111"))


class TestKomity:
    @given(small_sets)
    def test_identity_against_double_loop(self, ps):
        band = build_levels(ps).heaviest()
        fast = komity(band)
        assert fast == komity_reference(band)
        hoods = [
            {oracles.digits(str(a)) for a in delta_g(band, v).vectors()}
            for v in band.diffs.vectors()
        ]
        slow = sum(len(hx & hy) for hx in hoods for hy in hoods)
        assert fast == slow

    @given(small_sets)
    def test_comity_masses_account_for_komity(self, ps):
        band = build_levels(ps).heaviest()
        bands = comity_scan(band)
        assert sum(b.mass for b in bands) == komity(band)
        for b in bands:
            assert b.size_lo >= 1
            assert b.pair_count >= 1

    def test_reference_guard(self):
        ps = greedy_random_capset(7, 3)
        band = max(build_levels(ps), key=lambda b: b.diffs.size)
        if band.diffs.size > 256:
            with pytest.raises(GuardExceededError):
                komity_reference(band)


class TestHull:
    @given(small_sets)
    def test_doubling_matches_reference(self, ps):
        from tricap import doubling_ratio

        pts = tuples_of(ps)
        diffs = {oracles.vec_sub(a, b) for a in pts for b in pts}
        assert doubling_ratio(ps) == Fraction(len(diffs), ps.size)

    @given(small_sets)
    def test_span_hull(self, ps):
        span, fill = span_hull(ps)
        assert span.dim == oracles.naive_rank(tuples_of(ps))
        assert fill == Fraction(3**span.dim, ps.size)
        for v in ps.vectors():
            assert span.contains(v)


class TestFibers:
    @given(small_sets)
    def test_fibers_partition_set(self, ps):
        h = Subspace.span([TritVector.unit(ps.n, 0), TritVector.unit(ps.n, 1)])
        dec = decompose_fibers(ps, h)
        assert len(dec.fibers) == 3**h.dim
        members = []
        for rep, fiber in dec.items():
            for a in fiber.vectors():
                members.append(str(a))
                # same dot profile against the keying basis as the rep
                for b in h.basis:
                    assert b.dot(a) == b.dot(rep)
        assert sorted(members) == [str(v) for v in ps.vectors()]

    def test_empty_fibers_kept(self):
        ps = PointSet.from_strings(["000"])
        h = Subspace.span([TritVector.unit(3, 0)])
        dec = decompose_fibers(ps, h)
        assert sorted(f.size for _, f in dec.items()) == [0, 0, 1]


class TestMartingale:
    @given(small_sets)
    def test_identity_matches_oracle(self, ps):
        h = Subspace.span([TritVector.unit(ps.n, 0)])
        k = Subspace.span([TritVector.unit(ps.n, 0), TritVector.unit(ps.n, 1)])
        rep = fiber_plancherel_check(ps, h, k)
        assert rep.holds
        lhs, rhs = oracles.naive_martingale_sides(
            tuples_of(ps),
            [oracles.digits("1" + "0" * (ps.n - 1))],
            [
                oracles.digits("1" + "0" * (ps.n - 1)),
                oracles.digits("01" + "0" * (ps.n - 2)),
            ],
            ps.n,
        )
        assert lhs == rhs
        assert rep.lhs == lhs

    def test_degenerate_k_equals_h(self):
        ps = random_point_set(4, 17, 6)
        h = Subspace.span([TritVector.unit(4, 2)])
        rep = fiber_plancherel_check(ps, h, h)
        assert rep.holds
        assert rep.raw_lhs == rep.raw_rhs

    def test_requires_containment(self):
        ps = random_point_set(4, 9, 2)
        h = Subspace.span([TritVector.unit(4, 0)])
        k = Subspace.span([TritVector.unit(4, 1)])
        with pytest.raises(ValueError):
            fiber_plancherel_check(ps, h, k)


class TestProbe:
    def test_probe_is_labeled_heuristic_and_bounded(self):
        b = greedy_random_capset(5, 21)
        c = greedy_random_capset(5, 22)
        probe = bsg_probe(b, c)
        assert 0 < probe.center_count <= 8
        assert probe.kernel_size > 0
        assert 0 <= probe.coverage <= 1
        assert probe.covered <= b.size
