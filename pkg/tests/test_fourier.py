import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tricap import (
    Eisenstein,
    GuardExceededError,
    PointSet,
    Subspace,
    TritVector,
    balanced_transform,
    count_line_solutions,
    cube_sum,
    eval_at,
    greedy_random_capset,
    inverse_table,
    load_table,
    plancherel_check,
    random_point_set,
    save_table,
    subspace_weight,
    transform_point_set,
    transform_table,
)

import oracles
from conftest import all_vectors, tuples_of

small_sets = st.tuples(st.integers(2, 4), st.integers(0, 99_999)).map(
    lambda t: random_point_set(t[0], 1 + t[1] % (3 ** t[0] - 1), t[1])
)


class TestTransform:
    @given(small_sets)
    def test_matches_reference_dft(self, ps):
        table = transform_point_set(ps)
        ref = oracles.naive_dft(tuples_of(ps), ps.n)
        for x, (p, q) in ref.items():
            v = TritVector.from_string(oracles.to_string(x))
            assert table.coefficient(v) == Eisenstein(p, q)

    @given(small_sets)
    def test_zero_frequency_is_size(self, ps):
        table = transform_point_set(ps)
        assert table.coefficient(TritVector.zero(ps.n)) == Eisenstein(ps.size, 0)

    @given(small_sets)
    def test_plancherel(self, ps):
        lhs, rhs = plancherel_check(ps)
        assert lhs == rhs == 3**ps.n * ps.size

    @given(small_sets)
    def test_conjugate_symmetry_under_negation(self, ps):
        table = transform_point_set(ps)
        for v in all_vectors(ps.n):
            assert table.coefficient(-v) == table.coefficient(v).conj()

    @given(small_sets)
    def test_inverse_recovers_indicator(self, ps):
        table = transform_point_set(ps)
        re, im = inverse_table(table)
        assert not im.any()
        bm = np.zeros(3**ps.n, dtype=np.int64)
        bm[ps.indices] = 1
        assert np.array_equal(re, bm)

    @given(small_sets)
    def test_eval_at_matches_table(self, ps):
        table = transform_point_set(ps)
        for v in all_vectors(ps.n)[:10]:
            assert eval_at(ps, v) == table.coefficient(v)

    def test_arbitrary_integer_function(self):
        # transform_table accepts any integer-valued function on the cube
        f = np.arange(27, dtype=np.int64) - 13
        table = transform_table(f, 3)
        total = int(f.sum())
        assert table.coefficient(TritVector.zero(3)) == Eisenstein(total, 0)
        re, im = inverse_table(table)
        assert not im.any()
        assert np.array_equal(re, f)

    def test_guard_refuses_large_n(self):
        ps = PointSet.from_strings(["0" * 15])
        with pytest.raises(GuardExceededError):
            transform_point_set(ps)


class TestCubeSum:
    @given(small_sets)
    def test_counts_lines_exactly(self, ps):
        cs = cube_sum(ps)
        assert cs == Eisenstein(3**ps.n * count_line_solutions(ps), 0)

    def test_capset_iff_minimal(self):
        cap = greedy_random_capset(5, 51)
        assert cube_sum(cap) == Eisenstein(3**5 * cap.size, 0)
        bad = PointSet.from_strings(["00000", "11111", "22222", "01210"])
        lines = count_line_solutions(bad)
        assert lines > bad.size
        assert cube_sum(bad) == Eisenstein(3**5 * lines, 0)


class TestBalanced:
    @given(small_sets)
    def test_balanced_zeroes_dc_term(self, ps):
        table = balanced_transform(ps)
        assert table.coefficient(TritVector.zero(ps.n)) == Eisenstein(0, 0)

    def test_balanced_scales_nonzero_terms(self):
        ps = random_point_set(3, 9, 4)
        plain = transform_point_set(ps)
        bal = balanced_transform(ps)
        for v in all_vectors(3):
            if not v.is_zero():
                assert bal.coefficient(v) == plain.coefficient(v) * 27


class TestSubspaceWeight:
    def test_hyperplane_weight(self):
        ps = random_point_set(4, 20, 8)
        table = transform_point_set(ps)
        w = Subspace.span([TritVector.from_string("1000")])
        direct = sum(
            table.coefficient(v).norm()
            for v in w.enumerate_points()
            if not v.is_zero()
        )
        assert subspace_weight(table, w) == direct
        assert (
            subspace_weight(table, w, skip_zero=False) == direct + ps.size**2
        )


class TestTableIO:
    def test_roundtrip(self, tmp_path):
        ps = random_point_set(5, 40, 99)
        table = transform_point_set(ps)
        path = str(tmp_path / "t.bin")
        save_table(table, path)
        back = load_table(path)
        assert back.n == table.n
        assert np.array_equal(back.p, table.p)
        assert np.array_equal(back.q, table.q)
