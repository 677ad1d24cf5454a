from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_force_homology, chain_complexes
from rfhkit.errors import ActionError, ComplexError
from rfhkit.z2complex import (
    DegreeAction,
    Gf2Matrix,
    GradedComplexZ2,
    PeriodicComplexZ2,
    complex_from_json,
    complex_to_json,
    euler_characteristic,
    homology_dims,
    is_complex,
    middle_period_homology,
    periodic_homology_dims,
    quotient_by_action,
    rank,
    rope_ladder_matrix,
    verify_complex,
)


def teapot() -> GradedComplexZ2:
    return GradedComplexZ2(0, (2, 2, 2), {2: Gf2Matrix.from_rows([[1, 1], [0, 0]]),
                                          1: Gf2Matrix.from_rows([[0, 1], [0, 1]])})


class TestGf2Matrix:
    def test_rank_identity(self):
        assert rank(Gf2Matrix.identity(2)) == 2

    def test_rank_all_ones(self):
        assert rank(Gf2Matrix.ones(3)) == 1

    def test_rank_rope_ladder_m3(self):
        A = rope_ladder_matrix(3)
        assert A.to_list() == [[1, 0, 1], [1, 1, 0], [0, 1, 1]]
        assert rank(A) == 2

    def test_rejects_non_binary_entries(self):
        with pytest.raises(ComplexError):
            Gf2Matrix.from_rows([[0, 2]])

    def test_product_and_sum_agree_with_numpy(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.integers(0, 2, size=(4, 5))
            b = rng.integers(0, 2, size=(5, 3))
            A, B = Gf2Matrix.from_array(a), Gf2Matrix.from_array(b)
            assert (A @ B).to_list() == ((a @ b) % 2).tolist()
            assert (A + A).is_zero()
            assert A.T.to_list() == a.T.tolist()

    @given(st.integers(1, 7), st.integers(1, 7), st.data())
    def test_rank_matches_real_rank_bound(self, r, c, data):
        rows = data.draw(st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r))
        m = Gf2Matrix.from_rows(rows)
        k = rank(m)
        assert 0 <= k <= min(r, c)
        assert rank(m.T) == k

    @pytest.mark.parametrize("m", range(1, 9))
    def test_rope_ladder_identities(self, m):
        A = rope_ladder_matrix(m)
        ones = Gf2Matrix.ones(m)
        assert rank(ones) == 1
        assert rank(A) == (m - 1 if m > 1 else 0)
        # every row of A has two ones (one for m = 1, where A = 0), so A kills the all-ones vector
        assert (A @ Gf2Matrix.ones(m, 1)).is_zero()
        assert (A @ ones).is_zero() and (ones @ A).is_zero()


class TestHomology:
    def test_teapot(self):
        assert homology_dims(teapot()) == {0: 1, 1: 0, 2: 1}

    def test_zero_differential(self):
        c = GradedComplexZ2(-1, (2, 0, 3), {})
        assert homology_dims(c) == {-1: 2, 0: 0, 1: 3}

    def test_sphere_s3(self):
        one = Gf2Matrix.from_rows([[1]])
        zero = Gf2Matrix.zeros(1, 1)
        c = GradedComplexZ2(0, (1, 1, 1, 1), {1: zero, 2: one, 3: zero})
        assert homology_dims(c) == {0: 1, 1: 0, 2: 0, 3: 1}

    def test_rejects_nonzero_square(self):
        one = Gf2Matrix.from_rows([[1]])
        c = GradedComplexZ2(0, (1, 1, 1), {1: one, 2: one})
        assert not is_complex(c)
        with pytest.raises(ComplexError):
            homology_dims(c)

    def test_rejects_bad_shape(self):
        with pytest.raises(ComplexError):
            GradedComplexZ2(0, (1, 2), {1: Gf2Matrix.from_rows([[1]])})

    @given(chain_complexes())
    def test_matches_brute_force(self, c):
        verify_complex(c)
        assert homology_dims(c) == brute_force_homology(c)

    @given(chain_complexes())
    def test_euler_characteristic(self, c):
        assert euler_characteristic(c.dims_by_degree()) == euler_characteristic(homology_dims(c))

    @given(chain_complexes())
    def test_json_round_trip(self, c):
        text = complex_to_json(c)
        back = complex_from_json(text)
        assert back == c
        assert complex_to_json(back) == text

    def test_json_schema_shape(self):
        obj = json.loads(complex_to_json(teapot()))
        assert obj["degrees"] == [0, 2]
        assert obj["dims"] == [2, 2, 2]
        assert obj["boundaries"]["2"] == [[1, 1], [0, 0]]

    def test_malformed_json(self):
        with pytest.raises(ComplexError):
            complex_from_json("{not json")


def _string(m_one: int) -> PeriodicComplexZ2:
    """One generator per degree, boundaries alternating ``m_one`` and 0, period 2."""
    block = GradedComplexZ2(0, (1, 1), {1: Gf2Matrix.zeros(1, 1)})
    return PeriodicComplexZ2(2, block, Gf2Matrix.from_rows([[m_one]]))


class TestPeriodic:
    def test_zero_boundaries_shift_one(self):
        c = PeriodicComplexZ2(1, GradedComplexZ2(0, (1,), {}), Gf2Matrix.zeros(1, 1))
        dims = periodic_homology_dims(c, (0, 2))
        assert dims == {1: 1}

    def test_window_too_small(self):
        with pytest.raises(ComplexError):
            periodic_homology_dims(_string(1), (0, 4))

    def test_alternating_string_is_acyclic(self):
        assert set(periodic_homology_dims(_string(1)).values()) == {0}

    def test_zero_string_keeps_everything(self):
        assert set(periodic_homology_dims(_string(0)).values()) == {1}

    def test_middle_period(self):
        assert middle_period_homology(_string(0)) == {2: 1, 3: 1}

    def test_assembled_window_is_a_complex(self):
        m = 4
        ones, A = Gf2Matrix.ones(m), rope_ladder_matrix(m)
        block = GradedComplexZ2(0, (m,) * 4, {1: A, 2: ones, 3: A})
        c = PeriodicComplexZ2(4, block, ones)
        w = c.window(-4, 11)
        verify_complex(w)
        assert set(periodic_homology_dims(c).values()) == {0}

    def test_raw_m2_ladder_window_by_brute_force(self):
        ones, A = Gf2Matrix.ones(2), rope_ladder_matrix(2)
        c = PeriodicComplexZ2(2, GradedComplexZ2(0, (2, 2), {1: A}), ones)
        w = c.window(0, 5)
        assert w.total_dim == 12
        brute = brute_force_homology(w)
        assert all(brute[k] == 0 for k in range(1, 5))


class TestQuotient:
    def _ladder(self, m):
        ones, A = Gf2Matrix.ones(m), rope_ladder_matrix(m)
        block = GradedComplexZ2(0, (m, m), {1: A})
        shift = tuple((i + 1) % m for i in range(m))
        return PeriodicComplexZ2(2, block, ones), DegreeAction(m, {0: shift, 1: shift})

    @pytest.mark.parametrize("m", range(1, 7))
    def test_quotient_matches_displayed_complex(self, m):
        c, a = self._ladder(m)
        q = quotient_by_action(c, a)
        assert q.block.dims == (1, 1)
        assert q.block.boundary(1).to_list() == [[0]]
        assert q.linking.to_list() == [[m % 2]]
        expected = 1 if m % 2 == 0 else 0
        assert set(periodic_homology_dims(q).values()) == {expected}

    def test_trivial_action_is_identity(self):
        c = teapot()
        assert quotient_by_action(c, DegreeAction.trivial()).to_json_obj()["boundaries"] == c.to_json_obj()["boundaries"]

    def test_rejects_non_free(self):
        c = GradedComplexZ2(0, (2,), {})
        with pytest.raises(ActionError):
            quotient_by_action(c, DegreeAction(2, {0: (0, 1)}))

    def test_rejects_non_commuting(self):
        c = GradedComplexZ2(0, (2, 2), {1: Gf2Matrix.from_rows([[1, 0], [0, 0]])})
        with pytest.raises(ActionError):
            quotient_by_action(c, DegreeAction(2, {0: (1, 0), 1: (1, 0)}))

    def test_rejects_wrong_order(self):
        with pytest.raises(ActionError):
            DegreeAction(0, {})
