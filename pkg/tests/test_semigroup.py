import math

import numpy as np
import pytest

from conftest import random_sl2
from projifs.errors import BudgetExceededError
from projifs.geometry import IDENTITY2, Matrix2, op_norm
from projifs.semigroup import (
    ProductTable,
    SystemConfig,
    common_fixed_points,
    diophantine_profile,
    discreteness_profile,
    enumerate_words,
    left_invariant_dist,
    word_product,
)
from projifs import semigroup

SHEAR = Matrix2(1.0, 1.0, 0.0, 1.0)
DIAG2 = Matrix2(2.0, 0.0, 0.0, 0.5)
HALF_DIAG = Matrix2(0.5, 0.0, 0.0, 2.0)

PAIR = SystemConfig(matrices=(DIAG2, SHEAR))


def rotation(t):
    return Matrix2(math.cos(t), -math.sin(t), math.sin(t), math.cos(t))


class TestConfig:
    def test_probs_normalize(self):
        cfg = SystemConfig(matrices=(DIAG2, SHEAR), probs=(1.0, 3.0))
        assert cfg.probs == pytest.approx((0.25, 0.75))

    def test_uniform_weights(self):
        assert PAIR.weights() == (0.5, 0.5)

    def test_bad_probs_length(self):
        with pytest.raises(ValueError):
            SystemConfig(matrices=(DIAG2,), probs=(0.5, 0.5))

    def test_bad_norm(self):
        with pytest.raises(ValueError):
            SystemConfig(matrices=(DIAG2,), norm="frobenius")

    def test_empty(self):
        with pytest.raises(ValueError):
            SystemConfig(matrices=())


class TestEnumerateWords:
    def test_order(self):
        ws = list(enumerate_words(2, 2))
        assert ws == [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]

    def test_budget_raises_with_progress(self):
        it = enumerate_words(2, 3, budget=3)
        got = [next(it) for _ in range(3)]
        assert got == [(0,), (1,), (0, 0)]
        with pytest.raises(BudgetExceededError) as ei:
            next(it)
        assert ei.value.words_done == 3
        assert ei.value.depth_reached == 1


class TestProductTable:
    def test_level_matches_word_products(self):
        table = ProductTable(PAIR)
        lev = table.level(2)
        assert lev.shape == (4, 2, 2)
        for idx, w in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
            assert np.allclose(lev[idx], word_product(PAIR, w).array, atol=1e-14)

    def test_norms_match_scalar(self):
        table = ProductTable(PAIR)
        ns = table.norms(3)
        for idx in range(8):
            w = ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
            assert ns[idx] == pytest.approx(op_norm(word_product(PAIR, w)), rel=1e-12)

    def test_depth_cap(self):
        cfg = SystemConfig(matrices=(DIAG2, SHEAR), depth_cap=3)
        table = ProductTable(cfg)
        table.level(3)
        with pytest.raises(BudgetExceededError):
            table.level(4)

    def test_word_budget(self):
        table = ProductTable(PAIR, word_budget=5)
        table.level(1)
        with pytest.raises(BudgetExceededError) as ei:
            table.level(2)
        assert ei.value.words_done == 2
        assert ei.value.depth_reached == 1

    def test_determinants_stay_one(self):
        table = ProductTable(PAIR)
        lev = table.level(10)
        det = lev[:, 0, 0] * lev[:, 1, 1] - lev[:, 0, 1] * lev[:, 1, 0]
        assert np.max(np.abs(det - 1.0)) < 1e-12

    def test_thread_count_does_not_change_bits(self, monkeypatch):
        monkeypatch.setenv("PROJIFS_THREADS", "1")
        lev1 = ProductTable(PAIR).level(8)
        monkeypatch.setenv("PROJIFS_THREADS", "4")
        lev4 = ProductTable(PAIR).level(8)
        assert np.array_equal(lev1, lev4)


class TestMetric:
    def test_diag_distance_exact(self):
        e = math.exp(1.0)
        m = Matrix2(e, 0.0, 0.0, 1.0 / e)
        assert left_invariant_dist(IDENTITY2, m) == pytest.approx(math.sqrt(2.0))

    def test_doubling_map_distance(self):
        # log diag(2, 1/2) = diag(log 2, -log 2)
        assert left_invariant_dist(IDENTITY2, DIAG2) == pytest.approx(
            math.sqrt(2.0) * math.log(2.0)
        )

    def test_rotation_distance(self):
        assert left_invariant_dist(IDENTITY2, rotation(0.3)) == pytest.approx(
            0.3 * math.sqrt(2.0)
        )

    def test_shear_distance(self):
        assert left_invariant_dist(IDENTITY2, SHEAR) == pytest.approx(1.0)

    def test_zero_on_diagonal(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            m = random_sl2(rng)
            assert left_invariant_dist(m, m) < 1e-12

    def test_symmetry(self):
        rng = np.random.default_rng(22)
        for _ in range(200):
            a, b = random_sl2(rng), random_sl2(rng)
            assert left_invariant_dist(a, b) == pytest.approx(
                left_invariant_dist(b, a), rel=1e-9, abs=1e-12
            )

    def test_left_invariance(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            g, a, b = random_sl2(rng), random_sl2(rng), random_sl2(rng)
            assert left_invariant_dist(g @ a, g @ b) == pytest.approx(
                left_invariant_dist(a, b), rel=1e-7, abs=1e-10
            )

    def test_vector_matches_scalar(self):
        rng = np.random.default_rng(24)
        ms = [random_sl2(rng) for _ in range(100)]
        arr = np.stack([m.array for m in ms])
        vec = semigroup._displacement_norms_array(arr)
        for m, v in zip(ms, vec):
            assert v == pytest.approx(
                left_invariant_dist(IDENTITY2, m), rel=1e-9, abs=1e-12
            )


class TestPairwiseMin:
    def test_duplicate_counts_as_collision(self):
        arr = np.stack([DIAG2.array, SHEAR.array, DIAG2.array])
        d, coll = semigroup._pairwise_min(arr)
        assert coll == 1
        assert d == pytest.approx(left_invariant_dist(DIAG2, SHEAR))

    def test_windowed_is_upper_bound(self, monkeypatch):
        rng = np.random.default_rng(25)
        arr = np.stack([random_sl2(rng).array for _ in range(300)])
        exact, _ = semigroup._pairwise_min(arr)
        monkeypatch.setattr(semigroup, "_EXACT_PAIR_LIMIT", 10)
        windowed, _ = semigroup._pairwise_min(arr)
        assert windowed >= exact - 1e-12

    def test_cross_arrays(self):
        a = np.stack([DIAG2.array])
        b = np.stack([SHEAR.array, DIAG2.array])
        d, coll = semigroup._pairwise_min(a, b)
        assert coll == 1
        assert d == pytest.approx(left_invariant_dist(DIAG2, SHEAR))


class TestDiophantineProfile:
    def test_free_pair_stays_free(self):
        prof = diophantine_profile(PAIR, 5)
        assert prof.total_collisions == 0
        assert prof.free_so_far
        assert all(r.min_dist > 1e-4 for r in prof.rows)

    def test_relation_detected_at_depth_seven(self):
        # half/double scaling with a unit shear satisfies a length-7 relation
        cfg = SystemConfig(matrices=(HALF_DIAG, SHEAR))
        prof = diophantine_profile(cfg, 7)
        assert not prof.free_so_far
        assert prof.rows[6].collisions > 0
        assert all(r.collisions == 0 for r in prof.rows[:6])

    def test_fitted_c_in_range(self):
        prof = diophantine_profile(PAIR, 6)
        if prof.fitted_c is not None:
            assert 0.0 < prof.fitted_c <= 1.0


class TestDiscretenessProfile:
    def test_singleton_scaling(self):
        cfg = SystemConfig(matrices=(DIAG2,))
        prof = discreteness_profile(cfg, 4)
        assert prof.rows[0].min_dist_to_identity == pytest.approx(
            math.sqrt(2.0) * math.log(2.0)
        )
        assert prof.total_collisions == 0
        assert prof.final_min_pairwise == pytest.approx(
            math.sqrt(2.0) * math.log(2.0)
        )

    def test_pairwise_shrinks_for_dense_system(self):
        # an irrational rotation generates arbitrarily close returns
        cfg = SystemConfig(matrices=(rotation(1.0),))
        prof = discreteness_profile(cfg, 12)
        assert prof.final_min_pairwise < 0.6
        first = prof.rows[0].min_pairwise
        assert prof.final_min_pairwise < first


class TestCommonFixedPoints:
    def test_simultaneously_diagonal(self):
        cfg = SystemConfig(matrices=(DIAG2, Matrix2(3.0, 0.0, 0.0, 1.0 / 3.0)))
        pts = common_fixed_points(cfg)
        assert pts == pytest.approx((math.pi / 2.0, math.pi))

    def test_shared_horizontal_only(self):
        pts = common_fixed_points(PAIR)
        assert pts == pytest.approx((math.pi,))

    def test_elliptic_letter_kills_it(self):
        cfg = SystemConfig(matrices=(DIAG2, rotation(0.5)))
        assert common_fixed_points(cfg) == ()

    def test_generic_pair_has_none(self):
        cfg = SystemConfig(matrices=(DIAG2, Matrix2(2.0, 1.0, 1.0, 1.0)))
        assert common_fixed_points(cfg) == ()

    def test_identity_letter_ignored(self):
        cfg = SystemConfig(matrices=(IDENTITY2, DIAG2))
        assert common_fixed_points(cfg) == pytest.approx((math.pi / 2.0, math.pi))
