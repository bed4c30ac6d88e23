import numpy as np
import pytest

from recop import AmbientMismatchError, SingularMatrixError, column_space, invert, subspace_equal
from recop.linalg import max_abs, random_orthogonal
from recop.rng import SplitMix64


class TestColumnSpace:
    def test_plane_span(self):
        m = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        sub = column_space(m, 1e-9)
        assert sub.rank == 2
        assert np.allclose(sub.projector(), np.diag([1.0, 1.0, 0.0]), atol=1e-14)

    def test_zero_matrix(self):
        sub = column_space(np.zeros((3, 3)), 1e-9)
        assert sub.rank == 0
        assert sub.basis.shape == (3, 0)

    def test_so3_at_north_pole(self):
        # w12=z3, w13=-z2, w23=z1 evaluated by hand at (0, 0, 1)
        m = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        sub = column_space(m, 1e-9)
        assert sub.rank == 2
        assert np.allclose(sub.projector(), np.diag([1.0, 1.0, 0.0]), atol=1e-14)

    def test_orthonormal_columns(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            m = rng.normal(size=(6, 6))
            sub = column_space(m, 1e-9)
            gram = sub.basis.T @ sub.basis
            assert max_abs(gram - np.eye(sub.rank)) <= 1e-12

    def test_columns_contained_in_span(self):
        rng = np.random.default_rng(6)
        tol = 1e-9
        for k in (1, 2, 4, 6):
            left = rng.normal(size=(6, k))
            right = rng.normal(size=(6, k))
            m = left @ right.T  # rank k (almost surely)
            sub = column_space(m, tol)
            assert sub.rank == k
            residual = (np.eye(6) - sub.projector()) @ m
            assert max_abs(residual) <= 10 * tol * max_abs(m)

    def test_even_rank_for_antisymmetric(self):
        rng = np.random.default_rng(7)
        for n in (2, 3, 4, 5, 6):
            for _ in range(10):
                g = rng.normal(size=(n, n))
                m = g - g.T
                assert column_space(m, 1e-9).rank % 2 == 0

    def test_small_scale_is_still_full_rank(self):
        m = 1e-12 * np.array([[0.0, 1.0], [-1.0, 0.0]])
        assert column_space(m, 1e-9).rank == 2

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        m = rng.normal(size=(5, 5))
        a = column_space(m, 1e-9)
        b = column_space(m, 1e-9)
        assert np.array_equal(a.basis, b.basis)

    def test_tie_breaks_to_lowest_index(self):
        sub = column_space(np.eye(3), 1e-9)
        assert np.array_equal(sub.basis, np.eye(3))

    def test_rejects_bad_tolerance(self):
        with pytest.raises(ValueError):
            column_space(np.eye(2), 0.0)


class TestSubspaceEqual:
    def test_same_plane_rotated_basis(self):
        s = 1.0 / np.sqrt(2.0)
        b1 = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        b2 = np.array([[s, s], [s, -s], [0.0, 0.0]])
        sub1 = column_space(b1, 1e-9)
        sub2 = column_space(b2, 1e-9)
        equal, defect = subspace_equal(sub1, sub2, 1e-8)
        assert equal
        assert defect <= 1e-15

    def test_different_planes(self):
        b1 = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        b2 = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
        equal, defect = subspace_equal(column_space(b1, 1e-9), column_space(b2, 1e-9), 1e-8)
        assert not equal
        assert defect == pytest.approx(1.0, abs=1e-12)

    def test_rank_mismatch(self):
        b1 = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        b2 = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
        equal, _ = subspace_equal(column_space(b1, 1e-9), column_space(b2, 1e-9), 1e-8)
        assert not equal

    def test_defect_symmetric_for_equal_ranks(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            s1 = column_space(rng.normal(size=(5, 2)) @ rng.normal(size=(2, 5)), 1e-9)
            s2 = column_space(rng.normal(size=(5, 2)) @ rng.normal(size=(2, 5)), 1e-9)
            _, d12 = subspace_equal(s1, s2, 1e-8)
            _, d21 = subspace_equal(s2, s1, 1e-8)
            assert abs(d12 - d21) <= 1e-12

    def test_ambient_mismatch(self):
        s1 = column_space(np.eye(3), 1e-9)
        s2 = column_space(np.eye(4), 1e-9)
        with pytest.raises(AmbientMismatchError):
            subspace_equal(s1, s2, 1e-8)


class TestInvert:
    def test_rotation(self):
        inv, _ = invert(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        assert np.array_equal(inv, np.array([[0.0, -1.0], [1.0, 0.0]]))

    def test_scaled_identity(self):
        inv, cond = invert(2.0 * np.eye(2))
        assert np.array_equal(inv, 0.5 * np.eye(2))
        assert cond == 1.0

    def test_zero_matrix(self):
        with pytest.raises(SingularMatrixError):
            invert(np.zeros((2, 2)))

    def test_rank_deficient(self):
        with pytest.raises(SingularMatrixError):
            invert(np.array([[1.0, 2.0], [2.0, 4.0]]))

    def test_inverse_accuracy(self):
        rng = np.random.default_rng(10)
        for n in (1, 2, 3, 5, 8):
            for _ in range(10):
                m = rng.normal(size=(n, n))
                inv, cond = invert(m)
                assert max_abs(m @ inv - np.eye(n)) <= 1e-10 * cond

    def test_empty_matrix(self):
        inv, cond = invert(np.zeros((0, 0)))
        assert inv.shape == (0, 0)
        assert cond == 1.0


class TestRandomOrthogonal:
    def test_orthogonality_and_determinism(self):
        for k in (1, 2, 3, 5):
            q1 = random_orthogonal(k, SplitMix64(42))
            q2 = random_orthogonal(k, SplitMix64(42))
            assert np.array_equal(q1, q2)
            assert max_abs(q1.T @ q1 - np.eye(k)) <= 1e-12

    def test_stream_advances(self):
        rng = SplitMix64(42)
        q1 = random_orthogonal(3, rng)
        q2 = random_orthogonal(3, rng)
        assert not np.array_equal(q1, q2)

    def test_empty(self):
        assert random_orthogonal(0, SplitMix64(1)).shape == (0, 0)
