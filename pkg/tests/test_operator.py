import numpy as np
import pytest

from cassikit import (CassiModel, Order, adjoint, column_norm_squares, complement,
                      densify, forward, make_cube, measurement_count, random_aperture)
from cassikit.cube import CodedAperture, HyperCube, MeasurementVector
from cassikit.errors import DomainError, SizeError
from conftest import naive_dense_matrix

from cassikit import _kernels_py
from cassikit.backend import kernels as active_kernels


def all_open(m, n):
    return CodedAperture(np.ones((m, n), dtype=np.uint8))


def comp_pair(m, n, seed=0):
    ap = random_aperture(m, n, 0.5, seed=seed)
    return (ap, complement(ap))


def random_cube(m, n, bands, rng):
    return make_cube(m, n, bands, rng.standard_normal(m * n * bands))


class TestMeasurementCount:
    def test_standard_single_shot(self):
        model = CassiModel(8, 8, 4, (all_open(8, 8),), Order.STANDARD)
        assert measurement_count(model) == 88

    def test_higher_order_single_shot(self):
        model = CassiModel(8, 8, 4, (all_open(8, 8),), Order.HIGHER_ORDER)
        assert measurement_count(model) == 104

    def test_higher_order_two_shots_lego_size(self):
        model = CassiModel(256, 256, 24, comp_pair(256, 256), Order.HIGHER_ORDER)
        assert measurement_count(model) == 143_872

    def test_count_matches_forward_length(self, rng):
        for order in Order:
            model = CassiModel(4, 6, 3, comp_pair(4, 6), order)
            g = forward(model, random_cube(4, 6, 3, rng))
            assert len(g) == measurement_count(model)


class TestForward:
    def test_hand_example_2x2x2(self):
        a, b, c, d, e, f, g, h = 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0
        data = np.zeros((2, 2, 2))
        data[:, :, 0] = [[a, b], [c, d]]
        data[:, :, 1] = [[e, f], [g, h]]
        model = CassiModel(2, 2, 2, (all_open(2, 2),), Order.STANDARD)
        out = forward(model, HyperCube(data)).values.reshape(2, 3)
        assert np.array_equal(out, [[a, b + e, f], [c, d + g, h]])

    def test_zero_cube(self):
        model = CassiModel(4, 4, 3, comp_pair(4, 4), Order.HIGHER_ORDER)
        g = forward(model, make_cube(4, 4, 3, np.zeros(48)))
        assert not g.values.any()

    def test_opaque_aperture(self, rng):
        opaque = CodedAperture(np.zeros((4, 4), dtype=np.uint8))
        model = CassiModel(4, 4, 3, (opaque,), Order.STANDARD)
        assert not forward(model, random_cube(4, 4, 3, rng)).values.any()

    def test_dim_mismatch(self, rng):
        model = CassiModel(4, 4, 3, (all_open(4, 4),), Order.STANDARD)
        with pytest.raises(SizeError):
            forward(model, random_cube(4, 4, 2, rng))

    def test_linearity(self, rng):
        model = CassiModel(6, 4, 3, comp_pair(6, 4), Order.HIGHER_ORDER)
        f1, f2 = (random_cube(6, 4, 3, rng) for _ in range(2))
        a, b = 0.7, -1.3
        combo = HyperCube(a * f1.data + b * f2.data)
        lhs = forward(model, combo).values
        rhs = a * forward(model, f1).values + b * forward(model, f2).values
        assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


class TestAdjoint:
    def test_zero_measurements(self):
        model = CassiModel(4, 4, 3, comp_pair(4, 4), Order.STANDARD)
        g = MeasurementVector(np.zeros(measurement_count(model)))
        assert not adjoint(model, g).data.any()

    def test_unit_vector_example(self):
        # all-open 2x2x2 standard: FPA pixel (x=0, j=1) collects voxels
        # (0,1,0) and (0,0,1); its adjoint scatters a unit there.
        model = CassiModel(2, 2, 2, (all_open(2, 2),), Order.STANDARD)
        e = np.zeros(6)
        e[1] = 1.0  # (x=0, j=1) in row-major (x, j) layout with 3 FPA cols
        back = adjoint(model, MeasurementVector(e)).data
        expected = np.zeros((2, 2, 2))
        expected[0, 1, 0] = 1.0
        expected[0, 0, 1] = 1.0
        assert np.array_equal(back, expected)

    def test_length_mismatch(self):
        model = CassiModel(4, 4, 3, (all_open(4, 4),), Order.STANDARD)
        with pytest.raises(SizeError):
            adjoint(model, MeasurementVector(np.zeros(5)))

    @pytest.mark.parametrize("order", list(Order))
    @pytest.mark.parametrize("shots", [1, 2, 3])
    def test_adjoint_identity(self, order, shots, rng):
        apertures = tuple(random_aperture(4, 4, 0.5, seed=s) for s in range(shots))
        model = CassiModel(4, 4, 3, apertures, order)
        for _ in range(10):
            f = random_cube(4, 4, 3, rng)
            g = MeasurementVector(rng.standard_normal(measurement_count(model)))
            lhs = float(forward(model, f).values @ g.values)
            rhs = float((f.data * adjoint(model, g).data).sum())
            bound = 1e-10 * f.norm() * np.linalg.norm(g.values)
            assert abs(lhs - rhs) <= bound


class TestDenseOracle:
    @pytest.mark.parametrize("order", list(Order))
    @pytest.mark.parametrize("dims,shots", [((2, 2, 2), 1), ((4, 4, 3), 2), ((3, 5, 4), 2)])
    def test_against_naive_matrix(self, order, dims, shots, rng):
        m, n, bands = dims
        apertures = tuple(random_aperture(m, n, 0.5, seed=s + 3) for s in range(shots))
        model = CassiModel(m, n, bands, apertures, order)
        H = densify(model)
        assert np.array_equal(H, naive_dense_matrix(model))
        f = random_cube(m, n, bands, rng)
        assert np.allclose(forward(model, f).values, H @ f.flat(), rtol=1e-12, atol=1e-14)
        g = rng.standard_normal(H.shape[0])
        back = adjoint(model, MeasurementVector(g))
        assert np.allclose(back.flat(), H.T @ g, rtol=1e-12, atol=1e-14)

    def test_band_shift_structure(self):
        # columns of band lam are those of band 0 shifted down by lam rows
        # within each (shot, x) block: the repeated-diagonal structure.
        model = CassiModel(4, 4, 3, (all_open(4, 4),), Order.STANDARD)
        H = densify(model)
        M, N, C = 4, 4, model.fpa_cols
        for lam in range(1, 3):
            for x in range(M):
                for y in range(N):
                    col0 = H[:, 0 * M * N + y * M + x].reshape(M, C)
                    coll = H[:, lam * M * N + y * M + x].reshape(M, C)
                    assert np.array_equal(np.roll(col0, lam, axis=1), coll)

    def test_standard_column_structure(self):
        model = CassiModel(4, 4, 3, comp_pair(4, 4, seed=9), Order.STANDARD)
        H = densify(model)
        assert set(np.unique(H)) <= {0.0, 1.0}
        assert (np.count_nonzero(H, axis=0) == 1).all()  # complementary pair

        ap = random_aperture(4, 4, 0.5, seed=2)
        model3 = CassiModel(4, 4, 3, (ap, ap, ap), Order.STANDARD)
        assert (np.count_nonzero(densify(model3), axis=0) <= 3).all()

    def test_guard(self):
        model = CassiModel(64, 64, 24, (all_open(64, 64),), Order.STANDARD)
        with pytest.raises(DomainError):
            densify(model)


class TestColumnNormSquares:
    def test_complementary_standard(self):
        model = CassiModel(4, 4, 3, comp_pair(4, 4, seed=4), Order.STANDARD)
        assert (column_norm_squares(model).data == 1.0).all()

    def test_all_open_single_shot(self):
        model = CassiModel(4, 4, 3, (all_open(4, 4),), Order.STANDARD)
        assert (column_norm_squares(model).data == 1.0).all()

    def test_complementary_higher_order(self):
        model = CassiModel(4, 4, 3, comp_pair(4, 4, seed=4), Order.HIGHER_ORDER,
                           (0.25, 0.5, 0.25))
        assert np.allclose(column_norm_squares(model).data, 0.375, atol=1e-12)

    @pytest.mark.parametrize("order", list(Order))
    def test_against_densify(self, order, rng):
        model = CassiModel(4, 4, 3, comp_pair(4, 4, seed=8), order)
        H = densify(model)
        expected = (H * H).sum(axis=0)
        assert np.allclose(column_norm_squares(model).flat(), expected, atol=1e-12)


class TestBackends:
    """The compiled kernels and the numpy fallback must agree bit-for-bit-ish."""

    @pytest.mark.parametrize("order", list(Order))
    def test_fallback_equivalence(self, order, rng):
        masks = (rng.random((2, 5, 6)) < 0.5).astype(np.float64)
        cube = rng.standard_normal((5, 6, 4))
        w = np.array([0.25, 0.5, 0.25])
        extra = 1 if order is Order.HIGHER_ORDER else -1
        g_a = np.empty((2, 5, 6 + 4 + extra))
        g_b = np.empty_like(g_a)
        back_a = np.empty((5, 6, 4))
        back_b = np.empty_like(back_a)
        if order is Order.STANDARD:
            active_kernels.forward_standard(masks, cube, g_a)
            _kernels_py.forward_standard(masks, cube, g_b)
            active_kernels.adjoint_standard(masks, g_a, back_a)
            _kernels_py.adjoint_standard(masks, g_a, back_b)
        else:
            active_kernels.forward_higher(masks, cube, w, g_a)
            _kernels_py.forward_higher(masks, cube, w, g_b)
            active_kernels.adjoint_higher(masks, g_a, w, back_a)
            _kernels_py.adjoint_higher(masks, g_a, w, back_b)
        assert np.allclose(g_a, g_b, rtol=1e-13, atol=1e-13)
        assert np.allclose(back_a, back_b, rtol=1e-13, atol=1e-13)
