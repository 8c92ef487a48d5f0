import math

import numpy as np
import pytest

from pinchlab import (
    CurvatureTensor,
    Decomposition,
    DegenerateSpectrum,
    PinchProfile,
    RicciSpectrum,
    SymmetryViolation,
    WeylTensor,
    ZeroScalar,
    build_curvature,
    decompose,
    invariant_norms,
    jacobi_eigh,
    pair_derivatives,
    pinch_residual,
    recompose,
    ricci_spectrum,
    spectrum_params,
)
from pinchlab.curvature import INDEPENDENT_SLOTS

from conftest import random_tensor

SQRT3 = math.sqrt(3.0)


def s2xr2():
    return build_curvature({(1, 2, 1, 2): 1.0})


def s3xr():
    return build_curvature({(i, j, i, j): 1.0 for i in range(1, 4) for j in range(i + 1, 4)})


class TestBuild:
    def test_zero_input_gives_zero_tensor(self):
        rm = build_curvature({})
        assert np.all(rm.values == 0.0)
        rm = build_curvature([0.0] * 20)
        assert np.all(rm.values == 0.0)

    def test_product_metric_components_are_valid(self):
        rm = s2xr2()
        CurvatureTensor.from_array(rm.values)  # validates all symmetries
        assert rm.sectional(1, 2) == 1.0
        assert rm.component(2, 1, 1, 2) == -1.0
        assert rm.component(1, 2, 2, 1) == -1.0

    def test_antisymmetry_conflict_rejected(self):
        with pytest.raises(SymmetryViolation):
            build_curvature({(1, 2, 1, 2): 1.0, (2, 1, 1, 2): 1.0})

    def test_diagonal_pair_must_vanish(self):
        with pytest.raises(SymmetryViolation):
            build_curvature({(1, 1, 1, 2): 0.5})

    def test_explicit_bianchi_violation_rejected(self):
        with pytest.raises(SymmetryViolation):
            build_curvature({(1, 2, 3, 4): 1.0, (1, 3, 2, 4): 0.0, (1, 4, 2, 3): 1.0})

    def test_bianchi_derived_slot(self):
        rm = build_curvature({(1, 2, 3, 4): 0.25, (1, 3, 2, 4): 0.75})
        bianchi = rm.component(1, 2, 3, 4) + rm.component(1, 3, 4, 2) + rm.component(1, 4, 2, 3)
        assert abs(bianchi) < 1e-15

    def test_vector_form_has_20_slots(self):
        assert len(INDEPENDENT_SLOTS) == 20
        with pytest.raises(SymmetryViolation):
            build_curvature([0.0] * 19)

    def test_from_array_rejects_broken_symmetry(self):
        bad = np.zeros((4, 4, 4, 4))
        bad[0, 1, 0, 1] = 1.0  # missing the antisymmetric partners
        with pytest.raises(SymmetryViolation):
            CurvatureTensor.from_array(bad)


class TestDecompose:
    def test_flat(self):
        d = decompose(build_curvature({}))
        assert np.all(d.weyl.values == 0.0)
        assert np.all(d.traceless_ricci == 0.0)
        assert d.scalar == 0.0

    def test_s3xr(self):
        d = decompose(s3xr())
        assert d.scalar == pytest.approx(6.0, abs=1e-12)
        assert np.max(np.abs(d.weyl.values)) < 1e-12
        assert np.allclose(d.traceless_ricci, np.diag([0.5, 0.5, 0.5, -1.5]), atol=1e-12)

    def test_s2xr2_weyl_components(self):
        d = decompose(s2xr2())
        assert d.scalar == pytest.approx(2.0, abs=1e-12)
        assert d.weyl.sectional(1, 2) == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert d.weyl.sectional(3, 4) == pytest.approx(1.0 / 3.0, abs=1e-12)
        for i, j in [(1, 3), (1, 4), (2, 3), (2, 4)]:
            assert d.weyl.sectional(i, j) == pytest.approx(-1.0 / 6.0, abs=1e-12)

    def test_weyl_trace_free(self, rng):
        for _ in range(50):
            w = decompose(random_tensor(rng)).weyl.values
            traces = np.einsum("ikil->kl", w)
            assert np.max(np.abs(traces)) < 1e-10

    def test_recompose_zero(self):
        d = Decomposition(weyl=WeylTensor(np.zeros((4,) * 4)), traceless_ricci=np.zeros((4, 4)), scalar=0.0)
        assert np.all(recompose(d).values == 0.0)

    def test_recompose_round_trip_s2xr2(self):
        rm = s2xr2()
        back = recompose(decompose(rm))
        assert np.max(np.abs(back.values - rm.values)) < 1e-12

    def test_constant_curvature_reconstruction(self):
        d = Decomposition(weyl=WeylTensor(np.zeros((4,) * 4)), traceless_ricci=np.zeros((4, 4)), scalar=12.0)
        rm = recompose(d)
        for i in range(1, 5):
            for j in range(i + 1, 5):
                assert rm.sectional(i, j) == pytest.approx(1.0, abs=1e-14)


class TestSpectrum:
    def test_flat(self):
        assert ricci_spectrum(build_curvature({})).lam == (0.0, 0.0, 0.0, 0.0)

    def test_s3xr(self):
        assert ricci_spectrum(s3xr()).lam == pytest.approx((0.0, 2.0, 2.0, 2.0), abs=1e-12)

    def test_s2xr2(self):
        assert ricci_spectrum(s2xr2()).lam == pytest.approx((0.0, 0.0, 1.0, 1.0), abs=1e-12)

    def test_trace_matches_scalar(self, rng):
        for _ in range(50):
            rm = random_tensor(rng)
            assert sum(ricci_spectrum(rm).lam) == pytest.approx(decompose(rm).scalar, abs=1e-10)

    def test_jacobi_matches_numpy(self, rng):
        for _ in range(100):
            a = rng.normal(size=(4, 4))
            a = a + a.T
            w, v = jacobi_eigh(a)
            assert np.allclose(np.sort(np.linalg.eigvalsh(a)), w, atol=1e-10)
            assert np.allclose(v.T @ a @ v, np.diag(w), atol=1e-10)


class TestSpectrumParams:
    def test_s3xr_values(self):
        p = spectrum_params(RicciSpectrum((0.0, 2.0, 2.0, 2.0)))
        assert p.scalar == 6.0
        assert p.b == 2.0
        assert p.eta == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert p.x == 1.0
        assert p.y == 0.0

    def test_s2xr2_values(self):
        p = spectrum_params(RicciSpectrum((0.0, 0.0, 1.0, 1.0)))
        assert (p.scalar, p.b, p.eta, p.x, p.y) == (2.0, 2.0, 1.0, 0.0, 0.0)

    def test_zero_scalar_raises(self):
        with pytest.raises(ZeroScalar):
            spectrum_params(RicciSpectrum((0.0, 0.0, 0.0, 0.0)))

    def test_nonnegative_spectrum_inequalities(self, rng):
        # with all eigenvalues nonnegative: 0 <= x <= (1-eta)R/4,
        # x + y <= eta*R/2, eta <= 1
        for _ in range(300):
            lam = tuple(sorted(rng.uniform(0.0, 2.0, 4)))
            if sum(lam) == 0.0:
                continue
            p = spectrum_params(RicciSpectrum(lam))
            assert 0.0 <= p.x <= (1.0 - p.eta) * p.scalar / 4.0 + 1e-12
            assert p.x + p.y <= p.eta * p.scalar / 2.0 + 1e-12
            assert p.eta <= 1.0 + 1e-15
            assert p.y >= 0.0

    def test_universal_norm_identity(self, rng):
        for _ in range(200):
            rm = random_tensor(rng)
            d = decompose(rm)
            if d.scalar == 0.0:
                continue
            p = spectrum_params(ricci_spectrum(rm))
            _, ric0 = invariant_norms(d)
            expected = p.eta**2 * p.scalar**2 / 4.0 + 2.0 * p.x**2 + 2.0 * p.y**2
            assert ric0**2 == pytest.approx(expected, rel=1e-12)
            # the case-1 expansion agrees with the same quantity
            l1, l2, _, _ = ricci_spectrum(rm).lam
            case1 = (
                (3.0 * p.eta**2 - 2.0 * p.eta + 1.0) * p.scalar**2 / 8.0
                + 2.0 * p.y**2
                - 2.0 * l1 * l2
            )
            assert case1 == pytest.approx(expected, rel=1e-9)


class TestNorms:
    def test_s2xr2(self):
        d = decompose(s2xr2())
        w, r0 = invariant_norms(d)
        assert w == pytest.approx(2.0 / SQRT3, abs=1e-12)
        assert w == pytest.approx(d.scalar / SQRT3, abs=1e-12)
        assert r0 == pytest.approx(1.0, abs=1e-12)
        assert r0 == pytest.approx(d.scalar / 2.0, abs=1e-12)

    def test_s3xr(self):
        d = decompose(s3xr())
        w, r0 = invariant_norms(d)
        assert w == pytest.approx(0.0, abs=1e-12)
        assert r0 == pytest.approx(SQRT3, abs=1e-12)
        assert r0 == pytest.approx(d.scalar / (2.0 * SQRT3), abs=1e-12)

    def test_flat(self):
        assert invariant_norms(decompose(build_curvature({}))) == (0.0, 0.0)


class TestPinchResidual:
    def test_s2xr2_equality_at_critical_gamma(self):
        res = pinch_residual(s2xr2(), PinchProfile(gamma=1.0 + SQRT3))
        assert abs(res) < 1e-12

    def test_s3xr_vanishes_for_any_gamma(self):
        for gamma in (0.5, 1.0, 1.0 + SQRT3, 5.0):
            assert abs(pinch_residual(s3xr(), PinchProfile(gamma=gamma))) < 1e-12

    def test_round_sphere(self):
        d = Decomposition(weyl=WeylTensor(np.zeros((4,) * 4)), traceless_ricci=np.zeros((4, 4)), scalar=12.0)
        rm = recompose(d)
        res = pinch_residual(rm, PinchProfile(gamma=1.0))
        assert res == pytest.approx(12.0 / (2.0 * SQRT3), abs=1e-12)
        assert res == pytest.approx(2.0 * SQRT3, abs=1e-12)


class TestPairDerivatives:
    def test_flat_is_zero(self):
        assert pair_derivatives(build_curvature({})) == (0.0, 0.0, 0.0)

    def test_s3xr_refuses_but_closed_form_gives_4(self):
        # the repeated eigenvalues put this outside the distinct-spectrum
        # contract; the closed form itself evaluates by hand to 4
        with pytest.raises(DegenerateSpectrum):
            pair_derivatives(s3xr())
        lam = (0.0, 2.0, 2.0, 2.0)
        w1212, scalar = 0.0, 6.0
        closed = (w1212 + scalar / 3.0) * (lam[0] + lam[1] - lam[2] - lam[3]) + lam[2] ** 2 + lam[3] ** 2
        assert closed == 4.0

    def test_closed_forms_on_random_tensors(self, rng):
        for _ in range(300):
            rm = random_tensor(rng)
            lam, q = jacobi_eigh(rm.ricci())
            w1212 = decompose(rm.rotate(q)).weyl.sectional(1, 2)
            scalar = float(lam.sum())
            a, b = lam[0] + lam[1], lam[2] + lam[3]
            d12, d34, db = pair_derivatives(rm)
            closed_d12 = 2.0 * ((w1212 + scalar / 3.0) * (a - b) + lam[2] ** 2 + lam[3] ** 2)
            closed_db = 2.0 * (
                2.0 * (b - a) * (scalar / 3.0 + w1212)
                + (lam[0] ** 2 + lam[1] ** 2)
                - (lam[2] ** 2 + lam[3] ** 2)
            )
            assert d12 == pytest.approx(closed_d12, rel=1e-9, abs=1e-12)
            assert db == pytest.approx(closed_db, rel=1e-9, abs=1e-12)
            assert db == pytest.approx(d34 - d12, abs=1e-12)


class TestProperties:
    def test_round_trip_random(self, rng):
        worst = 0.0
        for _ in range(1000):
            rm = random_tensor(rng)
            back = recompose(decompose(rm))
            scale = max(1e-30, float(np.max(np.abs(rm.values))))
            worst = max(worst, float(np.max(np.abs(back.values - rm.values))) / scale)
        assert worst <= 1e-12

    def test_orthogonality_of_parts(self, rng):
        from pinchlab.curvature import _ricci_part, _scalar_part

        for _ in range(200):
            rm = random_tensor(rng)
            d = decompose(rm)
            parts = [d.weyl.values, _ricci_part(d.traceless_ricci), _scalar_part(d.scalar)]
            for i in range(3):
                for j in range(i + 1, 3):
                    ip = float(np.sum(parts[i] * parts[j]))
                    bound = 1e-10 * max(
                        1e-30,
                        float(np.sqrt(np.sum(parts[i] ** 2)) * np.sqrt(np.sum(parts[j] ** 2))),
                    )
                    assert abs(ip) <= max(bound, 1e-12)

    def test_weyl_duality_under_rotation(self, rng):
        for _ in range(100):
            rm = random_tensor(rng)
            q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
            w = decompose(rm.rotate(q)).weyl
            assert abs(w.sectional(1, 2) - w.sectional(3, 4)) < 1e-10
            assert abs(w.sectional(1, 3) - w.sectional(2, 4)) < 1e-10
            assert abs(w.sectional(1, 4) - w.sectional(2, 3)) < 1e-10
            assert abs(w.sectional(1, 2) + w.sectional(1, 3) + w.sectional(1, 4)) < 1e-10

    def test_sector_bound(self, rng):
        for _ in range(1000):
            rm = random_tensor(rng)
            w = decompose(rm).weyl
            assert w.sectional(1, 2) ** 2 <= w.norm() ** 2 / 12.0 + 1e-12

    def test_sector_bound_equality_for_s2xr2(self):
        w = decompose(s2xr2()).weyl
        assert abs(w.sectional(1, 2) ** 2 - w.norm() ** 2 / 12.0) < 1e-12
