"""Transfer operator and Beltrami pullback tests, including duality."""

import numpy as np
import pytest

import germkit.ruelle
from germkit.dynamics import PolynomialMap
from germkit.errors import PreconditionError, RootFindingError
from germkit.grid import GridField
from germkit.ruelle import (
    AlignmentReport,
    alignment_check,
    beltrami_pullback,
    cesaro_average,
    duality_residual,
    ruelle_pushforward,
)

BOUNDS = (-2.0, -2.0, 2.0, 2.0)
SQUARE = PolynomialMap((0, 0, 1))


def bump(center, radius):
    """Smooth compactly supported bump around center."""
    c, r2 = complex(center), radius * radius

    def fn(z):
        u = np.abs(z - c) ** 2 / r2
        return np.where(u < 1.0, np.exp(-1.0 / np.maximum(1.0 - u, 1e-300)), 0.0)

    return fn


def unit_disk_indicator(z):
    return np.where(np.abs(z) < 1.0, 1.0, 0.0)


def phase(z):
    return z / np.conj(z)


class TestPushforward:
    def test_square_of_indicator_matches_half_inverse(self):
        # both preimages of x carry weight 1/(2y)^2 = 1/(4x), so the sum is 1/(2x)
        phi = GridField.from_function(BOUNDS, 256, 256, unit_disk_indicator)
        push = ruelle_pushforward(SQUARE, phi)
        x = phi.centers()
        band = (np.abs(x) > 0.2) & (np.abs(x) < 0.8)
        err = np.max(np.abs(push.field.values - 1.0 / (2.0 * x))[band])
        assert err < 1e-13
        assert push.critical_excluded == 0

    def test_zero_in(self):
        zero = GridField.constant(BOUNDS, 64, 64, 0.0)
        assert ruelle_pushforward(SQUARE, zero).field.sup_norm() == 0.0

    def test_linearity(self):
        a, b = 2.0 - 1.0j, 0.5j
        p1 = GridField.from_function(BOUNDS, 64, 64, bump(0.2, 0.8))
        p2 = GridField.from_function(BOUNDS, 64, 64, lambda z: z * bump(-0.3j, 1.0)(z))
        lhs = ruelle_pushforward(SQUARE, a * p1 + b * p2).field.values
        rhs = (
            a * ruelle_pushforward(SQUARE, p1).field.values
            + b * ruelle_pushforward(SQUARE, p2).field.values
        )
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_cubic_matches_per_cell_root_oracle(self):
        cubic = PolynomialMap((0.1, -1, 0, 1))
        phi = GridField.from_function(BOUNDS, 64, 64, bump(0.2 - 0.3j, 1.0))
        push = ruelle_pushforward(cubic, phi)
        fp = cubic.derivative()
        cs = phi.centers()
        oracle = np.zeros_like(phi.values)
        for i in range(64):
            for j in range(64):
                total = 0.0 + 0.0j
                for y in np.roots([1, 0, -1, 0.1 - cs[i, j]]):
                    dfy = fp(y)
                    if abs(dfy) >= 1e-6:
                        total += complex(phi.sample(np.array([y]))[0]) / dfy ** 2
                oracle[i, j] = total
        assert np.max(np.abs(push.field.values - oracle)) < 1e-12

    def test_degree_one_is_substitution(self):
        f = PolynomialMap((0.1, 2.0))
        phi = GridField.from_function(BOUNDS, 64, 64, bump(0.0, 1.0))
        push = ruelle_pushforward(f, phi)
        x = phi.centers()
        expected = phi.sample((x - 0.1) / 2.0) / 4.0
        assert np.max(np.abs(push.field.values - expected)) < 1e-13

    def test_critical_preimages_counted_on_odd_grid(self):
        # an odd grid has a cell center exactly at the critical value 0
        phi = GridField.from_function(BOUNDS, 65, 65, unit_disk_indicator)
        assert ruelle_pushforward(SQUARE, phi).critical_excluded == 2
        even = GridField.from_function(BOUNDS, 256, 256, unit_disk_indicator)
        assert ruelle_pushforward(SQUARE, even).critical_excluded == 0

    def test_l1_contraction_on_positive_density(self):
        phi = GridField.from_function(BOUNDS, 256, 256, unit_disk_indicator)
        ratio = ruelle_pushforward(SQUARE, phi).field.l1_norm() / phi.l1_norm()
        assert ratio <= 1.05

    def test_residual_gate_guards_bad_roots(self, monkeypatch):
        monkeypatch.setattr(germkit.ruelle, "_ROOT_RESIDUAL", 1e-30)
        phi = GridField.constant(BOUNDS, 8, 8, 1.0)
        with pytest.raises(RootFindingError):
            ruelle_pushforward(PolynomialMap((0.1, -1, 0, 1)), phi)


class TestBeltramiPullback:
    def test_phase_field_is_fixed_point(self):
        mu = GridField.from_function(BOUNDS, 256, 256, phase)
        pull = beltrami_pullback(SQUARE, mu, sampler=phase)
        off = np.abs(mu.centers()) > 0.05
        resid = np.max(np.abs(pull.field.values - mu.values)[off])
        assert resid < 1e-12
        assert resid == pytest.approx(3.510833468576701e-16, rel=1e-3)

    def test_constant_becomes_reciprocal_phase(self):
        c0 = 0.7 - 0.4j
        mu = GridField.constant(BOUNDS, 256, 256, c0)
        pull = beltrami_pullback(SQUARE, mu)
        z = mu.centers()
        w = z * z
        # compare where z^2 stays inside the sampling hull
        mask = (np.abs(w.real) < 1.9) & (np.abs(w.imag) < 1.9) & (np.abs(z) > 0.1)
        err = np.max(np.abs(pull.field.values - c0 * np.conj(z) / z)[mask])
        assert err < 1e-13

    def test_zero_in(self):
        zero = GridField.constant(BOUNDS, 64, 64, 0.0)
        assert beltrami_pullback(SQUARE, zero).field.sup_norm() == 0.0

    def test_critical_cells_zeroed_on_odd_grid(self):
        mu = GridField.constant(BOUNDS, 65, 65, 1.0)
        pull = beltrami_pullback(SQUARE, mu)
        assert pull.critical_zeroed == 1
        center = pull.field.values[32, 32]
        assert center == 0.0

    def test_sup_norm_never_expands(self):
        gen = np.random.default_rng(5)
        mu = GridField(
            *BOUNDS, values=gen.uniform(-1, 1, (64, 64)) + 1j * gen.uniform(-1, 1, (64, 64))
        )
        assert beltrami_pullback(SQUARE, mu).field.sup_norm() <= mu.sup_norm()
        smooth = GridField.from_function(BOUNDS, 64, 64, bump(0.3, 1.2))
        assert beltrami_pullback(SQUARE, smooth).field.sup_norm() <= smooth.sup_norm()


class TestDuality:
    def mu_phi(self, n):
        mu = GridField.from_function(BOUNDS, n, n, phase)
        phi = GridField.from_function(
            BOUNDS, n, n, lambda z: np.exp(-np.abs(z - 0.4 - 0.2j) ** 2)
        )
        return mu, phi

    def test_residual_small_and_halves_under_refinement(self):
        r256 = duality_residual(SQUARE, *self.mu_phi(256))
        r512 = duality_residual(SQUARE, *self.mu_phi(512))
        assert r256 < 1e-2
        assert r512 < r256
        assert 0.25 < r512 / r256 < 0.75
        assert r256 == pytest.approx(4.898627080969413e-05, rel=1e-6)
        assert r512 == pytest.approx(3.001036383325639e-05, rel=1e-6)

    def test_symmetric_inputs_cancel(self):
        # centered inputs agree to rounding; asymmetry is what the residual sees
        mu = GridField.from_function(BOUNDS, 128, 128, phase)
        phi = GridField.from_function(BOUNDS, 128, 128, lambda z: np.exp(-np.abs(z) ** 2))
        assert duality_residual(SQUARE, mu, phi) < 1e-14

    def test_degree_one_is_exact(self):
        lin = PolynomialMap((0, 1))
        mu = GridField.from_function(BOUNDS, 64, 64, bump(0.1, 1.0))
        phi = GridField.from_function(BOUNDS, 64, 64, bump(-0.2j, 1.0))
        assert duality_residual(lin, mu, phi) < 1e-12

    def test_zero_mu(self):
        zero = GridField.constant(BOUNDS, 64, 64, 0.0)
        phi = GridField.from_function(BOUNDS, 64, 64, bump(-0.2j, 1.0))
        assert duality_residual(SQUARE, zero, phi) == 0.0


class TestCesaroAverage:
    def test_n_one_returns_input(self):
        phi = GridField.from_function(BOUNDS, 128, 128, unit_disk_indicator)
        result = cesaro_average(SQUARE, phi, 1)
        assert np.array_equal(result.field.values, phi.values)
        assert result.increments == ()

    def test_increments_decrease_and_norm_stays_bounded(self):
        phi = GridField.from_function(BOUNDS, 256, 256, unit_disk_indicator)
        result = cesaro_average(SQUARE, phi, 8)
        assert len(result.increments) == 7
        assert all(b < a for a, b in zip(result.increments, result.increments[1:]))
        assert result.field.l1_norm() <= phi.l1_norm() * 1.05

    def test_degree_one_norms_non_increasing(self):
        two_z = PolynomialMap((0, 2))
        phi = GridField.from_function(BOUNDS, 128, 128, bump(0, 1.0))
        norms = [cesaro_average(two_z, phi, n).field.l1_norm() for n in (1, 2, 4)]
        assert norms[0] >= norms[1] >= norms[2] - 1e-12

    def test_rejects_nonpositive_n(self):
        phi = GridField.constant(BOUNDS, 16, 16, 1.0)
        with pytest.raises(PreconditionError):
            cesaro_average(SQUARE, phi, 0)


class TestAlignmentCheck:
    def test_even_density_under_negation_is_exact(self):
        # f = -z on a symmetric grid maps cell centers to cell centers, so an
        # even density is fixed exactly and its phase exactly invariant
        neg = PolynomialMap((0, -1))
        h = GridField.from_function(BOUNDS, 256, 256, lambda z: np.exp(-np.abs(z) ** 2))
        report = alignment_check(neg, h, 1e-3)
        assert report.pre_residual == 0.0
        assert report.sup_residual == 0.0
        assert report.support_cells > 0

    def test_nonconstant_phase_exact_pair(self):
        # h = (z/conj z) e^{-|z|^2} is even with a genuinely varying phase;
        # nu = conj(h)/|h| = conj(z)/z passes through the pullback untouched
        neg = PolynomialMap((0, -1))
        h = GridField.from_function(
            BOUNDS, 256, 256, lambda z: phase(z) * np.exp(-np.abs(z) ** 2)
        )
        report = alignment_check(neg, h, 1e-3)
        assert report.pre_residual == 0.0
        assert report.sup_residual == 0.0

    def test_near_fixed_cesaro_density_reported(self):
        # an averaged density is only approximately fixed; the report carries
        # the achieved pre-residual and the phase mismatch on its support
        phi = GridField.from_function(BOUNDS, 128, 128, unit_disk_indicator)
        h = cesaro_average(SQUARE, phi, 16).field
        report = alignment_check(SQUARE, h, 0.5)
        assert report.pre_residual == pytest.approx(0.197021484375, rel=1e-9)
        assert report.support_cells == 14
        assert 0.0 < report.sup_residual < 2.0

    def test_zero_density_rejected(self):
        zero = GridField.constant(BOUNDS, 64, 64, 0.0)
        with pytest.raises(PreconditionError):
            alignment_check(SQUARE, zero, 1e-3)

    def test_unfixed_density_rejected(self):
        h = GridField.from_function(BOUNDS, 128, 128, bump(0, 1.5))
        with pytest.raises(PreconditionError):
            alignment_check(SQUARE, h, 1e-6)
