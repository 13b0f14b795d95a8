import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hpopa import BoundaryGrid, TaylorPoly, bj_test, check_pythagorean, norming_functional, orthogonalize, pythag_params, sample
from hpopa.boundary import dual_pairing, p_norm
from hpopa.errors import DegenerateInputError, DomainError, PreconditionError
from hpopa.orthogonality import bj_integral, conjugate_exponent
from hpopa.harness.pythag import orthogonal_pairs

import oracles

ONE = BoundaryGrid.constant(1)
Z = BoundaryGrid.z_power(1)


def poly(*c):
    return sample(TaylorPoly(c))


class TestBjTest:
    @pytest.mark.parametrize("p", [1.2, 2, 3.5])
    @pytest.mark.parametrize("k", [1, 2, 5])
    def test_constant_orthogonal_to_powers(self, p, k):
        rep = bj_test(ONE, BoundaryGrid.z_power(k), p)
        assert rep.is_orthogonal
        assert abs(rep.residual) < 1e-15

    def test_z_orthogonal_to_one_at_p2(self):
        assert abs(bj_test(Z, ONE, 2).residual) < 1e-15

    def test_p4_value_against_moment_oracle(self):
        rep = bj_test(poly(1, -1), ONE, 4)
        assert rep.residual == pytest.approx(3.0, abs=1e-13)
        assert oracles.bj_integral_p4([1, -1], [1]) == pytest.approx(3.0)
        assert not rep.is_orthogonal

    def test_p4_random_against_oracle(self, rng):
        for _ in range(20):
            f, g = oracles.random_poly(rng, 5), oracles.random_poly(rng, 5)
            got = bj_integral(sample(TaylorPoly(f)), sample(TaylorPoly(g)), 4)
            assert got == pytest.approx(oracles.bj_integral_p4(f, g), rel=1e-12, abs=1e-12)

    def test_zero_f(self):
        with pytest.raises(DegenerateInputError):
            bj_test(BoundaryGrid.constant(0), ONE, 3)

    def test_zero_g(self):
        rep = bj_test(Z, BoundaryGrid.constant(0), 3)
        assert rep.relative_residual == 0 and rep.is_orthogonal

    def test_relative_residual_is_scale_free(self):
        f, g = poly(1, 0.4j, -0.2), poly(0.3, 1)
        base = bj_test(f, g, 3).relative_residual
        assert bj_test(f * (5 - 2j), g * 0.01j, 3).relative_residual == pytest.approx(base, rel=1e-10)

    @pytest.mark.parametrize("p", [1.5, 4.0])
    def test_asymmetry_witness(self, p):
        rng = np.random.default_rng(7)
        x = sample(TaylorPoly(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
        g = sample(TaylorPoly(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
        y = orthogonalize(x, g, p)
        assert bj_test(x, y, p).is_orthogonal
        assert not bj_test(y, x, p).is_orthogonal


class TestNormingFunctional:
    def test_constant(self):
        assert np.allclose(norming_functional(ONE, 3).samples, 1)

    def test_two_z(self):
        nf = norming_functional(Z * 2, 3)
        assert np.allclose(np.abs(nf.samples), 1)
        assert dual_pairing(Z * 2, nf) == pytest.approx(2)

    @pytest.mark.parametrize("p", [1.25, 2.0, 3.0, 6.0])
    def test_duality(self, p):
        f = poly(1, -0.3 + 0.8j, 0.25)
        q = conjugate_exponent(p)
        nf = norming_functional(f, p)
        assert dual_pairing(f, nf).real == pytest.approx(p_norm(f, p), rel=1e-9)
        assert p_norm(nf, q) == pytest.approx(1.0, rel=1e-9)
        back = norming_functional(nf, q)
        # Back to a positive multiple of f.
        ratio = back.samples / f.samples
        assert np.allclose(ratio, ratio[0], rtol=1e-8)
        assert abs(ratio[0].imag) < 1e-8 and ratio[0].real > 0

    def test_unit_norm_input(self):
        f = poly(1, 1j)
        f = f / p_norm(f, 3)
        from hpopa import dual_function
        assert np.allclose(norming_functional(f, 3).samples, dual_function(f, 2).samples)

    def test_zero(self):
        with pytest.raises(DegenerateInputError):
            norming_functional(BoundaryGrid.constant(0), 2)


class TestOrthogonalize:
    def test_already_orthogonal(self):
        y = orthogonalize(ONE, Z, 3)
        assert np.allclose(y.samples, Z.samples, atol=1e-15)

    def test_removes_mean(self):
        assert np.allclose(orthogonalize(ONE, poly(1, 1), 2.7).samples, Z.samples, atol=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([1.2, 1.5, 2.0, 3.0, 4.0, 7.3]))
    def test_residual_vanishes(self, seed, p):
        (x, y), = orthogonal_pairs(p, 1, seed, 512)
        assert bj_test(x, y, p).relative_residual < 1e-10

    def test_zero_x(self):
        with pytest.raises(DegenerateInputError):
            orthogonalize(BoundaryGrid.constant(0), ONE, 2)


class TestPythagorean:
    def test_params_examples(self):
        assert pythag_params(2) == pythag_params(2.0)
        pp = pythag_params(2)
        assert (pp.r, pp.s, pp.K1, pp.K2) == (2, 2, 1, 1)
        pp = pythag_params(4)
        assert (pp.r, pp.s, pp.K2) == (4, 2, 3)
        assert pp.K1 == pytest.approx(1 / 7)
        pp = pythag_params(1.5)
        assert (pp.r, pp.s, pp.K1) == (2, 1.5, 0.5)
        assert pp.K2 == pytest.approx(1 / (math.sqrt(2) - 1))

    @pytest.mark.parametrize("p", [1.0, 0.9, math.inf])
    def test_params_domain(self, p):
        with pytest.raises(DomainError):
            pythag_params(p)

    @settings(max_examples=100)
    @given(st.floats(1.001, 50))
    def test_params_positive(self, p):
        pp = pythag_params(p)
        assert pp.K1 > 0 and pp.K2 > 0

    def test_y_zero(self):
        rep = check_pythagorean(poly(1, 2), BoundaryGrid.constant(0), 3)
        assert rep.lower_slack == 0 and rep.upper_slack == 0

    def test_p4_one_and_z(self):
        rep = check_pythagorean(ONE, Z, 4)
        assert p_norm(ONE + Z, 4) ** 4 == pytest.approx(6, rel=1e-13)
        assert rep.lower_slack == pytest.approx(6 - (1 + 1 / 7), rel=1e-12)
        assert rep.upper_slack == pytest.approx(4 - math.sqrt(6), rel=1e-12)

    def test_p2_is_identity(self):
        for x, y in orthogonal_pairs(2.0, 20, 3):
            rep = check_pythagorean(x, y, 2)
            assert abs(rep.lower_slack) <= 1e-10 and abs(rep.upper_slack) <= 1e-10

    def test_precondition(self):
        with pytest.raises(PreconditionError, match="residual"):
            check_pythagorean(poly(1, -1), ONE, 4)
