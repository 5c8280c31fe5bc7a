import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperfit.errors import DomainError
from hyperfit.yeoh import (
    DOGBONE,
    SpecimenGeometry,
    StretchState,
    YeohParameters,
    derive_properties,
    elongation_percent,
    invariant_excess,
    loading_basis,
    strain_energy_density,
    strain_invariant,
    stretch_from_elongation,
    tensile_strength,
    uniaxial_cauchy_stress,
    uniaxial_loading,
)

from .conftest import TABLE1_11, TABLE1_12, physical_params

params_st = st.builds(
    YeohParameters,
    st.floats(0.05, 2.0),
    st.floats(-0.1, 0.1),
    st.floats(-0.01, 0.01),
)
stretch_st = st.floats(0.05, 20.0)


def energy_oracle(c, lam):
    # plain transcription: I1 from all three principal stretches
    l2 = l3 = 1 / math.sqrt(lam)
    x = lam ** 2 + l2 ** 2 + l3 ** 2 - 3
    return sum(ci * x ** (i + 1) for i, ci in enumerate(c))


def fd_stress(params, lam, h=1e-6):
    c = (params.c1, params.c2, params.c3)
    return lam * (energy_oracle(c, lam + h) - energy_oracle(c, lam - h)) / (2 * h)


class TestTypes:
    def test_stretch_state_incompressible(self):
        for lam in (0.3, 1.0, 2.548, 7.0):
            s = StretchState(lam)
            assert s.lambda2 == s.lambda3
            assert s.lambda1 * s.lambda2 * s.lambda3 == pytest.approx(1.0, rel=1e-12)

    def test_stretch_from_length(self):
        assert StretchState.from_length(70.0, 35.0).lambda1 == 2.0

    @pytest.mark.parametrize("lam", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_stretch(self, lam):
        with pytest.raises(DomainError):
            StretchState(lam)

    @pytest.mark.parametrize("c", [(0.0, 0.1, 0.0), (-0.1, 0, 0), (0.1, float("nan"), 0),
                                   (0.1, 0, float("inf"))])
    def test_bad_params(self, c):
        with pytest.raises(DomainError):
            YeohParameters(*c)

    def test_negative_higher_terms_allowed(self):
        YeohParameters(0.45, -0.05, -0.0021)

    @pytest.mark.parametrize("g", [(0, 5, 0.5), (35, -5, 0.5), (35, 5, float("nan"))])
    def test_bad_geometry(self, g):
        with pytest.raises(DomainError):
            SpecimenGeometry(*g)


class TestInvariant:
    @pytest.mark.parametrize("lam, expected", [(1.0, 3.0), (2.0, 5.0), (0.5, 4.25)])
    def test_values(self, lam, expected):
        assert strain_invariant(StretchState(lam)) == pytest.approx(expected, rel=1e-15)

    @given(stretch_st)
    def test_floor(self, lam):
        x = invariant_excess(lam)
        assert x >= 0
        if lam != 1.0:
            assert x > 0

    def test_exact_zero_at_reference(self):
        assert invariant_excess(1.0) == 0.0


class TestEnergy:
    def test_reference_zero(self):
        assert strain_energy_density(TABLE1_11, 1.0) == 0.0

    def test_table1_11_at_two(self):
        # 0.45*2 + 0.0572*4 - 0.0021*8
        assert strain_energy_density(TABLE1_11, 2.0) == pytest.approx(1.1120, rel=1e-12)

    def test_neo_hookean_limit(self):
        assert strain_energy_density(YeohParameters(1, 0, 0), 2.0) == pytest.approx(2.0, rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            strain_energy_density(TABLE1_11, 0.0)

    def test_array_input(self):
        lam = np.array([1.0, 2.0])
        assert strain_energy_density(TABLE1_11, lam) == pytest.approx([0.0, 1.112])


class TestStress:
    def test_reference_zero(self):
        assert uniaxial_cauchy_stress(TABLE1_11, 1.0) == 0.0

    def test_table1_11_at_two(self):
        # 7 * (0.45 + 0.2288 - 0.0252); finite-difference oracle agrees to 1e-10
        assert uniaxial_cauchy_stress(TABLE1_11, 2.0) == pytest.approx(4.5752, rel=1e-12)
        assert fd_stress(TABLE1_11, 2.0) == pytest.approx(4.5752, rel=1e-8)

    def test_table1_12_at_one_and_half(self):
        # frozen from the finite-difference oracle (0.53927673609) and the
        # exact rational evaluation (0.539276736111...)
        assert uniaxial_cauchy_stress(TABLE1_12, 1.5) == pytest.approx(0.5392767361111, rel=1e-12)

    def test_exact_rational(self):
        lam = Fraction(3, 2)
        x = lam * lam + 2 / lam - 3
        c = [Fraction("0.12"), Fraction("0.046"), Fraction("-0.0033")]
        exact = 2 * (lam * lam - 1 / lam) * sum((i + 1) * c[i] * x ** i for i in range(3))
        assert uniaxial_cauchy_stress(TABLE1_12, 1.5) == pytest.approx(float(exact), rel=1e-14)

    def test_gradient_oracle(self, rng):
        lam = np.linspace(0.5, 2.5, 100)
        for p in physical_params(rng, 10):
            sigma = uniaxial_cauchy_stress(p, lam)
            fd = np.array([fd_stress(p, v) for v in lam])
            np.testing.assert_allclose(sigma, fd, rtol=1e-5)

    @given(params_st, stretch_st)
    def test_neo_hookean_reduction(self, c1, lam):
        p = YeohParameters(c1.c1, 0.0, 0.0)
        assert uniaxial_cauchy_stress(p, lam) == 2 * p.c1 * (lam ** 2 - 1 / lam)

    @given(params_st, st.floats(0.999, 1.001))
    def test_sign_near_reference(self, p, lam):
        s = uniaxial_cauchy_stress(p, lam)
        assert np.sign(s) == np.sign(lam - 1.0)


class TestLoading:
    def test_reference_zero(self):
        assert uniaxial_loading(TABLE1_11, DOGBONE, 1.0) == 0.0

    def test_table1_11_at_two(self):
        F = uniaxial_loading(TABLE1_11, DOGBONE, 2.0)
        assert F == pytest.approx(2 * 0.5 * 5 * 1.75 * 0.6536, rel=1e-12)
        assert F == pytest.approx(4.5752 * 2.5 / 2, rel=1e-12)

    def test_neo_hookean_brute_force(self):
        # 2 h0 w0 (l - 1/l^2) C1 at l = 1.1, evaluated in exact rationals
        lam = Fraction(11, 10)
        expected = float(2 * Fraction(1, 2) * 5 * (lam - 1 / lam ** 2))
        assert expected == pytest.approx(1.3677685950413223, rel=1e-15)
        got = uniaxial_loading(YeohParameters(1, 0, 0), DOGBONE, 1.1)
        assert got == pytest.approx(expected, rel=1e-14)
        sigma = uniaxial_cauchy_stress(YeohParameters(1, 0, 0), 1.1)
        assert got == pytest.approx(sigma * DOGBONE.area / 1.1, rel=1e-12)

    @given(params_st, stretch_st)
    def test_stress_identity(self, p, lam):
        F = uniaxial_loading(p, DOGBONE, lam)
        s = uniaxial_cauchy_stress(p, lam)
        assert F == pytest.approx(s * DOGBONE.area / lam, rel=1e-12, abs=1e-300)

    @given(params_st, st.lists(stretch_st, min_size=1, max_size=8))
    def test_basis_matches_loading(self, p, lams):
        lam = np.array(lams)
        B = loading_basis(DOGBONE, lam)
        np.testing.assert_allclose(B @ p.as_array(), uniaxial_loading(p, DOGBONE, lam),
                                   rtol=1e-10, atol=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            uniaxial_loading(TABLE1_11, DOGBONE, -0.5)


class TestTensileStrength:
    def test_zero_load(self):
        assert tensile_strength(0.0, DOGBONE, 2.0) == 0.0

    def test_unit_case(self):
        assert tensile_strength(1.0, SpecimenGeometry(1, 1, 1), 1.0) == 1.0

    def test_table2_inversion(self):
        lam = stretch_from_elongation(154.8)
        assert lam == pytest.approx(2.548, rel=1e-15)
        F = 9.3 * DOGBONE.area / lam
        assert F == pytest.approx(9.12, abs=0.005)
        assert tensile_strength(F, DOGBONE, lam) == pytest.approx(9.3, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            tensile_strength(1.0, DOGBONE, 0.99)
        with pytest.raises(DomainError):
            tensile_strength(-1.0, DOGBONE, 1.5)


class TestProperties:
    def test_table1_table2_consistency(self):
        p = derive_properties(YeohParameters(0.45, 0.0572, -0.0021))
        assert p.shear_modulus == pytest.approx(0.90, rel=1e-15)
        assert p.youngs_modulus == 2.7
        assert p.poisson_ratio == 0.5
        assert p.tensile_strength is None

    def test_softer_composition(self):
        p = derive_properties(YeohParameters(0.12, 0.046, -0.0033))
        assert p.youngs_modulus == pytest.approx(0.72, rel=1e-15)

    def test_with_break(self):
        p = derive_properties(TABLE1_11, 2.548, 9.3 * 2.5 / 2.548)
        assert p.tensile_strength == pytest.approx(9.3, rel=1e-12)
        assert p.elongation_at_break == pytest.approx(154.8, rel=1e-12)
        assert elongation_percent(2.548) == pytest.approx(154.8)

    @given(params_st)
    def test_consistency_chain(self, params):
        p = derive_properties(params)
        assert p.shear_modulus == 2 * params.c1
        assert p.youngs_modulus == 2 * p.shear_modulus * (1 + p.poisson_ratio)
        assert p.youngs_modulus == 6 * params.c1
