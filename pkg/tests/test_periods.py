"""Tests for periods module."""

import random

import pytest
from mpmath import mp

from jacobi_weierstrass.errors import DomainError, LatticeRecoveryError
from jacobi_weierstrass.fixtures import (
    CM_DEFECTS,
    CM_P1,
    CM_P2,
    DELTA_DEFECT,
    DELTA_GAMMA,
    SIGMA1,
    SIGMA2,
)
from jacobi_weierstrass.periods import (
    EichlerValue,
    PeriodLattice,
    _integer_span_basis,
    _unfolded_polynomial,
    cusp_period,
    eichler_quadrature,
    eichler_series,
    eichler_standard,
    eichler_vector,
    modularity_defect,
    period_integral,
    period_lattice,
    period_polynomial,
    period_values,
    recover_lattice,
)
from jacobi_weierstrass.symrep import (
    IDENTITY,
    MINUS_IDENTITY,
    S,
    SL2Z,
    T,
    display_order,
    n_matrix,
)
from jacobi_weierstrass.weierstrass import Lattice2D


def test_eichler_series_against_quadrature(ctx, delta, eta3p8):
    """Test the Fourier-side Eichler integral against quadrature on the vertical ray."""
    with ctx.work():
        for form, ell, tau in ((delta, 5, mp.mpc(0.1, 1.1)), (eta3p8, 2, mp.mpc(0.3, 0.8))):
            series = eichler_series(form, ell, tau, ctx)
            quad = eichler_quadrature(form, ell, tau, ctx)
            assert mp.fabs(series - quad) < ctx.check_tol


def test_eichler_series_against_quadrature_grid(ctx, delta):
    """Test series and quadrature agree on a 3x3 grid for l = 0, 1 and k - 2."""
    with ctx.work():
        for x in ("-0.3", "0", "0.4"):
            for y in ("0.8", "1.1", "1.5"):
                tau = mp.mpc(x, y)
                for ell in (0, 1, delta.weight - 2):
                    series = eichler_series(delta, ell, tau, ctx)
                    quad = eichler_quadrature(delta, ell, tau, ctx)
                    assert mp.fabs(series - quad) < ctx.check_tol * max(1, mp.fabs(quad))


def test_eichler_zeroth_component(ctx, delta):
    """Test E_0(τ) = sum τ(n) (i / 2πn) q^n."""
    with ctx.work():
        tau = mp.mpc(0.2, 1.5)
        q = mp.expjpi(2 * tau)
        form = delta.ensure(60)
        direct = sum(form.a(n) * 1j / (2 * mp.pi * n) * q**n for n in range(1, 61))
        assert mp.fabs(eichler_series(delta, 0, tau, ctx) - direct) < ctx.check_tol


def test_eichler_derivative(ctx, eta3p8):
    """Test dE_l/dτ = -f(τ) τ^l."""
    with ctx.work():
        tau = mp.mpc(0.1, 0.7)
        h = mp.mpf(10) ** -10
        for ell in range(3):
            slope = (
                eichler_series(eta3p8, ell, tau + h, ctx)
                - eichler_series(eta3p8, ell, tau - h, ctx)
            ) / (2 * h)
            expected = -eta3p8.evaluate(tau, ctx) * tau**ell
            assert mp.fabs(slope - expected) < mp.mpf(10) ** -15


def test_eichler_decays_at_cusp(ctx, delta):
    """Test the Eichler vector tends to zero as Im τ grows."""
    with ctx.work():
        assert all(mp.fabs(v) < 1e-15 for v in eichler_standard(delta, mp.mpc(0, 10), ctx))


def test_eichler_component_range(ctx, delta):
    """Test components outside 0..k-2 are refused."""
    with pytest.raises(DomainError):
        eichler_series(delta, 11, 1j, ctx)
    with pytest.raises(DomainError):
        eichler_quadrature(delta, -1, 1j, ctx)
    with pytest.raises(DomainError):
        eichler_series(delta, 0, -1j, ctx)


def test_eichler_vector_basis(ctx, eta3p8):
    """Test the basis tag and that the standard coordinates are recovered."""
    with ctx.work():
        tau = mp.mpc(0.25, 0.9)
        standard = eichler_standard(eta3p8, tau, ctx)
        plain = eichler_vector(eta3p8, tau, IDENTITY, ctx)
        assert plain.basis_tag == IDENTITY
        assert list(plain.components) == standard
        moved = eichler_vector(eta3p8, tau, S @ T, ctx)
        assert isinstance(moved, EichlerValue)
        assert moved.basis_tag == S @ T
        back = moved.as_sym_vector().to_standard().entries
        assert all(mp.fabs(a - b) < ctx.check_tol for a, b in zip(back, standard))


def test_unfolded_polynomial():
    """Test (A s + B)^l (C s + D)^{m-l} coefficients."""
    assert _unfolded_polynomial(SL2Z(2, 1, 1, 1), 1, 2) == [1, 3, 2]
    assert _unfolded_polynomial(IDENTITY, 0, 2) == [1, 0, 0]


def test_period_of_translations_vanishes(ctx, delta):
    """Test elements fixing ∞ have zero period."""
    for gamma in (T, MINUS_IDENTITY, T @ T):
        assert all(v == 0 for v in period_polynomial(delta, gamma, ctx).entries)
    assert period_integral(delta, T, 3, ctx) == 0
    with pytest.raises(DomainError):
        period_integral(delta, S, 11, ctx)


def test_period_requires_group_element(ctx, eta3p8):
    """Test periods are only defined for elements of the form's group."""
    with pytest.raises(DomainError):
        period_polynomial(eta3p8, S, ctx)


def test_delta_period_values(ctx, delta):
    """Test the S-period of Δ: ∫_0^{i∞} Δ(t) t^l dt has the known magnitudes."""
    with ctx.work():
        values = period_polynomial(delta, S, ctx).entries
        alpha = mp.mpf("0.00595896")
        beta = mp.mpf("0.00370771")
        for ell in (0, 10):
            assert mp.fabs(values[ell].real) < ctx.check_tol
            assert mp.fabs(mp.fabs(values[ell]) - alpha) < 1e-5 * alpha
        for ell in (1, 9):
            assert mp.fabs(values[ell].imag) < ctx.check_tol
            assert mp.fabs(mp.fabs(values[ell]) - beta) < 1e-5 * beta
        # t -> -1/t symmetry
        for ell in range(11):
            assert mp.fabs(mp.fabs(values[ell]) - mp.fabs(values[10 - ell])) < ctx.check_tol


def test_cm_period_goldens(ctx, eta3p8):
    """Test the lattice parts of E(σ τ) for the two Γ0(9) elements."""
    with ctx.work():
        for gamma, golden in ((SIGMA1, CM_P1), (SIGMA2, CM_P2)):
            values = display_order(cusp_period(eta3p8, gamma, ctx).entries)
            assert len(values) == len(golden)
            for v, (re, im) in zip(values, golden):
                assert mp.fabs(v - mp.mpc(re, im)) < 5e-7


def test_cusp_period_cocycle(ctx, eta3p8):
    """Test p(γ1 γ2) = p(γ1) + N(γ1) p(γ2)."""
    with ctx.work():
        p1 = cusp_period(eta3p8, SIGMA1, ctx).entries
        p2 = cusp_period(eta3p8, SIGMA2, ctx).entries
        p12 = cusp_period(eta3p8, SIGMA1 @ SIGMA2, ctx).entries
        expected = [a + b for a, b in zip(p1, n_matrix(SIGMA1, 4).apply(list(p2)))]
        assert all(mp.fabs(a - b) < ctx.check_tol for a, b in zip(p12, expected))


def test_defect_equals_cusp_period(ctx, delta):
    """Test E(γτ) - N(γ) E(τ) against the split path integral."""
    with ctx.work():
        lattice = Lattice2D(1, 1j)
        defect = modularity_defect(delta, DELTA_GAMMA, mp.mpc(0, 2), lattice, ctx)
        periods = cusp_period(delta, DELTA_GAMMA, ctx).entries
        for a, b in zip(defect.values, periods):
            assert mp.fabs(a - b) < ctx.check_tol * max(1, mp.fabs(b))


def test_integer_span_basis():
    """Test the Hermite-style basis of an index-2 sublattice."""
    assert _integer_span_basis([(2, 0), (0, 2), (1, 1)]) == ((1, 1), (0, 2))
    with pytest.raises(LatticeRecoveryError):
        _integer_span_basis([(1, 2), (2, 4)])


def test_recover_unit_lattice(ctx):
    """Test {1, i, 3 + 2i} generates Z[i]."""
    lattice = recover_lattice([1, 1j, mp.mpc(3, 2)], ctx)
    with ctx.work():
        assert mp.fabs(lattice.volume - 1) < ctx.check_tol
        assert mp.fabs(mp.fabs(lattice.omega1) - 1) < ctx.check_tol
        assert lattice.residual < ctx.pole_tol
        assert len(lattice.generators) == 3


def test_recover_finer_lattice(ctx):
    """Test a half-integral value refines the lattice."""
    with ctx.work():
        lattice = recover_lattice([1, 1j, mp.mpf(1) / 2], ctx)
        assert mp.fabs(lattice.volume - mp.mpf(1) / 2) < ctx.check_tol


def test_recover_is_idempotent(ctx):
    """Test integer combinations of a basis give back the same lattice."""
    with ctx.work():
        w1 = mp.mpc("0.3", "0.1")
        w2 = mp.mpc("-0.2", "0.7")
        combos = [(1, 0), (0, 1), (3, -2), (-5, 7), (11, 4), (2, 2)]
        values = [a * w1 + b * w2 for a, b in combos]
        lattice = recover_lattice(values, ctx)
        expected = Lattice2D(w1, w2)
        assert mp.fabs(lattice.volume - expected.volume) < ctx.check_tol
        again = recover_lattice([lattice.omega1, lattice.omega2] + values, ctx)
        assert mp.fabs(again.volume - lattice.volume) < ctx.check_tol
        assert lattice.basis.distance(w1) < ctx.check_tol


def test_recover_failures(ctx):
    """Test dependent, vanishing and irrational inputs."""
    with pytest.raises(LatticeRecoveryError, match="dependent"):
        recover_lattice([1, 2, 3], ctx)
    with pytest.raises(LatticeRecoveryError, match="vanish"):
        recover_lattice([0, 0], ctx)
    with ctx.work():
        irrational = [1, 1j, mp.sqrt(2)]
    with pytest.raises(LatticeRecoveryError):
        recover_lattice(irrational, ctx)


def test_recover_rectangular_hull(ctx):
    """Test the rectangular hull of a centred lattice is twice as fine as its span."""
    values = [mp.mpc(1, 1), mp.mpc(1, -1), 2]
    span = recover_lattice(values, ctx)
    hull = recover_lattice(values, ctx, rectangular=True)
    with ctx.work():
        assert mp.fabs(span.volume - 2) < ctx.check_tol
        assert mp.fabs(hull.volume - 1) < ctx.check_tol
        rect = hull.rectangular_basis()
        assert mp.fabs(rect.omega1 - 1) < ctx.check_tol
        assert mp.fabs(rect.omega2 - 1j) < ctx.check_tol
        for v in values:
            assert hull.basis.distance(v) < ctx.check_tol
        with pytest.raises(DomainError):
            span.rectangular_basis()


def test_recover_rectangular_hull_scales(ctx):
    """Test the hull generators are the gcds of the real and imaginary parts."""
    with ctx.work():
        values = [mp.mpc("0.6", "0.35"), mp.mpc("0.9", "-0.7"), mp.mpc("0", "1.05")]
        rect = recover_lattice(values, ctx, rectangular=True).rectangular_basis()
        assert mp.fabs(rect.omega1 - mp.mpf("0.3")) < ctx.check_tol
        assert mp.fabs(rect.omega2 - mp.mpc(0, "0.35")) < ctx.check_tol


def test_rectangular_basis(ctx):
    """Test the (real, imaginary) presentation of a rectangular lattice."""
    with ctx.work():
        lattice = recover_lattice([mp.mpc(0, 3), -2, mp.mpc(4, 3)], ctx)
        rect = lattice.rectangular_basis()
        assert mp.fabs(rect.omega1 - 2) < ctx.check_tol
        assert mp.fabs(rect.omega2 - mp.mpc(0, 3)) < ctx.check_tol
        skew = PeriodLattice(Lattice2D(1, mp.mpc(0.5, 1)))
        with pytest.raises(DomainError):
            skew.rectangular_basis()


def test_period_values_labels(ctx, delta):
    """Test period values carry 'element:component' labels."""
    values = period_values(delta, ctx, [S], max_workers=2)
    assert len(values) == 11
    assert values[0][1] == "(0,-1;1,0):0"


def test_delta_lattice(delta_context):
    """Test Λ_Δ = ω1 Z + ω2 Z with ω1 = 7.7243968e-5 and ω2 = 2.6274096e-7 i."""
    with delta_context.ctx.work():
        rect = delta_context.lattice.rectangular_basis()
        assert mp.fabs(rect.omega1.real / mp.mpf("7.7243968e-5") - 1) < 1e-7
        assert mp.fabs(rect.omega2.imag / mp.mpf("2.6274096e-7") - 1) < 1e-7


def test_delta_defect_coordinates(delta_context):
    """Test E(γτ) - N(γ) E(τ) for γ = (2, 5; 1, 3) has the golden Λ_Δ coordinates."""
    ctx = delta_context.ctx
    with ctx.work():
        rect = delta_context.lattice.rectangular_basis()
        defect = modularity_defect(delta_context.form, DELTA_GAMMA, 2j, rect, ctx)
        assert defect.within(ctx.pole_tol * mp.fabs(rect.omega2))
        assert defect.display_coordinates(rect) == DELTA_DEFECT


def test_cm_lattice(cm_context):
    """Test Λ for η(3τ)^8 is 0.057750 Z + 0.011114 i Z."""
    with cm_context.ctx.work():
        rect = cm_context.lattice.rectangular_basis()
        assert mp.fabs(rect.omega1.real - mp.mpf("0.057750")) < 5e-7
        assert mp.fabs(rect.omega2.imag - mp.mpf("0.011114")) < 5e-7


def test_cm_lattice_is_hull_of_periods(cm_context):
    """Test the Z-span of the Γ0(9) periods has index 2 in the rectangular lattice."""
    ctx = cm_context.ctx
    values = [v for v, _ in cm_context.lattice.generators]
    span = recover_lattice(values, ctx)
    with ctx.work():
        assert mp.fabs(span.volume / cm_context.lattice.volume - 2) < ctx.check_tol
        for v in values:
            assert cm_context.lattice.basis.distance(v) < ctx.pole_tol


def test_cm_defects(cm_context, cm_tau):
    """Test the lattice coordinates of the two Γ0(9) corrections."""
    ctx = cm_context.ctx
    with ctx.work():
        rect = cm_context.lattice.rectangular_basis()
        for gamma, golden in CM_DEFECTS.items():
            defect = modularity_defect(cm_context.form, gamma, cm_tau, rect, ctx)
            assert defect.display_coordinates(rect) == golden
            assert defect.within(ctx.pole_tol)


@pytest.mark.parametrize("name", ["delta_context", "cm_context"])
def test_defect_integral_for_generators(request, name):
    """Test every listed group element gives a defect on Λ_f at three random points."""
    ctxm = request.getfixturevalue(name)
    ctx = ctxm.ctx
    rng = random.Random(13)
    with ctx.work():
        size = max(mp.fabs(ctxm.lattice.omega1), mp.fabs(ctxm.lattice.omega2))
        for gamma in ctxm.form.group.period_elements:
            for _ in range(3):
                tau = mp.mpc(rng.uniform(-0.4, 0.4), rng.uniform(0.7, 1.3))
                defect = modularity_defect(ctxm.form, gamma, tau, ctxm.lattice, ctx)
                assert defect.within(ctx.pole_tol * size)


def test_defect_outside_group(ctx, eta3p8):
    """Test the defect is only defined on the form's group."""
    with pytest.raises(DomainError):
        modularity_defect(eta3p8, S, 1j, Lattice2D(1, 1j), ctx)


def test_period_lattice_of_level_11(ctx):
    """Test the weight-2 level-11 form gives a lattice containing all its periods."""
    from jacobi_weierstrass.qforms import load_form

    form = load_form("eta2x11")
    lattice = period_lattice(form, ctx, max_workers=2)
    with ctx.work():
        assert lattice.volume > 0
        for value, _ in lattice.generators:
            assert lattice.basis.distance(value) < ctx.pole_tol
