"""Tests for theta module."""

import pytest
from mpmath import mp

from jacobi_weierstrass.errors import DomainError, PoleError
from jacobi_weierstrass.qforms import dedekind_eta
from jacobi_weierstrass.theta import (
    EllipticPoint,
    GramMatrix,
    raising_log_derivative,
    reduce_mod_lattice,
    theta_char,
    theta_char_dz,
    theta_char_lattice,
    theta_char_log_dz,
    theta_lattice,
    theta_product,
)

TAU = mp.mpc(0.15, 1.05)
Z = mp.mpc(0.31, 0.22)


def _close(a, b, ctx):
    return mp.fabs(a - b) < ctx.check_tol * max(1, mp.fabs(b))


def test_gram_matrix_validation():
    """Test odd diagonals, asymmetric and indefinite matrices are refused."""
    with pytest.raises(DomainError):
        GramMatrix(((1,),))
    with pytest.raises(DomainError):
        GramMatrix(((2, 1), (0, 2)))
    with pytest.raises(DomainError):
        GramMatrix(((2, 3), (3, 2)))
    with pytest.raises(DomainError):
        GramMatrix(())
    G = GramMatrix.scaled_identity(3)
    assert G.g == 3
    assert G.pair([1, 0, 1], [1, 1, 1]) == 4


def test_elliptic_point():
    """Test points must lie over the upper half-plane."""
    assert EllipticPoint(mp.mpc(0, 1), (0,)).z == (0,)
    with pytest.raises(DomainError):
        EllipticPoint(mp.mpc(0, -1), (0,))


def test_reduce_mod_lattice(ctx):
    """Test the reduction z = z0 + m τ + n."""
    with ctx.work():
        z = Z + 3 * TAU - 2
        z0, m, n = reduce_mod_lattice(TAU, z)
        assert (m, n) == (3, -2)
        assert mp.fabs(z0 - Z) < ctx.check_tol


def test_theta_char_odd_and_vanishing(ctx):
    """Test ϑ is odd in z and vanishes at the origin."""
    with ctx.work():
        assert _close(theta_char(TAU, -Z, ctx), -theta_char(TAU, Z, ctx), ctx)
        assert mp.fabs(theta_char(TAU, 0, ctx)) < ctx.check_tol


def test_theta_char_quasi_periodicity(ctx):
    """Test ϑ(z + 1) = -ϑ(z) and ϑ(z + τ) = -e^{-πiτ - 2πiz} ϑ(z)."""
    with ctx.work():
        value = theta_char(TAU, Z, ctx)
        assert _close(theta_char(TAU, Z + 1, ctx), -value, ctx)
        factor = -mp.expjpi(-TAU - 2 * Z)
        assert _close(theta_char(TAU, Z + TAU, ctx), factor * value, ctx)


def test_theta_char_derivative_at_zero(ctx):
    """Test ∂ϑ(τ, 0) = -2π η(τ)^3."""
    with ctx.work():
        expected = -2 * mp.pi * dedekind_eta(TAU, ctx) ** 3
        assert _close(theta_char_dz(TAU, 0, ctx), expected, ctx)


def test_theta_char_dz_against_difference(ctx):
    """Test the termwise derivative against a central difference, also after reduction."""
    with ctx.work():
        h = mp.mpf(10) ** -12
        for z in (Z, Z + 2 * TAU + 1):
            numeric = (theta_char(TAU, z + h, ctx) - theta_char(TAU, z - h, ctx)) / (2 * h)
            exact = theta_char_dz(TAU, z, ctx)
            assert mp.fabs(numeric - exact) < mp.mpf(10) ** -15 * max(1, mp.fabs(exact))


def test_log_derivative(ctx):
    """Test ∂ϑ/ϑ equals the ratio of the two evaluations."""
    with ctx.work():
        for z in (Z, Z - 3 * TAU):
            ratio = theta_char_dz(TAU, z, ctx) / theta_char(TAU, z, ctx)
            assert _close(theta_char_log_dz(TAU, z, ctx), ratio, ctx)


def test_log_derivative_pole(ctx):
    """Test lattice points raise PoleError."""
    with ctx.work():
        with pytest.raises(PoleError):
            theta_char_log_dz(TAU, TAU + 1, ctx)


def test_product_against_direct_sum(ctx):
    """Test the product theta against the sum over (1/2 + Z)^g."""
    with ctx.work():
        zs = [Z, mp.mpc(-0.4, 0.9)]
        assert _close(theta_product(TAU, zs, ctx), theta_char_lattice(TAU, zs, ctx), ctx)
        assert _close(theta_product(TAU, [Z], ctx), theta_char_lattice(TAU, [Z], ctx), ctx)


def test_theta_lattice_rank_one(ctx):
    """Test G = (2) reproduces the Jacobi theta_3(2πz, q^2)."""
    with ctx.work():
        G = GramMatrix(((2,),))
        q = mp.expjpi(2 * TAU)
        expected = mp.jtheta(3, 2 * mp.pi * Z, q)
        assert _close(theta_lattice(TAU, [Z], G, ctx), expected, ctx)
        with pytest.raises(DomainError):
            theta_lattice(TAU, [Z, Z], G, ctx)


def test_raising_operator_is_elliptic(ctx):
    """Test (Y_+ θ)/θ is invariant under z -> z + 1 and z -> z + τ."""
    with ctx.work():
        base = raising_log_derivative(TAU, [Z], 0, None, ctx)
        assert _close(raising_log_derivative(TAU, [Z + 1], 0, None, ctx), base, ctx)
        assert _close(raising_log_derivative(TAU, [Z + TAU], 0, None, ctx), base, ctx)


def test_raising_operator_with_gram_matrix(ctx):
    """Test lattice translates z -> z + λτ and z -> z + λ leave (Y_+ θ)/θ unchanged."""
    with ctx.work():
        G = GramMatrix(((2, 1), (1, 2)))
        tau = mp.mpc(0, 1.1)
        zs = [mp.mpc(0.1, 0.2), mp.mpc(0.3, -0.1)]
        for j in range(2):
            base = raising_log_derivative(tau, zs, j, G, ctx)
            shifted = [zs[0] + tau, zs[1]]
            assert _close(raising_log_derivative(tau, shifted, j, G, ctx), base, ctx)
            moved = [zs[0], zs[1] + 1]
            assert _close(raising_log_derivative(tau, moved, j, G, ctx), base, ctx)


def test_raising_operator_index(ctx):
    """Test out-of-range variable indices are refused."""
    with pytest.raises(DomainError):
        raising_log_derivative(TAU, [Z], 1, None, ctx)
