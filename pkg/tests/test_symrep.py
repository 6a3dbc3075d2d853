"""Tests for symrep module."""

import random
from math import comb

import pytest
from mpmath import mp

from jacobi_weierstrass.errors import DomainError
from jacobi_weierstrass.symrep import (
    IDENTITY,
    MINUS_IDENTITY,
    S,
    SL2Z,
    T,
    SymVector,
    act_basis,
    display_order,
    expand_in_standard_monomials,
    j_factor,
    n_matrix,
    sym_power_of_point,
)
from jacobi_weierstrass.weierstrass import Lattice2D

WEIGHTS = [2, 4, 6, 12]


def _random_word(rng: random.Random, length: int = 6) -> SL2Z:
    letters = [S, T, T.inverse(), S.inverse()]
    M = IDENTITY
    for _ in range(length):
        M = M @ rng.choice(letters)
    return M


@pytest.fixture
def words():
    rng = random.Random(20240611)
    return [_random_word(rng) for _ in range(8)]


def test_sl2z_rejects_bad_determinant():
    """Test a matrix of determinant 2 is refused."""
    with pytest.raises(DomainError):
        SL2Z(2, 0, 0, 1)


def test_sl2z_parse_and_inverse():
    """Test parsing and the group law."""
    M = SL2Z.parse("2,5,1,3")
    assert M.as_tuple() == (2, 5, 1, 3)
    assert M @ M.inverse() == IDENTITY
    assert str(M) == "(2,5;1,3)"
    with pytest.raises(DomainError):
        SL2Z.parse("1,2,3")


def test_sl2z_act():
    """Test the Möbius action and the cusp M·∞."""
    with mp.workdps(30):
        assert S.act(2j) == mp.mpc(0, 0.5)
        assert T.act(1j) == mp.mpc(1, 1)
    assert S.cusp_at_infinity() == 0
    assert T.cusp_at_infinity() is None
    assert j_factor(SL2Z(2, 5, 1, 3), 1j) == mp.mpc(3, 1)


@pytest.mark.parametrize("k", WEIGHTS)
def test_homomorphism(k, words):
    """Test N(M1 M2) = N(M1) N(M2) exactly."""
    for M1, M2 in zip(words, reversed(words)):
        assert n_matrix(M1 @ M2, k) == n_matrix(M1, k) @ n_matrix(M2, k)


@pytest.mark.parametrize("k", WEIGHTS)
def test_inverse_and_determinant(k, words):
    """Test N(M) N(M^-1) = I and det N(M) = 1."""
    for M in words:
        assert (n_matrix(M, k) @ n_matrix(M.inverse(), k)).is_identity()
        assert n_matrix(M, k).determinant() == 1


@pytest.mark.parametrize("k", WEIGHTS)
def test_minus_identity_acts_trivially(k):
    """Test -I acts as the identity on even symmetric powers."""
    assert n_matrix(MINUS_IDENTITY, k).is_identity()
    assert n_matrix(IDENTITY, k).is_identity()


@pytest.mark.parametrize("k", WEIGHTS)
def test_transpose_with_binomial_weights(k, words):
    """Test diag(c) N(M^t) = N(M)^t diag(c) with c_l = binom(k-2, l)."""
    m = k - 2
    for M in words:
        N = n_matrix(M, k).entries
        Nt = n_matrix(M.transpose(), k).entries
        for i in range(m + 1):
            for j in range(m + 1):
                assert comb(m, i) * Nt[i][j] == N[j][i] * comb(m, j)


@pytest.mark.parametrize("k", [4, 6, 12])
def test_standard_coordinates_match_expansion(k, words):
    """Test N(B) against expanding the basis polynomials directly."""
    m = k - 2
    entries = tuple(range(1, k))
    for B in words:
        v = SymVector(k, entries, B)
        expanded = expand_in_standard_monomials(v)
        standard = v.to_standard().entries
        for t in range(m + 1):
            assert expanded[t] == comb(m, t) * standard[t]


@pytest.mark.parametrize("k", [4, 12])
def test_act_basis_preserves_element(k, words):
    """Test changing basis keeps the standard coordinates."""
    v = SymVector(k, tuple(range(k - 1)))
    for M in words:
        moved = act_basis(M, v)
        assert moved.basis_tag == M
        assert moved.to_standard().entries == v.entries
        assert act_basis(M.inverse(), moved).to_standard().entries == v.entries


def test_n_matrix_rejects_odd_weight():
    """Test odd or too small weights are refused."""
    with pytest.raises(DomainError):
        n_matrix(S, 3)
    with pytest.raises(DomainError):
        n_matrix(S, 0)


def test_sym_vector_length():
    """Test a SymVector must have k-1 entries."""
    with pytest.raises(DomainError):
        SymVector(4, (1, 2))


def test_n_matrix_of_t():
    """Test N(T) maps the powers of tau to the powers of tau + 1."""
    with mp.workdps(30):
        tau = mp.mpc(0.3, 1.1)
        moved = n_matrix(T, 6).apply(list(sym_power_of_point(tau, 6).entries))
        for ell, value in enumerate(moved):
            assert mp.fabs(value - (tau + 1) ** ell) < mp.mpf(10) ** -25


def test_display_order():
    """Test the printed ordering: highest e1 power first with alternating sign."""
    assert display_order([1, 2, 3]) == [3, -2, 1]
    assert display_order([5]) == [5]


@pytest.mark.parametrize("k", WEIGHTS)
def test_homomorphism_on_random_pairs(k):
    """Test N(M1 M2) = N(M1) N(M2) for twenty independent random pairs."""
    rng = random.Random(7)
    for _ in range(20):
        M1 = _random_word(rng, rng.randint(1, 8))
        M2 = _random_word(rng, rng.randint(1, 8))
        assert n_matrix(M1 @ M2, k) == n_matrix(M1, k) @ n_matrix(M2, k)


def test_integer_lattice_vectors_stay_integral(words):
    """Test N(M) maps vectors of lattice points to exactly recovered lattice points."""
    k = 6
    rng = random.Random(11)
    with mp.workdps(40):
        lattice = Lattice2D(mp.mpc("0.7", "0.1"), mp.mpc("0.2", "1.3"))
        pairs = [(rng.randint(-50, 50), rng.randint(-50, 50)) for _ in range(k - 1)]
        vector = [a * lattice.omega1 + b * lattice.omega2 for a, b in pairs]
        for M in words[:4]:
            N = n_matrix(M, k)
            moved = N.apply(vector)
            expected_a = N.apply([a for a, _ in pairs])
            expected_b = N.apply([b for _, b in pairs])
            for value, ea, eb in zip(moved, expected_a, expected_b):
                a, b, dist = lattice.nearest_point(value)
                assert (a, b) == (ea, eb)
                assert dist < mp.mpf(10) ** -20 * max(1, mp.fabs(value))
