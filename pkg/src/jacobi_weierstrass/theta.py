"""Jacobi theta functions.

``theta_char`` is the one-variable theta with characteristic (1/2, 1/2),

    ϑ(τ, z) = sum_{n in 1/2 + Z} exp(π i n^2 τ + 2π i n (z + 1/2)),

which is odd in z and vanishes exactly on Z + Zτ. ``theta_lattice`` is the
theta series of an even positive definite Gram matrix.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from mpmath import mp

from .errors import DomainError, PoleError
from .numeric import PrecisionContext, require_upper_half_plane

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric integral Gram matrix with even diagonal, positive definite."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        g = len(self.entries)
        if g == 0 or any(len(row) != g for row in self.entries):
            raise DomainError("Gram matrix must be square and non-empty")
        for i in range(g):
            if self.entries[i][i] % 2:
                raise DomainError("Gram matrix diagonal must be even")
            for j in range(g):
                if self.entries[i][j] != self.entries[j][i]:
                    raise DomainError("Gram matrix must be symmetric")
        for size in range(1, g + 1):
            if _det([row[:size] for row in self.entries[:size]]) <= 0:
                raise DomainError("Gram matrix is not positive definite")

    @classmethod
    def scaled_identity(cls, g: int, scale: int = 2) -> "GramMatrix":
        return cls(tuple(tuple(scale if i == j else 0 for j in range(g)) for i in range(g)))

    @property
    def g(self) -> int:
        return len(self.entries)

    def apply(self, v: Sequence) -> list:
        return [sum(e * x for e, x in zip(row, v)) for row in self.entries]

    def pair(self, x: Sequence, y: Sequence):
        return sum(a * b for a, b in zip(x, self.apply(y)))

    def min_eigenvalue(self) -> mp.mpf:
        values = mp.eigsy(mp.matrix([list(row) for row in self.entries]))[0]
        return min(values[i] for i in range(self.g))


def _det(rows: Sequence[Sequence[int]]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class EllipticPoint:
    """A point ``(τ, z⃗)`` of H x C^g."""

    tau: mp.mpc
    z: tuple

    def __post_init__(self) -> None:
        require_upper_half_plane(self.tau)


def reduce_mod_lattice(tau, z) -> tuple[mp.mpc, int, int]:
    """Write ``z = z0 + m τ + n`` with z0 in the centred period parallelogram."""
    y = tau.imag
    m = int(mp.nint(z.imag / y))
    w = z - m * tau
    n = int(mp.nint(w.real))
    return w - n, m, n


def _half_integer_window(tau, ctx: PrecisionContext) -> int:
    # |Im z| <= Im τ / 2 after reduction, so term n decays like exp(-π y (n^2 - |n|)).
    y = tau.imag
    budget = ctx.dps * mp.log(10) + 10
    return int(mp.ceil(mp.mpf(1) / 2 + mp.sqrt(mp.mpf(1) / 4 + budget / (mp.pi * y)))) + 2


def _theta_char_reduced(tau, z0, ctx: PrecisionContext):
    """ϑ, ∂ϑ and the sum of absolute terms at a reduced argument."""
    N = _half_integer_window(tau, ctx)
    value = mp.mpc(0)
    deriv = mp.mpc(0)
    scale = mp.mpf(0)
    for j in range(-N - 1, N + 1):
        n = j + mp.mpf(1) / 2
        term = mp.expjpi(n * n * tau + 2 * n * (z0 + mp.mpf(1) / 2))
        value += term
        deriv += 2j * mp.pi * n * term
        scale += mp.fabs(term)
    return value, deriv, scale


def _cocycle(tau, z0, m: int, n: int):
    sign = -1 if (m + n) % 2 else 1
    return sign * mp.expjpi(-m * m * tau - 2 * m * z0)


def theta_char(tau, z, ctx: PrecisionContext) -> mp.mpc:
    """ϑ(τ, z); large ``Im z`` is reduced first and the cocycle reapplied."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        z0, m, n = reduce_mod_lattice(tau, mp.mpc(z))
        value, _, _ = _theta_char_reduced(tau, z0, ctx)
        return _cocycle(tau, z0, m, n) * value


def theta_char_dz(tau, z, ctx: PrecisionContext) -> mp.mpc:
    """∂ϑ/∂z by termwise differentiation."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        z0, m, n = reduce_mod_lattice(tau, mp.mpc(z))
        value, deriv, _ = _theta_char_reduced(tau, z0, ctx)
        return _cocycle(tau, z0, m, n) * (deriv - 2j * mp.pi * m * value)


def theta_char_log_dz(tau, z, ctx: PrecisionContext) -> mp.mpc:
    """∂ϑ/ϑ from one truncation window.

    Raises:
        PoleError: ``z`` lies within ``ctx.pole_tol`` of ``Z + Zτ``.
    """
    with ctx.work():
        tau = require_upper_half_plane(tau)
        z0, m, _ = reduce_mod_lattice(tau, mp.mpc(z))
        if mp.fabs(z0) < ctx.pole_tol:
            raise PoleError("argument lies on the lattice", point=z)
        value, deriv, _ = _theta_char_reduced(tau, z0, ctx)
        return deriv / value - 2j * mp.pi * m


def theta_product(tau, zs: Sequence, ctx: PrecisionContext) -> mp.mpc:
    """``prod_i ϑ(τ, z_i)``, the theta of the standard form with characteristic."""
    with ctx.work():
        result = mp.mpc(1)
        for z in zs:
            result *= theta_char(tau, z, ctx)
        return result


def theta_char_lattice(tau, zs: Sequence, ctx: PrecisionContext) -> mp.mpc:
    """Direct sum over ``(1/2 + Z)^g``; a slow cross-check of :func:`theta_product`."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        zs = [mp.mpc(z) for z in zs]
        reach = max([mp.fabs(z.imag) for z in zs] + [0])
        budget = ctx.dps * mp.log(10) + 10
        R = int(mp.ceil((reach + mp.sqrt(reach**2 + tau.imag * budget / mp.pi)) / tau.imag))
        R += 2
        half = mp.mpf(1) / 2
        total = mp.mpc(0)
        for js in itertools.product(range(-R - 1, R + 1), repeat=len(zs)):
            ns = [j + half for j in js]
            exponent = sum(n * n for n in ns) * tau + 2 * sum(
                n * (z + half) for n, z in zip(ns, zs)
            )
            total += mp.expjpi(exponent)
        return total


def _lattice_window(tau, zs, G: GramMatrix, ctx: PrecisionContext) -> int:
    y = tau.imag
    lam = G.min_eigenvalue()
    reach = mp.sqrt(sum(x**2 for x in G.apply([z.imag for z in zs])))
    budget = ctx.dps * mp.log(10) + 10
    R = (reach + mp.sqrt(reach**2 + y * lam * budget / mp.pi)) / (y * lam)
    return int(mp.ceil(R)) + 2


def _theta_lattice_terms(tau, zs, G: GramMatrix, ctx: PrecisionContext):
    R = _lattice_window(tau, zs, G, ctx)
    value = mp.mpc(0)
    grad = [mp.mpc(0)] * G.g
    scale = mp.mpf(0)
    for ell in itertools.product(range(-R, R + 1), repeat=G.g):
        g_ell = G.apply(ell)
        norm = sum(a * b for a, b in zip(ell, g_ell))
        term = mp.expjpi(norm * tau + 2 * sum(a * z for a, z in zip(g_ell, zs)))
        value += term
        scale += mp.fabs(term)
        grad = [d + 2j * mp.pi * a * term for d, a in zip(grad, g_ell)]
    return value, grad, scale


def theta_lattice(tau, zs: Sequence, G: GramMatrix, ctx: PrecisionContext) -> mp.mpc:
    """``sum_{l in Z^g} e^{π i (l,l) τ} e^{2π i (l, z)}`` with ``(x, y) = x^T G y``."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        zs = [mp.mpc(z) for z in zs]
        if len(zs) != G.g:
            raise DomainError(f"expected {G.g} elliptic variables, got {len(zs)}")
        value, _, _ = _theta_lattice_terms(tau, zs, G, ctx)
        return value


def raising_log_derivative(
    tau, zs: Sequence, j: int, G: GramMatrix | None, ctx: PrecisionContext
) -> mp.mpc:
    """``(Y_+ θ) / θ`` in the variable ``z_j``.

    ``Y_+ = ∂/∂z_j + 2π i Im((G z)_j) / Im τ``. With ``G=None`` the product
    theta with characteristic is used, whose form is the identity.

    Raises:
        PoleError: the point lies on the theta divisor.
    """
    with ctx.work():
        tau = require_upper_half_plane(tau)
        zs = [mp.mpc(z) for z in zs]
        if not 0 <= j < len(zs):
            raise DomainError(f"index {j} out of range")
        if G is None:
            z = zs[j]
            return theta_char_log_dz(tau, z, ctx) + 2j * mp.pi * z.imag / tau.imag
        if len(zs) != G.g:
            raise DomainError(f"expected {G.g} elliptic variables, got {len(zs)}")
        value, grad, scale = _theta_lattice_terms(tau, zs, G, ctx)
        if mp.fabs(value) < ctx.eps * scale:
            raise PoleError("point lies on the theta divisor", component=j, point=zs)
        gz_imag = G.apply([z.imag for z in zs])[j]
        return grad[j] / value + 2j * mp.pi * gz_imag / tau.imag
