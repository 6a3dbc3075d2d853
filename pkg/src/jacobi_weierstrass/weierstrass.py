"""Classical and completed Weierstrass functions on arbitrary lattices.

Every lattice computation goes through the Gauss-reduced frame
``Λ = ω1 (Z + Zτ)`` with ``τ`` in the fundamental domain and then uses the
theta function with characteristic:

    ζ_{Λτ}(z)  = ∂ϑ/ϑ (z) + G2(τ) z
    ζ*_{Λτ}(z) = ∂ϑ/ϑ (z) + 2π i Im(z) / Im(τ)
    ζ*_Λ(z)    = ω1^{-1} ζ*_{Λτ}(z / ω1)

so that ``ζ*_Λ(z) = ζ_Λ(z) - S(Λ) z - π conj(z) / Vol(Λ)`` with
``S(Λ) = ω1^{-2} G2*(τ)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from mpmath import mp

from .errors import DomainError, PoleError
from .numeric import PrecisionContext, require_upper_half_plane
from .qforms import eisenstein_g2, eisenstein_g2_star, eisenstein_g2n
from .theta import reduce_mod_lattice, theta_char_log_dz, theta_product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lattice2D:
    """Oriented lattice ``ω1 Z + ω2 Z`` with ``Im(ω2 / ω1) > 0``.

    A negatively oriented pair is fixed by negating ``ω2``.
    """

    omega1: mp.mpc
    omega2: mp.mpc

    def __post_init__(self) -> None:
        w1, w2 = mp.mpc(self.omega1), mp.mpc(self.omega2)
        if w1 == 0:
            raise DomainError("degenerate lattice: omega1 = 0")
        ratio = w2 / w1
        if ratio.imag == 0:
            raise DomainError("degenerate lattice: omega2 / omega1 is real")
        if ratio.imag < 0:
            w2 = -w2
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)

    @classmethod
    def from_tau(cls, tau) -> "Lattice2D":
        return cls(mp.mpc(1), mp.mpc(tau))

    @property
    def volume(self) -> mp.mpf:
        return (mp.conj(self.omega1) * self.omega2).imag

    @property
    def tau(self) -> mp.mpc:
        return self.omega2 / self.omega1

    def reduce(self) -> tuple["Lattice2D", tuple[int, int, int, int]]:
        """Gauss reduction.

        Returns:
            The reduced basis and the integer matrix ``(p, q; r, s)`` with
            ``new1 = p ω1 + q ω2`` and ``new2 = r ω1 + s ω2``.
        """
        w1, w2 = self.omega1, self.omega2
        p, q, r, s = 1, 0, 0, 1
        for _ in range(10_000):
            if mp.fabs(w2) < mp.fabs(w1):
                # (w1, w2) -> (w2, -w1) keeps the orientation
                w1, w2 = w2, -w1
                p, q, r, s = r, s, -p, -q
            mu = int(mp.nint((w2 / w1).real))
            if mu == 0:
                if mp.fabs(w2) >= mp.fabs(w1):
                    break
                continue
            w2 = w2 - mu * w1
            r, s = r - mu * p, s - mu * q
        else:  # pragma: no cover
            raise DomainError("Gauss reduction did not terminate")
        return Lattice2D(w1, w2), (p, q, r, s)

    def reduced_frame(self) -> tuple[mp.mpc, mp.mpc]:
        """``(ω1, τ)`` of the reduced basis, ``τ`` in the fundamental domain."""
        reduced, _ = self.reduce()
        return reduced.omega1, reduced.omega2 / reduced.omega1

    def coordinates(self, z) -> tuple[mp.mpf, mp.mpf]:
        """Real ``(x, y)`` with ``z = x ω1 + y ω2``."""
        z = mp.mpc(z)
        vol = self.volume
        y = (mp.conj(self.omega1) * z).imag / vol
        x = -(mp.conj(self.omega2) * z).imag / vol
        return x, y

    def nearest_point(self, z) -> tuple[int, int, mp.mpf]:
        """Closest lattice point as integer coordinates in this basis, plus distance."""
        z = mp.mpc(z)
        reduced, (p, q, r, s) = self.reduce()
        x, y = reduced.coordinates(z)
        best = None
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                a = int(mp.nint(x)) + da
                b = int(mp.nint(y)) + db
                dist = mp.fabs(z - a * reduced.omega1 - b * reduced.omega2)
                if best is None or dist < best[2]:
                    best = (a, b, dist)
        a, b, dist = best
        # back to this basis: a new1 + b new2 = (a p + b r) ω1 + (a q + b s) ω2
        return a * p + b * r, a * q + b * s, dist

    def distance(self, z) -> mp.mpf:
        return self.nearest_point(z)[2]


@dataclass(frozen=True)
class LaurentExpansion:
    """``ζ*(z) = pole/z + sum odd_coeffs[2n+1] z^{2n+1} + linear_z z + antiholo_zbar z̄``.

    ``odd_coeffs`` holds powers three and up; the linear term sits in ``linear_z``.
    """

    linear_z: mp.mpc
    antiholo_zbar: mp.mpc
    odd_coeffs: dict[int, mp.mpc] = field(default_factory=dict)
    pole_coeff: mp.mpc = mp.mpc(1)

    def coefficient(self, power: int) -> mp.mpc:
        if power == -1:
            return self.pole_coeff
        if power == 1:
            return self.linear_z
        return self.odd_coeffs.get(power, mp.mpc(0))

    def holomorphic(self, z) -> mp.mpc:
        z = mp.mpc(z)
        total = self.pole_coeff / z + self.linear_z * z
        for power, c in self.odd_coeffs.items():
            total += c * z**power
        return total

    def evaluate(self, z) -> mp.mpc:
        z = mp.mpc(z)
        return self.holomorphic(z) + self.antiholo_zbar * mp.conj(z)


def quasi_period_u(tau, ctx: PrecisionContext) -> mp.mpc:
    """``u(τ) = η1 = ζ(z + 1) - ζ(z) = G2(τ)``."""
    return eisenstein_g2(tau, ctx)


def _reduce_argument(lattice: Lattice2D, z, ctx: PrecisionContext):
    omega1, tau = lattice.reduced_frame()
    w = mp.mpc(z) / omega1
    w0, m, n = reduce_mod_lattice(tau, w)
    if mp.fabs(w0) < ctx.pole_tol:
        raise PoleError(f"{mp.nstr(z, 10)} lies on the lattice", point=z)
    return omega1, tau, w0, m, n


def zeta_raw(lattice: Lattice2D, z, ctx: PrecisionContext) -> mp.mpc:
    """Classical Weierstrass ζ of ``lattice``."""
    with ctx.work():
        omega1, tau, w0, m, n = _reduce_argument(lattice, z, ctx)
        eta1 = eisenstein_g2(tau, ctx)
        eta2 = tau * eta1 - 2j * mp.pi
        local = theta_char_log_dz(tau, w0, ctx) + eta1 * w0
        return (local + m * eta2 + n * eta1) / omega1


def zeta_star(lattice: Lattice2D, z, ctx: PrecisionContext) -> mp.mpc:
    """Completed, lattice-invariant ζ*."""
    with ctx.work():
        omega1, tau, w0, _, _ = _reduce_argument(lattice, z, ctx)
        local = theta_char_log_dz(tau, w0, ctx) + 2j * mp.pi * w0.imag / tau.imag
        return local / omega1


def zeta_star_completion(lattice: Lattice2D, z, ctx: PrecisionContext) -> mp.mpc:
    """ζ* assembled as ``ζ(z) - S(Λ) z - π z̄ / Vol(Λ)``; second evaluation path."""
    with ctx.work():
        z = mp.mpc(z)
        return (
            zeta_raw(lattice, z, ctx)
            - s_lattice(lattice, ctx) * z
            - mp.pi * mp.conj(z) / lattice.volume
        )


def s_lattice(lattice: Lattice2D, ctx: PrecisionContext) -> mp.mpc:
    """Hecke-regularized ``S(Λ) = lim_{s->0+} sum' ω^{-2} |ω|^{-2s}``."""
    with ctx.work():
        omega1, tau = lattice.reduced_frame()
        return eisenstein_g2_star(tau, ctx) / omega1**2


def sigma(tau, zs: Sequence, ctx: PrecisionContext) -> mp.mpc:
    """Jacobi-Weierstrass σ for the standard form, ``exp(u Q(z)) θ(τ, z)``.

    ``Q(z) = (z, z) / 2``. The sign of the exponent makes
    ``∂ log σ / ∂z_j`` the classical ζ for g = 1.
    """
    with ctx.work():
        tau = require_upper_half_plane(tau)
        zs = [mp.mpc(z) for z in zs]
        Q = sum(z * z for z in zs) / 2
        return mp.exp(quasi_period_u(tau, ctx) * Q) * theta_product(tau, zs, ctx)


def zeta_j(tau, zs: Sequence, j: int, ctx: PrecisionContext) -> mp.mpc:
    """``∂ log σ / ∂z_j`` for the standard form."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        z = mp.mpc(zs[j])
        return theta_char_log_dz(tau, z, ctx) + quasi_period_u(tau, ctx) * z


def wp_ji(tau, zs: Sequence, i: int, j: int, ctx: PrecisionContext) -> mp.mpc:
    """``∂ζ_j / ∂z_i`` by central differences with one Richardson step."""
    with ctx.work():
        zs = [mp.mpc(z) for z in zs]
        h = mp.mpf(10) ** (-(ctx.digits // 3))

        def shifted(step):
            plus = list(zs)
            minus = list(zs)
            plus[i] += step
            minus[i] -= step
            return (zeta_j(tau, plus, j, ctx) - zeta_j(tau, minus, j, ctx)) / (2 * step)

        coarse = shifted(h)
        fine = shifted(h / 2)
        return (4 * fine - coarse) / 3


def laurent_zeta_star(
    lattice: Lattice2D, max_order: int, ctx: PrecisionContext
) -> LaurentExpansion:
    """``1/z - sum_{n>=1} G_{2n+2} z^{2n+1} - S z - (π / Vol) z̄`` up to ``z^max_order``."""
    if max_order < 3:
        raise DomainError("max_order must be >= 3")
    with ctx.work():
        odd = {}
        for power in range(3, max_order + 1, 2):
            odd[power] = -eisenstein_g2n(lattice, (power + 1) // 2, ctx)
        return LaurentExpansion(
            linear_z=-s_lattice(lattice, ctx),
            antiholo_zbar=-mp.pi / lattice.volume,
            odd_coeffs=odd,
        )
