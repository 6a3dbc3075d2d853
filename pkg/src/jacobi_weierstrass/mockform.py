"""The vector-valued Jacobi-Weierstrass form ``F(τ, M)`` and its checks.

``F(τ, M) = N(M) ζ*(N(M^-1) E_f(τ))`` with ζ* applied componentwise on Λ_f.
Coordinates of the result are standard, i.e. in ``(e1, e2)``. With
``E_f(γτ) = N(γ) E_f(τ) + p_γ`` and ``p_γ`` in ``Λ_f^{k-1}`` this gives

    F(γτ, M) = N(γ) F(τ, γ^-1 M).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import anyio
from mpmath import mp

from .errors import DomainError, PoleError
from .numeric import PrecisionContext, TauPolynomial, max_deviation
from .numeric import require_upper_half_plane
from .periods import (
    DEFAULT_DENOMINATOR_BOUND,
    PeriodLattice,
    eichler_standard,
    period_lattice,
)
from .qforms import CuspForm, QExpansion
from .symrep import IDENTITY, SL2Z, SymVector, n_matrix
from .weierstrass import LaurentExpansion, laurent_zeta_star, zeta_star

logger = logging.getLogger(__name__)

# ξ0 F = SHADOW_SIGN * (2π i / Vol) f(τ) (τ e1 + e2)^{k-2}, measured by the stencil.
SHADOW_SIGN = -1


@dataclass(frozen=True)
class MockFormContext:
    """A cusp form together with its recovered period lattice."""

    form: CuspForm
    lattice: PeriodLattice
    ctx: PrecisionContext

    def __post_init__(self) -> None:
        if self.lattice.residual >= self.ctx.pole_tol:
            raise DomainError("period lattice residual exceeds 10^-(digits/2)")

    @property
    def k(self) -> int:
        return self.form.weight

    @classmethod
    def build(
        cls,
        form: CuspForm,
        ctx: PrecisionContext,
        denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
        max_workers: int = 4,
    ) -> "MockFormContext":
        lattice = period_lattice(form, ctx, denominator_bound, max_workers)
        return cls(form, lattice, ctx)


@dataclass(frozen=True)
class PoleHit:
    """A component whose ζ* argument lies on (or next to) Λ_f."""

    tau: mp.mpc
    matrix: SL2Z
    component: int
    distance: mp.mpf
    lattice_point: tuple[int, int]


@dataclass(frozen=True)
class FValue:
    """``F(τ, M)`` in the standard basis.

    Components hitting a pole carry the finite part of ζ* there (zero) and are
    listed in ``poles``; ``principal_part`` is the local Laurent expansion.
    """

    value: SymVector
    tau: mp.mpc
    matrix: SL2Z
    pole_flag: bool = False
    poles: tuple[PoleHit, ...] = ()
    principal_part: LaurentExpansion | None = field(default=None, repr=False)


@dataclass(frozen=True)
class ShadowResult:
    computed: SymVector
    expected: SymVector
    deviation: mp.mpf
    step: mp.mpf


def directional_zeta(ctxm: MockFormContext, zs: Sequence, M: SL2Z) -> list:
    """Component ``j`` is ``sum_i N(M)_{ij} ζ*(z_i)``.

    Raises:
        PoleError: some ``z_i`` lies on Λ_f.
    """
    ctx = ctxm.ctx
    if len(zs) != ctxm.k - 1:
        raise DomainError(f"expected {ctxm.k - 1} arguments, got {len(zs)}")
    with ctx.work():
        values = []
        for i, z in enumerate(zs):
            try:
                values.append(zeta_star(ctxm.lattice.basis, z, ctx))
            except PoleError as e:
                raise PoleError(str(e), component=i, point=z) from e
        return n_matrix(M, ctxm.k).transpose().apply(values)


def _zeta_components(ctxm: MockFormContext, args: Sequence, tau, M: SL2Z):
    ctx = ctxm.ctx
    values = []
    hits = []
    for ell, z in enumerate(args):
        try:
            values.append(zeta_star(ctxm.lattice.basis, z, ctx))
        except PoleError:
            a, b, dist = ctxm.lattice.coordinates(z)
            logger.debug("Pole in component %d at tau=%s", ell, mp.nstr(tau, 10))
            hits.append(PoleHit(tau, M, ell, dist, (a, b)))
            values.append(mp.mpc(0))
    return values, tuple(hits)


def f_value(ctxm: MockFormContext, tau, M: SL2Z = IDENTITY) -> FValue:
    """Evaluate ``F(τ, M)``."""
    ctx = ctxm.ctx
    with ctx.work():
        tau = require_upper_half_plane(tau)
        standard = eichler_standard(ctxm.form, tau, ctx)
        args = n_matrix(M.inverse(), ctxm.k).apply(standard)
        values, hits = _zeta_components(ctxm, args, tau, M)
        result = n_matrix(M, ctxm.k).apply(values)
        principal = None
        if hits:
            principal = laurent_zeta_star(ctxm.lattice.basis, 3, ctx)
        return FValue(
            SymVector(ctxm.k, tuple(result)),
            tau,
            M,
            pole_flag=bool(hits),
            poles=hits,
            principal_part=principal,
        )


def zf_value(ctxm: MockFormContext, tau) -> mp.mpc:
    """``ζ*(E_f(τ))`` for weight two, where F does not depend on M."""
    if ctxm.k != 2:
        raise DomainError("zf_value is defined for weight 2 only")
    with ctxm.ctx.work():
        (value,) = f_value(ctxm, tau, IDENTITY).value.entries
        return value


def _regular(value: FValue) -> FValue:
    if value.pole_flag:
        hit = value.poles[0]
        raise PoleError(
            f"F has a pole at tau={mp.nstr(value.tau, 10)}",
            component=hit.component,
            point=value.tau,
        )
    return value


def rho_invariance_check(ctxm: MockFormContext, gamma: SL2Z, tau, M: SL2Z = IDENTITY) -> mp.mpf:
    """``max |F(γτ, M) - N(γ) F(τ, γ^-1 M)|`` over the components.

    Raises:
        DomainError: γ is not in the group of the form.
        PoleError: either side is evaluated at a pole.
    """
    if not ctxm.form.group.contains(gamma):
        raise DomainError(f"{gamma} is not in {ctxm.form.group}")
    with ctxm.ctx.work():
        tau = require_upper_half_plane(tau)
        left = _regular(f_value(ctxm, gamma.act(tau), M))
        right = _regular(f_value(ctxm, tau, gamma.inverse() @ M))
        moved = n_matrix(gamma, ctxm.k).apply(list(right.value.entries))
        deviation = max_deviation(left.value.entries, moved)
        logger.info("rho deviation for %s: %s", gamma, mp.nstr(deviation, 5))
        return deviation


def expected_shadow(ctxm: MockFormContext, tau) -> SymVector:
    """``SHADOW_SIGN (2π i / Vol(Λ_f)) f(τ) (τ e1 + e2)^{k-2}``."""
    ctx = ctxm.ctx
    with ctx.work():
        tau = require_upper_half_plane(tau)
        factor = SHADOW_SIGN * 2j * mp.pi / ctxm.lattice.volume
        f = ctxm.form.evaluate(tau, ctx)
        return SymVector(ctxm.k, tuple(factor * f * tau**ell for ell in range(ctxm.k - 1)))


def shadow_check(
    ctxm: MockFormContext, tau, M: SL2Z = IDENTITY, h=None, richardson: bool = True
) -> ShadowResult:
    """Finite-difference ``ξ0 F = -2i conj(∂F/∂τ̄)`` against the expected shadow.

    ``∂/∂τ̄ ≈ D(h) = ((F(τ+h) - F(τ-h)) + i (F(τ+ih) - F(τ-ih))) / (4h)``.
    With ``richardson`` the estimate is ``(4 D(h/2) - D(h)) / 3``, which
    cancels the ``h^2`` term of the stencil error. The reported deviation is
    relative to the largest expected component.
    """
    ctx = ctxm.ctx
    with ctx.work():
        tau = require_upper_half_plane(tau)
        h = mp.mpf(h) if h is not None else mp.mpf(10) ** (-(ctx.digits // 3))
        if tau.imag <= 2 * h:
            raise DomainError("finite-difference step reaches the real axis")

        def F(point):
            return _regular(f_value(ctxm, point, M)).value.entries

        def stencil(step):
            east, west = F(tau + step), F(tau - step)
            north, south = F(tau + 1j * step), F(tau - 1j * step)
            return [
                ((e - w) + 1j * (n - s)) / (4 * step)
                for e, w, n, s in zip(east, west, north, south)
            ]

        dbar = stencil(h)
        if richardson:
            dbar = [(4 * fine - coarse) / 3 for fine, coarse in zip(stencil(h / 2), dbar)]
        computed = [-2j * mp.conj(d) for d in dbar]
        expected = expected_shadow(ctxm, tau)
        scale = max(mp.fabs(x) for x in expected.entries)
        deviation = max_deviation(computed, expected.entries) / scale
        return ShadowResult(SymVector(ctxm.k, tuple(computed)), expected, deviation, h)


def _series_mul(a: list, b: list, n: int) -> list:
    out = [mp.mpc(0)] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] += x * b[j]
    return out


def _series_inverse(a: list, n: int) -> list:
    """``1 / a`` for a power series with ``a[0] != 0``."""
    inv = [mp.mpc(0)] * n
    inv[0] = 1 / a[0]
    for m in range(1, n):
        acc = sum((a[j] * inv[m - j] for j in range(1, min(m, len(a) - 1) + 1)), mp.mpc(0))
        inv[m] = -acc / a[0]
    return inv


def holomorphic_part_q(
    ctxm: MockFormContext,
    component: int = 0,
    n_terms: int = 10,
    scale=None,
    divide_by_n: bool = True,
) -> QExpansion:
    """q-expansion of the holomorphic Laurent part of ζ* composed with a q-series.

    The series substituted for ``z`` is ``scale * sum a_n n^{-e} q^n`` with
    ``e = 1`` when ``divide_by_n`` and ``e = 0`` otherwise. The defaults give
    ``E_{f,0}(τ)`` itself, whose termwise constant is ``i / 2π``.

    The result runs from ``q^-1`` to ``q^n_terms``.
    """
    if component != 0:
        raise DomainError("only the l = 0 component has a q-expansion")
    ctx = ctxm.ctx
    with ctx.work():
        scale = mp.mpc(scale) if scale is not None else 1j / (2 * mp.pi)
        form = ctxm.form.ensure(n_terms + 2)
        if form.a(1) == 0:
            raise DomainError("the substituted series must start with a nonzero q term")
        size = n_terms + 2
        # z = q * base(q), base[j] is the coefficient of q^(j+1)
        base = [
            scale * form.a(j + 1) / (j + 1 if divide_by_n else 1) for j in range(size)
        ]
        inv = _series_inverse(base, size)
        out = [mp.mpc(0)] * size  # index i is q^(i-1)
        for i in range(size):
            out[i] += inv[i]

        laurent = laurent_zeta_star(ctxm.lattice.basis, max(3, n_terms + 1), ctx)
        z_power = [mp.mpc(0)] + base  # z as a series from q^0
        z_power = z_power[:size]
        current = z_power
        for power in range(1, n_terms + 2, 2):
            coeff = laurent.coefficient(power)
            # z^power contributes to q^power and up, index shift +1
            for j in range(size - 1):
                out[j + 1] += coeff * current[j]
            current = _series_mul(_series_mul(current, z_power, size), z_power, size)
        coeffs = tuple(TauPolynomial((c,)) for c in out[: n_terms + 2])
        return QExpansion(coeffs, n_min=-1)


def _component_distance(ctxm: MockFormContext, tau, M: SL2Z) -> tuple[mp.mpf, int, tuple]:
    ctx = ctxm.ctx
    standard = eichler_standard(ctxm.form, tau, ctx)
    args = n_matrix(M.inverse(), ctxm.k).apply(standard)
    best = None
    for ell, z in enumerate(args):
        a, b, dist = ctxm.lattice.coordinates(z)
        if best is None or dist < best[0]:
            best = (dist, ell, (a, b))
    return best


def refine_minimum(
    distance: Callable, start, step, bounds: tuple, steps: int = 20
) -> tuple[mp.mpc, mp.mpf]:
    """Shrink a 3x3 stencil around the smallest value of ``distance``.

    ``bounds`` is ``(x_min, x_max, y_min, y_max)``; the stencil halves every step.
    """
    x_min, x_max, y_min, y_max = bounds
    centre = mp.mpc(start)
    value = distance(centre)
    for _ in range(steps):
        best = (value, centre)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if dx == dy == 0:
                    continue
                x = min(max(centre.real + dx * step, x_min), x_max)
                y = min(max(centre.imag + dy * step, y_min), y_max)
                candidate = mp.mpc(x, y)
                d = distance(candidate)
                if d < best[0]:
                    best = (d, candidate)
        value, centre = best
        step /= 2
    return centre, value


def pole_scan(
    ctxm: MockFormContext,
    region: tuple,
    resolution: tuple[int, int],
    matrices: Sequence[SL2Z] = (IDENTITY,),
    epsilon=None,
    refine_steps: int = 20,
    max_workers: int = 4,
) -> list[PoleHit]:
    """Grid points where some component of ``N(M^-1) E_f(τ)`` is within ε of Λ_f.

    Each hit is refined by :func:`refine_minimum` and hits are returned sorted
    by ``(Re τ, Im τ)``.
    """
    x_min, x_max, y_min, y_max = (mp.mpf(v) for v in region)
    nx, ny = resolution
    if y_min <= 0 or x_max <= x_min or y_max <= y_min or nx < 1 or ny < 1:
        raise DomainError("pole scan region must be a non-empty rectangle in H")
    ctx = ctxm.ctx
    with ctx.work():
        eps = mp.mpf(epsilon) if epsilon is not None else ctx.pole_tol
        dx = (x_max - x_min) / max(nx - 1, 1)
        dy = (y_max - y_min) / max(ny - 1, 1)
        points = [
            mp.mpc(x_min + i * dx, y_min + j * dy) for i in range(nx) for j in range(ny)
        ]
        bounds = (x_min, x_max, y_min, y_max)

        def scan_point(tau, M):
            dist, ell, _ = _component_distance(ctxm, tau, M)
            if dist >= eps:
                return None

            def distance(t):
                return _component_distance(ctxm, t, M)[0]

            refined, _ = refine_minimum(
                distance, tau, min(dx, dy) / 2, bounds, refine_steps
            )
            dist, ell, point = _component_distance(ctxm, refined, M)
            return PoleHit(refined, M, ell, dist, point)

        async def run() -> list:
            limiter = anyio.CapacityLimiter(max_workers)
            found: list = []

            async def worker(tau, M):
                hit = await anyio.to_thread.run_sync(scan_point, tau, M, limiter=limiter)
                if hit is not None:
                    found.append(hit)

            async with anyio.create_task_group() as tg:
                for M in matrices:
                    for tau in points:
                        tg.start_soon(worker, tau, M)
            return found

        hits = anyio.run(run)
        hits.sort(key=lambda h: (h.tau.real, h.tau.imag, h.matrix.as_tuple(), h.component))
        logger.info("Pole scan found %d hits on %d points", len(hits), len(points))
        return hits
