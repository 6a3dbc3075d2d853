"""Eichler integrals, period integrals and the period lattice Λ_f.

Coordinates follow :mod:`jacobi_weierstrass.symrep`: component ``l`` of the
standard Eichler vector is ``E_l(τ) = ∫_τ^{i∞} f(t) t^l dt``. Termwise,

    ∫_w^{i∞} s^m e^{2π i n s} ds = q_w^n sum_j m!/(m-j)! w^{m-j} u^{j+1},
    u = i / (2π n),

which carries a factor ``i`` relative to a plain ``a_n / (2π n)`` prefactor.
The Eichler vector transforms as

    E(γτ) = N(γ) E(τ) + ∫_{γ∞}^{i∞} f(t) (t e1 + e2)^{k-2} dt

and the second term has all coordinates in Λ_f.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Sequence

import anyio
from mpmath import mp

from .errors import DomainError, LatticeRecoveryError
from .numeric import PrecisionContext, require_upper_half_plane
from .qforms import CuspForm, terms_needed
from .symrep import IDENTITY, SL2Z, SymVector, display_order, n_matrix
from .weierstrass import Lattice2D

logger = logging.getLogger(__name__)

DEFAULT_DENOMINATOR_BOUND = 10_000


@dataclass(frozen=True)
class EichlerValue:
    """Eichler vector ``(E_0, ..., E_{k-2})`` in the basis ``basis_tag∘(e1, e2)``."""

    k: int
    components: tuple
    basis_tag: SL2Z = IDENTITY

    def as_sym_vector(self) -> SymVector:
        return SymVector(self.k, self.components, self.basis_tag)


@dataclass(frozen=True)
class PeriodLattice:
    """Recovered lattice Λ_f with the generators it was built from."""

    basis: Lattice2D
    generators: tuple[tuple[mp.mpc, str], ...] = field(default_factory=tuple)
    residual: mp.mpf = mp.mpf(0)

    @property
    def omega1(self) -> mp.mpc:
        return self.basis.omega1

    @property
    def omega2(self) -> mp.mpc:
        return self.basis.omega2

    @property
    def volume(self) -> mp.mpf:
        return self.basis.volume

    def coordinates(self, value, basis: Lattice2D | None = None) -> tuple[int, int, mp.mpf]:
        """Integer coordinates of the nearest lattice point and its distance."""
        return (basis or self.basis).nearest_point(value)

    def rectangular_basis(self) -> Lattice2D:
        """``(ω_re, ω_im)`` with ``ω_re > 0`` real and ``ω_im / i > 0``.

        Raises:
            DomainError: the lattice is not rectangular.
        """
        tol = mp.mpf(10) ** (-(mp.dps // 2))
        pair = (self.omega1, self.omega2)
        real = next((w for w in pair if mp.fabs(w.imag) <= tol * mp.fabs(w)), None)
        imag = next((w for w in pair if mp.fabs(w.real) <= tol * mp.fabs(w)), None)
        if real is None or imag is None:
            raise DomainError("period lattice is not rectangular")
        return Lattice2D(mp.mpc(mp.fabs(real.real)), mp.mpc(0, mp.fabs(imag.imag)))


def _moments(form: CuspForm, w, degree: int, ctx: PrecisionContext) -> list:
    """``[∫_w^{i∞} f(s) s^m ds for m = 0..degree]``."""
    w = require_upper_half_plane(w)
    n_terms = terms_needed(w.imag, ctx, extra_digits=form.weight + 5)
    form = form.ensure(n_terms)
    q = mp.expjpi(2 * w)
    w_powers = [mp.mpc(1)]
    for _ in range(degree):
        w_powers.append(w_powers[-1] * w)
    totals = [mp.mpc(0)] * (degree + 1)
    qn = mp.mpc(1)
    for n in range(1, n_terms + 1):
        qn *= q
        a = form.a(n)
        if a == 0:
            continue
        u = 1j / (2 * mp.pi * n)
        J = u
        weight = a * qn
        totals[0] += weight * J
        for m in range(1, degree + 1):
            J = u * (w_powers[m] + m * J)
            totals[m] += weight * J
    return totals


def _polynomial_integral(moments: Sequence, coeffs: Sequence[int]) -> mp.mpc:
    return sum((c * m for c, m in zip(coeffs, moments) if c), start=mp.mpc(0))


def eichler_series(form: CuspForm, ell: int, tau, ctx: PrecisionContext) -> mp.mpc:
    """``E_{f,l}(τ)`` from the Fourier side."""
    if not 0 <= ell <= form.weight - 2:
        raise DomainError(f"component {ell} outside 0..{form.weight - 2}")
    with ctx.work():
        return _moments(form, tau, ell, ctx)[ell]


def eichler_standard(form: CuspForm, tau, ctx: PrecisionContext) -> list:
    """All components of ``E_f(τ, (e1, e2))``."""
    with ctx.work():
        return _moments(form, tau, form.weight - 2, ctx)


def eichler_quadrature(form: CuspForm, ell: int, tau, ctx: PrecisionContext) -> mp.mpc:
    """``∫_τ^{i∞} f(t) t^l dt`` by numerical quadrature along the vertical ray."""
    if not 0 <= ell <= form.weight - 2:
        raise DomainError(f"component {ell} outside 0..{form.weight - 2}")
    with ctx.work():
        tau = require_upper_half_plane(tau)

        def integrand(y):
            t = tau + 1j * y
            return form.evaluate(t, ctx) * t**ell

        return 1j * mp.quad(integrand, [0, 1, 4, mp.inf])


def eichler_vector(form: CuspForm, tau, M: SL2Z, ctx: PrecisionContext) -> EichlerValue:
    """``N(M^-1) E_f(τ, (e1, e2))``: the Eichler vector in the basis ``M∘(e1, e2)``."""
    with ctx.work():
        standard = eichler_standard(form, tau, ctx)
        if M == IDENTITY:
            return EichlerValue(form.weight, tuple(standard), IDENTITY)
        moved = n_matrix(M.inverse(), form.weight).apply(standard)
        return EichlerValue(form.weight, tuple(moved), M)


def _unfolded_polynomial(g: SL2Z, ell: int, m: int) -> list[int]:
    """Coefficients of ``(A s + B)^l (C s + D)^{m-l}`` for ``g = (A, B; C, D)``."""
    out = [0] * (m + 1)
    for i in range(ell + 1):
        for j in range(m - ell + 1):
            out[i + j] += (
                comb(ell, i)
                * g.a**i
                * g.b ** (ell - i)
                * comb(m - ell, j)
                * g.c**j
                * g.d ** (m - ell - j)
            )
    return out


def period_polynomial(form: CuspForm, gamma: SL2Z, ctx: PrecisionContext) -> SymVector:
    """``(∫_{γ^-1 ∞}^{i∞} f(t) t^l dt)_l`` as a standard-basis vector.

    The path is split at ``z0 = γ^-1∞ + i/|c|``; the piece ending at the cusp
    is moved back to ``∞`` by ``γ^-1``, using the weight-k law of f.
    """
    m = form.weight - 2
    with ctx.work():
        if not form.group.contains(gamma):
            raise DomainError(f"{gamma} is not in {form.group}")
        g = gamma.inverse()
        if g.c == 0:
            return SymVector(form.weight, tuple(mp.mpc(0) for _ in range(m + 1)))
        cusp = mp.mpf(g.a) / g.c
        z0 = mp.mpc(cusp, mp.mpf(1) / abs(g.c))
        upper = _moments(form, z0, m, ctx)
        image = gamma.act(z0)
        lower = _moments(form, image, m, ctx)
        values = []
        for ell in range(m + 1):
            poly = _unfolded_polynomial(g, ell, m)
            values.append(upper[ell] - _polynomial_integral(lower, poly))
        return SymVector(form.weight, tuple(values))


def period_integral(form: CuspForm, gamma: SL2Z, ell: int, ctx: PrecisionContext) -> mp.mpc:
    """``∫_{γ^-1 ∞}^{∞} f(t) t^l dt``; zero when ``γ^-1 ∞ = ∞``."""
    if not 0 <= ell <= form.weight - 2:
        raise DomainError(f"component {ell} outside 0..{form.weight - 2}")
    return period_polynomial(form, gamma, ctx).entries[ell]


def cusp_period(form: CuspForm, gamma: SL2Z, ctx: PrecisionContext) -> SymVector:
    """``∫_{γ∞}^{i∞} f(t) (t e1 + e2)^{k-2} dt``, the lattice part of E(γτ)."""
    return period_polynomial(form, gamma.inverse(), ctx)


async def period_values_async(
    form: CuspForm,
    ctx: PrecisionContext,
    elements: Sequence[SL2Z] | None = None,
    max_workers: int = 4,
) -> list[tuple[mp.mpc, str]]:
    """Period values of the given group elements, computed in worker threads.

    Each worker enters ``ctx.work()`` and shares the caller's precision.
    """
    elements = list(elements or form.group.period_elements)
    limiter = anyio.CapacityLimiter(max_workers)
    results: dict[int, SymVector] = {}

    async def run(index: int, gamma: SL2Z) -> None:
        results[index] = await anyio.to_thread.run_sync(
            period_polynomial, form, gamma, ctx, limiter=limiter
        )

    async with anyio.create_task_group() as tg:
        for index, gamma in enumerate(elements):
            tg.start_soon(run, index, gamma)

    values = []
    for index, gamma in enumerate(elements):
        for ell, value in enumerate(results[index].entries):
            values.append((value, f"{gamma}:{ell}"))
    return values


def period_values(
    form: CuspForm,
    ctx: PrecisionContext,
    elements: Sequence[SL2Z] | None = None,
    max_workers: int = 4,
) -> list[tuple[mp.mpc, str]]:
    with ctx.work():
        return anyio.run(period_values_async, form, ctx, elements, max_workers)


def _extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, s, t = _extended_gcd(b, a % b)
    return g, t, s - (a // b) * t


def _integer_span_basis(rows: Sequence[tuple[int, int]]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Two integer vectors spanning the same Z-module as ``rows`` (rank 2 required)."""
    pivot = (0, 0)
    h = 0
    for x1, y1 in rows:
        x0, y0 = pivot
        if x0 == 0 and x1 == 0:
            h = gcd(h, y0, y1)
            pivot = (0, 0)
            continue
        g, s, t = _extended_gcd(x0, x1)
        pivot = (g, s * y0 + t * y1)
        h = gcd(h, (x1 * y0 - x0 * y1) // g)
    if pivot[0] == 0 or h == 0:
        raise LatticeRecoveryError("period values do not span a rank-2 lattice")
    return pivot, (0, h)


def _rationalize(x, bound: int, tol) -> Fraction:
    approx = Fraction(mp.nstr(x, mp.dps, strip_zeros=False)).limit_denominator(bound)
    if mp.fabs(x - mp.mpf(approx.numerator) / approx.denominator) > tol:
        raise LatticeRecoveryError(
            f"coordinate {mp.nstr(x, 15)} is not rational with denominator <= {bound}"
        )
    return approx


def _axis_generator(xs: Sequence, bound: int, tol, scale) -> mp.mpf:
    """Positive generator of the discrete subgroup of R containing ``xs``."""
    largest = max(xs, key=mp.fabs)
    if mp.fabs(largest) <= tol * scale:
        raise LatticeRecoveryError("period values lie on a line through 0")
    ratios = [_rationalize(x / largest, bound, tol) for x in xs]
    common = 1
    for r in ratios:
        common = common * r.denominator // gcd(common, r.denominator)
    g = 0
    for r in ratios:
        g = gcd(g, int(r * common))
    return mp.fabs(largest) * g / common


def recover_lattice(
    values: Sequence,
    ctx: PrecisionContext,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
    labels: Sequence[str] | None = None,
    rectangular: bool = False,
) -> PeriodLattice:
    """Gauss-reduced basis of the discrete group generated by ``values``.

    With ``rectangular`` the result is instead the smallest rectangular
    lattice containing ``values``: its real generator spans the real parts
    and its imaginary generator the imaginary parts. It contains the Z-span
    and can be strictly larger (index 2 for the centred lattice of ``eta3p8``).

    Raises:
        LatticeRecoveryError: fewer than two R-independent values, or a
            coordinate needs a denominator above ``denominator_bound``.
    """
    with ctx.work():
        values = [mp.mpc(v) for v in values]
        labels = list(labels) if labels is not None else [str(i) for i in range(len(values))]
        scale = max((mp.fabs(v) for v in values), default=mp.mpf(0))
        if scale == 0:
            raise LatticeRecoveryError("all period values vanish")
        tol = ctx.pole_tol
        nonzero = [v for v in values if mp.fabs(v) > tol * scale]
        first = max(nonzero, key=mp.fabs)
        second = next(
            (v for v in nonzero if mp.fabs((v / first).imag) > tol), None
        )
        if second is None:
            raise LatticeRecoveryError("period values are R-linearly dependent")
        if rectangular:
            re = _axis_generator([v.real for v in values], denominator_bound, tol, scale)
            im = _axis_generator([v.imag for v in values], denominator_bound, tol, scale)
            basis, _ = Lattice2D(mp.mpc(re), mp.mpc(0, im)).reduce()
            return _checked(basis, values, labels, scale, tol)
        start, _ = Lattice2D(first, second).reduce()

        coords = []
        for v in values:
            x, y = start.coordinates(v)
            coords.append(
                (_rationalize(x, denominator_bound, tol), _rationalize(y, denominator_bound, tol))
            )
        common = 1
        for x, y in coords:
            common = common * x.denominator // gcd(common, x.denominator)
            common = common * y.denominator // gcd(common, y.denominator)
        rows = [(int(x * common), int(y * common)) for x, y in coords]
        (p, q), (r, s) = _integer_span_basis(rows)
        b1 = (p * start.omega1 + q * start.omega2) / common
        b2 = (r * start.omega1 + s * start.omega2) / common
        basis, _ = Lattice2D(b1, b2).reduce()
        return _checked(basis, values, labels, scale, tol)


def _checked(basis: Lattice2D, values: list, labels: list, scale, tol) -> PeriodLattice:
    residual = max(basis.distance(v) for v in values) / scale
    if residual > tol:
        raise LatticeRecoveryError(f"residual {mp.nstr(residual, 5)} above tolerance")
    logger.info(
        "Recovered lattice omega1=%s omega2=%s from %d values",
        mp.nstr(basis.omega1, 12),
        mp.nstr(basis.omega2, 12),
        len(values),
    )
    return PeriodLattice(basis, tuple(zip(values, labels)), residual)


def period_lattice(
    form: CuspForm,
    ctx: PrecisionContext,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
    max_workers: int = 4,
) -> PeriodLattice:
    """Λ_f from the period polynomials of the group's listed elements.

    Forms declared with ``lattice="rectangular"`` get the rectangular hull
    of their periods instead of the plain Z-span.
    """
    generated = period_values(form, ctx, max_workers=max_workers)
    values = [v for v, _ in generated]
    labels = [label for _, label in generated]
    return recover_lattice(
        values, ctx, denominator_bound, labels, rectangular=form.lattice == "rectangular"
    )


@dataclass(frozen=True)
class ModularityDefect:
    """``E(γτ) - N(γ) E(τ)`` and its coordinates in the lattice basis."""

    values: tuple
    coordinates: tuple[tuple[int, int], ...]
    residual: mp.mpf

    def within(self, tol) -> bool:
        return self.residual < tol

    def display_coordinates(self, basis: Lattice2D) -> list[tuple[int, int]]:
        """Lattice coordinates of the defect in printed order, see ``display_order``."""
        return [basis.nearest_point(v)[:2] for v in display_order(self.values)]


def modularity_defect(
    form: CuspForm,
    gamma: SL2Z,
    tau,
    lattice: PeriodLattice | Lattice2D,
    ctx: PrecisionContext,
) -> ModularityDefect:
    """Lattice correction between ``E_f(γτ)`` and ``N(γ) E_f(τ)``.

    Coordinates refer to the basis of ``lattice`` as given (no reduction).
    """
    with ctx.work():
        if not form.group.contains(gamma):
            raise DomainError(f"{gamma} is not in {form.group}")
        tau = require_upper_half_plane(tau)
        basis = lattice.basis if isinstance(lattice, PeriodLattice) else lattice
        moved = n_matrix(gamma, form.weight).apply(eichler_standard(form, tau, ctx))
        image = eichler_standard(form, gamma.act(tau), ctx)
        diffs = [a - b for a, b in zip(image, moved)]
        coords = []
        residual = mp.mpf(0)
        for d in diffs:
            a, b, dist = basis.nearest_point(d)
            coords.append((a, b))
            residual = max(residual, dist)
        return ModularityDefect(tuple(diffs), tuple(coords), residual)
