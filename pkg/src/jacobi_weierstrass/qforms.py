"""q-expansions of modular forms.

Built-in cusp forms are generated from exact integer eta products. Eisenstein
series are evaluated from divisor-sum q-series.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Sequence

from mpmath import mp

from .errors import DomainError, FormDataError, PrecisionError
from .numeric import PrecisionContext, TauPolynomial, eval_tau_poly
from .numeric import require_upper_half_plane
from .symrep import MINUS_IDENTITY, S, SL2Z, T

if TYPE_CHECKING:
    from .weierstrass import Lattice2D

logger = logging.getLogger(__name__)

MIN_TERMS = 32


@dataclass(frozen=True)
class GroupDescriptor:
    """Congruence subgroup together with the elements whose periods span Λ_f."""

    kind: str
    level: int
    period_elements: tuple[SL2Z, ...]

    def contains(self, g: SL2Z) -> bool:
        if self.kind == "SL2Z":
            return True
        if self.kind == "Gamma0":
            return g.c % self.level == 0
        if self.kind == "Gamma1":
            return g.c % self.level == 0 and (g.d - 1) % self.level == 0
        return False

    def __str__(self) -> str:
        return "SL2(Z)" if self.kind == "SL2Z" else f"{self.kind}({self.level})"


FULL_MODULAR_GROUP = GroupDescriptor("SL2Z", 1, (S, T))
GAMMA0_9 = GroupDescriptor(
    "Gamma0",
    9,
    (T, MINUS_IDENTITY, SL2Z(4, -1, 9, -2), SL2Z(7, -4, 9, -5)),
)
# T, -I, (7,-2;11,-3) and (8,-3;11,-4) generate; the rest add redundant periods.
GAMMA0_11 = GroupDescriptor(
    "Gamma0",
    11,
    (
        T,
        MINUS_IDENTITY,
        SL2Z(1, 0, 11, 1),
        SL2Z(2, -1, 11, -5),
        SL2Z(5, -1, 11, -2),
        SL2Z(7, -2, 11, -3),
        SL2Z(8, -3, 11, -4),
    ),
)


@dataclass(frozen=True)
class CuspForm:
    """A cusp form given by exact Fourier coefficients ``a_1 .. a_{n_max}``."""

    weight: int
    group: GroupDescriptor
    coeffs: tuple[int, ...]
    name: str = "custom"
    regenerate: Callable[[int], "CuspForm"] | None = field(
        default=None, compare=False, repr=False
    )
    lattice: str = "span"

    def __post_init__(self) -> None:
        if self.weight < 2 or self.weight % 2:
            raise DomainError(f"weight must be even and >= 2, got {self.weight}")
        if not self.coeffs:
            raise DomainError("a cusp form needs at least one coefficient")
        if self.lattice not in ("span", "rectangular"):
            raise DomainError(
                f"lattice must be 'span' or 'rectangular', got {self.lattice!r}"
            )

    @property
    def n_max(self) -> int:
        return len(self.coeffs)

    def a(self, n: int) -> int:
        return self.coeffs[n - 1] if 1 <= n <= self.n_max else 0

    def ensure(self, n: int) -> "CuspForm":
        """A version of this form carrying at least ``n`` coefficients."""
        if n <= self.n_max:
            return self
        if self.regenerate is None:
            raise PrecisionError(
                f"form {self.name!r} has {self.n_max} coefficients, {n} are needed"
            )
        logger.debug("Extending %s to %d coefficients", self.name, n)
        return self.regenerate(n)

    def evaluate(self, tau, ctx: PrecisionContext) -> mp.mpc:
        """``sum a_n q^n`` at ``tau``."""
        with ctx.work():
            tau = require_upper_half_plane(tau)
            n = terms_needed(tau.imag, ctx)
            form = self.ensure(n)
            q = mp.expjpi(2 * tau)
            return mp.polyval(list(reversed(form.coeffs[:n])) + [0], q)


def terms_needed(height, ctx: PrecisionContext, extra_digits: int = 0) -> int:
    """Smallest ``n`` with ``|q|^n`` below the tail tolerance, floor ``MIN_TERMS``.

    ``extra_digits`` absorbs coefficient and polynomial growth.
    """
    with ctx.work():
        height = mp.mpf(height)
        if height <= 0:
            raise DomainError("height must be positive")
        target = -mp.log(ctx.tail_tol) + extra_digits * mp.log(10)
        n = int(mp.ceil(target / (2 * mp.pi * height)))
    return max(MIN_TERMS, n + 8)


def _power_series_power(base: Sequence[int], exponent: int, n: int) -> list[int]:
    """``base(q)^exponent`` to order ``n`` for integer ``base`` with constant 1."""
    support = [(k, c) for k, c in enumerate(base[: n + 1]) if k and c]
    out = [1] + [0] * n
    for j in range(1, n + 1):
        total = 0
        for k, c in support:
            if k > j:
                break
            total += ((exponent + 1) * k - j) * c * out[j - k]
        out[j] = total // j
    return out


@lru_cache(maxsize=16)
def _euler_product(n: int) -> tuple[int, ...]:
    """``prod (1 - q^m)`` to order ``n`` from the pentagonal number theorem."""
    out = [0] * (n + 1)
    j = 0
    while True:
        sign = -1 if j % 2 else 1
        hit = False
        for g in {j * (3 * j - 1) // 2, j * (3 * j + 1) // 2}:
            if g <= n:
                out[g] += sign
                hit = True
        if not hit:
            break
        j += 1
    return tuple(out)


def _eta_quotient(factors: dict[int, int], shift: int, n_max: int) -> list[int]:
    """Coefficients ``a_1..a_{n_max}`` of ``q^shift prod_m eta-part(m τ)^{e_m}``."""
    length = n_max - shift
    series = [1] + [0] * length
    for m, e in factors.items():
        base = _euler_product(length // m + 1)
        powered = _power_series_power(base, e, length // m + 1)
        spread = [0] * (length + 1)
        for i, c in enumerate(powered):
            if i * m <= length:
                spread[i * m] = c
        series = [
            sum(series[i] * spread[j - i] for i in range(j + 1))
            for j in range(length + 1)
        ]
    coeffs = [0] * n_max
    for i, c in enumerate(series):
        if 1 <= i + shift <= n_max:
            coeffs[i + shift - 1] = c
    return coeffs


def delta_coefficients(n_max: int) -> CuspForm:
    """Ramanujan τ(n), ``n <= n_max``, from ``q prod (1 - q^n)^24``."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    base = _euler_product(n_max)
    powered = _power_series_power(base, 24, n_max - 1)
    return CuspForm(
        12, FULL_MODULAR_GROUP, tuple(powered[:n_max]), "delta", delta_coefficients
    )


def eta3_pow8_coefficients(n_max: int) -> CuspForm:
    """η(3τ)^8 = q prod (1 - q^{3n})^8, weight 4 on Γ0(9)."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    coeffs = _eta_quotient({3: 8}, 1, n_max)
    return CuspForm(
        4, GAMMA0_9, tuple(coeffs), "eta3p8", eta3_pow8_coefficients, lattice="rectangular"
    )


def eta2_eta11_coefficients(n_max: int) -> CuspForm:
    """η(τ)^2 η(11τ)^2, the weight-2 newform of level 11."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    coeffs = _eta_quotient({1: 2, 11: 2}, 1, n_max)
    return CuspForm(2, GAMMA0_11, tuple(coeffs), "eta2x11", eta2_eta11_coefficients)


BUILTIN_FORMS: dict[str, Callable[[int], CuspForm]] = {
    "delta": delta_coefficients,
    "eta3p8": eta3_pow8_coefficients,
    "eta2x11": eta2_eta11_coefficients,
}


def _group_from_data(level: int, generators: list | None) -> GroupDescriptor:
    if generators:
        elems = tuple(SL2Z(*g) for g in generators)
        return GroupDescriptor("Gamma0" if level > 1 else "SL2Z", level, elems)
    if level == 1:
        return FULL_MODULAR_GROUP
    if level == 9:
        return GAMMA0_9
    if level == 11:
        return GAMMA0_11
    raise FormDataError(f"level {level} needs explicit 'generators'")


def load_form(source: str, n_max: int = 64) -> CuspForm:
    """Load a cusp form by built-in name or from a JSON / text file.

    JSON accepts ``[[n, a_n], ...]`` or ``{"weight", "level", "coeffs",
    "generators", "lattice"}``; text files hold ``n a_n`` lines with optional
    ``# weight K`` and ``# level N`` headers.
    """
    if source in BUILTIN_FORMS:
        return BUILTIN_FORMS[source](n_max)
    path = Path(source)
    if not path.exists():
        raise FormDataError(
            f"unknown form {source!r}; built-ins are {sorted(BUILTIN_FORMS)}"
        )
    text = path.read_text()
    weight, level, generators, lattice = None, 1, None, "span"
    pairs: list[tuple[int, int]] = []
    try:
        if path.suffix == ".json":
            data = json.loads(text)
            if isinstance(data, dict):
                weight = int(data["weight"])
                level = int(data.get("level", 1))
                generators = data.get("generators")
                lattice = data.get("lattice", "span")
                data = data["coeffs"]
            pairs = [(int(n), int(a)) for n, a in data]
        else:
            for line in text.splitlines():
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition(" ")
                    if key == "weight":
                        weight = int(value)
                    elif key == "level":
                        level = int(value)
                    continue
                n, a = line.split()
                pairs.append((int(n), int(a)))
    except (KeyError, ValueError, TypeError) as e:
        raise FormDataError(f"could not parse {source}: {e}") from e
    if weight is None:
        raise FormDataError(f"{source} does not state a weight")
    if any(n == 0 and a != 0 for n, a in pairs):
        raise FormDataError("a cusp form has a_0 = 0")
    size = max((n for n, _ in pairs), default=0)
    coeffs = [0] * size
    for n, a in pairs:
        if n >= 1:
            coeffs[n - 1] = a
    return CuspForm(
        weight,
        _group_from_data(level, generators),
        tuple(coeffs),
        path.stem,
        lattice=lattice,
    )


@dataclass(frozen=True)
class QExpansion:
    """``prefactor * sum_{n >= n_min} coeffs[n - n_min](τ) q^n``."""

    coeffs: tuple[TauPolynomial, ...]
    n_min: int = 0
    prefactor: mp.mpc = mp.mpc(1)

    def coefficient(self, n: int) -> TauPolynomial:
        return self.coeffs[n - self.n_min]

    def evaluate(self, tau, ctx: PrecisionContext) -> mp.mpc:
        with ctx.work():
            tau = require_upper_half_plane(tau)
            q = mp.expjpi(2 * tau)
            total = mp.mpc(0)
            for offset, c in enumerate(self.coeffs):
                total += eval_tau_poly(c, tau) * q ** (self.n_min + offset)
            return self.prefactor * total

    def scaled(self, c) -> "QExpansion":
        return replace(self, prefactor=self.prefactor * c)


def dedekind_eta(tau, ctx: PrecisionContext) -> mp.mpc:
    """``q^{1/24} prod (1 - q^n)``."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        q = mp.expjpi(2 * tau)
        product = mp.mpc(1)
        qn = q
        while mp.fabs(qn) >= ctx.tail_tol:
            product *= 1 - qn
            qn *= q
        return mp.expjpi(tau / 12) * product


@lru_cache(maxsize=32)
def divisor_sums(power: int, n_max: int) -> tuple[int, ...]:
    """``sigma_power(n)`` for ``0 <= n <= n_max`` by sieve (entry 0 unused)."""
    sums = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d**power
        for multiple in range(d, n_max + 1, d):
            sums[multiple] += dp
    return tuple(sums)


def _lambert(power: int, tau, ctx: PrecisionContext) -> mp.mpc:
    n_max = terms_needed(tau.imag, ctx, extra_digits=power)
    sigma = divisor_sums(power, n_max)
    q = mp.expjpi(2 * tau)
    return mp.polyval([sigma[n] for n in range(n_max, 0, -1)] + [0], q)


def eisenstein_g2(tau, ctx: PrecisionContext) -> mp.mpc:
    """``G2 = 2ζ(2) - 8π^2 sum sigma_1(n) q^n``."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        return mp.pi**2 / 3 - 8 * mp.pi**2 * _lambert(1, tau, ctx)


def eisenstein_g2_star(tau, ctx: PrecisionContext) -> mp.mpc:
    """Non-holomorphic completion ``G2(τ) - π / Im τ``."""
    with ctx.work():
        tau = require_upper_half_plane(tau)
        return eisenstein_g2(tau, ctx) - mp.pi / tau.imag


def eisenstein_g2n_tau(tau, n: int, ctx: PrecisionContext) -> mp.mpc:
    """``G_{2n}`` of ``Z + Zτ`` for ``n >= 2``."""
    if n < 2:
        raise DomainError("G_2n is absolutely convergent only for n >= 2")
    with ctx.work():
        tau = require_upper_half_plane(tau)
        w = 2 * n
        constant = 2 * mp.zeta(w)
        factor = 2 * (2j * mp.pi) ** w / mp.factorial(w - 1)
        return constant + factor * _lambert(w - 1, tau, ctx)


def eisenstein_g2n(lattice: "Lattice2D", n: int, ctx: PrecisionContext) -> mp.mpc:
    """``G_{2n}(Λ) = sum' ω^{-2n}`` via the reduced frame ``Λ = ω1 (Z + Zτ)``."""
    with ctx.work():
        omega1, tau = lattice.reduced_frame()
        return omega1 ** (-2 * n) * eisenstein_g2n_tau(tau, n, ctx)
