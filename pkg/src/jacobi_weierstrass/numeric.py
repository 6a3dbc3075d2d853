"""Precision-managed complex arithmetic shared by every other module.

Complex values are ``mpmath.mpc`` instances. A :class:`PrecisionContext` fixes
the decimal digit budget; every public computation enters ``ctx.work()`` so
that transcendental constants are recomputed at the active precision.
"""

from __future__ import annotations

import logging
import threading
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterator, Sequence

from mpmath import mp
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainError, PrecisionError

logger = logging.getLogger(__name__)

BigComplex = mp.mpc


class _PrecisionLease:
    """Guards the process-wide mpmath precision.

    Any number of threads may compute at the same time as long as they ask
    for the same number of decimal places. A thread asking for another
    precision waits until the current holders are done. The only holder may
    nest a different precision; on leaving it waits for anyone who joined the
    nested precision and then restores its own.
    """

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._holders: Counter[int] = Counter()
        self._dps: int | None = None
        self._baseline: int | None = None

    def _may_enter(self, me: int, dps: int) -> bool:
        return not self._holders or self._dps == dps or set(self._holders) == {me}

    @contextmanager
    def hold(self, dps: int) -> Iterator[None]:
        me = threading.get_ident()
        with self._cond:
            self._cond.wait_for(lambda: self._may_enter(me, dps))
            if not self._holders:
                self._baseline = mp.dps
                previous = None
            else:
                previous = self._dps
            self._dps = dps
            mp.dps = dps
            self._holders[me] += 1
        switched = previous is not None and previous != dps
        try:
            yield
        finally:
            with self._cond:
                if switched:
                    self._cond.wait_for(lambda: set(self._holders) == {me})
                self._holders[me] -= 1
                if not self._holders[me]:
                    del self._holders[me]
                if not self._holders:
                    mp.dps = self._baseline
                    self._dps = None
                elif switched:
                    mp.dps = previous
                    self._dps = previous
                self._cond.notify_all()


_LEASE = _PrecisionLease()


class PrecisionContext(BaseModel):
    """Working precision: significant digits, guard digits and series cut-off.

    Attributes:
        digits: Decimal significant digits of results.
        guard: Extra digits carried internally.
        series_tail_tol: Absolute size below which q-series tails are dropped.
            Defaults to ``10^-(digits + guard)``.
    """

    model_config = ConfigDict(frozen=True)

    digits: int = Field(default=128, ge=15)
    guard: int = Field(default=15, ge=10)
    series_tail_tol: float | None = None

    @model_validator(mode="after")
    def _check_tail(self) -> "PrecisionContext":
        if self.series_tail_tol is not None:
            if self.series_tail_tol <= 0:
                raise DomainError("series_tail_tol must be positive")
            if Decimal(repr(self.series_tail_tol)) > Decimal(10) ** -self.digits:
                raise DomainError(
                    f"series_tail_tol={self.series_tail_tol} exceeds 10^-{self.digits}"
                )
        return self

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @contextmanager
    def work(self) -> Iterator[None]:
        """Run the enclosed block at ``digits + guard`` decimal places.

        mpmath keeps one process-wide precision, so blocks asking for
        different precisions in different threads run one after another.
        Worker threads of a computation re-enter the same context and share it.
        """
        with _LEASE.hold(self.dps):
            yield

    @property
    def tail_tol(self) -> mp.mpf:
        if self.series_tail_tol is None:
            return mp.mpf(10) ** (-self.dps)
        return mp.mpf(self.series_tail_tol)

    @property
    def eps(self) -> mp.mpf:
        """Smallest magnitude accepted as a divisor."""
        return mp.mpf(10) ** (-self.digits)

    @property
    def pole_tol(self) -> mp.mpf:
        """Distance to a lattice point below which an evaluation is a pole."""
        return mp.mpf(10) ** (-(self.digits // 2))

    @property
    def check_tol(self) -> mp.mpf:
        """Agreement expected between two independent evaluation paths."""
        return mp.mpf(10) ** (-(self.digits - 2 * self.guard))

    def with_digits(self, digits: int) -> "PrecisionContext":
        return self.model_copy(update={"digits": digits, "series_tail_tol": None})


@dataclass(frozen=True)
class TauPolynomial:
    """Polynomial in τ; ``coeffs[j]`` multiplies ``τ**j``."""

    coeffs: tuple

    def __post_init__(self) -> None:
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(mp.mpc(c) for c in coeffs or [0]))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def __add__(self, other: "TauPolynomial") -> "TauPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return TauPolynomial(tuple(x + y for x, y in zip(a, b)))

    def scale(self, c) -> "TauPolynomial":
        return TauPolynomial(tuple(c * x for x in self.coeffs))


def eval_tau_poly(p: TauPolynomial, tau) -> mp.mpc:
    """Evaluate ``p`` at ``tau`` by Horner's rule."""
    acc = mp.mpc(0)
    for c in reversed(p.coeffs):
        acc = acc * tau + c
    return acc


def approx_equal(a, b, tol) -> bool:
    """True iff ``|a - b| < tol``."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    return mp.fabs(mp.mpc(a) - mp.mpc(b)) < tol


def safe_div(a, b, ctx: PrecisionContext):
    """Divide, refusing divisors smaller than ``10^-digits``."""
    if mp.fabs(b) < ctx.eps:
        raise PrecisionError(f"division by a value of size {mp.nstr(mp.fabs(b), 5)}")
    return a / b


def require_upper_half_plane(tau) -> mp.mpc:
    tau = mp.mpc(tau)
    if tau.imag <= 0:
        raise DomainError(f"Im(tau) must be positive, got {mp.nstr(tau, 10)}")
    return tau


def parse_complex(text: str) -> mp.mpc:
    """Parse ``"re,im"`` (or a single real) at the active precision.

    The strings go straight to mpmath, so no binary float rounding enters.
    """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return mp.mpc(mp.mpf(parts[0]), 0)
    if len(parts) != 2:
        raise DomainError(f"expected 're,im', got {text!r}")
    return mp.mpc(mp.mpf(parts[0]), mp.mpf(parts[1]))


def complex_to_pair(z, digits: int) -> list[str]:
    """Serialize a complex number as ``[re, im]`` decimal strings."""
    z = mp.mpc(z)
    return [mp.nstr(z.real, digits), mp.nstr(z.imag, digits)]


def max_deviation(xs: Sequence, ys: Sequence) -> mp.mpf:
    if len(xs) != len(ys):
        raise DomainError("vectors of different length")
    return max((mp.fabs(x - y) for x, y in zip(xs, ys)), default=mp.mpf(0))
