"""Symmetric-power representation of SL2(Z) on Sym^{k-2}(C^2).

Conventions:

* ``M∘(e1, e2) = (a e1 + c e2, b e1 + d e2)`` for ``M = (a, b; c, d)``.
* A :class:`SymVector` with entries ``z`` and basis tag ``B`` stands for
  ``sum_l z_l binom(k-2, l) X1^l X2^(k-2-l)`` with ``(X1, X2) = B∘(e1, e2)``.
* Standard coordinates are ``N(B) @ z``. Hence ``N(M1 M2) = N(M1) N(M2)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from mpmath import mp

from .errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SL2Z:
    """An element ``(a, b; c, d)`` of SL2(Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"det of {self} is not 1")

    @classmethod
    def parse(cls, text: str) -> "SL2Z":
        """Parse ``"a,b,c,d"``."""
        try:
            a, b, c, d = (int(x) for x in text.split(","))
        except ValueError as e:
            raise DomainError(f"expected 'a,b,c,d', got {text!r}") from e
        return cls(a, b, c, d)

    def __matmul__(self, other: "SL2Z") -> "SL2Z":
        return SL2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "SL2Z":
        return SL2Z(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "SL2Z":
        return SL2Z(self.a, self.c, self.b, self.d)

    def act(self, tau):
        """Möbius action on the upper half-plane."""
        tau = mp.mpc(tau)
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def cusp_at_infinity(self) -> Fraction | None:
        """The cusp ``M·∞``; None stands for ∞ itself."""
        if self.c == 0:
            return None
        return Fraction(self.a, self.c)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self) -> str:
        return f"({self.a},{self.b};{self.c},{self.d})"


IDENTITY = SL2Z(1, 0, 0, 1)
MINUS_IDENTITY = SL2Z(-1, 0, 0, -1)
S = SL2Z(0, -1, 1, 0)
T = SL2Z(1, 1, 0, 1)


@lru_cache(maxsize=512)
def _n_entries(a: int, b: int, c: int, d: int, k: int) -> tuple[tuple[int, ...], ...]:
    m = k - 2
    rows = []
    for ell in range(m + 1):
        row = []
        for t in range(m + 1):
            total = 0
            for i in range(max(0, t + ell - m), min(ell, t) + 1):
                total += (
                    comb(ell, i)
                    * comb(m - ell, t - i)
                    * a**i
                    * c ** (t - i)
                    * b ** (ell - i)
                    * d ** (m - t - ell + i)
                )
            row.append(total)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class SymRepMatrix:
    """Exact integer ``(k-1) x (k-1)`` matrix acting on Sym^{k-2} coordinates."""

    k: int
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.k - 1

    def __matmul__(self, other: "SymRepMatrix") -> "SymRepMatrix":
        if other.k != self.k:
            raise DomainError("weights differ")
        n = self.size
        return SymRepMatrix(
            self.k,
            tuple(
                tuple(
                    sum(self.entries[i][r] * other.entries[r][j] for r in range(n))
                    for j in range(n)
                )
                for i in range(n)
            ),
        )

    def transpose(self) -> "SymRepMatrix":
        return SymRepMatrix(self.k, tuple(zip(*self.entries)))

    def apply(self, vector: Sequence) -> list:
        """Matrix-vector product; works for ints, Fractions and mpmath numbers."""
        if len(vector) != self.size:
            raise DomainError(f"expected {self.size} entries, got {len(vector)}")
        return [
            sum((e * v for e, v in zip(row, vector)), start=0 * vector[0])
            for row in self.entries
        ]

    def determinant(self) -> int:
        """Exact determinant by fraction-free elimination."""
        rows = [[Fraction(x) for x in row] for row in self.entries]
        n = self.size
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
            if pivot is None:
                return 0
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                det = -det
            det *= rows[col][col]
            for r in range(col + 1, n):
                factor = rows[r][col] / rows[col][col]
                if factor:
                    rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
        return int(det)

    def is_identity(self) -> bool:
        return all(
            self.entries[i][j] == (1 if i == j else 0)
            for i in range(self.size)
            for j in range(self.size)
        )


def n_matrix(M: SL2Z, k: int) -> SymRepMatrix:
    """The integer matrix ``N(M)`` mapping ``M∘(e1, e2)``-coordinates to standard ones."""
    if k < 2 or k % 2:
        raise DomainError(f"weight must be even and >= 2, got {k}")
    return SymRepMatrix(k, _n_entries(M.a, M.b, M.c, M.d, k))


def n_matrix_gl2(a: int, b: int, c: int, d: int, k: int) -> SymRepMatrix:
    """``N`` for an arbitrary integer matrix, e.g. the reflection ``diag(-1, 1)``."""
    return SymRepMatrix(k, _n_entries(a, b, c, d, k))


@dataclass(frozen=True)
class SymVector:
    """Element of Sym^{k-2}(C^2) in the basis tagged by ``basis_tag``."""

    k: int
    entries: tuple
    basis_tag: SL2Z = IDENTITY

    def __post_init__(self) -> None:
        if len(self.entries) != self.k - 1:
            raise DomainError(
                f"Sym^{self.k - 2} needs {self.k - 1} entries, got {len(self.entries)}"
            )

    def to_standard(self) -> "SymVector":
        if self.basis_tag == IDENTITY:
            return self
        return SymVector(
            self.k, tuple(n_matrix(self.basis_tag, self.k).apply(list(self.entries)))
        )


def act_basis(M: SL2Z, v: SymVector) -> SymVector:
    """Re-express ``v`` in the basis ``M∘(current basis)``.

    The abstract element is unchanged; its coordinates pick up ``N(M^-1)``.
    """
    entries = n_matrix(M.inverse(), v.k).apply(list(v.entries))
    return SymVector(v.k, tuple(entries), v.basis_tag @ M)


def j_factor(M: SL2Z, tau) -> mp.mpc:
    """Factor of automorphy ``c τ + d``."""
    return M.c * mp.mpc(tau) + M.d


def sym_power_of_point(tau, k: int) -> SymVector:
    """``(τ e1 + e2)^{k-2}`` in the standard basis, i.e. entries ``τ^l``."""
    tau = mp.mpc(tau)
    return SymVector(k, tuple(tau**ell for ell in range(k - 1)))


def expand_in_standard_monomials(v: SymVector) -> list:
    """Coefficients of ``e1^t e2^(k-2-t)`` obtained by expanding the basis polynomials.

    Independent of :func:`n_matrix`; used to cross-check it.
    """
    m = v.k - 2
    B = v.basis_tag
    x1 = [B.c, B.a]  # index = power of e1
    x2 = [B.d, B.b]

    def mul(p: list, q: list) -> list:
        out = [0] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        return out

    def power(p: list, n: int) -> list:
        out = [1]
        for _ in range(n):
            out = mul(out, p)
        return out

    total = [0 * v.entries[0]] * (m + 1)
    for ell, z in enumerate(v.entries):
        poly = mul(power(x1, ell), power(x2, m - ell))
        for t, coeff in enumerate(poly):
            total[t] += z * comb(m, ell) * coeff
    return total


def display_order(entries: Sequence) -> list:
    """Reorder standard coordinates the way the worked examples print them.

    The printed vectors list the highest power of e1 first and carry the sign
    ``(-1)^l``, i.e. they are coordinates in the basis ``(-e1, e2)``.
    """
    return [(-1) ** ell * entries[ell] for ell in reversed(range(len(entries)))]
