"""Truncated power series for the periodic-chain orbit generating functions.

``f(x)`` counts translation orbits of the periodic constrained chain and
``g(x)`` counts orbits up to inversion as well.  Their coefficients are
compared against an explicit enumeration of inversion-invariant orbits (K)
and inversion-exchanged orbit pairs (M).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import fibonacci, totient
from .hilbert import MAX_ORACLE_L, orbits


class IntegerSeries:
    """Power series in x truncated after degree ``order``, exact coefficients."""

    def __init__(self, coefficients, order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        coeffs = [Fraction(c) for c in list(coefficients)[: order + 1]]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        self.coefficients = coeffs
        self.order = order

    @classmethod
    def monomial(cls, power: int, order: int, coefficient=1) -> "IntegerSeries":
        coeffs = [0] * (order + 1)
        if power <= order:
            coeffs[power] = coefficient
        return cls(coeffs, order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coefficients[n]

    def __len__(self) -> int:
        return self.order + 1

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coefficients[:8])
        return f"IntegerSeries([{head}{', ...' if self.order >= 8 else ''}], order={self.order})"

    def _coerce(self, other) -> "IntegerSeries":
        if isinstance(other, IntegerSeries):
            return other
        return IntegerSeries.monomial(0, self.order, other)

    def __add__(self, other) -> "IntegerSeries":
        other = self._coerce(other)
        n = min(self.order, other.order)
        return IntegerSeries([a + b for a, b in zip(self.coefficients, other.coefficients)], n)

    __radd__ = __add__

    def __neg__(self) -> "IntegerSeries":
        return IntegerSeries([-a for a in self.coefficients], self.order)

    def __sub__(self, other) -> "IntegerSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "IntegerSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "IntegerSeries":
        if not isinstance(other, IntegerSeries):
            c = Fraction(other)
            return IntegerSeries([a * c for a in self.coefficients], self.order)
        n = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            if a[i]:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += a[i] * b[j]
        return IntegerSeries(out, n)

    __rmul__ = __mul__

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coefficients):
            if c:
                return i
        return None

    def substitute_power(self, k: int) -> "IntegerSeries":
        """x -> x**k."""
        out = [Fraction(0)] * (self.order + 1)
        for i, c in enumerate(self.coefficients):
            if i * k > self.order:
                break
            out[i * k] = c
        return IntegerSeries(out, self.order)

    def log_inverse_one_minus(self) -> "IntegerSeries":
        """ln(1 / (1 - u)) for u with zero constant term.

        Solved from (1 - u) y' = u' coefficient by coefficient.
        """
        u = self.coefficients
        if u[0]:
            raise ValueError("series must have zero constant term")
        n = self.order
        du = [(i + 1) * u[i + 1] for i in range(n)]
        w: list[Fraction] = []
        for m in range(n):
            acc = du[m]
            for j in range(1, m + 1):
                if u[j]:
                    acc += u[j] * w[m - j]
            w.append(acc)
        return IntegerSeries([0] + [w[m] / (m + 1) for m in range(n)], n)

    @classmethod
    def rational(cls, numerator, denominator, order: int) -> "IntegerSeries":
        """Expand numerator/denominator (coefficient lists) by long division.

        Equivalent to the linear recurrence c_n = (a_n - sum_{j>=1} q_j c_{n-j}) / q_0.
        """
        num = [Fraction(x) for x in numerator]
        den = [Fraction(x) for x in denominator]
        if not den or den[0] == 0:
            raise ValueError("denominator needs a nonzero constant term")
        out: list[Fraction] = []
        for n in range(order + 1):
            acc = num[n] if n < len(num) else Fraction(0)
            for j in range(1, min(n, len(den) - 1) + 1):
                acc -= den[j] * out[n - j]
            out.append(acc / den[0])
        return cls(out, order)

    def is_integral(self, start: int = 0) -> bool:
        return all(c.denominator == 1 for c in self.coefficients[start:])

    def integers(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("series has non-integral coefficients")
        return [int(c) for c in self.coefficients]


def _check_order(order: int) -> None:
    if order < 1:
        raise ValueError("order must be at least 1")


def _necklace_log_sum(order: int) -> IntegerSeries:
    # sum_k phi(k)/k ln(1/(1 - x^k (1 + x^k))); terms with k > order vanish
    x = IntegerSeries.monomial(1, order)
    inner = (x + x * x).log_inverse_one_minus()
    total = IntegerSeries([], order)
    for k in range(1, order + 1):
        total = total + inner.substitute_power(k) * Fraction(totient(k), k)
    return total


def reflection_series(order: int) -> IntegerSeries:
    """-(1 + x)(1 + x^2) / (x^4 + x^2 - 1)."""
    return IntegerSeries.rational([1, 1, 1, 1], [1, 0, -1, 0, -1], order)


def f_series(order: int) -> IntegerSeries:
    _check_order(order)
    f = _necklace_log_sum(order)
    if not f.is_integral():
        raise ArithmeticError("f series assembled with non-integral coefficients")
    return f


def g_series(order: int) -> IntegerSeries:
    """g(x) = f(x) / 2 + reflection_series(x) / 2.

    Coefficients from degree 1 on are integers; the constant term is 1/2
    because the log sum has no constant term while the rational part does.
    """
    _check_order(order)
    g = (_necklace_log_sum(order) + reflection_series(order)) * Fraction(1, 2)
    if not g.is_integral(start=1):
        raise ArithmeticError("g series assembled with non-integral coefficients")
    return g


@dataclass(frozen=True)
class KMCounts:
    L: int
    K_e: int
    K_o: int
    M_e: int
    M_o: int

    @property
    def K(self) -> int:
        return self.K_e + self.K_o

    @property
    def M(self) -> int:
        return self.M_e + self.M_o


def brute_force_km(L: int) -> KMCounts:
    """Count inversion-invariant orbits (K) and inversion-exchanged orbit pairs (M).

    Each invariant orbit gives one inversion-symmetric zero-momentum state.
    Each exchanged pair gives one symmetric and one antisymmetric state, and
    is counted once.  Subscripts e/o split by excitation parity.
    """
    if L % 2 or not 2 <= L <= min(16, MAX_ORACLE_L):
        raise ValueError("brute_force_km needs even L in [2, 16]")
    K = [0, 0]
    pairs = [0, 0]
    for orb in orbits(L):
        par = orb.excitations % 2
        if orb.self_inverse:
            K[par] += 1
        else:
            pairs[par] += 1
    # every pair was visited from both of its orbits
    return KMCounts(L, K[0], K[1], pairs[0] // 2, pairs[1] // 2)


def verify_fibonacci_identity(order: int) -> dict[int, bool]:
    """2 g_L - f_L == F_{L/2 + 2} for every even L in [2, order]."""
    if order < 6:
        raise ValueError("order must be at least 6")
    f = f_series(order)
    g = g_series(order)
    return {L: 2 * g[L] - f[L] == fibonacci(L // 2 + 2) for L in range(2, order + 1, 2)}
