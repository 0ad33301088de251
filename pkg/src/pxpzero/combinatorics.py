"""Exact counting formulas for zero-mode lower bounds of the PXP chain.

All quantities are Python integers, so nothing overflows or rounds for any
system size.  Binomial coefficients follow the zero convention: C(a, b) = 0
whenever a < 0, b < 0 or b > a.  Every formula below leans on that and none
of them special-cases out-of-range arguments.

Naming follows the three symmetry families:

* ``*_obc``  open chain, inversion only
* ``*_k0``   periodic chain, zero momentum
* ``*_kpi``  periodic chain, momentum pi (even L only)

``omega_*`` counts orthogonal states with N excitations, ``delta_*`` is the
difference between the inversion-symmetric and inversion-antisymmetric
contributions to that count, and ``chiral_charges_*`` returns the pair
(Q_plus, Q_minus) of chiral charges of the two inversion sectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

OPEN = "open"
PERIODIC = "periodic"
ZERO = "zero"
PI = "pi"
PLUS = "plus"
MINUS = "minus"

BOUNDARIES = (OPEN, PERIODIC)
MOMENTA = (None, ZERO, PI)
INVERSIONS = (None, PLUS, MINUS)


class FormulaError(ArithmeticError):
    """An exact division that must be integral was not."""


@dataclass(frozen=True)
class SectorSpec:
    """Boundary condition plus optional momentum and inversion selectors.

    ``momentum`` is ``None`` (no translation resolution), ``"zero"`` or
    ``"pi"``; ``inversion`` is ``None`` (both signs merged), ``"plus"`` or
    ``"minus"``.
    """

    boundary: str = OPEN
    momentum: str | None = None
    inversion: str | None = None

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.momentum not in MOMENTA:
            raise ValueError(f"unknown momentum {self.momentum!r}")
        if self.inversion not in INVERSIONS:
            raise ValueError(f"unknown inversion {self.inversion!r}")
        if self.momentum is not None and self.boundary != PERIODIC:
            raise ValueError("a momentum sector requires periodic boundary")

    def check_size(self, L: int) -> None:
        if L < 0:
            raise ValueError("L must be non-negative")
        if self.momentum == PI and L % 2:
            raise ValueError("momentum pi requires an even number of sites")

    @property
    def translation_sign(self) -> int | None:
        return {None: None, ZERO: 1, PI: -1}[self.momentum]

    @property
    def inversion_sign(self) -> int | None:
        return {None: None, PLUS: 1, MINUS: -1}[self.inversion]

    def with_inversion(self, inversion: str | None) -> "SectorSpec":
        return SectorSpec(self.boundary, self.momentum, inversion)

    def label(self) -> str:
        mom = {None: "", ZERO: ",k=0", PI: ",k=pi"}[self.momentum]
        inv = {None: "", PLUS: ",+", MINUS: ",-"}[self.inversion]
        return f"{self.boundary}{mom}{inv}"


def binomial(a: int, b: int) -> int:
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


@lru_cache(maxsize=None)
def _fib_pair(l: int) -> tuple[int, int]:
    # fast doubling: returns (F_l, F_{l+1})
    if l == 0:
        return 0, 1
    a, b = _fib_pair(l >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if l & 1:
        return d, c + d
    return c, d


def fibonacci(l: int) -> int:
    """F_l with F_0 = 0, F_1 = 1."""
    if l < 0:
        raise ValueError("Fibonacci index must be non-negative")
    return _fib_pair(l)[0]


def lucas(l: int) -> int:
    """Lucas number L_l = F_{l-1} + F_{l+1}; L_0 = 2, L_1 = 1."""
    if l < 0:
        raise ValueError("Lucas index must be non-negative")
    if l == 0:
        return 2
    return fibonacci(l - 1) + fibonacci(l + 1)


def totient(k: int) -> int:
    if k < 1:
        raise ValueError("totient requires k >= 1")
    result, n, p = k, k, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def exact_div(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if r:
        raise FormulaError(f"{num} is not divisible by {den}")
    return q


# ---------------------------------------------------------------------------
# open chain
# ---------------------------------------------------------------------------

def omega_obc(L: int, N: int) -> int:
    # C(L-N, N) + C(L-N, N-1), merged by Pascal's rule (valid for L >= 0)
    return binomial(L - N + 1, N)


def delta_obc(L: int, N: int) -> int:
    """Number of inversion-invariant open-chain configurations."""
    l, odd_sites = divmod(L, 2)
    n, odd_n = divmod(N, 2)
    if not odd_sites:
        return 0 if odd_n else binomial(l - n, n)
    if odd_n:
        return binomial(l - n, n)
    return binomial(l - n, n) + binomial(l - n, n - 1)


def _signed_sum(values) -> int:
    return sum(v if N % 2 == 0 else -v for N, v in values)


def chiral_charge_obc_total(L: int) -> int:
    return _signed_sum((N, omega_obc(L, N)) for N in range(L + 2))


def chiral_charge_obc_table(L: int) -> int:
    """Closed form of the total open-chain chiral charge (period 6 in L)."""
    return {0: 1, 5: 1, 1: 0, 4: 0, 2: -1, 3: -1}[L % 6]


def _charges(omega, delta, Ns) -> tuple[int, int]:
    plus = minus = 0
    for N in Ns:
        sign = 1 if N % 2 == 0 else -1
        om, de = omega(N), delta(N)
        plus += sign * (om + de)
        minus += sign * (om - de)
    return exact_div(plus, 2), exact_div(minus, 2)


def chiral_charges_obc(L: int) -> tuple[int, int]:
    if L < 0:
        raise ValueError("L must be non-negative")
    return _charges(lambda N: omega_obc(L, N), lambda N: delta_obc(L, N),
                    range(L + 2))


# ---------------------------------------------------------------------------
# periodic chain, zero momentum
# ---------------------------------------------------------------------------

def phi_first_excited(L: int, N: int) -> int:
    """Periodic configurations with N excitations and site 1 excited."""
    return binomial(L - N - 1, N - 1)


def _tilde(raw: dict[int, int]) -> dict[int, int]:
    """Subtract contributions counted again at every proper multiple of d.

    ``raw`` maps motif counts d to the number of configurations built from d
    repeats; the result maps d to the number whose repeat count is exactly d
    (within the keys of ``raw``).
    """
    out: dict[int, int] = {}
    for d in sorted(raw, reverse=True):
        out[d] = raw[d] - sum(v for m, v in out.items() if m % d == 0)
    return out


@lru_cache(maxsize=65536)
def phi_tilde_k0(L: int, N: int) -> dict[int, int]:
    """Exact-repeat-count decomposition of ``phi_first_excited(L, N)``.

    Keys are motif counts d dividing gcd(L, N); values count configurations
    with site 1 excited made of exactly d repeats of a shorter motif.
    """
    if N <= 0:
        return {}
    raw = {d: binomial(L // d - N // d - 1, N // d - 1)
           for d in divisors(math.gcd(L, N))}
    return _tilde(raw)


def omega_k0(L: int, N: int) -> int:
    """Number of translation orbits (zero-momentum states) with N excitations."""
    if L < 1:
        raise ValueError("periodic chain needs L >= 1")
    if N == 0:
        return 1
    if N < 0:
        return 0
    tilde = phi_tilde_k0(L, N)
    return exact_div(sum(d * v for d, v in tilde.items()), N)


def delta_k0(L: int, N: int) -> int:
    if L < 1:
        raise ValueError("periodic chain needs L >= 1")
    l = L // 2
    n, odd_n = divmod(N, 2)
    if odd_n:
        return binomial(l - n - 1, n)
    return binomial(l - n, n)


def chiral_charges_k0(L: int) -> tuple[int, int]:
    if L < 1:
        raise ValueError("periodic chain needs L >= 1")
    return _charges(lambda N: omega_k0(L, N), lambda N: delta_k0(L, N),
                    range(L // 2 + 1))


# ---------------------------------------------------------------------------
# periodic chain, momentum pi
# ---------------------------------------------------------------------------

def _check_even(L: int) -> None:
    if L < 0 or L % 2:
        raise ValueError("momentum pi requires even L >= 0")


def omega_kpi(L: int, N: int) -> int:
    """Number of pi-momentum states: translation orbits with even exact period.

    An orbit whose exact period is odd is annihilated by the alternating
    translation sum; every even-period orbit carries exactly one state.  The
    orbit with repeat count d has period L/d and contains N/d configurations
    with site 1 excited, which fixes the weight d/N.
    """
    _check_even(L)
    if L == 0 or N <= 0:
        return 0
    tilde = phi_tilde_k0(L, N)
    return exact_div(sum(d * v for d, v in tilde.items() if (L // d) % 2 == 0), N)


def _phi_pi(L: int, N: int, d: int) -> int:
    if L % (2 * d) or N % d:
        return 0
    return binomial(L // d - N // d - 1, N // d - 1)


def _theta_pi(L: int, N: int, d: int) -> int:
    if d % 2 or L % d or (L // d) % 2 == 0 or N % d:
        return 0
    return binomial(L // d - N // d - 1, N // d - 1)


def omega_kpi_closed_form(L: int, N: int, restricted: bool = False) -> Fraction:
    """Motif-count expression for the pi sector with the odd-period correction.

    The exact-repeat recursions run over every divisor d of L, so a tilde
    count may go negative at a d where the raw count vanishes by its parity
    conditions; that term is what makes the result integral.  With
    ``restricted=True`` the odd-period tilde counts are instead zeroed
    wherever d is odd or L/d is even, which is not integral in general
    (L = 6, N = 2 gives 3/2).

    Returned as a Fraction.  ``omega_kpi`` is authoritative; this function
    exists so the two can be compared.
    """
    _check_even(L)
    if L == 0 or N <= 0:
        return Fraction(0)
    ds = divisors(L)
    phi = _tilde({d: _phi_pi(L, N, d) for d in ds})
    theta_raw = {d: _theta_pi(L, N, d) for d in ds}
    theta = _tilde(theta_raw)
    if restricted:
        theta = {d: v if d % 2 == 0 and (L // d) % 2 else 0
                 for d, v in theta.items()}
    total = 0
    for d in ds:
        correction = theta_raw[d] - theta[d] if _phi_pi(L, N, d) > 0 else 0
        total += d * (phi[d] - correction)
    return Fraction(total, N)


def omega_kpi_discrepancies(L: int) -> list[tuple[int, int, Fraction]]:
    """(N, orbit count, closed-form value) wherever the two disagree."""
    out = []
    for N in range(1, L // 2 + 1):
        canonical = omega_kpi(L, N)
        literal = omega_kpi_closed_form(L, N)
        if literal != canonical:
            out.append((N, canonical, literal))
    return out


def delta_kpi(L: int, N: int) -> int:
    _check_even(L)
    l = L // 2
    n, odd_n = divmod(N, 2)
    if odd_n:
        return -binomial(l - n - 1, n)
    if n == 0:
        return 0
    return binomial(l - n - 1, n) - binomial(l - n, n)


def chiral_charges_kpi(L: int) -> tuple[int, int]:
    _check_even(L)
    if L == 0:
        return 0, 0
    return _charges(lambda N: omega_kpi(L, N), lambda N: delta_kpi(L, N),
                    range(1, L // 2 + 1))


# ---------------------------------------------------------------------------
# sector dispatch
# ---------------------------------------------------------------------------

def omega(L: int, N: int, sector: SectorSpec) -> int:
    if sector.boundary == OPEN:
        return omega_obc(L, N)
    if sector.momentum == ZERO:
        return omega_k0(L, N)
    if sector.momentum == PI:
        return omega_kpi(L, N)
    raise ValueError(f"no closed form for sector {sector.label()}")


def delta(L: int, N: int, sector: SectorSpec) -> int:
    if sector.boundary == OPEN:
        return delta_obc(L, N)
    if sector.momentum == ZERO:
        return delta_k0(L, N)
    if sector.momentum == PI:
        return delta_kpi(L, N)
    raise ValueError(f"no closed form for sector {sector.label()}")


def chiral_charges(L: int, sector: SectorSpec) -> tuple[int, int]:
    """(Q_plus, Q_minus) for the sector family; the inversion field is ignored."""
    if sector.boundary == OPEN:
        return chiral_charges_obc(L)
    if sector.momentum == ZERO:
        return chiral_charges_k0(L)
    if sector.momentum == PI:
        return chiral_charges_kpi(L)
    raise ValueError(f"no closed form for sector {sector.label()}")


def sector_charge(L: int, sector: SectorSpec) -> int:
    """Signed chiral charge of one sector (Q_plus + Q_minus when merged)."""
    qp, qm = chiral_charges(L, sector)
    if sector.inversion == PLUS:
        return qp
    if sector.inversion == MINUS:
        return qm
    return qp + qm


def lower_bound(L: int, sector: SectorSpec) -> int:
    """Zero-mode lower bound: |Q| per inversion sector, |Q+| + |Q-| when merged."""
    qp, qm = chiral_charges(L, sector)
    if sector.inversion == PLUS:
        return abs(qp)
    if sector.inversion == MINUS:
        return abs(qm)
    return max(abs(qp + qm), abs(qp - qm))


def fibonacci_gap(L: int, sector: SectorSpec) -> int:
    """Closed-form value of |Q_plus - Q_minus| for the sector family."""
    l, odd = divmod(L, 2)
    if sector.boundary == OPEN:
        return fibonacci(l) if odd else fibonacci(l + 1)
    if sector.momentum == ZERO:
        # F_{l-1}, written so that l = 0 needs no negative index
        return fibonacci(l + 1) - fibonacci(l)
    if sector.momentum == PI:
        if L == 0:
            return 0
        # F_{l-2}
        return fibonacci(l) - fibonacci(l - 1)
    raise ValueError(f"no closed form for sector {sector.label()}")
