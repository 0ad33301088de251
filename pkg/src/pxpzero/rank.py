"""Exact matrix rank over the rationals.

Two independent routes:

* ``modular_rank`` eliminates modulo random 62-bit primes with a compiled
  kernel.  Reduction mod p can only lose rank, so the maximum over primes is
  a lower bound that equals the rational rank unless every prime divides the
  same maximal minor.
* ``rational_rank`` is a sparse Gaussian elimination over ``Fraction`` with
  a fewest-nonzeros pivot rule.  It is slow and serves as the oracle for
  small blocks.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numba
import numpy as np
from sympy import isprime as is_prime

PRIME_LOW = 1 << 61
PRIME_HIGH = 1 << 62
DEFAULT_PRIMES = 3
MAX_PRIMES = 8


def random_primes(count: int, seed: int | None = None) -> list[int]:
    rng = random.Random(seed)
    out: list[int] = []
    while len(out) < count:
        p = rng.randrange(PRIME_LOW, PRIME_HIGH) | 1
        if p not in out and is_prime(p):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# compiled kernel: Montgomery arithmetic with R = 2**64
# ---------------------------------------------------------------------------

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_ZERO = np.uint64(0)
_ONE = np.uint64(1)


@numba.njit(cache=True)
def _mulhi(a, b):
    a_lo = a & _M32
    a_hi = a >> _S32
    b_lo = b & _M32
    b_hi = b >> _S32
    p0 = a_lo * b_lo
    p1 = a_lo * b_hi
    p2 = a_hi * b_lo
    p3 = a_hi * b_hi
    mid = (p0 >> _S32) + (p1 & _M32) + (p2 & _M32)
    return p3 + (p1 >> _S32) + (p2 >> _S32) + (mid >> _S32)


@numba.njit(cache=True)
def _mont(a, b, p, pinv):
    # a * b / 2**64 mod p for a, b < p < 2**62
    hi = _mulhi(a, b)
    lo = a * b
    m = lo * pinv
    t = hi + _mulhi(m, p)
    if lo != _ZERO:
        t += _ONE
    if t >= p:
        t -= p
    return t


@numba.njit(cache=True)
def _inverse(a, p):
    # extended Euclid on signed 64-bit; all intermediates stay below p
    t, new_t = np.int64(0), np.int64(1)
    r, new_r = np.int64(p), np.int64(a)
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += np.int64(p)
    return np.uint64(t)


@numba.njit(cache=True)
def _rank_kernel(A, p, pinv, r2):
    m, n = A.shape
    rank = 0
    nz = np.empty(n, dtype=np.int64)
    for c in range(n):
        if rank == m:
            break
        piv = -1
        for i in range(rank, m):
            if A[i, c] != _ZERO:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, n):
                tmp = A[piv, j]
                A[piv, j] = A[rank, j]
                A[rank, j] = tmp
        # scale the pivot row by inv(pivot) * R**2 so that a Montgomery
        # product with it equals an ordinary product with row / pivot
        k = _mont(_mont(_inverse(A[rank, c], p), r2, p, pinv), r2, p, pinv)
        count = 0
        for j in range(c + 1, n):
            if A[rank, j] != _ZERO:
                A[rank, j] = _mont(A[rank, j], k, p, pinv)
                nz[count] = j
                count += 1
        for i in range(rank + 1, m):
            f = A[i, c]
            if f == _ZERO:
                continue
            A[i, c] = _ZERO
            for q in range(count):
                j = nz[q]
                y = _mont(f, A[rank, j], p, pinv)
                x = A[i, j]
                A[i, j] = x - y if x >= y else x + (p - y)
        rank += 1
    return rank


def _as_int_matrix(X) -> np.ndarray:
    if hasattr(X, "toarray"):
        X = X.toarray()
    return np.asarray(X, dtype=np.int64)


def rank_mod_p(X, p: int) -> int:
    """Rank of the integer matrix X over GF(p), p an odd prime in (2, 2**62)."""
    A = _as_int_matrix(X)
    if A.size == 0:
        return 0
    if not 2 < p < PRIME_HIGH or p % 2 == 0:
        raise ValueError("p must be an odd prime below 2**62")
    if A.shape[0] > A.shape[1]:
        A = A.T
    red = np.ascontiguousarray(np.mod(A, p).astype(np.uint64))
    pinv = (-pow(p, -1, 1 << 64)) % (1 << 64)
    r2 = pow(2, 128, p)
    return int(_rank_kernel(red, np.uint64(p), np.uint64(pinv), np.uint64(r2)))


def modular_ranks(X, primes: list[int]) -> list[int]:
    return [rank_mod_p(X, p) for p in primes]


def modular_rank(X, seed: int | None = 0, n_primes: int = DEFAULT_PRIMES) -> int:
    """Rank over Q as the maximum of ranks modulo random primes.

    Certified once the two largest values agree; extra primes are drawn (up
    to MAX_PRIMES) until they do.
    """
    A = _as_int_matrix(X)
    if A.size == 0:
        return 0
    primes = random_primes(MAX_PRIMES, seed)
    ranks = modular_ranks(A, primes[:n_primes])
    used = n_primes
    while True:
        top = sorted(ranks, reverse=True)
        if len(top) >= 2 and top[0] == top[1]:
            return top[0]
        if used >= MAX_PRIMES:
            raise RuntimeError(f"modular ranks never agreed: {ranks}")
        ranks.append(rank_mod_p(A, primes[used]))
        used += 1


def rational_rank(X) -> int:
    """Rank over Q by sparse elimination on Fraction rows."""
    A = _as_int_matrix(X)
    rows: list[dict[int, Fraction]] = []
    for r in A:
        nzc = np.flatnonzero(r)
        if nzc.size:
            rows.append({int(j): Fraction(int(r[j])) for j in nzc})
    rank = 0
    while rows:
        # pivot on the sparsest row, at its sparsest column occurrence
        pi = min(range(len(rows)), key=lambda i: len(rows[i]))
        prow = rows.pop(pi)
        col_count: dict[int, int] = {}
        for row in rows:
            for j in row:
                col_count[j] = col_count.get(j, 0) + 1
        pc = min(prow, key=lambda j: col_count.get(j, 0))
        pv = prow[pc]
        rank += 1
        nxt = []
        for row in rows:
            f = row.get(pc)
            if f is not None:
                ratio = f / pv
                for j, v in prow.items():
                    w = row.get(j, 0) - ratio * v
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
            if row:
                nxt.append(row)
        rows = nxt
    return rank
