"""Constrained Hilbert space, symmetry actions and symmetry-adapted bases.

Configurations are plain ints: bit i set means site i + 1 is excited.  The
string form lists site 1 first, using the ground/excited glyphs ``◦``/``•``
(``0``/``1`` and ``o``/``x`` are accepted on input).

Symmetry sectors are handled with one-dimensional characters of the group
generated by the requested symmetries: translations T^j get the weight
k^j (k = +1 or -1 for momentum 0 or pi) and the inversion I gets the weight
s (= +1 or -1).  For every group orbit the smallest mask is the
representative, and the orbit supports a state iff the character is trivial
on the representative's stabilizer.  The unnormalized state then has
coefficient +-1 on every configuration of the orbit, so its squared norm is
the orbit size and all overlaps are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .combinatorics import OPEN, PERIODIC, PI, ZERO, SectorSpec

MAX_ENUM_L = 28
MAX_BASIS_L = 24
MAX_ORACLE_L = 20

GROUND, EXCITED = "◦", "•"
_GLYPHS = {"◦": 0, "o": 0, "0": 0, ".": 0, "•": 1, "x": 1, "1": 1, "*": 1}


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------

def from_string(text: str) -> tuple[int, int]:
    """Parse ``'•◦◦'`` into ``(mask, L)``."""
    mask = 0
    for i, ch in enumerate(text):
        try:
            bit = _GLYPHS[ch]
        except KeyError:
            raise ValueError(f"bad site glyph {ch!r}") from None
        mask |= bit << i
    return mask, len(text)


def to_string(c: int, L: int) -> str:
    return "".join(EXCITED if c >> i & 1 else GROUND for i in range(L))


def popcount(c: int) -> int:
    return c.bit_count()


def parity(c: int) -> int:
    """0 for an even number of excitations, 1 for odd."""
    return c.bit_count() & 1


def _rotl(c: int, L: int, j: int = 1) -> int:
    j %= L
    full = (1 << L) - 1
    return ((c << j) | (c >> (L - j))) & full


def is_valid(c: int, L: int, boundary: str) -> bool:
    if c < 0 or c >> L:
        return False
    if c & (c >> 1):
        return False
    if boundary == PERIODIC and L >= 1:
        if L == 1:
            return c == 0
        if c & 1 and c >> (L - 1) & 1:
            return False
    return True


def _check_boundary(boundary: str) -> None:
    if boundary not in (OPEN, PERIODIC):
        raise ValueError(f"unknown boundary {boundary!r}")


def enumerate_configs(L: int, boundary: str = OPEN) -> list[int]:
    """All constraint-respecting masks in ascending order.

    The count is F_{L+2} for an open chain and the Lucas number L_L for a
    periodic one (L >= 1).
    """
    _check_boundary(boundary)
    if not 0 <= L <= MAX_ENUM_L:
        raise ValueError(f"L must lie in [0, {MAX_ENUM_L}] for enumeration")
    # grow open-chain strings site by site, then filter the wraparound
    configs = [0]
    last_excited = [False]
    for i in range(L):
        nxt, nxt_last = [], []
        for c, ex in zip(configs, last_excited):
            nxt.append(c)
            nxt_last.append(False)
            if not ex:
                nxt.append(c | 1 << i)
                nxt_last.append(True)
        configs, last_excited = nxt, nxt_last
    if boundary == PERIODIC:
        configs = [c for c in configs if is_valid(c, L, PERIODIC)]
    return sorted(configs)


def configs_with_excitations(L: int, N: int, boundary: str = OPEN) -> list[int]:
    return [c for c in enumerate_configs(L, boundary) if c.bit_count() == N]


def invert(c: int, L: int) -> int:
    """Spatial inversion, site i -> L - i + 1."""
    out = 0
    for i in range(L):
        if c >> i & 1:
            out |= 1 << (L - 1 - i)
    return out


def translate(c: int, L: int, j: int = 1) -> int:
    """T^j: the excitation on site i moves to site i + j (mod L)."""
    if L == 0:
        return c
    return _rotl(c, L, j)


def apply_symmetry(c: int, L: int, g: str, boundary: str = PERIODIC) -> int:
    """Apply ``'T'`` (translation, periodic only) or ``'I'`` (inversion)."""
    _check_boundary(boundary)
    if not is_valid(c, L, boundary):
        raise ValueError(f"invalid configuration {to_string(c, L)!r}")
    if g == "I":
        return invert(c, L)
    if g == "T":
        if boundary != PERIODIC:
            raise ValueError("translation is only a symmetry of the periodic chain")
        return translate(c, L)
    raise ValueError(f"unknown symmetry {g!r}")


# ---------------------------------------------------------------------------
# translation orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    representative: int
    period: int
    excitations: int
    inversion_partner: int
    # I(representative) == T^inversion_shift(inversion_partner)
    inversion_shift: int

    @property
    def size(self) -> int:
        return self.period

    @property
    def self_inverse(self) -> bool:
        return self.inversion_partner == self.representative

    def motif_count(self, L: int) -> int:
        return L // self.period


def _period(c: int, L: int) -> int:
    for t in range(1, L + 1):
        if L % t == 0 and _rotl(c, L, t) == c:
            return t
    return L


def _canonical_translation(c: int, L: int) -> tuple[int, int]:
    """(smallest mask in the translation orbit, j with T^j(rep) == c)."""
    best, shift = c, 0
    x = c
    for j in range(1, L):
        x = _rotl(x, L, 1)
        if x < best:
            best, shift = x, j
    # x_j = T^j c, so c = T^{-j} best
    return best, (-shift) % L


def orbits(L: int, N: int | None = None) -> list[Orbit]:
    """Translation orbits of the periodic chain, optionally at fixed N."""
    if not 1 <= L <= MAX_ENUM_L:
        raise ValueError(f"L must lie in [1, {MAX_ENUM_L}] for orbit enumeration")
    seen: set[int] = set()
    out = []
    for c in enumerate_configs(L, PERIODIC):
        if N is not None and c.bit_count() != N:
            continue
        if c in seen:
            continue
        t = _period(c, L)
        x = c
        for _ in range(t):
            seen.add(x)
            x = _rotl(x, L, 1)
        partner, shift = _canonical_translation(invert(c, L), L)
        out.append(Orbit(c, t, c.bit_count(), partner, shift % t))
    return out


# ---------------------------------------------------------------------------
# symmetry-adapted bases
# ---------------------------------------------------------------------------

def _group_images(c: int, L: int, sector: SectorSpec) -> list[tuple[int, int]]:
    """(g c, character of g) for every element g of the sector's group."""
    k = sector.translation_sign
    s = sector.inversion_sign
    if k is not None and L > 0:
        trans = []
        x, w = c, 1
        for _ in range(L):
            trans.append((x, w))
            x, w = _rotl(x, L, 1), w * k
    else:
        trans = [(c, 1)]
    if s is None:
        return trans
    # T^j I c; its character is k^j s
    ic = invert(c, L)
    if k is not None and L > 0:
        refl = []
        x, w = ic, s
        for _ in range(L):
            refl.append((x, w))
            x, w = _rotl(x, L, 1), w * k
    else:
        refl = [(ic, s)]
    return trans + refl


@dataclass
class SymmetryBasis:
    """Orthonormal real basis of one sector.

    Element ``a`` is ``sum_c signs[a][c] |c> / sqrt(norms[a])``; ``norms[a]``
    is the number of configurations in its support.
    """

    L: int
    sector: SectorSpec
    representatives: list[int] = field(default_factory=list)
    signs: list[dict[int, int]] = field(default_factory=list)
    norms: list[int] = field(default_factory=list)
    grades: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.representatives)

    def lookup(self) -> dict[int, tuple[int, int]]:
        """configuration -> (element index, sign) over the union of supports."""
        table = {}
        for a, sg in enumerate(self.signs):
            for c, w in sg.items():
                table[c] = (a, w)
        return table

    def count_by_excitations(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.representatives:
            n = r.bit_count()
            out[n] = out.get(n, 0) + 1
        return out

    def gram(self) -> list[list[tuple[int, int]]]:
        """Exact Gram matrix as (integer overlap, norm product) pairs.

        Entry (a, b) stands for overlap / sqrt(norm_a * norm_b).
        """
        out = []
        for a, sa in enumerate(self.signs):
            row = []
            for b, sb in enumerate(self.signs):
                small, big = (sa, sb) if len(sa) <= len(sb) else (sb, sa)
                ov = sum(w * big.get(c, 0) for c, w in small.items())
                row.append((ov, self.norms[a] * self.norms[b]))
            out.append(row)
        return out


def _check_sector(L: int, sector: SectorSpec) -> None:
    sector.check_size(L)
    if sector.momentum == ZERO and L < 1:
        raise ValueError("momentum zero needs L >= 1")


def build_symmetry_basis(L: int, sector: SectorSpec, N: int | None = None) -> SymmetryBasis:
    """Symmetry-adapted basis of ``sector`` (optionally at fixed N).

    Orbits whose stabilizer carries a non-trivial character (odd-period
    orbits at momentum pi, antisymmetric combinations of inversion-fixed
    states, ...) contribute nothing.  An orbit pair exchanged by inversion
    yields a single element in each inversion sector.
    """
    _check_sector(L, sector)
    if L > MAX_BASIS_L:
        raise ValueError(f"L must be at most {MAX_BASIS_L} to build a basis")
    basis = SymmetryBasis(L, sector)
    if sector.momentum == PI and L == 0:
        return basis
    seen: set[int] = set()
    for c in enumerate_configs(L, sector.boundary):
        if c in seen or (N is not None and c.bit_count() != N):
            continue
        images = _group_images(c, L, sector)
        signs: dict[int, int] = {}
        admissible = True
        for x, w in images:
            prev = signs.get(x)
            if prev is None:
                signs[x] = w
            elif prev != w:
                admissible = False
        seen.update(signs)
        if not admissible:
            continue
        # images are listed from c itself, which is the smallest mask because
        # configs are visited in ascending order; normalize its sign to +1
        basis.representatives.append(c)
        basis.signs.append(signs)
        basis.norms.append(len(signs))
        basis.grades.append(parity(c))
    return basis


# ---------------------------------------------------------------------------
# brute-force counting oracles
# ---------------------------------------------------------------------------

def oracle_counts(L: int, N: int, sector: SectorSpec) -> tuple[int, int]:
    """(omega, delta) counted from explicit configurations and orbits.

    ``omega`` is the number of orthogonal sector states with N excitations
    (ignoring the inversion selector) and ``delta`` is the trace of the
    inversion operator on their span, i.e. symmetric minus antisymmetric
    count.  Nothing here uses the closed-form formulas.
    """
    if not 0 <= L <= MAX_ORACLE_L:
        raise ValueError(f"L must lie in [0, {MAX_ORACLE_L}] for the oracle")
    _check_sector(L, sector)
    if sector.boundary == OPEN:
        cs = configs_with_excitations(L, N, OPEN)
        return len(cs), sum(1 for c in cs if invert(c, L) == c)
    if sector.momentum is None:
        raise ValueError("oracle counts need a momentum sector on the periodic chain")
    if sector.momentum == PI and L == 0:
        return 0, 0
    k = sector.translation_sign
    omega = delta = 0
    for orb in orbits(L, N):
        # the alternating sum over an orbit of odd period vanishes
        if k == -1 and orb.period % 2:
            continue
        omega += 1
        if orb.self_inverse:
            delta += k ** orb.inversion_shift
    return omega, delta


def inversion_fixed_configs(L: int, N: int | None = None) -> list[int]:
    return [c for c in enumerate_configs(L, OPEN)
            if invert(c, L) == c and (N is None or c.bit_count() == N)]


def brute_force_strings(L: int, N: int, boundary: str = OPEN) -> list[int]:
    """Independent enumeration by choosing N of L sites; used to cross-check."""
    out = []
    for sites in combinations(range(L), N):
        c = sum(1 << i for i in sites)
        if is_valid(c, L, boundary):
            out.append(c)
    return sorted(out)
