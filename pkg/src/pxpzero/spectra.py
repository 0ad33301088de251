"""PXP Hamiltonian in a symmetry sector and exact zero-mode counting.

Every allowed spin flip has amplitude 1.  That is the printed Hamiltonian
divided by its projector weights; zero-mode counts only depend on which
entries are nonzero, so nothing below depends on the choice.

Sector matrices are kept in an integer form.  With ``u_r`` the unnormalized
symmetric state of representative r (coefficient +-1 on each configuration
of its orbit), ``H u_r = sum_s M[s, r] u_s`` with integer M.  The symmetric
matrix in the orthonormal basis is ``M[s, r] * sqrt(norm_s / norm_r)``, a
diagonal similarity of M, so M and its parity blocks carry the exact rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import combinatorics as comb
from .combinatorics import OPEN, PERIODIC, SectorSpec
from .hilbert import SymmetryBasis, build_symmetry_basis, is_valid, to_string
from .rank import modular_rank

MAX_DENSE_DIM = 4000
# dense modular elimination stores rows * cols 64-bit words
MAX_RANK_ENTRIES = 150_000_000
ZERO_TOL = 1e-10
WEIGHT_TOL = 1e-8


class ResourceLimitError(RuntimeError):
    """A sector is too large for the exact pipeline."""


def hamiltonian_action(c: int, L: int, boundary: str = OPEN) -> list[int]:
    """Configurations reached from c by one allowed flip, each with amplitude 1.

    Site i may flip iff its neighbors are in the ground state; on an open
    chain the end sites have a single neighbor.
    """
    if not is_valid(c, L, boundary):
        raise ValueError(f"invalid configuration {to_string(c, L)!r}")
    out = []
    for i in range(L):
        if boundary == PERIODIC:
            nbrs = (1 << ((i - 1) % L)) | (1 << ((i + 1) % L))
        else:
            nbrs = 0
            if i > 0:
                nbrs |= 1 << (i - 1)
            if i < L - 1:
                nbrs |= 1 << (i + 1)
        if c & nbrs:
            continue
        d = c ^ (1 << i)
        # a one-site ring is its own neighbor
        if is_valid(d, L, boundary):
            out.append(d)
    return out


@dataclass
class SectorMatrix:
    """Integer form M of H in one sector (see module docstring)."""

    basis: SymmetryBasis
    M: sp.csr_matrix

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def symmetric(self) -> sp.csr_matrix:
        """H in the orthonormal sector basis."""
        norms = np.asarray(self.basis.norms, dtype=float)
        coo = self.M.tocoo()
        data = coo.data * np.sqrt(norms[coo.row] / norms[coo.col])
        return sp.csr_matrix((data, (coo.row, coo.col)), shape=self.M.shape)


def build_sector_matrix(L: int, sector: SectorSpec, basis: SymmetryBasis | None = None) -> SectorMatrix:
    if basis is None:
        basis = build_symmetry_basis(L, sector)
    table = basis.lookup()
    rows, cols, vals = [], [], []
    for s, rep in enumerate(basis.representatives):
        acc: dict[int, int] = {}
        for d in hamiltonian_action(rep, L, sector.boundary):
            hit = table.get(d)
            if hit is None:
                continue
            r, w = hit
            acc[r] = acc.get(r, 0) + w
        for r, v in acc.items():
            if v:
                rows.append(s)
                cols.append(r)
                vals.append(v)
    n = len(basis)
    M = sp.csr_matrix((np.asarray(vals, dtype=np.int64), (rows, cols)), shape=(n, n), dtype=np.int64)
    return SectorMatrix(basis, M)


def apply_exact(L: int, boundary: str, state: dict[int, int]) -> dict[int, int]:
    """H acting on an integer-coefficient superposition of configurations."""
    out: dict[int, int] = {}
    for c, w in state.items():
        for d in hamiltonian_action(c, L, boundary):
            out[d] = out.get(d, 0) + w
    return {c: w for c, w in out.items() if w}


def commutation_residual(sm: SectorMatrix) -> int:
    """Largest |H u_r - sum_s M[s, r] u_s| coefficient over the sector.

    Zero means H maps every sector state back into the sector's span.
    """
    b = sm.basis
    Mc = sm.M.tocsc()
    worst = 0
    for r, signs in enumerate(b.signs):
        lhs = apply_exact(b.L, b.sector.boundary, signs)
        col = Mc.getcol(r)
        rhs: dict[int, int] = {}
        for s, v in zip(col.indices, col.data):
            for c, w in b.signs[s].items():
                rhs[c] = rhs.get(c, 0) + int(v) * w
        for c in set(lhs) | set(rhs):
            worst = max(worst, abs(lhs.get(c, 0) - rhs.get(c, 0)))
    return worst


@dataclass
class ChiralBlock:
    """Integer block of H from odd-grade states into even-grade states."""

    L: int
    sector: SectorSpec
    X: sp.csr_matrix
    even_norms: list[int]
    odd_norms: list[int]
    # diagonal parity blocks of M; both must be empty
    diagonal_nnz: int = 0

    @property
    def rows(self) -> int:
        return self.X.shape[0]

    @property
    def cols(self) -> int:
        return self.X.shape[1]


def chiral_block_from(sm: SectorMatrix) -> ChiralBlock:
    grades = np.asarray(sm.basis.grades, dtype=np.int8)
    even = np.flatnonzero(grades == 0)
    odd = np.flatnonzero(grades == 1)
    M = sm.M
    X = M[even][:, odd].tocsr()
    diag = M[even][:, even].nnz + M[odd][:, odd].nnz
    norms = sm.basis.norms
    return ChiralBlock(sm.basis.L, sm.basis.sector, X,
                       [norms[i] for i in even], [norms[i] for i in odd], diag)


def build_chiral_block(L: int, sector: SectorSpec) -> ChiralBlock:
    return chiral_block_from(build_sector_matrix(L, sector))


def exact_rank(block: ChiralBlock | sp.spmatrix | np.ndarray, seed: int | None = 0) -> int:
    X = block.X if isinstance(block, ChiralBlock) else block
    if X.shape[0] == 0 or X.shape[1] == 0:
        return 0
    if X.shape[0] * X.shape[1] > MAX_RANK_ENTRIES:
        raise ResourceLimitError(f"chiral block {X.shape[0]}x{X.shape[1]} is too large")
    return modular_rank(X.toarray() if sp.issparse(X) else X, seed=seed)


@dataclass
class ZeroModeResult:
    L: int
    sector: SectorSpec
    dim_even: int
    dim_odd: int
    rank: int
    zero_modes: int
    chiral_charge: int
    lower_bound: int

    @property
    def tight(self) -> bool:
        return self.zero_modes == self.lower_bound


def sector_lower_bound(L: int, sector: SectorSpec, chiral_charge: int) -> int:
    """Combinatorial bound when a closed form exists, else |Q| of the block."""
    if sector.boundary == OPEN or sector.momentum is not None:
        return comb.lower_bound(L, sector)
    return abs(chiral_charge)


def zero_mode_count(L: int, sector: SectorSpec, seed: int | None = 0) -> ZeroModeResult:
    block = build_chiral_block(L, sector)
    if block.diagonal_nnz:
        raise AssertionError("H has entries inside a parity grade")
    rank = exact_rank(block, seed=seed)
    q = block.rows - block.cols
    zm = block.rows + block.cols - 2 * rank
    return ZeroModeResult(L, sector, block.rows, block.cols, rank, zm, q,
                          sector_lower_bound(L, sector, q))


@dataclass
class SpectrumCheck:
    L: int
    sector: SectorSpec
    dimension: int
    spectral_radius: float
    max_pairing_error: float
    zero_count: int
    rank_zero_modes: int
    max_weight_error: float
    tolerance: float

    @property
    def pairing_ok(self) -> bool:
        return self.max_pairing_error <= self.tolerance * max(self.spectral_radius, 1.0)

    @property
    def zero_count_ok(self) -> bool:
        return self.zero_count == self.rank_zero_modes

    @property
    def weights_ok(self) -> bool:
        return self.max_weight_error <= WEIGHT_TOL

    @property
    def passed(self) -> bool:
        return self.pairing_ok and self.zero_count_ok and self.weights_ok


def dense_spectrum_check(L: int, sector: SectorSpec, tolerance: float = ZERO_TOL,
                         seed: int | None = 0) -> SpectrumCheck:
    """Diagonalize the sector matrix in floating point and compare.

    Checks that eigenvalues come in +-E pairs, that the number of |E| below
    ``tolerance * spectral radius`` equals the exact-rank zero-mode count,
    and that every nonzero-energy eigenvector has weight 1/2 on each parity
    grade.
    """
    sm = build_sector_matrix(L, sector)
    n = sm.dimension
    if n > MAX_DENSE_DIM:
        raise ValueError(f"sector dimension {n} exceeds {MAX_DENSE_DIM}")
    exact = zero_mode_count(L, sector, seed=seed)
    if n == 0:
        return SpectrumCheck(L, sector, 0, 0.0, 0.0, 0, exact.zero_modes, 0.0, tolerance)
    H = sm.symmetric().toarray()
    try:
        evals, evecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as err:
        raise RuntimeError(f"eigensolver failed for L={L}, {sector.label()}") from err
    radius = float(np.max(np.abs(evals)))
    pairing = float(np.max(np.abs(evals + evals[::-1])))
    cut = tolerance * max(radius, 1.0)
    zero = np.abs(evals) < cut
    even = np.asarray(sm.basis.grades) == 0
    w_even = np.sum(evecs[even, :] ** 2, axis=0)
    weight_err = float(np.max(np.abs(w_even[~zero] - 0.5))) if np.any(~zero) else 0.0
    return SpectrumCheck(L, sector, n, radius, pairing, int(zero.sum()),
                         exact.zero_modes, weight_err, tolerance)
