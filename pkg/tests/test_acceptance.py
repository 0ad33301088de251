"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time
from pathlib import Path

import pytest

from pxpzero import combinatorics as c
from pxpzero import hilbert as h
from pxpzero import report
from pxpzero import spectra as s
from pxpzero.combinatorics import MINUS, OPEN, PERIODIC, PI, PLUS, ZERO, SectorSpec
from pxpzero.genfunc import brute_force_km, f_series, g_series

sys.path.insert(0, str(Path(__file__).parent))
from oracles import fib_list, momentum_counts  # noqa: E402

FIB = fib_list(1100)
RESULTS: list[str] = []

# reference values: |Q| ~ mu * golden**(L/2) for 50 < L <= 1000
PUBLISHED_MU = {
    ("obc", "plus"): (0.291, 0.003),
    ("obc", "minus"): (0.291, 0.003),
    ("pbc-0", "plus"): (0.1272, 0.0005),
    ("pbc-0", "minus"): (0.1266, 0.0005),
    ("pbc-pi", "plus"): (0.08563, 0.00002),
    ("pbc-pi", "minus"): (0.08518, 0.00002),
}

OBC_TOTAL_BY_L_MOD_6 = {0: 1, 1: 0, 2: -1, 3: -1, 4: 0, 5: 1}


def _record(number, title, fn, budget=None):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if budget is not None and dt >= budget:
        ok = False
        detail += f"; over the {budget:g} s budget"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({dt:.1f} s) {detail}"
    RESULTS.append(line)
    print(line)
    return ok, line


# --- criteria ---------------------------------------------------------------------

def crit_charge_table():
    bad = [L for L in range(1001) if c.chiral_charge_obc_total(L) != OBC_TOTAL_BY_L_MOD_6[L % 6]]
    return not bad, f"L<=1000, mismatches: {bad[:5]}"


def crit_fibonacci_gaps():
    bad = []
    for L in range(1001):
        l = L // 2
        qp, qm = c.chiral_charges_obc(L)
        if abs(qp - qm) != (FIB[l + 1] if L % 2 == 0 else FIB[l]):
            bad.append(("obc", L))
        if L >= 2:
            qp, qm = c.chiral_charges_k0(L)
            if abs(qp - qm) != FIB[l - 1]:
                bad.append(("k0", L))
        if L % 2 == 0 and L >= 2:
            qp, qm = c.chiral_charges_kpi(L)
            # F_l - F_{l-1} is F_{l-2}, extended to l = 1
            if abs(qp - qm) != FIB[l] - FIB[l - 1]:
                bad.append(("kpi", L))
    return not bad, f"L<=1000 for OBC, k=0, k=pi; mismatches: {bad[:5]}"


def crit_oracle_equivalence():
    bad = []
    checked = 0
    for L in range(0, 17):
        fams = [SectorSpec(OPEN)]
        if L >= 1:
            fams.append(SectorSpec(PERIODIC, ZERO))
        if L % 2 == 0:
            fams.append(SectorSpec(PERIODIC, PI))
        for fam in fams:
            for N in range(L // 2 + 2):
                closed = (c.omega(L, N, fam), c.delta(L, N, fam))
                oracle = h.oracle_counts(L, N, fam)
                checked += 1
                if closed != oracle:
                    bad.append((L, N, fam.label(), closed, oracle))
                if fam.momentum is not None and N <= L // 2:
                    k = 1 if fam.momentum == ZERO else -1
                    if L and closed != momentum_counts(L, N, k):
                        bad.append((L, N, fam.label(), "tuple oracle"))
    return not bad, f"{checked} (L, N, family) triples, mismatches: {bad[:3]}"


def crit_tightness():
    loose = []
    n = 0
    obc = [SectorSpec(OPEN, None, inv) for inv in (PLUS, MINUS, None)]
    pbc = [SectorSpec(PERIODIC, k, inv) for k in (ZERO, PI) for inv in (PLUS, MINUS)]
    for L in range(0, 19):
        for sec in obc:
            r = s.zero_mode_count(L, sec)
            n += 1
            if not r.tight:
                loose.append((L, sec.label(), r.zero_modes, r.lower_bound))
    for L in range(1, 21):
        for sec in pbc:
            if sec.momentum == PI and L % 2:
                continue
            r = s.zero_mode_count(L, sec)
            n += 1
            if not r.tight:
                loose.append((L, sec.label(), r.zero_modes, r.lower_bound))
    # stretch size, reported but not gating
    stretch = [s.zero_mode_count(22, sec).tight for sec in pbc]
    return not loose, (f"{n} sectors (OBC L<=18, periodic k=0/pi L<=20), loose: {loose[:3]}; "
                       f"periodic L=22 stretch tight: {all(stretch)}")


def crit_spectrum():
    checks = [s.dense_spectrum_check(10, SectorSpec(OPEN), tolerance=1e-10),
              s.dense_spectrum_check(12, SectorSpec(PERIODIC), tolerance=1e-10)]
    ok = all(r.passed for r in checks)
    parts = [f"L={r.L} {r.sector.boundary}: pairing {r.max_pairing_error:.1e}, "
             f"zeros {r.zero_count}/{r.rank_zero_modes}, weight {r.max_weight_error:.1e}" for r in checks]
    return ok, "; ".join(parts)


def crit_fits():
    fits = report.run_fit(1000, 50)
    ok = True
    parts = []
    for f in fits:
        mu0, sig0 = PUBLISHED_MU[(f.family, f.inversion)]
        good = abs(f.mu - mu0) <= sig0 + 2 * f.mu_error
        ok &= good
        parts.append(f"{f.family}/{f.inversion} {f.mu:.6g}+-{f.mu_error:.2g}{'' if good else ' OUT'}")
    return ok, "; ".join(parts)


def crit_generating_functions():
    bad = []
    f, g = f_series(100), g_series(100)
    for L in range(4, 15, 2):
        km = brute_force_km(L)
        if (f[L], g[L]) != (2 * km.M + km.K, km.M + km.K):
            bad.append(("series", L))
    for L in range(2, 101, 2):
        if 2 * g[L] - f[L] != FIB[L // 2 + 2]:
            bad.append(("identity", L))
    for L in range(2, 17, 2):
        km = brute_force_km(L)
        if (km.K_e, km.K_o) != (FIB[L // 2 + 1], FIB[L // 2]):
            bad.append(("K", L))
    return not bad, f"mismatches: {bad[:5]}"


def crit_performance():
    t0 = time.perf_counter()
    rows = report.bounds_for_L(500, report.select_sectors("all", "both", "all"))
    dt = time.perf_counter() - t0
    return len(rows) == 9 and dt < 60, f"{len(rows)} sectors at L=500 in {dt:.2f} s (target < 60 s)"


def crit_determinism():
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        outs = []
        for name in ("a.csv", "b.csv"):
            path = Path(d) / name
            subprocess.run([sys.executable, "-m", "pxpzero", "bounds", "--l-max", "200", "--out", str(path)],
                           check=True)
            outs.append(path.read_bytes())
    same = outs[0] == outs[1]
    return same and len(outs[0]) > 0, f"{len(outs[0])} bytes, identical: {same}"


CRITERIA = [
    (1, "open-chain total charge matches the L mod 6 table", crit_charge_table, 10),
    (2, "Fibonacci gaps between inversion sectors", crit_fibonacci_gaps, 300),
    (3, "closed forms equal orbit-enumeration oracles", crit_oracle_equivalence, 120),
    (4, "exact zero-mode counts equal the lower bounds", crit_tightness, 1800),
    (5, "dense spectrum pairing, zero count and grade weights", crit_spectrum, None),
    (6, "prefactor fits agree with published values", crit_fits, None),
    (7, "generating-function identities", crit_generating_functions, None),
    (8, "single-L bound sweep at L=500", crit_performance, 60),
    (9, "bounds CSV is byte-identical across runs", crit_determinism, None),
]


@pytest.mark.parametrize("number,title,fn,budget", CRITERIA, ids=[f"criterion_{n}" for n, *_ in CRITERIA])
def test_criterion(number, title, fn, budget):
    ok, line = _record(number, title, fn, budget)
    assert ok, line


if __name__ == "__main__":
    results = [_record(*crit)[0] for crit in CRITERIA]
    sys.exit(0 if all(results) else 1)
