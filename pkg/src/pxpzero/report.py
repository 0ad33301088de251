"""Bound sweeps, tightness verification, prefactor fits and output files."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import combinatorics as comb
from .combinatorics import MINUS, OPEN, PERIODIC, PI, PLUS, ZERO, SectorSpec
from .genfunc import f_series, g_series
from .spectra import ResourceLimitError, zero_mode_count

GOLDEN = (1 + math.sqrt(5)) / 2

CSV_FIELDS = ["L", "boundary", "momentum", "inversion", "Q", "lower_bound",
              "zero_modes", "dim_even", "dim_odd", "rank", "tight"]

_BOUNDARY_NAME = {OPEN: "obc", PERIODIC: "pbc"}
_MOMENTUM_NAME = {None: "none", ZERO: "0", PI: "pi"}
_INVERSION_NAME = {PLUS: "plus", MINUS: "minus", None: "merged"}


@dataclass
class BoundReport:
    L: int
    sector: SectorSpec
    Q_plus: int
    Q_minus: int
    lower_bound: int
    zero_modes_exact: int | None = None
    dim_even: int | None = None
    dim_odd: int | None = None
    rank: int | None = None

    @property
    def Q(self) -> int:
        if self.sector.inversion == PLUS:
            return self.Q_plus
        if self.sector.inversion == MINUS:
            return self.Q_minus
        return self.Q_plus + self.Q_minus

    @property
    def tight(self) -> bool | None:
        if self.zero_modes_exact is None:
            return None
        return self.zero_modes_exact == self.lower_bound

    def row(self) -> dict[str, str]:
        def opt(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "true" if v else "false"
            return str(v)

        return {
            "L": str(self.L),
            "boundary": _BOUNDARY_NAME[self.sector.boundary],
            "momentum": _MOMENTUM_NAME[self.sector.momentum],
            "inversion": _INVERSION_NAME[self.sector.inversion],
            "Q": str(self.Q),
            "lower_bound": str(self.lower_bound),
            "zero_modes": opt(self.zero_modes_exact),
            "dim_even": opt(self.dim_even),
            "dim_odd": opt(self.dim_odd),
            "rank": opt(self.rank),
            "tight": opt(self.tight),
        }

    def record(self) -> dict:
        out = dict(self.row())
        out["Q_plus"] = str(self.Q_plus)
        out["Q_minus"] = str(self.Q_minus)
        return out


# ---------------------------------------------------------------------------
# sector selection
# ---------------------------------------------------------------------------

def select_sectors(boundary: str = "all", momentum: str = "both",
                   inversion: str = "both") -> list[SectorSpec]:
    """Sectors named by CLI-style selectors, in a fixed order."""
    inv = {"plus": [PLUS], "minus": [MINUS], "both": [PLUS, MINUS],
           "merged": [None], "all": [PLUS, MINUS, None]}
    mom = {"0": [ZERO], "pi": [PI], "both": [ZERO, PI]}
    bnd = {"obc": [OPEN], "pbc": [PERIODIC], "all": [OPEN, PERIODIC]}
    for name, table, value in (("boundary", bnd, boundary), ("momentum", mom, momentum),
                               ("inversion", inv, inversion)):
        if value not in table:
            raise ValueError(f"invalid {name} selector {value!r}")
    out = []
    for b in bnd[boundary]:
        for k in ([None] if b == OPEN else mom[momentum]):
            for s in inv[inversion]:
                out.append(SectorSpec(b, k, s))
    return out


def applicable(L: int, sector: SectorSpec) -> bool:
    if sector.momentum == ZERO:
        return L >= 1
    if sector.momentum == PI:
        return L % 2 == 0
    return True


def _family(sector: SectorSpec) -> SectorSpec:
    return sector.with_inversion(None)


# ---------------------------------------------------------------------------
# bound sweep
# ---------------------------------------------------------------------------

def _check_closed_forms(L: int, family: SectorSpec, qp: int, qm: int) -> None:
    if abs(qp - qm) != comb.fibonacci_gap(L, family):
        raise AssertionError(f"|Q+ - Q-| off its Fibonacci value at L={L}, {family.label()}")
    if family.boundary == OPEN and qp + qm != comb.chiral_charge_obc_table(L):
        raise AssertionError(f"open-chain total charge off its table at L={L}")


def bounds_for_L(L: int, sectors: list[SectorSpec]) -> list[BoundReport]:
    charges: dict[SectorSpec, tuple[int, int]] = {}
    out = []
    for sector in sectors:
        if not applicable(L, sector):
            continue
        fam = _family(sector)
        if fam not in charges:
            charges[fam] = comb.chiral_charges(L, fam)
            _check_closed_forms(L, fam, *charges[fam])
        qp, qm = charges[fam]
        out.append(BoundReport(L, sector, qp, qm, comb.lower_bound(L, sector)))
    return out


def _map_L(fn, Ls, sectors, threads: int) -> list[BoundReport]:
    if threads > 1 and len(Ls) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(fn, Ls, [sectors] * len(Ls)))
    else:
        chunks = [fn(L, sectors) for L in Ls]
    return [r for chunk in chunks for r in chunk]


def run_bounds(l_min: int, l_max: int, sectors: list[SectorSpec],
               threads: int = 1) -> list[BoundReport]:
    if l_min < 0:
        raise ValueError("l_min must be non-negative")
    return _map_L(bounds_for_L, list(range(l_min, l_max + 1)), sectors, threads)


# ---------------------------------------------------------------------------
# exact verification
# ---------------------------------------------------------------------------

def _verify_one(L: int, sector: SectorSpec, seed: int | None) -> BoundReport:
    rep = bounds_for_L(L, [sector])[0]
    try:
        res = zero_mode_count(L, sector, seed=seed)
    except (MemoryError, ResourceLimitError) as err:
        raise ResourceLimitError(f"L={L}, {sector.label()}: {err}") from err
    if res.lower_bound != rep.lower_bound:
        raise AssertionError(f"bound mismatch at L={L}, {sector.label()}")
    rep.zero_modes_exact = res.zero_modes
    rep.dim_even, rep.dim_odd, rep.rank = res.dim_even, res.dim_odd, res.rank
    return rep


def verify_for_L(L: int, sectors: list[SectorSpec], seed: int | None = 0) -> list[BoundReport]:
    return [_verify_one(L, s, seed) for s in sectors if applicable(L, s)]


def run_verify(l_min: int, l_max: int, sectors: list[SectorSpec], seed: int | None = 0,
               threads: int = 1) -> list[BoundReport]:
    """Exact zero-mode counts next to the combinatorial bounds."""
    Ls = list(range(max(l_min, 0), l_max + 1))
    if threads > 1 and len(Ls) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(verify_for_L, Ls, [sectors] * len(Ls), [seed] * len(Ls)))
    else:
        chunks = [verify_for_L(L, sectors, seed) for L in Ls]
    return [r for chunk in chunks for r in chunk]


# ---------------------------------------------------------------------------
# prefactor fits
# ---------------------------------------------------------------------------

@dataclass
class FitResult:
    family: str
    inversion: str
    mu: float
    mu_error: float
    window: tuple[int, int]
    n_points: int
    method: str = "linear"

    def as_dict(self) -> dict:
        return asdict(self)


def _fit_values(Ls: list[int], ys: list[int], method: str) -> tuple[float, float]:
    y = np.array([float(abs(v)) for v in ys])
    if not np.any(y > 0):
        raise ValueError("all |Q| vanish in the fit window")
    if method == "log":
        keep = y > 0
        resid = np.log(y[keep]) - np.array(Ls)[keep] / 2 * math.log(GOLDEN)
        n = resid.size
        se = resid.std(ddof=1) / math.sqrt(n) if n > 1 else 0.0
        return float(math.exp(resid.mean())), float(math.exp(resid.mean()) * se)
    if method != "linear":
        raise ValueError(f"unknown fit method {method!r}")
    # scale by the largest model value to keep squares finite
    a = np.array([GOLDEN ** ((L - Ls[-1]) / 2) for L in Ls])
    ys_scaled = y / GOLDEN ** (Ls[-1] / 2)
    saa = float(a @ a)
    mu = float(a @ ys_scaled) / saa
    rss = float(((ys_scaled - mu * a) ** 2).sum())
    dof = max(len(Ls) - 1, 1)
    return mu, math.sqrt(rss / dof / saa)


def fit_data(l_max: int, exclusion: int, family: SectorSpec) -> tuple[list[int], list[int], list[int]]:
    Ls, qp, qm = [], [], []
    for L in range(exclusion + 1, l_max + 1):
        if not applicable(L, family):
            continue
        a, b = comb.chiral_charges(L, family)
        Ls.append(L)
        qp.append(a)
        qm.append(b)
    return Ls, qp, qm


FIT_FAMILIES = {
    "obc": SectorSpec(OPEN),
    "pbc-0": SectorSpec(PERIODIC, ZERO),
    "pbc-pi": SectorSpec(PERIODIC, PI),
}


def run_fit(l_max: int = 1000, exclusion: int = 50, families: list[str] | None = None,
            method: str = "linear") -> list[FitResult]:
    """Fit |Q_pm(L)| = mu * golden**(L/2) over exclusion < L <= l_max.

    ``method="linear"`` is ordinary least squares on |Q| itself with the
    standard error of mu; ``method="log"`` averages ln(|Q| / golden**(L/2)).
    """
    if l_max <= exclusion + 50:
        raise ValueError("l_max must exceed exclusion + 50")
    out = []
    for name in families or list(FIT_FAMILIES):
        fam = FIT_FAMILIES[name]
        Ls, qp, qm = fit_data(l_max, exclusion, fam)
        for sign, ys in (("plus", qp), ("minus", qm)):
            mu, err = _fit_values(Ls, ys, method)
            out.append(FitResult(name, sign, mu, err, (Ls[0], Ls[-1]), len(Ls), method))
    return out


def log_residuals(fit: FitResult, Ls: list[int], ys: list[int]) -> list[float]:
    """Relative residual |ln|Q| - ln(model)| / ln|Q| per point."""
    out = []
    for L, q in zip(Ls, ys):
        lq = math.log(abs(q))
        model = math.log(fit.mu) + L / 2 * math.log(GOLDEN)
        out.append(abs(lq - model) / abs(lq))
    return out


# ---------------------------------------------------------------------------
# series table
# ---------------------------------------------------------------------------

def series_rows(order: int) -> list[dict[str, str]]:
    f = f_series(order)
    g = g_series(order)
    rows = []
    for L in range(1, order + 1):
        two_g_f = 2 * g[L] - f[L]
        fib = comb.fibonacci(L // 2 + 2)
        rows.append({"L": str(L), "f": str(f[L]), "g": str(g[L]),
                     "two_g_minus_f": str(two_g_f), "fibonacci": str(fib),
                     "identity": "true" if two_g_f == fib else "false"})
    return rows


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def format_rows(rows: list[dict[str, str]], fields: list[str], fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def format_reports(reports: list[BoundReport], fmt: str = "csv") -> str:
    if fmt == "json":
        return format_rows([r.record() for r in reports], CSV_FIELDS, fmt)
    return format_rows([r.row() for r in reports], CSV_FIELDS, fmt)


def write_text(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8")


def read_bounds_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(CSV_FIELDS) <= set(reader.fieldnames):
            raise ValueError(f"{path}: not a bounds CSV (expected columns {CSV_FIELDS})")
        rows = list(reader)
    for i, row in enumerate(rows, start=2):
        try:
            int(row["L"])
            int(row["Q"])
            int(row["lower_bound"])
        except (TypeError, ValueError):
            raise ValueError(f"{path}:{i}: malformed row") from None
    return rows


def emit_plot(csv_path: str | Path, out_path: str | Path, title: str | None = None,
              linear_max: int = 25) -> None:
    """Linear panel for L <= linear_max and log panel over the full range."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = read_bounds_csv(csv_path)
    series: dict[str, list[tuple[int, int]]] = {}
    for row in rows:
        if row["inversion"] == "merged":
            label, value = "merged bound", int(row["lower_bound"])
        else:
            label, value = row["inversion"], abs(int(row["Q"]))
        key = f"{row['boundary']} k={row['momentum']} {label}" if row["boundary"] == "pbc" \
            else f"{row['boundary']} {label}"
        series.setdefault(key, []).append((int(row["L"]), value))

    plt.rcParams["svg.hashsalt"] = "pxpzero"
    fig, (lin, log) = plt.subplots(1, 2, figsize=(10, 4))
    for key in sorted(series):
        pts = sorted(series[key])
        near = [(L, v) for L, v in pts if L <= linear_max]
        if near:
            lin.plot(*zip(*near), marker="o", ms=3, label=key)
        pos = [(L, v) for L, v in pts if v > 0]
        if pos:
            log.semilogy([L for L, _ in pos], [float(v) for _, v in pos], label=key)
    lin.set_xlabel("L")
    lin.set_ylabel("|Q|")
    log.set_xlabel("L")
    log.set_ylabel("|Q|")
    lin.legend(fontsize=7)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)
