"""Scans reproducing boundedness thresholds for derivations, Arens regularity and Wallach-type series."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._numeric import as_fraction, fit_exponent, lp_norm, ordered_map
from .coeffs import DualFunctional
from .duals import SU2, CompactGroup
from .errors import DomainError
from .matnorm import SchattenIndex
from .norms import delta_params, rq_params, su2_torus_delta_dual
from .weights import Weight

#: allowed gap between fitted and predicted exponents before a scan is inconclusive
FIT_TOL = 0.05


def fmt(x) -> str:
    """Number formatting used in every table: 12 significant digits."""
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return f"{x:#.12g}"


@dataclass
class ScanReport:
    """Rows ``(n, q(n))`` with a growth fit and a boundedness verdict.

    ``analytic_verdict`` comes from the closed-form condition; ``verdict``
    equals it when the fitted exponent is within ``FIT_TOL`` of
    ``predicted_exponent`` and is ``"inconclusive"`` otherwise.
    """

    name: str
    rows: list[tuple[int, float]]
    fitted_exponent: float
    predicted_exponent: float | None
    analytic_verdict: str
    verdict: str
    params: dict = field(default_factory=dict)

    @property
    def running_sup(self) -> list[float]:
        return list(np.maximum.accumulate([q for _, q in self.rows]))

    @property
    def sup(self) -> float:
        return max(q for _, q in self.rows)

    def verdict_block(self) -> dict:
        return {
            "scan": self.name,
            "fitted_exponent": fmt(self.fitted_exponent),
            "predicted_exponent": fmt(self.predicted_exponent),
            "analytic_verdict": self.analytic_verdict,
            "verdict": self.verdict,
            **{k: str(v) for k, v in self.params.items()},
        }

    def to_csv(self, header: Sequence[str] = ()) -> str:
        lines = [f"# {h}" for h in header]
        lines.append("n,quantity,running_sup")
        for (n, q), s in zip(self.rows, self.running_sup):
            lines.append(f"{n},{fmt(q)},{fmt(s)}")
        lines.append("# " + json.dumps(self.verdict_block(), sort_keys=True))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "rows": [[n, fmt(q), fmt(s)] for (n, q), s in zip(self.rows, self.running_sup)],
            **self.verdict_block(),
        }


def _report(name, ns, qs, predicted, analytic, params) -> ScanReport:
    fitted = fit_exponent(np.asarray(ns), np.asarray(qs))
    ok = predicted is not None and abs(fitted - float(predicted)) <= FIT_TOL
    verdict = analytic if ok else "inconclusive"
    rows = [(int(n), float(q)) for n, q in zip(ns, qs)]
    return ScanReport(name, rows, fitted, None if predicted is None else float(predicted), analytic, verdict, params)


# ----- SU(2) derivation ------------------------------------------------------


def derivation_functional(group: SU2) -> DualFunctional:
    """``D_{pi_n} = i diag(n, n-2, ..., -n)``, the derivative at the identity along the torus."""
    return DualFunctional(group, {}, lambda lab: 1j * np.diag(np.arange(lab.key, -lab.key - 1, -2).astype(float)))


def derivation_norm(n: int, s: SchattenIndex) -> float:
    """``||D_{pi_n}||_{S^s} = (sum_j |n-2j|^s)^(1/s)``."""
    return lp_norm(np.abs(n - 2 * np.arange(n + 1)), s.p)


def _scan_ns(N: int) -> list[int]:
    if N < 1:
        raise DomainError("scan horizon must be positive")
    return list(range(1, N + 1))


def derivation_scan_su2(p, alpha, N: int = 2000) -> ScanReport:
    """``q(n) = (n+1)^-(alpha + 1/p') ||D_{pi_n}||_{p'}``; bounded exactly when ``alpha >= 1``."""
    idx = SchattenIndex.of(p)
    a = as_fraction(alpha)
    s = idx.conjugate()
    e = float(a + s.inv)
    ns = _scan_ns(N)
    qs = ordered_map(lambda n: derivation_norm(n, s) / float(n + 1) ** e, ns)
    analytic = "bounded" if a >= 1 else "unbounded"
    return _report("derivation", ns, qs, 1 - a, analytic, {"p": idx, "alpha": a, "N": N})


def owa_scan_su2(p, alpha, N: int = 2000) -> ScanReport:
    """Derivation in the diagonal algebra: ``q(n) = (n+1)^-(beta+2 alpha+1/r') ||D_{pi_n}||_{r'}``.

    Bounded exactly when ``1 - beta(p) - 2 alpha <= 0``; an unbounded
    derivation is the operator weak amenability witness, which happens iff
    ``p < 4/(3+2 alpha)``.
    """
    dp = delta_params(p)
    a = as_fraction(alpha)
    rc = dp.r.conjugate()
    e = float(dp.beta + 2 * a + rc.inv)
    ns = _scan_ns(N)
    qs = ordered_map(lambda n: derivation_norm(n, rc) / float(n + 1) ** e, ns)
    pred = 1 - dp.beta - 2 * a
    analytic = "bounded" if pred <= 0 else "unbounded"
    return _report("owa", ns, qs, pred, analytic, {"p": dp.source, "alpha": a, "N": N})


def owa_region_su2(p, alpha) -> bool:
    """Closed-form region ``1 <= p < 4/(3 + 2 alpha)``."""
    idx = SchattenIndex.of(p)
    bound = 4 / (3 + 2 * as_fraction(alpha))
    return (not idx.is_inf) and idx.exact < bound


def torus_owa_scan(mode: str, index, alpha, N: int = 2000) -> ScanReport:
    """Scan of the diagonal-algebra dual norm for ``d = (k)_k`` on the torus of SU(2).

    Rows are ``q(n)`` from :func:`su2_torus_delta_dual` at each ``n``.
    Predicted exponent: ``2/p - 1 - 2 alpha`` (ap, ``p < 2``), ``-2 alpha`` (ap,
    ``p >= 2``), ``1/r(q)' - 2 alpha`` (rq).  The ap-mode rows are an upper
    bound for the dual norm.
    """
    a = as_fraction(alpha)
    d = np.arange(-N, N + 1, dtype=float)
    ns = list(range(1, N + 1))
    if mode == "ap":
        idx = SchattenIndex.of(index)
        if idx.inv > Fraction(1, 2):
            e = 2 * idx.inv_conj + 2 * a
            pred = 2 * idx.inv - 1 - 2 * a
        else:
            e = 1 + 2 * a
            pred = -2 * a
        qs = [n / float(n + 1) ** float(e) for n in ns]
        params = {"mode": "ap", "p": idx, "alpha": a, "N": N, "bound_only": True}
    elif mode == "rq":
        dp = rq_params(index)
        rc = dp.r.conjugate()
        e = float(1 + 2 * a)
        qs = ordered_map(lambda n: lp_norm(np.abs(d[N - n: N + n + 1: 2]), rc.p) / float(n + 1) ** e, ns)
        pred = rc.inv - 2 * a
        params = {"mode": "rq", "q": dp.source, "alpha": a, "N": N}
    else:
        raise DomainError(f"unknown mode {mode!r}; use 'ap' or 'rq'")
    analytic = "bounded" if pred <= 0 else "unbounded"
    return _report("torus_owa", ns, qs, pred, analytic, params)


def torus_owa_region(mode: str, index, alpha) -> bool:
    """Closed-form regions ``p < 2/(1+2 alpha)`` (ap) and ``min(q, q') < 2/(4 alpha + 1)`` (rq)."""
    a = as_fraction(alpha)
    idx = SchattenIndex.of(index)
    if mode == "ap":
        return (not idx.is_inf) and idx.exact < 2 / (1 + 2 * a)
    m_inv = max(idx.inv, idx.inv_conj)  # 1/min(q, q')
    return m_inv > (4 * a + 1) / 2


# ----- Arens regularity ------------------------------------------------------


@dataclass
class ArensTable:
    """Tail suprema ``sup_{min(i, j) >= M} max_{sigma} w(sigma) / (w(pi_i) w(pi_j))``.

    The decay flag is finite-horizon evidence only.
    """

    rows: list[tuple[int, float]]
    horizon: int
    decaying: bool

    def to_csv(self, header: Sequence[str] = ()) -> str:
        lines = [f"# {h}" for h in header] + ["M,tail_sup"]
        lines += [f"{m},{fmt(v)}" for m, v in self.rows]
        lines.append("# " + json.dumps({"horizon": self.horizon, "decaying": self.decaying}, sort_keys=True))
        return "\n".join(lines) + "\n"


def arens_ratio(group: CompactGroup, w: Weight, a, b) -> float:
    return max(w(c) for c in group.fusion(a, b)) / (w(a) * w(b))


def arens_ratio_scan(group: CompactGroup, w: Weight, M: int | None = None, horizon: int | None = None) -> ArensTable:
    """Tail suprema of the fusion weight ratio over pairs of the first ``horizon`` labels."""
    labs = group.dual()
    if horizon is not None:
        labs = labs[:horizon]
    h = len(labs)
    mat = np.array(ordered_map(lambda a: [arens_ratio(group, w, a, b) for b in labs], labs))
    # tail[M] = max over i, j >= M
    tail = np.empty(h)
    best = -math.inf
    for m in range(h - 1, -1, -1):
        best = max(best, mat[m, m:].max(), mat[m:, m].max())
        tail[m] = best
    top = h if M is None else min(h, M + 1)
    rows = [(m, float(tail[m])) for m in range(top)]
    vals = tail[:top]
    decaying = bool(top > 1 and np.all(np.diff(vals) <= 1e-15) and vals[-1] < 0.5 * vals[0])
    return ArensTable(rows, h, decaying)


# ----- Wallach series and thresholds ----------------------------------------


@dataclass(frozen=True)
class LieStructureData:
    """Dimension ``d``, semisimple rank ``s`` and central torus dimension ``z`` of a compact Lie group.

    ``source(idx)`` maps an integer array of dual indices to arrays
    ``(d_pi, ||pi||_1)``.
    """

    d: int
    s: int
    z: int
    source: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]] | None = None

    def __post_init__(self):
        if not self.d >= self.s + self.z >= 0 or self.s < 0 or self.z < 0:
            raise DomainError("need d >= s + z >= 0 with s, z >= 0")


def _su2_source(idx: np.ndarray):
    n = np.asarray(idx, dtype=float)
    return n + 1, n


SU2_DATA = LieStructureData(3, 1, 0, _su2_source)


def su_n_data(n: int) -> LieStructureData:
    """Structure data ``(n^2 - 1, n - 1, 0)`` of SU(n) (no dual source)."""
    return LieStructureData(n * n - 1, n - 1, 0, None)


def wallach_threshold(lie: LieStructureData, r) -> Fraction:
    """``(r/4) d - ((r-2)/4)(s + z)``, the convergence threshold for ``sum d^r / (1+||pi||_1)^(2 alpha)``."""
    r = as_fraction(r)
    return r / 4 * lie.d - (r - 2) / 4 * (lie.s + lie.z)


def opalg_threshold(p, lie: LieStructureData) -> Fraction:
    """``(1/2 + 1/(2p')) d - (1/(2p'))(s + z)``; equals :func:`wallach_threshold` at ``r = 2 + 2/p'``."""
    ic = SchattenIndex.of(p).inv_conj
    val = (Fraction(1, 2) + ic / 2) * lie.d - ic / 2 * (lie.s + lie.z)
    if val != wallach_threshold(lie, 2 + 2 * ic):
        raise AssertionError("threshold identity failed")
    return val


def wallach_partial_sums(lie: LieStructureData, r, alpha, N: int = 100000) -> ScanReport:
    """Partial sums ``S_n = sum_{i<=n} d^r / (1 + ||pi||_1)^(2 alpha)``.

    The analytic verdict is ``bounded`` (convergent) when ``alpha`` exceeds
    :func:`wallach_threshold`.  The numeric check fits the growth of the
    partial sums over the top half: convergence shows as an exponent
    near 0.
    """
    if lie.source is None:
        raise DomainError("structure data has no dual source for partial sums")
    idx = np.arange(N + 1)
    dims, norms = lie.source(idx)
    a = float(as_fraction(alpha))
    rr = float(as_fraction(r))
    terms = np.asarray(dims, float) ** rr / (1 + np.asarray(norms, float)) ** (2 * a)
    sums = np.cumsum(terms)
    thr = wallach_threshold(lie, r)
    conv = as_fraction(alpha) > thr
    fitted = fit_exponent(idx, sums)
    numeric = "bounded" if fitted <= 0.1 else "unbounded"
    analytic = "bounded" if conv else "unbounded"
    verdict = analytic if numeric == analytic else "inconclusive"
    step = max(1, N // 1000)
    keep = list(range(0, N + 1, step))
    if keep[-1] != N:
        keep.append(N)
    rows = [(int(i), float(sums[i])) for i in keep]
    rep = ScanReport("wallach", rows, fitted, None, analytic, verdict,
                     {"r": as_fraction(r), "alpha": as_fraction(alpha), "threshold": thr, "N": N,
                      "tail_increment": fmt(terms[-1])})
    return rep


def polysum_ratio(n: int, s) -> float:
    """``(sum_{j=0}^n |n-2j|^s)^(1/s) / (n+1)^(1+1/s)``."""
    if n < 1:
        raise DomainError("polysum ratio needs n >= 1")
    sf = float(as_fraction(s))
    if sf < 1:
        raise DomainError("polysum ratio needs s >= 1")
    return lp_norm(np.abs(n - 2 * np.arange(n + 1)), sf) / float(n + 1) ** (1 + 1 / sf)


# ----- summary table ------------------------------------------------------------


TABLE_COLUMNS = [
    "p", "alpha", "beta", "r", "derivation", "owa", "fitted_derivation", "fitted_owa",
    "diagonal_norm", "opalg_threshold", "wallach_threshold_r",
]


def table_summary(p_grid: Sequence, alpha_grid: Sequence, group: CompactGroup, N: int = 400) -> list[dict]:
    """One row per ``(p, alpha)`` with derivation/OWA verdicts, ``beta(p)``, ``r(p)``, diagonal norm and thresholds.

    Derivation columns are filled for SU(2); the diagonal norm for finite
    groups; thresholds use the SU(2) structure data.
    """
    if not p_grid or not alpha_grid:
        raise DomainError("grids must be non-empty")
    from .norms import diagonal_norm_finite

    cells = [(SchattenIndex.of(p), as_fraction(a)) for p in p_grid for a in alpha_grid]

    def row(cell):
        p, a = cell
        dp = delta_params(p)
        out = {"p": str(p), "alpha": str(a), "beta": str(dp.beta), "r": str(dp.r)}
        if isinstance(group, SU2):
            der = derivation_scan_su2(p, a, N)
            owa = owa_scan_su2(p, a, N)
            out.update(derivation=der.verdict, owa="yes" if owa.analytic_verdict == "unbounded" else "no",
                       fitted_derivation=fmt(der.fitted_exponent), fitted_owa=fmt(owa.fitted_exponent))
        else:
            out.update(derivation="", owa="", fitted_derivation="", fitted_owa="")
        out["diagonal_norm"] = fmt(diagonal_norm_finite(group, p)) if group.is_finite else ""
        out["opalg_threshold"] = str(opalg_threshold(p, SU2_DATA))
        out["wallach_threshold_r"] = str(wallach_threshold(SU2_DATA, dp.r.exact if not dp.r.is_inf else 0))
        return out

    return ordered_map(row, cells)


def table_csv(rows: list[dict], header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header] + [",".join(TABLE_COLUMNS)]
    lines += [",".join(r[c] for c in TABLE_COLUMNS) for r in rows]
    return "\n".join(lines) + "\n"
