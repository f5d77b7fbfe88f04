"""Norms of the p-Beurling-Fourier algebras, their duals and derived algebras."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from ._numeric import as_fraction, lp_norm, ordered_map
from .coeffs import CoefficientBundle, DualFunctional, dual_pair
from .duals import CompactGroup, IrrepLabel, Subgroup
from .errors import DomainError, UnsupportedError
from .matnorm import SchattenIndex, dual_witness, schatten
from .weights import Weight, constant_weight, dimension_weight, symmetrize


@dataclass(frozen=True)
class NormParams:
    """The pair ``(p, w)`` defining ``A^p(G, w)``."""

    p: SchattenIndex
    weight: Weight

    @classmethod
    def of(cls, p, weight: Weight | None = None) -> "NormParams":
        return cls(SchattenIndex.of(p), weight if weight is not None else constant_weight(1.0))

    @property
    def pconj(self) -> SchattenIndex:
        return self.p.conjugate()


@dataclass(frozen=True)
class DeltaParams:
    """Parameters ``(r, beta)`` (A^p route) or ``(r, gamma)`` (R^q route) of a diagonal algebra.

    ``exponent`` is ``beta(p)`` or ``gamma(q)``, stored exactly.
    """

    source: SchattenIndex
    r: SchattenIndex
    exponent: Fraction
    route: str  # "ap" or "rq"

    @property
    def beta(self) -> Fraction:
        if self.route != "ap":
            raise AttributeError("beta is defined on the A^p route; use gamma")
        return self.exponent

    @property
    def gamma(self) -> Fraction:
        if self.route != "rq":
            raise AttributeError("gamma is defined on the R^q route; use beta")
        return self.exponent


@dataclass(frozen=True)
class SupResult:
    """A supremum over a truncated dual.

    ``increasing`` is True when the largest value sits at the last index
    examined, so the true supremum may be larger.
    """

    value: float
    increasing: bool
    horizon: int
    argmax: int = 0

    def __float__(self) -> float:
        return self.value


def _sup(values: Sequence[float]) -> SupResult:
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        raise DomainError("supremum over an empty range")
    i = int(np.argmax(vals))
    inc = vals.size > 1 and i == vals.size - 1 and vals[-1] > vals[:-1].max()
    return SupResult(float(vals[i]), bool(inc), int(vals.size), i)


def _pow(d: int, e: Fraction) -> float:
    """``d ** e`` with exact integer results when ``e`` is an integer."""
    if e.denominator == 1:
        return float(d ** int(e)) if e >= 0 else 1.0 / d ** int(-e)
    return float(d) ** float(e)


def _scalar(m: np.ndarray) -> complex | None:
    c = m[0, 0]
    d = m.shape[0]
    if d == 1 or (np.count_nonzero(m - np.diag(np.diag(m))) == 0 and np.all(np.diag(m) == c)):
        return c
    return None


def block_norm(u: CoefficientBundle, lab: IrrepLabel, params: NormParams) -> float:
    """``w(pi) d_pi^(1 + 1/p') ||u^(pi)||_p`` for one block."""
    w = params.weight(lab)
    c = _scalar(u[lab])
    if c is not None:
        # ||c I||_p = |c| d^(1/p), so the dimension exponents add up to 2 exactly
        return w * lab.dim ** 2 * abs(c)
    return w * _pow(lab.dim, 1 + params.p.inv_conj) * lp_norm(u.singular_values(lab), params.p.p)


def ap_norm(u: CoefficientBundle, params: NormParams) -> float:
    """``||u|| = sum_pi w(pi) d_pi^(1+1/p') ||u^(pi)||_p`` with exact accumulation."""
    terms = ordered_map(lambda lab: block_norm(u, lab, params), u.support)
    return _exact_sum(terms)


def _exact_sum(terms) -> float:
    return float(sum((Fraction(t) for t in terms), Fraction(0)))


def ap_dual_norm(T: DualFunctional, params: NormParams, truncation: int | None = None,
                 labels: Sequence[IrrepLabel] | None = None) -> SupResult:
    """``sup_pi w(pi)^-1 d_pi^(-1/p') ||T_pi||_{p'}`` over the first ``truncation`` dual labels.

    The range is ``labels`` if given, otherwise the explicit entries
    followed by the truncated dual when a tail rule is present.
    """
    q = params.pconj
    if labels is None:
        if T.tail is not None:
            labels = T.group.dual()
        else:
            labels = list(T.entries)
    labels = list(labels)
    if truncation is not None:
        labels = labels[:truncation]

    def one(lab):
        return schatten(T.block(lab), q) / (params.weight(lab) * _pow(lab.dim, q.inv))

    return _sup(ordered_map(one, labels))


def dual_norm_witness(u: CoefficientBundle, params: NormParams) -> DualFunctional:
    """Functional ``T`` with ``<u, T> = ||u||`` and dual norm 1.

    Blockwise ``T_pi = w(pi) d_pi^(1/p') W_pi`` where ``W_pi`` is the Schatten
    Hoelder witness for ``u^(pi)``.
    """
    out = {}
    for lab, m in u.entries.items():
        if np.abs(m).max() == 0:
            continue
        out[lab] = params.weight(lab) * _pow(lab.dim, params.p.inv_conj) * dual_witness(m, params.p)
    return DualFunctional(u.group, out)


def duality_gap(u: CoefficientBundle, params: NormParams) -> tuple[complex, float, float]:
    """``(<u, T>, ||u||, ||T||*)`` for the witness ``T`` of :func:`dual_norm_witness`."""
    T = dual_norm_witness(u, params)
    return dual_pair(u, T), ap_norm(u, params), ap_dual_norm(T, params).value


# ----- diagonal algebras ---------------------------------------------------


def delta_params(p) -> DeltaParams:
    """``r(p)`` and ``beta(p)`` with ``1/r = 1 - |p-2|/(2p)`` and ``beta = 1 + 2/p' - |2-p|/p``."""
    idx = SchattenIndex.of(p)
    a = abs(1 - 2 * idx.inv)  # |p-2|/p
    r = SchattenIndex(1 - a / 2)
    beta = 1 + 2 * idx.inv_conj - a
    return DeltaParams(idx, r, beta, "ap")


def rq_params(q) -> DeltaParams:
    """``r(q)`` and ``gamma(q) = 2 - |2-q|/q`` for the row/column route."""
    idx = SchattenIndex.of(q)
    a = abs(1 - 2 * idx.inv)
    r = SchattenIndex(1 - a / 2)
    return DeltaParams(idx, r, 2 - a, "rq")


def delta_weight(dp: DeltaParams, w: Weight | None = None) -> Weight:
    """``d^exponent * Omega`` with ``Omega`` the symmetrization of ``w``."""
    w = w if w is not None else constant_weight(1.0)
    e = dp.exponent
    dimw = Weight(lambda lab: _pow(lab.dim, e), f"dim:{e}", True, e >= 0)
    return dimw * symmetrize(w)


def delta_norm(u: CoefficientBundle, p, w: Weight | None = None, mode: str = "ap") -> float:
    """Norm of ``u`` in the diagonal algebra: ``ap_norm`` at ``(r, d^beta Omega)``.

    ``mode="rq"`` uses ``(r(q), d^gamma Omega)`` instead.
    """
    dp = delta_params(p) if mode == "ap" else rq_params(p) if mode == "rq" else None
    if dp is None:
        raise DomainError(f"unknown diagonal mode {mode!r}")
    return ap_norm(u, NormParams(dp.r, delta_weight(dp, w)))


def diagonal_norm_finite(group: CompactGroup, p, mode: str = "ap") -> float:
    """``(1/|G|) sum_pi d_pi^(2 + beta(p))`` (or ``2 + gamma(q)``), exact when the exponent is integral."""
    if not group.is_finite:
        raise UnsupportedError(f"diagonal norm needs a finite group; {group.descriptor} is not finite")
    dp = delta_params(p) if mode == "ap" else rq_params(p)
    e = 2 + dp.exponent
    dims = [lab.dim for lab in group.dual()]
    if e.denominator == 1:
        return float(Fraction(sum(d ** int(e) for d in dims), group.order))
    return math.fsum(d ** float(e) for d in dims) / group.order


# ----- restriction -----------------------------------------------------------


def restriction_dual_norm(T: DualFunctional, group: CompactGroup, subgroup: Subgroup | str, p,
                          w: Weight | None = None, truncation: int | None = None) -> SupResult:
    """Dual norm of a functional on the subgroup dual in the restriction algebra.

    ``sup_pi w(pi)^-1 d_pi^(-1/p') (sum_{sigma in pi|_H} m ||T_sigma||_{p'}^{p'})^(1/p')``;
    for ``p' = inf`` the inner sum is a max over constituents.
    """
    sub = group.subgroup(subgroup) if isinstance(subgroup, str) else subgroup
    if T.group != sub.model:
        raise DomainError("functional is not defined on the subgroup dual")
    w = w if w is not None else constant_weight(1.0)
    q = SchattenIndex.of(p).conjugate()
    labels = group.dual()
    if truncation is not None:
        labels = labels[:truncation]

    def one(pi):
        br = group.branching(sub, pi)
        norms = np.array([schatten(T.block(s), q) for s in br])
        if q.is_inf:
            inner = float(norms.max())
        else:
            mult = np.array(list(br.values()), dtype=float)
            qq = q.p
            # fold multiplicities into the l^q' norm
            inner = lp_norm(norms * mult ** (1 / qq), qq)
        return inner / (w(pi) * _pow(pi.dim, q.inv))

    return _sup(ordered_map(one, labels))


Sequence2 = Callable[[int], complex] | Mapping[int, complex] | np.ndarray


def torus_sequence(t, N: int) -> np.ndarray:
    """Values ``t_k`` for ``k = -N..N`` as an array indexed by ``k + N``.

    ``t`` may be a callable, a mapping (missing keys are 0) or an array of
    length ``2N+1`` already in that layout.
    """
    if callable(t):
        return np.array([t(k) for k in range(-N, N + 1)], dtype=complex)
    if isinstance(t, Mapping):
        return np.array([t.get(k, 0) for k in range(-N, N + 1)], dtype=complex)
    arr = np.asarray(t, dtype=complex)
    if arr.shape != (2 * N + 1,):
        raise DomainError(f"sequence must have length 2N+1 = {2 * N + 1}")
    return arr


def _cesaro_rows(t: np.ndarray, N: int) -> list[np.ndarray]:
    # row n holds |t_{n-2j}| for j = 0..n
    a = np.abs(t)
    return [a[N + n - 2 * np.arange(n + 1)] for n in range(N + 1)]


def _row_norm(row: np.ndarray, q: SchattenIndex) -> float:
    if q.is_inf:
        return float(row.max())
    qq = q.p
    # fsum of |t|^q' keeps all-ones rows exact
    return math.fsum(row ** qq) ** (1 / qq)


def su2_torus_dual_norm(t, p, alpha=0, N: int = 100) -> SupResult:
    """``sup_{n<=N} (n+1)^-(1/p'+alpha) (sum_j |t_{n-2j}|^{p'})^(1/p')`` for a sequence on the torus of SU(2)."""
    q = SchattenIndex.of(p).conjugate()
    a = float(as_fraction(alpha))
    vals = torus_sequence(t, N)
    e = float(q.inv) + a
    rows = _cesaro_rows(vals, N)
    return _sup([_row_norm(row, q) / float(n + 1) ** e for n, row in enumerate(rows)])


def su2_torus_delta_dual(t, mode: str, index, alpha=0, N: int = 100) -> SupResult:
    """Dual norm of the diagonal algebra of the SU(2)-restriction to the torus.

    ``mode="rq"`` returns the exact value
    ``sup_n (n+1)^(-1-2 alpha) (sum_k |t_{-n+2k}|^{r(q)'})^(1/r(q)')``.
    ``mode="ap"`` returns an upper bound only:
    ``sup_n (n+1)^(-e) max_k |t_{-n+2k}|`` with ``e = 1 + 2 alpha`` for ``p >= 2``
    and ``e = 2/p' + 2 alpha`` for ``p < 2``.
    """
    a = as_fraction(alpha)
    vals = torus_sequence(t, N)
    rows = _cesaro_rows(vals, N)
    if mode == "rq":
        rc = rq_params(index).r.conjugate()
        e = float(1 + 2 * a)
        return _sup([_row_norm(row, rc) / float(n + 1) ** e for n, row in enumerate(rows)])
    if mode == "ap":
        idx = SchattenIndex.of(index)
        e = 1 + 2 * a if idx.inv <= Fraction(1, 2) else 2 * idx.inv_conj + 2 * a
        return _sup([float(row.max()) / float(n + 1) ** float(e) for n, row in enumerate(rows)])
    raise DomainError(f"unknown mode {mode!r}; use 'ap' or 'rq'")


def torus_functional(group: CompactGroup, t, N: int) -> DualFunctional:
    """Functional on a rank-one torus model with ``T_{chi_k} = t_k`` for ``|k| <= N`` and 0 beyond."""
    vals = torus_sequence(t, N)

    def rule(lab):
        k = lab.key[0]
        return np.array([[vals[k + N] if abs(k) <= N else 0.0]])

    return DualFunctional(group, {}, rule)


# ----- central functions ----------------------------------------------------


def central_norm(u: CoefficientBundle, p=1, w: Weight | None = None) -> float:
    """``sum_pi w(pi) d_pi^2 |c_pi|`` for a central bundle ``u^(pi) = c_pi I``; independent of ``p``."""
    w = w if w is not None else constant_weight(1.0)
    SchattenIndex.of(p)
    if not u.is_central(tol=1e-13 * max(1.0, max((np.abs(m).max() for m in u.entries.values()), default=0))):
        raise DomainError("central_norm needs a central bundle (scalar blocks)")
    return _exact_sum(w(lab) * lab.dim ** 2 * abs(np.trace(m) / lab.dim) for lab, m in u.entries.items())


def generic_ap_norm(u: CoefficientBundle, params: NormParams) -> float:
    """``ap_norm`` evaluated through singular values for every block, including scalar ones.

    Serves as an independent route for cross-checking the scalar shortcut.
    """
    return math.fsum(
        params.weight(lab) * float(lab.dim) ** float(1 + params.p.inv_conj) * schatten(m, params.p)
        for lab, m in u.entries.items()
    )
