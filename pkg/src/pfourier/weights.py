"""Weights on dual objects and the word-length function."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .duals import CompactGroup, FiniteGroup, IrrepLabel, Product, SU2, Subgroup, Torus
from .errors import DescriptorError, DomainError


class Weight:
    """A positive function on dual labels, memoized per label.

    Parameters
    ----------
    fn : callable
        Evaluator ``IrrepLabel -> float``; must be deterministic.
    name : str
        Descriptive name used in reports.
    symmetric : bool or None
        Whether ``w(conj pi) = w(pi)``; None means unknown.
    dim_monotone : bool
        True when the value depends only on, and does not decrease with,
        the dimension.  Used to certify infima over truncated duals.
    """

    def __init__(self, fn: Callable[[IrrepLabel], float], name: str, symmetric: bool | None = None,
                 dim_monotone: bool = False):
        self._fn = fn
        self.name = name
        self.symmetric = symmetric
        self.dim_monotone = dim_monotone
        self._memo: dict[IrrepLabel, float] = {}
        self._lock = threading.Lock()

    def __call__(self, lab: IrrepLabel) -> float:
        with self._lock:
            hit = self._memo.get(lab)
        if hit is not None:
            return hit
        val = float(self._fn(lab))
        if not val > 0 or math.isnan(val):
            raise DomainError(f"weight {self.name} is not positive at {lab}: {val}")
        with self._lock:
            self._memo.setdefault(lab, val)
        return val

    def __mul__(self, other: "Weight") -> "Weight":
        sym = True if (self.symmetric and other.symmetric) else None
        return Weight(lambda lab: self(lab) * other(lab), f"{self.name}*{other.name}", sym,
                      self.dim_monotone and other.dim_monotone)

    def __pow__(self, a: float) -> "Weight":
        if a < 0:
            raise DomainError("weights can only be raised to non-negative powers")
        return Weight(lambda lab: self(lab) ** a, f"({self.name})^{a:g}", self.symmetric, self.dim_monotone)

    def __repr__(self) -> str:
        return f"Weight({self.name})"


def constant_weight(c: float = 1.0) -> Weight:
    if not c > 0:
        raise DomainError("a constant weight must be positive")
    return Weight(lambda lab: c, "one" if c == 1 else f"const:{c:g}", True, True)


def dimension_weight(alpha: float) -> Weight:
    """``w(pi) = d_pi^alpha``."""
    if alpha < 0:
        raise DomainError(f"dimension weight exponent must be >= 0, got {alpha}")
    return Weight(lambda lab: float(lab.dim) ** alpha, f"dim:{alpha:g}", True, True)


def log_weight(alpha: float) -> Weight:
    """``w(pi) = (1 + log d_pi)^alpha``."""
    if alpha < 0:
        raise DomainError(f"log weight exponent must be >= 0, got {alpha}")
    return Weight(lambda lab: (1.0 + math.log(lab.dim)) ** alpha, f"log:{alpha:g}", True, True)


def symmetrize(w: Weight) -> Weight:
    """``Omega(pi) = w(pi) w(conj pi)``."""
    return Weight(lambda lab: w(lab) * w(lab.conjugate()), f"sym({w.name})", True, w.dim_monotone)


@dataclass
class WordLength:
    """Word length ``tau_S`` for a symmetric generating set ``S``.

    ``values`` holds every label reached within ``horizon`` tensor powers.
    ``exhausted`` is True when the BFS reached a fixed point, so every label
    generated by ``S`` has been found.
    """

    group: CompactGroup
    generators: tuple[IrrepLabel, ...]
    horizon: int
    values: dict[IrrepLabel, int] = field(default_factory=dict)
    exhausted: bool = False

    def __call__(self, lab: IrrepLabel) -> int:
        if lab in self.values:
            return self.values[lab]
        if self.exhausted:
            raise DomainError(f"{lab} is not generated by {[g.name for g in self.generators]}")
        raise DomainError(f"{lab} is beyond the word-length horizon {self.horizon}")


def word_length(group: CompactGroup, S: Iterable[IrrepLabel], horizon: int) -> WordLength:
    """Breadth-first search over the fusion graph from the trivial irrep.

    ``tau_S(sigma)`` is the least ``n`` with ``sigma`` contained in some
    ``n``-fold tensor product of elements of ``S``.
    """
    gens = tuple(sorted(set(S), key=group.sort_key))
    if not gens:
        raise DomainError("generating set must be non-empty")
    keys = {g.key for g in gens}
    for g in gens:
        group.check_label(g)
        if g.conj_key not in keys:
            raise DomainError(f"generating set is not symmetric: conjugate of {g} missing")
    triv = group.trivial()
    values = {triv: 0}
    frontier = [triv]
    exhausted = False
    for n in range(1, horizon + 1):
        nxt = []
        for a in frontier:
            for s in gens:
                for c in group.fusion(a, s):
                    if c not in values:
                        values[c] = n
                        nxt.append(c)
        if not nxt:
            exhausted = True
            break
        frontier = sorted(nxt, key=group.sort_key)
    ordered = dict(sorted(values.items(), key=lambda kv: group.sort_key(kv[0])))
    return WordLength(group, gens, horizon, ordered, exhausted)


def polynomial_weight(wl: WordLength, alpha: float) -> Weight:
    """``w_S^alpha(pi) = (1 + tau_S(pi))^alpha``."""
    if alpha < 0:
        raise DomainError(f"polynomial weight exponent must be >= 0, got {alpha}")
    names = ",".join(g.name for g in wl.generators)
    return Weight(lambda lab: (1.0 + wl(lab)) ** alpha, f"poly:S={names},{alpha:g}", True, False)


def default_generators(group: CompactGroup) -> list[IrrepLabel]:
    """A standard symmetric generating set of the dual."""
    if isinstance(group, SU2):
        return [group.make_label(1)]
    if isinstance(group, Torus):
        out = []
        for i in range(group.k):
            e = [0] * group.k
            e[i] = 1
            out += [group.make_label(tuple(e)), group.make_label(tuple(-x for x in e))]
        return out
    if isinstance(group, Product):
        th, tk = group.H.trivial(), group.K.trivial()
        out = [group.make_label((s.key, tk.key)) for s in default_generators(group.H)]
        out += [group.make_label((th.key, s.key)) for s in default_generators(group.K)]
        return out
    if isinstance(group, FiniteGroup):
        desc = group.descriptor
        if desc.startswith("Z/"):
            n = group.order
            if n == 1:
                return [group.trivial()]
            labs = group.dual()
            return sorted({labs[1], labs[n - 1]}, key=group.sort_key)
        if desc.startswith("D"):
            labs = [lab for lab in group.dual() if lab.name == "rho1"]
            if labs:
                return labs
            return [lab for lab in group.dual() if lab.dim == 1 and lab.name != "triv"]
        for lab in group.dual():
            if lab.name == "std":
                return [lab]
    return [lab for lab in group.dual() if lab.name != "triv"]


def polynomial_default(group: CompactGroup, alpha: float, horizon: int | None = None) -> Weight:
    """Polynomial weight for :func:`default_generators` with a horizon covering the truncated dual."""
    gens = default_generators(group)
    if horizon is None:
        horizon = 64 if group.is_finite else 4 * max(8, len(group.dual()))
    return polynomial_weight(word_length(group, gens, horizon), alpha)


class RestrictedWeight(Weight):
    """Restriction ``w_G|_H(sigma) = inf {w(pi) : sigma in pi|_H}`` over a searched range.

    ``certified`` is True when no label outside the search could lower the
    infimum.
    """

    def __init__(self, fn, name, certified: bool, horizon: int):
        super().__init__(fn, name, True, False)
        self.certified = certified
        self.horizon = horizon


def restrict_weight(w: Weight, group: CompactGroup, subgroup: Subgroup | str, horizon: int | None = None) -> RestrictedWeight:
    """Restricted weight on the subgroup dual.

    Candidates are the first ``horizon`` labels of the untruncated dual
    enumeration (the whole dual for finite groups).  The infimum is
    certified for finite groups, and for SU(2) with a weight that is
    monotone in the dimension: the first ``pi_n`` containing a given torus
    or center character already has the least dimension.
    """
    sub = group.subgroup(subgroup) if isinstance(subgroup, str) else subgroup
    if group.is_finite:
        cands = group.dual()
        certified = True
    else:
        if horizon is None:
            horizon = len(group.dual())
        it = group.iter_dual()
        cands = [next(it) for _ in range(horizon)]
        certified = isinstance(group, SU2) and w.dim_monotone
    best: dict[IrrepLabel, float] = {}
    for pi in cands:
        val = w(pi)
        for sigma in group.branching(sub, pi):
            if sigma not in best or val < best[sigma]:
                best[sigma] = val

    def fn(sigma: IrrepLabel) -> float:
        if sigma not in best:
            raise DomainError(f"{sigma} does not occur in any restriction within the horizon")
        return best[sigma]

    return RestrictedWeight(fn, f"{w.name}|{sub.kind}", certified, len(cands))


@dataclass
class WeightReport:
    ok: bool
    violations: list[tuple[IrrepLabel, IrrepLabel, IrrepLabel, float, float]]
    inf_value: float
    checked: int


def check_weight(group: CompactGroup, w: Weight, limit: int | None = None, rtol: float = 1e-12) -> WeightReport:
    """Check ``w(sigma) <= w(pi) w(pi')`` for all ``sigma`` in ``pi (x) pi'``, inputs among the first ``limit`` labels.

    Violations are returned as data ``(pi, pi', sigma, w(sigma), w(pi) w(pi'))``.
    """
    labs = group.dual()
    if limit is not None:
        labs = labs[:limit]
    viol = []
    lo = math.inf
    count = 0
    for a in labs:
        lo = min(lo, w(a))
        for b in labs:
            bound = w(a) * w(b)
            for c in group.fusion(a, b):
                count += 1
                wc = w(c)
                if wc > bound * (1 + rtol):
                    viol.append((a, b, c, wc, bound))
        if w.symmetric:
            if abs(w(a.conjugate()) - w(a)) > rtol * w(a):
                viol.append((a, a.conjugate(), a, w(a), w(a.conjugate())))
    return WeightReport(not viol, viol, lo, count)


def parse_weight(desc: str, group: CompactGroup) -> Weight:
    """Weight from a descriptor: ``one``, ``dim:a``, ``log:a`` or ``poly:S=pi1,a``.

    In ``poly`` the generator list is separated by ``+`` (``poly:S=pi1+pi2,1``)
    and ``S=default`` selects :func:`default_generators`.
    """
    s = desc.strip()
    try:
        if s in ("one", "1", "const"):
            return constant_weight(1.0)
        kind, _, body = s.partition(":")
        if kind == "dim":
            return dimension_weight(float(body))
        if kind == "log":
            return log_weight(float(body))
        if kind == "poly":
            gens_part, _, alpha = body.rpartition(",")
            if not gens_part.startswith("S="):
                raise DescriptorError(f"poly weight needs S=...: {desc!r}")
            names = gens_part[2:]
            gens = default_generators(group) if names == "default" else [group.label(x) for x in names.split("+")]
            horizon = 64 if group.is_finite else 4 * max(8, len(group.dual()))
            return polynomial_weight(word_length(group, gens, horizon), float(alpha))
    except ValueError as exc:
        if isinstance(exc, (DomainError, DescriptorError)):
            raise
        raise DescriptorError(f"bad weight descriptor {desc!r}") from None
    raise DescriptorError(f"unknown weight descriptor {desc!r}")
