"""Schatten norms and Hoelder-equality witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._numeric import as_fraction, lp_norm
from .errors import DomainError

INF = math.inf


@dataclass(frozen=True)
class SchattenIndex:
    """An exponent ``p`` in ``[1, inf]`` with exact conjugation.

    The reciprocal ``1/p`` is stored as a :class:`~fractions.Fraction`, so
    ``1 <-> inf`` and ``4/3 <-> 4`` conjugate exactly.

    Parameters
    ----------
    inv : Fraction
        ``1/p``, in ``[0, 1]``; 0 encodes ``p = inf``.
    """

    inv: Fraction

    def __post_init__(self):
        inv = as_fraction(self.inv)
        if not 0 <= inv <= 1:
            raise DomainError(f"Schatten index must lie in [1, inf], got 1/p = {inv}")
        object.__setattr__(self, "inv", inv)

    @classmethod
    def of(cls, p) -> "SchattenIndex":
        """Build from a number, a string like ``"4/3"`` or ``"inf"``, or another index."""
        if isinstance(p, SchattenIndex):
            return p
        if isinstance(p, str) and p.strip().lower() in ("inf", "infinity", "oo"):
            return cls(Fraction(0))
        if isinstance(p, float) and math.isinf(p):
            if p < 0:
                raise DomainError("Schatten index must be >= 1")
            return cls(Fraction(0))
        try:
            fp = as_fraction(p)
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"cannot read Schatten index {p!r}") from None
        if fp < 1:
            raise DomainError(f"Schatten index must be >= 1, got {p!r}")
        return cls(1 / fp)

    @property
    def is_inf(self) -> bool:
        return self.inv == 0

    @property
    def p(self) -> float:
        return INF if self.is_inf else float(1 / self.inv)

    @property
    def exact(self) -> Fraction | None:
        """``p`` as a Fraction, or None for ``inf``."""
        return None if self.is_inf else 1 / self.inv

    def conjugate(self) -> "SchattenIndex":
        return SchattenIndex(1 - self.inv)

    @property
    def inv_conj(self) -> Fraction:
        """``1/p'`` exactly."""
        return 1 - self.inv

    def __str__(self) -> str:
        if self.is_inf:
            return "inf"
        v = 1 / self.inv
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __float__(self) -> float:
        return self.p


def singular_values(a: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    if a.size == 0:
        return np.zeros(0)
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return np.linalg.svd(a, compute_uv=False)


def schatten(a: np.ndarray, p) -> float:
    """Schatten ``p``-norm ``(sum s_i^p)^(1/p)``; the operator norm for ``p = inf``.

    Examples
    --------
    >>> schatten(np.diag([3.0, 4.0]), 2)
    5.0
    """
    idx = SchattenIndex.of(p)
    s = singular_values(a)
    return lp_norm(s, idx.p)


def dual_witness(a: np.ndarray, p) -> np.ndarray:
    """A matrix ``T`` with ``||T||_{p'} = 1`` and ``Tr(A T) = ||A||_p``.

    With ``A = U S V*`` this is ``T = V g(S) U*`` where ``g`` is the
    Hoelder-equality rescaling: ``g = 1`` for ``p = 1``, uniform weight on the
    largest singular values for ``p = inf`` and ``(s/||s||_p)^(p-1)``
    otherwise.
    """
    idx = SchattenIndex.of(p)
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        raise DomainError("dual witness of the zero matrix is undefined")
    if idx.inv == 1:
        g = np.ones_like(s)
    elif idx.is_inf:
        top = s >= s[0] * (1 - 1e-12)
        g = top / top.sum()
    else:
        pp = idx.p
        g = (s / lp_norm(s, pp)) ** (pp - 1)
    return (vh.conj().T * g) @ u.conj().T
