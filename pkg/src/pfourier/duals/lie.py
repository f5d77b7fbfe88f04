"""SU(2) and tori."""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Hashable, Iterator

import numpy as np

from ..errors import DomainError, UnsupportedError
from .base import CompactGroup, Subgroup
from .finite import FiniteGroup, cyclic
from .labels import IrrepLabel


@lru_cache(maxsize=None)
def _lowering(n: int) -> np.ndarray:
    """Lowering operator on the normalized monomial basis: ``F f_k = sqrt((n-k)(k+1)) f_{k+1}``."""
    m = np.zeros((n + 1, n + 1))
    for k in range(n):
        m[k + 1, k] = math.sqrt((n - k) * (k + 1))
    return m


@lru_cache(maxsize=None)
def _monomial_norms(n: int) -> np.ndarray:
    return np.array([math.sqrt(math.factorial(n - k) * math.factorial(k)) for k in range(n + 1)])


def su2_irrep_matrix(n: int, g: np.ndarray) -> np.ndarray:
    """Matrix of the ``n``-th symmetric power of the defining representation.

    The basis is ``f_k = x^(n-k) y^k / sqrt((n-k)! k!)`` and ``g`` acts by
    ``(g f)(x, y) = f(a x + c y, b x + d y)`` for ``g = [[a, b], [c, d]]``.
    """
    a, b = complex(g[0, 0]), complex(g[0, 1])
    c, d = complex(g[1, 0]), complex(g[1, 1])
    out = np.zeros((n + 1, n + 1), dtype=complex)
    for k in range(n + 1):
        # (a x + c y)^(n-k) (b x + d y)^k, collected by powers of y
        p = np.array([math.comb(n - k, s) * a ** (n - k - s) * c ** s for s in range(n - k + 1)])
        q = np.array([math.comb(k, t) * b ** (k - t) * d ** t for t in range(k + 1)])
        out[:, k] = np.convolve(p, q)
    nrm = _monomial_norms(n)
    return out * nrm[:, None] / nrm[None, :]


class SU2(CompactGroup):
    """SU(2) with dual ``pi_0, pi_1, ...`` truncated at ``pi_N`` for enumeration.

    Fusion and intertwiners are available for every ``n``; truncation only
    limits the labels produced by :meth:`dual`.
    """

    kind = "SU2"

    def __init__(self, N: int = 12):
        if int(N) != N or N < 0:
            raise DomainError(f"SU2 truncation must be a non-negative integer, got {N!r}")
        self.N = int(N)

    def make_label(self, key: Hashable) -> IrrepLabel:
        if isinstance(key, bool) or not isinstance(key, (int, np.integer)) or key < 0:
            raise DomainError(f"{key!r} is not an SU2 highest weight")
        n = int(key)
        return IrrepLabel(n, n + 1, n, f"pi{n}", f"pi{n}")

    def dual(self) -> list[IrrepLabel]:
        return [self.make_label(n) for n in range(self.N + 1)]

    def iter_dual(self) -> Iterator[IrrepLabel]:
        return (self.make_label(n) for n in itertools.count())

    def label(self, name: str) -> IrrepLabel:
        s = name.strip()
        if s.startswith("pi"):
            s = s[2:]
        try:
            return self.make_label(int(s))
        except ValueError:
            raise DomainError(f"no irrep named {name!r} in SU2") from None

    def sort_key(self, label: IrrepLabel) -> tuple:
        return (label.key,)

    # ----- elements --------------------------------------------------------
    @property
    def identity(self) -> np.ndarray:
        return np.eye(2, dtype=complex)

    @staticmethod
    def _check(s) -> np.ndarray:
        g = np.asarray(s, dtype=complex)
        if g.shape != (2, 2):
            raise DomainError("an SU2 element is a 2x2 matrix")
        return g

    def multiply(self, s, t) -> np.ndarray:
        return self._check(s) @ self._check(t)

    def inverse(self, s) -> np.ndarray:
        return self._check(s).conj().T

    def sample(self, rng: np.random.Generator, n: int) -> list[np.ndarray]:
        out = []
        for _ in range(n):
            z = rng.standard_normal(4)
            z /= np.linalg.norm(z)
            a, b = complex(z[0], z[1]), complex(z[2], z[3])
            out.append(np.array([[a, -b.conjugate()], [b, a.conjugate()]]))
        return out

    @staticmethod
    def torus_element(theta: float) -> np.ndarray:
        return np.diag([np.exp(1j * theta), np.exp(-1j * theta)])

    def irrep(self, label: IrrepLabel, s) -> np.ndarray:
        self.check_label(label)
        return su2_irrep_matrix(label.key, self._check(s))

    # ----- fusion ----------------------------------------------------------
    def _fusion(self, a: IrrepLabel, b: IrrepLabel) -> dict[Hashable, int]:
        m, n = a.key, b.key
        return {k: 1 for k in range(abs(m - n), m + n + 1, 2)}

    def _intertwiners(self, a, b, c) -> list[np.ndarray]:
        na, nb, nc = a.key, b.key, c.key
        t = (na + nb - nc) // 2
        # highest weight vector sum_i x_i f_i (x) f_{t-i}, annihilated by the raising operator
        x = np.zeros(t + 1)
        x[0] = 1.0
        for i in range(t):
            x[i + 1] = -x[i] * math.sqrt((t - i) * (nb - t + i + 1)) / math.sqrt((i + 1) * (na - i))
        v = np.zeros((na + 1) * (nb + 1))
        for i in range(t + 1):
            v[i * (nb + 1) + (t - i)] = x[i]
        v /= np.linalg.norm(v)
        low = np.kron(_lowering(na), np.eye(nb + 1)) + np.kron(np.eye(na + 1), _lowering(nb))
        cols = [v]
        for j in range(nc):
            cols.append(low @ cols[-1] / math.sqrt((nc - j) * (j + 1)))
        return [np.stack(cols, axis=1).astype(complex)]

    # ----- subgroups -------------------------------------------------------
    def subgroup(self, which: str) -> Subgroup:
        return self._subgroup_cached(which.strip())

    @lru_cache(maxsize=None)
    def _subgroup_cached(self, which: str) -> Subgroup:
        if which in ("T", "torus"):
            model = Torus(1, self.N)
            return Subgroup(self, model, "T", lambda th: SU2.torus_element(float(np.ravel(th)[0])))
        if which in ("center", "Z"):
            model = cyclic(2)
            return Subgroup(self, model, "center", lambda h: (1 - 2 * int(h)) * np.eye(2, dtype=complex))
        raise UnsupportedError(f"subgroup {which!r} of SU2 is not supported (use T or center)")

    def _branching(self, sub: Subgroup, label: IrrepLabel) -> dict[IrrepLabel, int]:
        n = label.key
        if sub.kind == "T":
            return {sub.model.make_label((n - 2 * j,)): 1 for j in range(n + 1)}
        if sub.kind == "center":
            lab = sub.model.dual()[n % 2]
            return {lab: n + 1}
        raise UnsupportedError(f"branching to {sub.kind!r} is not supported for SU2")

    @property
    def descriptor(self) -> str:
        return f"SU2:N={self.N}"


class Torus(CompactGroup):
    """The torus T^k; characters ``chi_m(theta) = exp(i m . theta)``.

    ``dual()`` lists characters with ``max |m_i| <= N`` ordered by
    ``(max |m_i|, m)``.
    """

    kind = "torus"

    def __init__(self, k: int = 1, N: int = 10):
        if int(k) != k or k < 1:
            raise DomainError(f"torus rank must be a positive integer, got {k!r}")
        if int(N) != N or N < 0:
            raise DomainError(f"torus truncation must be a non-negative integer, got {N!r}")
        self.k, self.N = int(k), int(N)

    def _name(self, m: tuple) -> str:
        if self.k == 1:
            return f"chi{m[0]}"
        return "chi(" + ",".join(str(x) for x in m) + ")"

    def make_label(self, key: Hashable) -> IrrepLabel:
        if isinstance(key, (int, np.integer)) and self.k == 1:
            key = (int(key),)
        if not isinstance(key, tuple) or len(key) != self.k or not all(isinstance(x, (int, np.integer)) for x in key):
            raise DomainError(f"{key!r} is not a character of T^{self.k}")
        m = tuple(int(x) for x in key)
        c = tuple(-x for x in m)
        return IrrepLabel(m, 1, c, self._name(m), self._name(c))

    def dual(self) -> list[IrrepLabel]:
        ms = itertools.product(range(-self.N, self.N + 1), repeat=self.k)
        labs = [self.make_label(m) for m in ms]
        return sorted(labs, key=self.sort_key)

    def iter_dual(self) -> Iterator[IrrepLabel]:
        for r in itertools.count():
            shell = [m for m in itertools.product(range(-r, r + 1), repeat=self.k) if max(map(abs, m), default=0) == r]
            for m in sorted(shell):
                yield self.make_label(m)

    def label(self, name: str) -> IrrepLabel:
        s = name.strip()
        if s.startswith("chi"):
            s = s[3:]
        s = s.strip("()")
        try:
            return self.make_label(tuple(int(x) for x in s.split(",")))
        except ValueError:
            raise DomainError(f"no character named {name!r} in T^{self.k}") from None

    def sort_key(self, label: IrrepLabel) -> tuple:
        m = label.key
        return (max(map(abs, m)), m)

    @property
    def identity(self) -> np.ndarray:
        return np.zeros(self.k)

    def _check(self, s) -> np.ndarray:
        th = np.atleast_1d(np.asarray(s, dtype=float))
        if th.shape != (self.k,):
            raise DomainError(f"a T^{self.k} element is a vector of {self.k} angles")
        return th

    def multiply(self, s, t) -> np.ndarray:
        return np.mod(self._check(s) + self._check(t), 2 * np.pi)

    def inverse(self, s) -> np.ndarray:
        return np.mod(-self._check(s), 2 * np.pi)

    def sample(self, rng: np.random.Generator, n: int) -> list[np.ndarray]:
        return [rng.uniform(0, 2 * np.pi, size=self.k) for _ in range(n)]

    def irrep(self, label: IrrepLabel, s) -> np.ndarray:
        self.check_label(label)
        return np.array([[np.exp(1j * float(np.dot(label.key, self._check(s))))]])

    def _fusion(self, a, b) -> dict[Hashable, int]:
        return {tuple(x + y for x, y in zip(a.key, b.key)): 1}

    def _intertwiners(self, a, b, c) -> list[np.ndarray]:
        return [np.ones((1, 1), dtype=complex)]

    @property
    def descriptor(self) -> str:
        return f"T:k={self.k},N={self.N}"
