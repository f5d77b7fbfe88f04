"""Direct products of group models."""

from __future__ import annotations

import itertools
from typing import Hashable, Iterator

import numpy as np

from ..errors import DomainError, UnsupportedError
from .base import CompactGroup, Subgroup, permute_tensor_rows
from .labels import IrrepLabel


class Product(CompactGroup):
    """``H x K`` with dual ``H^ x K^`` realized by Kronecker products."""

    kind = "product"

    def __init__(self, H: CompactGroup, K: CompactGroup):
        self.H, self.K = H, K
        self.is_finite = H.is_finite and K.is_finite

    def make_label(self, key: Hashable) -> IrrepLabel:
        if not isinstance(key, tuple) or len(key) != 2:
            raise DomainError(f"{key!r} is not a product irrep key")
        a, b = self.H.make_label(key[0]), self.K.make_label(key[1])
        return IrrepLabel(
            (a.key, b.key), a.dim * b.dim, (a.conj_key, b.conj_key),
            f"({a.name},{b.name})", f"({a.conj_name},{b.conj_name})",
        )

    def components(self, label: IrrepLabel) -> tuple[IrrepLabel, IrrepLabel]:
        return self.H.make_label(label.key[0]), self.K.make_label(label.key[1])

    def dual(self) -> list[IrrepLabel]:
        return [self.make_label((a.key, b.key)) for a in self.H.dual() for b in self.K.dual()]

    def iter_dual(self) -> Iterator[IrrepLabel]:
        if self.is_finite:
            return iter(self.dual())
        # enumerate along growing squares in the two component enumerations
        def gen():
            hs, ks = [], []
            hi, ki = self.H.iter_dual(), self.K.iter_dual()
            for r in itertools.count():
                for it, store in ((hi, hs), (ki, ks)):
                    nxt = next(it, None)
                    if nxt is not None:
                        store.append(nxt)
                for i, a in enumerate(hs):
                    for j, b in enumerate(ks):
                        if max(i, j) == r:
                            yield self.make_label((a.key, b.key))
                if r >= max(len(hs), len(ks)):
                    return
        return gen()

    def label(self, name: str) -> IrrepLabel:
        s = name.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        depth, cut = 0, None
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                cut = i
                break
        if cut is None:
            raise DomainError(f"no irrep named {name!r} in {self.descriptor}")
        a, b = self.H.label(s[:cut]), self.K.label(s[cut + 1:])
        return self.make_label((a.key, b.key))

    def sort_key(self, label: IrrepLabel) -> tuple:
        a, b = self.components(label)
        return (self.H.sort_key(a), self.K.sort_key(b))

    @property
    def truncated(self) -> bool:
        return self.H.truncated or self.K.truncated

    # ----- elements --------------------------------------------------------
    @property
    def identity(self):
        return (self.H.identity, self.K.identity)

    @staticmethod
    def _check(s):
        if not isinstance(s, tuple) or len(s) != 2:
            raise DomainError("a product element is a pair (h, k)")
        return s

    def multiply(self, s, t):
        s, t = self._check(s), self._check(t)
        return (self.H.multiply(s[0], t[0]), self.K.multiply(s[1], t[1]))

    def inverse(self, s):
        s = self._check(s)
        return (self.H.inverse(s[0]), self.K.inverse(s[1]))

    def sample(self, rng: np.random.Generator, n: int) -> list:
        hs = self.H.sample(rng, n)
        ks = self.K.sample(rng, n)
        return list(zip(hs, ks))

    def elements(self) -> list:
        if not self.is_finite:
            raise UnsupportedError("product of non-finite groups has no element list")
        return [(h, k) for h in self.H.elements() for k in self.K.elements()]

    @property
    def order(self) -> int:
        return self.H.order * self.K.order

    def irrep(self, label: IrrepLabel, s) -> np.ndarray:
        self.check_label(label)
        a, b = self.components(label)
        s = self._check(s)
        return np.kron(self.H.irrep(a, s[0]), self.K.irrep(b, s[1]))

    # ----- fusion ----------------------------------------------------------
    def _fusion(self, a, b) -> dict[Hashable, int]:
        a1, a2 = self.components(a)
        b1, b2 = self.components(b)
        out = {}
        for s1, m1 in self.H.fusion(a1, b1).items():
            for s2, m2 in self.K.fusion(a2, b2).items():
                out[(s1.key, s2.key)] = m1 * m2
        return out

    def _intertwiners(self, a, b, c) -> list[np.ndarray]:
        a1, a2 = self.components(a)
        b1, b2 = self.components(b)
        c1, c2 = self.components(c)
        dims = (a1.dim, b1.dim, a2.dim, b2.dim)
        out = []
        for u in self.H.intertwiners(a1, b1, c1):
            for v in self.K.intertwiners(a2, b2, c2):
                out.append(permute_tensor_rows(np.kron(u, v), dims))
        return out

    # ----- subgroups -------------------------------------------------------
    def subgroup(self, which: str) -> Subgroup:
        which = which.strip()
        if which in ("factor:0", "H"):
            return Subgroup(self, self.H, "factor:0", lambda h: (h, self.K.identity))
        if which in ("factor:1", "K"):
            return Subgroup(self, self.K, "factor:1", lambda k: (self.H.identity, k))
        raise UnsupportedError(f"subgroup {which!r} of a product is not supported (use factor:0 or factor:1)")

    def _branching(self, sub: Subgroup, label: IrrepLabel) -> dict[IrrepLabel, int]:
        a, b = self.components(label)
        if sub.kind == "factor:0":
            return {a: b.dim}
        if sub.kind == "factor:1":
            return {b: a.dim}
        raise UnsupportedError(f"branching to {sub.kind!r} is not supported for products")

    @property
    def descriptor(self) -> str:
        return f"prod({self.H.descriptor},{self.K.descriptor})"


def product_group(H: CompactGroup, K: CompactGroup) -> Product:
    return Product(H, K)
