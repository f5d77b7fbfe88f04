"""Finite groups from a fixed catalog with explicit irrep matrices."""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Callable, Hashable, Sequence

import numpy as np

from ..errors import DescriptorError, DomainError, UnsupportedError
from .base import CompactGroup, Subgroup
from .labels import IrrepLabel

_TOL = 1e-9


class FiniteGroup(CompactGroup):
    """A finite group given by a multiplication table and explicit irreps.

    Elements are the integers ``0 .. order-1``; element 0 is the identity.

    Parameters
    ----------
    descriptor : str
        Round-trippable descriptor.
    table : ndarray of int, shape (n, n)
        ``table[s, t]`` is the index of ``s t``.
    irreps : sequence of (name, ndarray of shape (n, d, d))
        Irreducible representations in canonical order, trivial first.
    """

    kind = "finite"
    is_finite = True

    def __init__(self, descriptor: str, table: np.ndarray, irreps: Sequence[tuple[str, np.ndarray]],
                 named_subgroups: dict[str, Sequence[int]] | None = None):
        self._descriptor = descriptor
        self.table = np.asarray(table, dtype=np.int64)
        self.table.setflags(write=False)
        n = self.table.shape[0]
        if self.table[0, 0] != 0 or not np.array_equal(self.table[0], np.arange(n)):
            raise ValueError("element 0 must be the identity")
        self._inv = np.argmax(self.table == 0, axis=1)
        self._names = [name for name, _ in irreps]
        self._mats: dict[str, np.ndarray] = {}
        for name, mats in irreps:
            a = np.ascontiguousarray(mats, dtype=complex)
            a.setflags(write=False)
            self._mats[name] = a
        self._chars = {name: np.trace(m, axis1=1, axis2=2) for name, m in self._mats.items()}
        dims = {name: self._mats[name].shape[1] for name in self._names}
        if sum(d * d for d in dims.values()) != n:
            raise ValueError(f"{descriptor}: sum of squared dimensions is not |G|")
        conj = {}
        for a in self._names:
            target = np.conj(self._chars[a])
            hits = [b for b in self._names if np.allclose(self._chars[b], target, atol=_TOL)]
            if len(hits) != 1:
                raise ValueError(f"{descriptor}: cannot identify conjugate of {a}")
            conj[a] = hits[0]
        self._labels = [IrrepLabel(a, dims[a], conj[a], a, conj[a]) for a in self._names]
        self._index = {lab.key: i for i, lab in enumerate(self._labels)}
        self._named_subgroups = dict(named_subgroups or {})

    # ----- dual ------------------------------------------------------------
    def dual(self) -> list[IrrepLabel]:
        return list(self._labels)

    def make_label(self, key: Hashable) -> IrrepLabel:
        try:
            return self._labels[self._index[key]]
        except (KeyError, TypeError):
            raise DomainError(f"{key!r} is not an irrep of {self.descriptor}") from None

    def sort_key(self, label: IrrepLabel) -> tuple:
        return (self._index[label.key],)

    @property
    def truncated(self) -> bool:
        return False

    def character(self, label: IrrepLabel) -> np.ndarray:
        return self._chars[label.key]

    # ----- elements --------------------------------------------------------
    @property
    def identity(self) -> int:
        return 0

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def _check(self, s) -> int:
        try:
            i = int(s)
        except (TypeError, ValueError):
            raise DomainError(f"{s!r} is not an element index of {self.descriptor}") from None
        if i != s or not 0 <= i < self.order:
            raise DomainError(f"{s!r} is not an element index of {self.descriptor}")
        return i

    def multiply(self, s, t) -> int:
        return int(self.table[self._check(s), self._check(t)])

    def inverse(self, s) -> int:
        return int(self._inv[self._check(s)])

    def elements(self) -> list[int]:
        return list(range(self.order))

    def sample(self, rng: np.random.Generator, n: int) -> list[int]:
        return [int(x) for x in rng.integers(0, self.order, size=n)]

    def irrep(self, label: IrrepLabel, s) -> np.ndarray:
        self.check_label(label)
        return self._mats[label.key][self._check(s)]

    def irrep_all(self, label: IrrepLabel) -> np.ndarray:
        """All matrices ``pi(s)`` stacked along the first axis."""
        self.check_label(label)
        return self._mats[label.key]

    # ----- fusion ----------------------------------------------------------
    def _fusion(self, a: IrrepLabel, b: IrrepLabel) -> dict[Hashable, int]:
        prod = self._chars[a.key] * self._chars[b.key]
        out = {}
        for lab in self._labels:
            m = np.vdot(self._chars[lab.key], prod) / self.order
            mi = int(round(m.real))
            if abs(m - mi) > 1e-8:
                raise RuntimeError("non-integral fusion multiplicity")
            if mi:
                out[lab.key] = mi
        return out

    def _intertwiners(self, a, b, c) -> list[np.ndarray]:
        pa, pb, pc = self._mats[a.key], self._mats[b.key], self._mats[c.key]
        n, dc = self.order, c.dim
        rho = np.einsum("gij,gkl->gikjl", pa, pb).reshape(n, a.dim * b.dim, a.dim * b.dim)
        # P_j1 = (d_c/|G|) sum_g conj(c(g)_{j1}) rho(g)
        proj = np.einsum("gj,gxy->jxy", np.conj(pc[:, :, 0]), rho) * (dc / n)
        basis = _orthonormal_columns(proj[0])
        return [np.stack([proj[j] @ w for j in range(dc)], axis=1) for w in basis]

    # ----- subgroups -------------------------------------------------------
    def closure(self, gens: Sequence[int]) -> list[int]:
        """Sorted element indices of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = [self._check(g) for g in gens]
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = int(self.table[s, g])
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        return sorted(seen)

    def is_normal(self, elems: Sequence[int]) -> bool:
        es = set(elems)
        for g in range(self.order):
            gi = self._inv[g]
            for h in es:
                if int(self.table[self.table[g, h], gi]) not in es:
                    return False
        return True

    def subgroup(self, which: str) -> Subgroup:
        return self._subgroup_cached(which.strip())

    @lru_cache(maxsize=None)
    def _subgroup_cached(self, which: str) -> Subgroup:
        if which in self._named_subgroups:
            elems = self.closure(self._named_subgroups[which])
        elif which in ("trivial", "e"):
            elems = [0]
        elif which in ("whole", "G"):
            elems = list(range(self.order))
        elif which.startswith("gen:"):
            body = which[4:].strip()
            try:
                gens = [int(x) for x in body.split(",")] if body else []
            except ValueError:
                raise DescriptorError(f"bad generator list in {which!r}") from None
            elems = self.closure(gens)
        else:
            known = ", ".join(sorted(self._named_subgroups)) or "none"
            raise UnsupportedError(
                f"unknown subgroup {which!r} of {self.descriptor} (named subgroups: {known}; or gen:i,j,...)"
            )
        model = subgroup_model(self, elems, f"{self.descriptor}|{which}")
        lookup = list(elems)
        return Subgroup(self, model, which, lambda h, _l=lookup: _l[int(h)])

    def subgroup_elements(self, sub: Subgroup) -> list[int]:
        return [sub.embed(h) for h in sub.model.elements()]

    def _branching(self, sub: Subgroup, label: IrrepLabel) -> dict[IrrepLabel, int]:
        model = sub.model
        if not isinstance(model, FiniteGroup):
            raise UnsupportedError("branching needs a finite subgroup model")
        chi = self._chars[label.key][self.subgroup_elements(sub)]
        out = {}
        for lab in model.dual():
            m = np.vdot(model.character(lab), chi) / model.order
            mi = int(round(m.real))
            if abs(m - mi) > 1e-8:
                raise RuntimeError("non-integral branching multiplicity")
            if mi:
                out[lab] = mi
        return out

    @property
    def descriptor(self) -> str:
        return self._descriptor


def _orthonormal_columns(p: np.ndarray, tol: float = 1e-8) -> list[np.ndarray]:
    """Deterministic orthonormal basis of the column space of ``p`` (greedy Gram-Schmidt)."""
    scale = max(1.0, float(np.abs(p).max()))
    basis: list[np.ndarray] = []
    for j in range(p.shape[1]):
        v = p[:, j].astype(complex)
        for _ in range(2):
            for w in basis:
                v = v - np.vdot(w, v) * w
        nv = np.linalg.norm(v)
        if nv > tol * scale:
            basis.append(v / nv)
    return basis


def subgroup_model(parent: FiniteGroup, elems: Sequence[int], descriptor: str) -> FiniteGroup:
    """Model of a subgroup whose irreps are split off the restricted parent irreps.

    Each restricted irrep is decomposed with the eigenspaces of a generic
    element of its commutant; every irrep of the subgroup occurs in some
    restriction, so collecting distinct characters yields the whole dual.
    """
    elems = list(elems)
    pos = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    table = np.array([[pos[int(parent.table[a, b])] for b in elems] for a in elems], dtype=np.int64)
    rng = np.random.default_rng(12345)
    found: list[np.ndarray] = []
    chars: list[np.ndarray] = []
    for lab in parent.dual():
        mats = parent.irrep_all(lab)[elems]
        d = lab.dim
        x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        x = x + x.conj().T
        a = np.einsum("gij,jk,glk->il", mats, x, np.conj(mats)) / n
        a = (a + a.conj().T) / 2
        w, v = np.linalg.eigh(a)
        groups: list[list[int]] = []
        for i in range(d):
            if groups and abs(w[i] - w[groups[-1][-1]]) < 1e-7 * max(1.0, abs(w).max()):
                groups[-1].append(i)
            else:
                groups.append([i])
        for g in groups:
            basis = v[:, g]
            sub = np.einsum("ia,gij,jb->gab", np.conj(basis), mats, basis)
            ch = np.trace(sub, axis1=1, axis2=2)
            if abs(np.vdot(ch, ch).real / n - 1) > 1e-7:
                raise RuntimeError("commutant eigenspace is not irreducible")
            if not any(np.allclose(ch, c, atol=1e-7) for c in chars):
                chars.append(ch)
                found.append(sub)
    triv = next(i for i, c in enumerate(chars) if np.allclose(c, 1, atol=1e-7))
    order = [triv] + [i for i in range(len(found)) if i != triv]
    irreps = [("triv", np.ones((n, 1, 1), complex))]
    irreps += [(f"h{k}", found[i]) for k, i in enumerate(order[1:], start=1)]
    return FiniteGroup(descriptor, table, irreps)


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


def _from_elements(elements: list, mul: Callable) -> tuple[np.ndarray, dict]:
    index = {e: i for i, e in enumerate(elements)}
    table = np.array([[index[mul(a, b)] for b in elements] for a in elements], dtype=np.int64)
    return table, index


def _stack(elements, fn) -> np.ndarray:
    return np.array([np.atleast_2d(fn(e)) for e in elements], dtype=complex)


def cyclic(n: int) -> FiniteGroup:
    """The cyclic group Z/n with characters ``chi_j(k) = exp(2 pi i j k / n)``."""
    if n < 1:
        raise DomainError("cyclic group order must be at least 1")
    elements = list(range(n))
    table, _ = _from_elements(elements, lambda a, b: (a + b) % n)
    irreps = []
    for j in range(n):
        if j == 0:
            name = "triv"
        elif n == 2:
            name = "sgn"
        else:
            name = f"chi{j}"
        irreps.append((name, _stack(elements, lambda k, j=j: np.exp(2j * np.pi * j * k / n))))
    return FiniteGroup(f"Z/{n}", table, irreps)


def _rot(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


def dihedral(n: int) -> FiniteGroup:
    """The dihedral group of order ``2n``; element ``(k, e)`` is ``r^k s^e``."""
    if n < 2:
        raise DomainError("dihedral group needs n >= 2")
    elements = [(k, e) for e in range(2) for k in range(n)]

    def mul(a, b):
        return ((a[0] + (-1) ** a[1] * b[0]) % n, a[1] ^ b[1])

    table, index = _from_elements(elements, mul)
    flip = np.diag([1.0, -1.0])
    irreps = [
        ("triv", _stack(elements, lambda g: 1.0)),
        ("sgn", _stack(elements, lambda g: (-1.0) ** g[1])),
    ]
    if n % 2 == 0:
        irreps += [
            ("alt", _stack(elements, lambda g: (-1.0) ** g[0])),
            ("altsgn", _stack(elements, lambda g: (-1.0) ** (g[0] + g[1]))),
        ]
    for h in range(1, (n - 1) // 2 + 1):
        irreps.append(
            (f"rho{h}", _stack(elements, lambda g, h=h: _rot(2 * np.pi * h * g[0] / n) @ np.linalg.matrix_power(flip, g[1])))
        )
    named = {"rot": [index[(1, 0)]]}
    return FiniteGroup(f"D{n}", table, irreps, named)


def _perm_mul(a: tuple, b: tuple) -> tuple:
    # (a b)(i) = a(b(i))
    return tuple(a[b[i]] for i in range(len(b)))


def _perm_sign(p: tuple) -> int:
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _perm_matrix(p: tuple) -> np.ndarray:
    m = np.zeros((len(p), len(p)))
    for i, j in enumerate(p):
        m[j, i] = 1.0
    return m


def _helmert(n: int) -> np.ndarray:
    """Orthonormal basis (as columns) of the complement of the all-ones vector in R^n."""
    cols = []
    for k in range(1, n):
        v = np.zeros(n)
        v[:k] = 1.0
        v[k] = -k
        cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


def _standard(p: tuple) -> np.ndarray:
    b = _helmert(len(p))
    return b.T @ _perm_matrix(p) @ b


_PAIRINGS = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]


def _pairing_action(p: tuple) -> tuple:
    """Permutation of the three pair-partitions of {0,1,2,3} induced by ``p``."""
    keys = [frozenset(frozenset(x) for x in pr) for pr in _PAIRINGS]
    out = []
    for pr in _PAIRINGS:
        img = frozenset(frozenset(p[i] for i in x) for x in pr)
        out.append(keys.index(img))
    return tuple(out)


def symmetric3() -> FiniteGroup:
    elements = list(itertools.permutations(range(3)))
    table, index = _from_elements(elements, _perm_mul)
    irreps = [
        ("triv", _stack(elements, lambda g: 1.0)),
        ("sgn", _stack(elements, lambda g: float(_perm_sign(g)))),
        ("std", _stack(elements, _standard)),
    ]
    return FiniteGroup("S3", table, irreps, {"A3": [index[(1, 2, 0)]]})


def symmetric4() -> FiniteGroup:
    elements = list(itertools.permutations(range(4)))
    table, index = _from_elements(elements, _perm_mul)
    irreps = [
        ("triv", _stack(elements, lambda g: 1.0)),
        ("sgn", _stack(elements, lambda g: float(_perm_sign(g)))),
        ("V2", _stack(elements, lambda g: _standard(_pairing_action(g)))),
        ("std", _stack(elements, _standard)),
        ("std_sgn", _stack(elements, lambda g: _perm_sign(g) * _standard(g))),
    ]
    named = {
        "A4": [index[(1, 2, 0, 3)], index[(0, 2, 3, 1)]],
        "V4": [index[(1, 0, 3, 2)], index[(2, 3, 0, 1)]],
    }
    return FiniteGroup("S4", table, irreps, named)


def alternating4() -> FiniteGroup:
    elements = [p for p in itertools.permutations(range(4)) if _perm_sign(p) == 1]
    table, index = _from_elements(elements, _perm_mul)
    cycle = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    w = np.exp(2j * np.pi / 3)

    def omega(g, power):
        return w ** (power * cycle.index(_pairing_action(g)))

    irreps = [
        ("triv", _stack(elements, lambda g: 1.0)),
        ("omega", _stack(elements, lambda g: omega(g, 1))),
        ("omega2", _stack(elements, lambda g: omega(g, 2))),
        ("std", _stack(elements, _standard)),
    ]
    named = {"V4": [index[(1, 0, 3, 2)], index[(2, 3, 0, 1)]]}
    return FiniteGroup("A4", table, irreps, named)


def quaternion() -> FiniteGroup:
    """The quaternion group realized inside SU(2)."""
    units = {
        "1": np.eye(2, dtype=complex),
        "i": np.array([[1j, 0], [0, -1j]]),
        "j": np.array([[0, 1], [-1, 0]], dtype=complex),
        "k": np.array([[0, 1j], [1j, 0]]),
    }
    elements = [(s, u) for u in "1ijk" for s in (1, -1)]
    mats = {e: e[0] * units[e[1]] for e in elements}

    def mul(a, b):
        m = mats[a] @ mats[b]
        for e in elements:
            if np.allclose(m, mats[e]):
                return e
        raise AssertionError("Q8 not closed")

    table, index = _from_elements(elements, mul)

    def char(axis):
        return lambda e: 1.0 if e[1] in ("1", axis) else -1.0

    irreps = [
        ("triv", _stack(elements, lambda e: 1.0)),
        ("chi_i", _stack(elements, char("i"))),
        ("chi_j", _stack(elements, char("j"))),
        ("chi_k", _stack(elements, char("k"))),
        ("std", _stack(elements, lambda e: mats[e])),
    ]
    named = {"center": [index[(-1, "1")]], "i": [index[(1, "i")]], "j": [index[(1, "j")]], "k": [index[(1, "k")]]}
    return FiniteGroup("Q8", table, irreps, named)


@lru_cache(maxsize=None)
def catalog(name: str) -> FiniteGroup:
    """Build a catalog group from its descriptor (``Z/n``, ``Dn``, ``S3``, ``S4``, ``A4``, ``Q8``)."""
    name = name.strip()
    if name == "S3":
        return symmetric3()
    if name == "S4":
        return symmetric4()
    if name == "A4":
        return alternating4()
    if name == "Q8":
        return quaternion()
    if name.startswith("Z/"):
        try:
            return cyclic(int(name[2:]))
        except ValueError:
            raise DescriptorError(f"bad cyclic group descriptor {name!r}") from None
    if name.startswith("D") and name[1:].isdigit():
        return dihedral(int(name[1:]))
    raise DescriptorError(f"unknown finite group {name!r}")
