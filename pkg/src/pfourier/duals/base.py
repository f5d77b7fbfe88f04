"""Common interface for compact group models."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterator, Mapping

import numpy as np

from ..errors import DomainError, UnsupportedError
from .labels import IrrepLabel


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.setflags(write=False)
    return a


def fix_phase(u: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate an isometry by a global phase so the first nonzero entry of its
    first column is real and positive.

    A single phase is applied to the whole isometry; rephasing columns
    independently would break the intertwining relation.
    """
    col = u[:, 0]
    idx = np.flatnonzero(np.abs(col) > tol * max(1.0, np.abs(col).max()))
    if idx.size == 0:
        return u
    z = col[idx[0]]
    return u * (abs(z) / z)


def permute_tensor_rows(u: np.ndarray, dims: tuple[int, int, int, int]) -> np.ndarray:
    """Reorder rows of an operator into ``A1 (x) B1 (x) A2 (x) B2`` from ``A1 (x) A2 (x) B1 (x) B2``."""
    a1, a2, b1, b2 = dims
    cols = u.shape[1]
    t = u.reshape(a1, a2, b1, b2, cols).transpose(0, 2, 1, 3, 4)
    return t.reshape(a1 * b1 * a2 * b2, cols)


@dataclass(frozen=True)
class Subgroup:
    """A closed subgroup ``H`` of ``parent`` together with a model group for ``H``.

    ``embed`` maps elements of ``model`` to elements of ``parent``.
    """

    parent: "CompactGroup"
    model: "CompactGroup"
    kind: str
    embed: Callable[[Any], Any]

    @property
    def descriptor(self) -> str:
        return self.kind


class CompactGroup(ABC):
    """A compact group with an enumerable dual object.

    Elements are opaque to callers: catalog finite groups use integer
    indices, SU(2) uses 2x2 unitary arrays, tori use angle vectors and
    products use pairs.
    """

    #: kind name used in error messages
    kind: str = "group"

    # ----- dual object -----------------------------------------------------
    @abstractmethod
    def dual(self) -> list[IrrepLabel]:
        """The (possibly truncated) dual in canonical order."""

    def iter_dual(self) -> Iterator[IrrepLabel]:
        """Untruncated canonical enumeration; equals ``dual()`` for finite groups."""
        return iter(self.dual())

    @abstractmethod
    def make_label(self, key: Hashable) -> IrrepLabel:
        """Label for a key, regardless of truncation."""

    @abstractmethod
    def sort_key(self, label: IrrepLabel) -> tuple:
        """Key giving the canonical dual order."""

    def label(self, name: str) -> IrrepLabel:
        """Look up a label by its display name (or key rendered as text)."""
        for lab in self.dual():
            if lab.name == name or str(lab.key) == name:
                return lab
        raise DomainError(f"no irrep named {name!r} in {self.descriptor}")

    def trivial(self) -> IrrepLabel:
        return self.dual()[0]

    def check_label(self, label: IrrepLabel) -> None:
        try:
            ok = self.make_label(label.key) == label
        except (DomainError, TypeError, ValueError, KeyError):
            ok = False
        if not ok:
            raise DomainError(f"label {label} does not belong to {self.descriptor}")

    @property
    def truncated(self) -> bool:
        """True when ``dual()`` is a proper subset of the dual object."""
        return not self.is_finite

    # ----- elements --------------------------------------------------------
    @property
    @abstractmethod
    def identity(self) -> Any: ...

    @abstractmethod
    def multiply(self, s, t) -> Any: ...

    @abstractmethod
    def inverse(self, s) -> Any: ...

    @abstractmethod
    def sample(self, rng: np.random.Generator, n: int) -> list: ...

    @abstractmethod
    def irrep(self, label: IrrepLabel, s) -> np.ndarray:
        """The unitary matrix ``pi(s)``."""

    is_finite: bool = False

    def elements(self) -> list:
        raise UnsupportedError(f"{self.kind} is not a finite group; no element list")

    @property
    def order(self) -> int:
        raise UnsupportedError(f"{self.kind} is not a finite group")

    # ----- fusion ----------------------------------------------------------
    @abstractmethod
    def _fusion(self, a: IrrepLabel, b: IrrepLabel) -> dict[Hashable, int]: ...

    @abstractmethod
    def _intertwiners(self, a: IrrepLabel, b: IrrepLabel, c: IrrepLabel) -> list[np.ndarray]: ...

    def fusion(self, a: IrrepLabel, b: IrrepLabel) -> dict[IrrepLabel, int]:
        """Multiplicities ``m(sigma, a (x) b)`` for every constituent ``sigma``, canonically ordered."""
        self.check_label(a)
        self.check_label(b)
        return self._fusion_cached(a, b)

    @lru_cache(maxsize=None)
    def _fusion_cached(self, a: IrrepLabel, b: IrrepLabel) -> dict[IrrepLabel, int]:
        raw = self._fusion(a, b)
        labs = sorted((self.make_label(k) for k, m in raw.items() if m > 0), key=self.sort_key)
        return {lab: raw[lab.key] for lab in labs}

    def intertwiners(self, a: IrrepLabel, b: IrrepLabel, c: IrrepLabel) -> list[np.ndarray]:
        """A maximal family of isometric intertwiners ``c -> a (x) b`` with orthogonal ranges."""
        self.check_label(a)
        self.check_label(b)
        self.check_label(c)
        return self._intertwiners_cached(a, b, c)

    @lru_cache(maxsize=None)
    def _intertwiners_cached(self, a, b, c) -> tuple[np.ndarray, ...]:
        m = self._fusion_cached(a, b).get(c, 0)
        if m == 0:
            return ()
        us = self._intertwiners(a, b, c)
        if len(us) != m:
            raise RuntimeError(f"found {len(us)} intertwiners for multiplicity {m}")
        return tuple(frozen(fix_phase(u)) for u in us)

    # ----- subgroups -------------------------------------------------------
    def subgroup(self, which: str) -> Subgroup:
        raise UnsupportedError(f"subgroup {which!r} is not supported for {self.kind}")

    def branching(self, sub: Subgroup, label: IrrepLabel) -> dict[IrrepLabel, int]:
        """Multiplicities ``m(sigma, pi|_H)`` for ``sigma`` in the subgroup dual."""
        if sub.parent != self:
            raise DomainError("subgroup belongs to a different group")
        self.check_label(label)
        return self._branching_cached(sub, label)

    @lru_cache(maxsize=None)
    def _branching_cached(self, sub: Subgroup, label: IrrepLabel) -> dict[IrrepLabel, int]:
        raw = self._branching(sub, label)
        labs = sorted((k for k, m in raw.items() if m > 0), key=sub.model.sort_key)
        return {k: raw[k] for k in labs}

    def _branching(self, sub: Subgroup, label: IrrepLabel) -> Mapping[IrrepLabel, int]:
        raise UnsupportedError(f"branching to {sub.kind!r} is not supported for {self.kind}")

    # ----- misc ------------------------------------------------------------
    @property
    @abstractmethod
    def descriptor(self) -> str:
        """Descriptor string that parses back to an equal group."""

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, CompactGroup) and self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)
