"""Labels for irreducible representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable


@dataclass(frozen=True)
class IrrepLabel:
    """An element of the dual object, i.e. an equivalence class of irreps.

    Parameters
    ----------
    key : hashable
        Group-specific identifier (catalog name, SU(2) highest weight ``n``,
        torus character tuple, or a pair of component keys for products).
    dim : int
        Dimension of the representation space.
    conj_key : hashable
        Key of the conjugate representation.
    name, conj_name : str
        Human-readable names; not part of equality.
    """

    key: Hashable
    dim: int
    conj_key: Hashable
    name: str = field(default="", compare=False)
    conj_name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError(f"irrep dimension must be a positive integer, got {self.dim!r}")
        if not self.name:
            object.__setattr__(self, "name", str(self.key))
        if not self.conj_name:
            object.__setattr__(self, "conj_name", str(self.conj_key))

    def conjugate(self) -> "IrrepLabel":
        return IrrepLabel(self.conj_key, self.dim, self.key, self.conj_name, self.name)

    @property
    def is_self_conjugate(self) -> bool:
        return self.key == self.conj_key

    def __str__(self) -> str:
        return self.name
