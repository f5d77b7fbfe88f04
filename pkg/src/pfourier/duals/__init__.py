"""Concrete compact groups, their duals, fusion rules and branching."""

from __future__ import annotations

from typing import Any

import numpy as np

from ..errors import UnsupportedError
from .base import CompactGroup, Subgroup
from .finite import FiniteGroup, catalog
from .labels import IrrepLabel
from .lie import SU2, Torus
from .parse import parse_group
from .product import Product, product_group


def _group(group) -> CompactGroup:
    if isinstance(group, str):
        return parse_group(group)
    if not isinstance(group, CompactGroup):
        raise UnsupportedError(f"unsupported group kind {type(group).__name__}")
    return group


def enumerate_dual(group, limit: int | None = None) -> list[IrrepLabel]:
    """Canonical enumeration of the dual object.

    Finite groups always return the whole dual. For infinite groups the
    first ``min(limit, len(group.dual()))`` labels of the truncated dual are
    returned (all of them when ``limit`` is None).
    """
    g = _group(group)
    if limit is not None and limit < 1:
        raise ValueError("limit must be at least 1")
    labs = g.dual()
    if g.is_finite or limit is None:
        return labs
    return labs[:limit]


def irrep_matrix(group, label: IrrepLabel, element: Any) -> np.ndarray:
    return _group(group).irrep(label, element)


def fusion_multiplicities(group, pi: IrrepLabel, pi2: IrrepLabel) -> dict[IrrepLabel, int]:
    return _group(group).fusion(pi, pi2)


def intertwiners(group, pi: IrrepLabel, pi2: IrrepLabel, sigma: IrrepLabel) -> list[np.ndarray]:
    return list(_group(group).intertwiners(pi, pi2, sigma))


def branching(group, subgroup, pi: IrrepLabel) -> dict[IrrepLabel, int]:
    g = _group(group)
    sub = g.subgroup(subgroup) if isinstance(subgroup, str) else subgroup
    return g.branching(sub, pi)


__all__ = [
    "CompactGroup", "Subgroup", "FiniteGroup", "SU2", "Torus", "Product", "IrrepLabel",
    "catalog", "parse_group", "product_group", "enumerate_dual", "irrep_matrix",
    "fusion_multiplicities", "intertwiners", "branching",
]
