"""Small numeric helpers: order-independent sums, stable l^s norms, thread fan-out."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def exact_sum(values: Iterable[float]) -> float:
    return math.fsum(values)


def complex_sum(values: Iterable[complex]) -> complex:
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def matrix_sum(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Entrywise correctly rounded sum of equally shaped complex matrices.

    The result does not depend on the order of ``blocks``.
    """
    stack = np.asarray(blocks, dtype=complex)
    flat = stack.reshape(stack.shape[0], -1)
    re = [math.fsum(col) for col in flat.real.T]
    im = [math.fsum(col) for col in flat.imag.T]
    return (np.array(re) + 1j * np.array(im)).reshape(stack.shape[1:])


def lp_norm(values: np.ndarray, s: float) -> float:
    """(sum |v|^s)^(1/s), scaled to avoid overflow; s = inf gives the max."""
    a = np.abs(np.asarray(values, dtype=float)).ravel()
    if a.size == 0:
        return 0.0
    m = float(a.max())
    if m == 0.0:
        return 0.0
    if math.isinf(s):
        return m
    if s == 1:
        return math.fsum(a)
    return m * math.fsum((a / m) ** s) ** (1.0 / s)


def as_fraction(x) -> Fraction:
    """Exact rational form of a number or a string like '4/3'."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # decimal literals such as 0.25 or 0.99 keep their intended value
        return Fraction(repr(x))
    return Fraction(x)


def thread_count() -> int:
    raw = os.environ.get("PFOURIER_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def ordered_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map ``fn`` over ``items``, possibly in parallel, returning results in input order."""
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fit_exponent(n: np.ndarray, q: np.ndarray) -> float:
    """Least-squares slope of log q against log(n+1) over the top half of the range."""
    n = np.asarray(n, dtype=float)
    q = np.asarray(q, dtype=float)
    half = n >= n.max() / 2
    n, q = n[half], q[half]
    keep = q > 0
    if keep.sum() < 2:
        return float("nan")
    x = np.log(n[keep] + 1.0)
    y = np.log(q[keep])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
