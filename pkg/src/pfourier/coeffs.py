"""Trigonometric polynomials stored as Fourier-coefficient bundles."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from ._numeric import complex_sum, matrix_sum, ordered_map
from .duals import CompactGroup, FiniteGroup, IrrepLabel, Product, parse_group
from .errors import DescriptorError, DomainError, UnsupportedError
from .matnorm import singular_values


def _sorted_entries(group: CompactGroup, entries: Mapping[IrrepLabel, np.ndarray]) -> dict:
    for lab in entries:
        group.check_label(lab)
    out = {}
    for lab in sorted(entries, key=group.sort_key):
        m = np.array(entries[lab], dtype=complex)
        if m.ndim == 0:
            m = m.reshape(1, 1)
        if m.shape != (lab.dim, lab.dim):
            raise DomainError(f"coefficient of {lab} has shape {m.shape}, expected {(lab.dim, lab.dim)}")
        m.setflags(write=False)
        out[lab] = m
    return out


@dataclass(frozen=True, eq=False)
class CoefficientBundle:
    """Finitely supported family ``pi -> u^(pi)`` of ``d_pi x d_pi`` matrices.

    Entries are stored in canonical dual order.  The represented function is
    ``u(s) = sum_pi d_pi Tr(u^(pi) pi(s))``.
    """

    group: CompactGroup
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", _sorted_entries(self.group, self.entries))
        object.__setattr__(self, "_svals", {})

    def singular_values(self, lab: IrrepLabel) -> np.ndarray:
        """Singular values of the block at ``lab`` (cached; blocks are immutable)."""
        hit = self._svals.get(lab)
        if hit is None:
            hit = singular_values(self[lab])
            self._svals[lab] = hit
        return hit

    @property
    def support(self) -> list[IrrepLabel]:
        return list(self.entries)

    def __getitem__(self, lab: IrrepLabel) -> np.ndarray:
        if lab in self.entries:
            return self.entries[lab]
        return np.zeros((lab.dim, lab.dim), dtype=complex)

    def items(self):
        return self.entries.items()

    def __add__(self, other: "CoefficientBundle") -> "CoefficientBundle":
        _same_group(self, other)
        keys = set(self.entries) | set(other.entries)
        return CoefficientBundle(self.group, {k: self[k] + other[k] for k in keys})

    def scale(self, c: complex) -> "CoefficientBundle":
        return CoefficientBundle(self.group, {k: c * v for k, v in self.entries.items()})

    def is_central(self, tol: float = 0.0) -> bool:
        for lab, m in self.entries.items():
            c = m[0, 0]
            if np.abs(m - c * np.eye(lab.dim)).max() > tol:
                return False
        return True

    def allclose(self, other: "CoefficientBundle", atol: float = 1e-12) -> bool:
        _same_group(self, other)
        keys = set(self.entries) | set(other.entries)
        return all(np.abs(self[k] - other[k]).max() <= atol for k in keys)

    def max_diff(self, other: "CoefficientBundle") -> float:
        keys = set(self.entries) | set(other.entries)
        return max((float(np.abs(self[k] - other[k]).max()) for k in keys), default=0.0)

    def pruned(self, tol: float = 0.0) -> "CoefficientBundle":
        """Drop blocks whose entries are all at most ``tol`` in modulus."""
        return CoefficientBundle(self.group, {k: v for k, v in self.entries.items() if np.abs(v).max() > tol})

    # ----- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "group": self.group.descriptor,
            "entries": [
                {"label": lab.name, "matrix": [[float(z.real), float(z.imag)] for z in m.ravel()]}
                for lab, m in self.entries.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping, group: CompactGroup | None = None) -> "CoefficientBundle":
        try:
            g = group if group is not None else parse_group(data["group"])
            entries = {}
            for e in data["entries"]:
                lab = g.label(str(e["label"]))
                flat = np.array([complex(re, im) for re, im in e["matrix"]], dtype=complex)
                if flat.size != lab.dim * lab.dim:
                    raise DomainError(f"matrix for {lab} has {flat.size} entries, expected {lab.dim ** 2}")
                if lab in entries:
                    raise DomainError(f"duplicate entry for {lab}")
                entries[lab] = flat.reshape(lab.dim, lab.dim)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DescriptorError(f"malformed bundle JSON: {exc}") from None
        return cls(g, entries)

    @classmethod
    def loads(cls, text: str) -> "CoefficientBundle":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DescriptorError(f"bundle is not valid JSON: {exc}") from None
        return cls.from_json(data)


@dataclass(frozen=True, eq=False)
class DualFunctional:
    """A family ``(T_pi)`` of matrices pairing with bundles.

    ``tail`` optionally produces ``T_pi`` for labels without an explicit
    entry, e.g. ``D_{pi_n}`` on SU(2) for every ``n``.
    """

    group: CompactGroup
    entries: dict = field(default_factory=dict)
    tail: Callable[[IrrepLabel], np.ndarray] | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", _sorted_entries(self.group, self.entries))

    def block(self, lab: IrrepLabel) -> np.ndarray:
        if lab in self.entries:
            return self.entries[lab]
        if self.tail is not None:
            m = np.asarray(self.tail(lab), dtype=complex)
            if m.shape != (lab.dim, lab.dim):
                raise DomainError(f"tail rule gave shape {m.shape} for {lab}")
            return m
        raise DomainError(f"functional has no entry for {lab}")

    def has(self, lab: IrrepLabel) -> bool:
        return lab in self.entries or self.tail is not None


def _same_group(u, v) -> None:
    if u.group != v.group:
        raise DomainError(f"group mismatch: {u.group.descriptor} vs {v.group.descriptor}")


def _finite_elements(group: CompactGroup) -> list:
    if not group.is_finite:
        raise UnsupportedError(f"transform needs a finite group; {group.descriptor} is not finite")
    return group.elements()


def _irrep_stack(group: CompactGroup, lab: IrrepLabel, elems: list) -> np.ndarray:
    if isinstance(group, FiniteGroup):
        return group.irrep_all(lab)
    return np.array([group.irrep(lab, s) for s in elems])


def transform(group: CompactGroup, f: Callable[[Any], complex] | np.ndarray) -> CoefficientBundle:
    """Fourier coefficients ``u^(pi) = (1/|G|) sum_s f(s) pi(s^-1)`` on a finite group.

    ``f`` may be a callable on elements or an array of values in
    ``group.elements()`` order.  Zero blocks are dropped.
    """
    elems = _finite_elements(group)
    vals = np.array([f(s) for s in elems] if callable(f) else f, dtype=complex)
    if vals.shape != (len(elems),):
        raise DomainError(f"expected {len(elems)} function values, got shape {vals.shape}")
    out = {}
    for lab in group.dual():
        mats = _irrep_stack(group, lab, elems)
        # pi(s^-1) = pi(s)^*
        blocks = np.conj(np.swapaxes(mats, 1, 2)) * vals[:, None, None]
        m = matrix_sum(list(blocks)) / len(elems)
        if np.abs(m).max() > 0:
            out[lab] = m
    return CoefficientBundle(group, out)


def evaluate(u: CoefficientBundle, s) -> complex:
    """``u(s) = sum_pi d_pi Tr(u^(pi) pi(s))``."""
    terms = [lab.dim * np.trace(m @ u.group.irrep(lab, s)) for lab, m in u.entries.items()]
    return complex_sum(terms)


def values(u: CoefficientBundle) -> np.ndarray:
    """Values of ``u`` at every element of a finite group."""
    return np.array([evaluate(u, s) for s in _finite_elements(u.group)])


def multiply(u: CoefficientBundle, v: CoefficientBundle) -> CoefficientBundle:
    """Pointwise product computed in coefficient space through fusion intertwiners.

    ``(uv)^(sigma) = sum_{pi, pi'} (d_pi d_pi' / d_sigma) sum_i U_i^* (u^(pi) (x) v^(pi')) U_i``.
    Contributions are reduced in canonical order with exact summation, so
    the result does not depend on the thread count.
    """
    _same_group(u, v)
    g = u.group
    pairs = [(a, ma, b, mb) for a, ma in u.entries.items() for b, mb in v.entries.items()]

    def contrib(pair):
        a, ma, b, mb = pair
        k = np.kron(ma, mb)
        out = []
        for c in g.fusion(a, b):
            for U in g.intertwiners(a, b, c):
                out.append((c, (a.dim * b.dim / c.dim) * (U.conj().T @ k @ U)))
        return out

    acc: dict[IrrepLabel, list[np.ndarray]] = {}
    for part in ordered_map(contrib, pairs):
        for c, m in part:
            acc.setdefault(c, []).append(m)
    return CoefficientBundle(g, {c: matrix_sum(ms) for c, ms in acc.items()})


def central_project(u: CoefficientBundle) -> CoefficientBundle:
    """Replace each block by ``(Tr u^(pi) / d_pi) I``, i.e. average over conjugation."""
    return CoefficientBundle(
        u.group, {lab: (np.trace(m) / lab.dim) * np.eye(lab.dim) for lab, m in u.entries.items()}
    )


def quotient_average(u: CoefficientBundle, normal) -> CoefficientBundle:
    """``T_N u(s) = (1/|N|) sum_n u(s n)`` for a normal subgroup ``N``.

    Each block becomes ``u^(pi) P_pi`` with ``P_pi`` the average of ``pi``
    over ``N``, the projection onto ``N``-fixed vectors.
    """
    g = u.group
    sub = g.subgroup(normal) if isinstance(normal, str) else normal
    if sub.parent != g:
        raise DomainError("subgroup belongs to a different group")
    if not sub.model.is_finite:
        raise UnsupportedError("quotient averaging needs a finite normal subgroup")
    nel = [sub.embed(h) for h in sub.model.elements()]
    if isinstance(g, FiniteGroup):
        if not g.is_normal(nel):
            raise DomainError(f"subgroup {sub.kind} is not normal in {g.descriptor}")
    elif not (isinstance(g, Product) and sub.kind.startswith("factor:")):
        raise UnsupportedError("quotient averaging is supported on finite catalog groups and product factors")
    out = {}
    for lab, m in u.entries.items():
        p = matrix_sum([g.irrep(lab, n) for n in nel]) / len(nel)
        out[lab] = m @ p
    return CoefficientBundle(g, out)


def dual_pair(u: CoefficientBundle, T: DualFunctional) -> complex:
    """``<u, T> = sum_pi d_pi Tr(u^(pi) T_pi)``."""
    _same_group(u, T)
    terms = [lab.dim * np.trace(m @ T.block(lab)) for lab, m in u.entries.items()]
    return complex_sum(terms)


def evaluation_functional(group: CompactGroup, s, labels=None, tail: bool = True) -> DualFunctional:
    """The point evaluation ``lambda(s) = (pi(s))_pi``."""
    labs = group.dual() if labels is None else labels
    rule = (lambda lab: group.irrep(lab, s)) if tail else None
    return DualFunctional(group, {lab: group.irrep(lab, s) for lab in labs}, rule)


def indicator_identity(group: CompactGroup) -> CoefficientBundle:
    """Coefficients of the point mass ``1_e`` on a finite group: ``(1/|G|) I`` in every block."""
    if not group.is_finite:
        raise UnsupportedError(f"{group.descriptor} is not finite")
    return CoefficientBundle(group, {lab: np.eye(lab.dim) / group.order for lab in group.dual()})


def character_bundle(group: CompactGroup, lab: IrrepLabel, c: complex = 1.0) -> CoefficientBundle:
    """Coefficients of ``c * chi_pi``: the single block ``(c / d_pi) I``."""
    return CoefficientBundle(group, {lab: (c / lab.dim) * np.eye(lab.dim)})


def random_bundle(group: CompactGroup, rng: np.random.Generator, labels=None, central: bool = False,
                  density: float = 1.0) -> CoefficientBundle:
    """A bundle with complex Gaussian blocks on ``labels`` (default: the whole truncated dual).

    With ``density < 1`` each block is kept independently with that
    probability (at least one block always survives).
    """
    labs = list(group.dual() if labels is None else labels)
    out = {}
    for lab in labs:
        keep = rng.random() < density
        if central:
            z = complex(rng.standard_normal(), rng.standard_normal())
            m = z * np.eye(lab.dim)
        else:
            m = rng.standard_normal((lab.dim, lab.dim)) + 1j * rng.standard_normal((lab.dim, lab.dim))
        if keep:
            out[lab] = m
    if not out:
        out[labs[0]] = np.eye(labs[0].dim, dtype=complex)
    return CoefficientBundle(group, out)
