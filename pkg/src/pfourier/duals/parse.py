"""Parsing of group descriptors such as ``S3``, ``Z/8``, ``SU2:N=12``, ``T:k=1`` and ``prod(S3,Z/2)``."""

from __future__ import annotations

from ..errors import DescriptorError, DomainError
from .base import CompactGroup
from .finite import catalog
from .lie import SU2, Torus
from .product import Product


def _options(body: str, allowed: set[str], desc: str) -> dict[str, int]:
    out = {}
    if not body:
        return out
    for part in body.split(","):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise DescriptorError(f"bad option {part!r} in {desc!r}; allowed: {sorted(allowed)}")
        try:
            out[key] = int(val)
        except ValueError:
            raise DescriptorError(f"option {key} in {desc!r} must be an integer") from None
    return out


def _split_top(body: str, desc: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1:]
    raise DescriptorError(f"product descriptor {desc!r} needs two factors")


def parse_group(desc: str) -> CompactGroup:
    """Build a group model from a descriptor string.

    Examples
    --------
    >>> parse_group("SU2:N=4").dual()[-1].dim
    5
    """
    if not isinstance(desc, str):
        raise DescriptorError(f"group descriptor must be a string, got {type(desc).__name__}")
    s = desc.strip().replace(" ", "")
    try:
        if s.startswith("prod(") and s.endswith(")"):
            left, right = _split_top(s[5:-1], desc)
            return Product(parse_group(left), parse_group(right))
        if s == "SU2" or s.startswith("SU2:"):
            opts = _options(s[4:], {"N"}, desc)
            return SU2(opts.get("N", 12))
        if s == "T" or s.startswith("T:"):
            opts = _options(s[2:], {"k", "N"}, desc)
            return Torus(opts.get("k", 1), opts.get("N", 10))
        return catalog(s)
    except DomainError as exc:
        raise DescriptorError(f"invalid group descriptor {desc!r}: {exc}") from None
