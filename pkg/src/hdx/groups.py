"""Finite groups with elements addressed by canonical integer indices.

Every group enumerates its elements in a fixed, platform-independent order so
that ``0 .. order-1`` can be used directly as vertex ids by the graph and
complex builders.  Group arithmetic is exposed both element-wise (``mul``,
``inv``) and as whole-group translation tables (``left_table``) for the
vectorised builders.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InfeasibleError, ParameterError, SizeError
from .seeding import as_rng

DEFAULT_ORDER_CAP = 2_000_000

__all__ = [
    "FiniteGroup",
    "CyclicGroup",
    "BooleanVectorGroup",
    "SpecialLinearGroup",
    "ProductGroup",
    "GeneratorSet",
    "Enumeration",
    "make_group",
    "product_group",
    "group_from_descriptor",
    "enumerate_and_index",
    "sample_symmetric_generators",
]


def _order_cap() -> int:
    return int(os.environ.get("HDX_GROUP_CAP", DEFAULT_ORDER_CAP))


class FiniteGroup:
    """Immutable finite group; subclasses fill in the arithmetic."""

    kind: str = ""
    order: int = 0
    identity: int = 0

    # -- subclass hooks -------------------------------------------------
    def element(self, i: int):
        raise NotImplementedError

    def index(self, element) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def label(self, i: int) -> str:
        return str(self.element(i))

    def params(self) -> dict:
        raise NotImplementedError

    def generators(self) -> list[int]:
        """A generating set (used to certify translation-transitivity)."""
        raise NotImplementedError

    # -- derived --------------------------------------------------------
    def inv(self, a: int) -> int:
        return int(self.inverse_table()[a])

    def elements(self) -> range:
        return range(self.order)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def left_table(self, s: int) -> np.ndarray:
        """``out[g] = s * g`` for every element index ``g``."""
        return np.fromiter((self.mul(s, g) for g in range(self.order)), dtype=np.int64, count=self.order)

    def right_table(self, h: int) -> np.ndarray:
        """``out[g] = g * h``; right translations are the complex automorphisms."""
        return np.fromiter((self.mul(g, h) for g in range(self.order)), dtype=np.int64, count=self.order)

    @functools.cached_property
    def _inverse(self) -> np.ndarray:
        out = np.full(self.order, -1, dtype=np.int64)
        for g in range(self.order):
            if out[g] >= 0:
                continue
            for h in range(self.order):
                if self.mul(g, h) == self.identity:
                    out[g] = h
                    out[h] = g
                    break
        return out

    def inverse_table(self) -> np.ndarray:
        return self._inverse

    @functools.cached_property
    def _labels(self) -> list[str]:
        return [self.label(i) for i in range(self.order)]

    def labels(self) -> list[str]:
        return list(self._labels)

    @functools.cached_property
    def _label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self._labels)}

    def index_of_label(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise ParameterError(f"{label!r} is not an element label of {self!r}") from None

    def is_involution(self, g: int) -> bool:
        return g != self.identity and self.mul(g, g) == self.identity

    @functools.cached_property
    def is_abelian(self) -> bool:
        gens = self.generators()
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({inner})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(repr(self.descriptor()))


class CyclicGroup(FiniteGroup):
    """Z_m written additively."""

    kind = "cyclic"

    def __init__(self, m: int) -> None:
        m = int(m)
        if m < 2:
            raise ParameterError(f"cyclic group needs m >= 2, got {m}")
        self.m = m
        self.order = m
        self.identity = 0

    def params(self) -> dict:
        return {"m": self.m}

    def element(self, i: int) -> int:
        return int(i)

    def index(self, element) -> int:
        return int(element) % self.m

    def mul(self, a: int, b: int) -> int:
        return (int(a) + int(b)) % self.m

    def inverse_table(self) -> np.ndarray:
        return (-np.arange(self.m, dtype=np.int64)) % self.m

    def left_table(self, s: int) -> np.ndarray:
        return (np.arange(self.m, dtype=np.int64) + int(s)) % self.m

    right_table = left_table

    def generators(self) -> list[int]:
        return [1]


class BooleanVectorGroup(FiniteGroup):
    """F_2^t; element ``i`` is the bit string of ``i`` with the first bit most significant."""

    kind = "boolean-vector"

    def __init__(self, t: int) -> None:
        t = int(t)
        if t < 1:
            raise ParameterError(f"boolean-vector group needs t >= 1, got {t}")
        if 2**t > _order_cap():
            raise SizeError(f"F_2^{t} exceeds the group order cap {_order_cap()}")
        self.t = t
        self.order = 2**t
        self.identity = 0

    def params(self) -> dict:
        return {"t": self.t}

    def element(self, i: int) -> tuple[int, ...]:
        return tuple(int(b) for b in format(int(i), f"0{self.t}b"))

    def index(self, element) -> int:
        if isinstance(element, str):
            return int(element, 2)
        if isinstance(element, (int, np.integer)):
            return int(element)
        return int("".join(str(int(b) & 1) for b in element), 2)

    def label(self, i: int) -> str:
        return format(int(i), f"0{self.t}b")

    def mul(self, a: int, b: int) -> int:
        return int(a) ^ int(b)

    def inverse_table(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def left_table(self, s: int) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64) ^ int(s)

    right_table = left_table

    def generators(self) -> list[int]:
        return [1 << k for k in range(self.t)]


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


class SpecialLinearGroup(FiniteGroup):
    """SL(2, p), or PSL(2, p) = SL(2, p)/{+-I} when ``projective`` is set.

    Elements are 2x2 matrices ``(a, b, c, d)`` listed in lexicographic order;
    in the projective case each coset is represented by the lexicographically
    smaller of ``M`` and ``-M``.
    """

    kind = "special-linear"

    def __init__(self, p: int, projective: bool = False) -> None:
        p = int(p)
        if not _is_prime(p):
            raise ParameterError(f"special-linear group needs a prime p, got {p}")
        full = p * (p * p - 1)
        if full > _order_cap():
            raise SizeError(f"SL(2,{p}) has order {full} above the cap {_order_cap()}")
        self.p = p
        self.projective = bool(projective)
        r = np.arange(p)
        a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
        keep = (a * d - b * c) % p == 1
        mats = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1).astype(np.int64)
        if self.projective:
            neg = (-mats) % p
            keys, nkeys = self._keys(mats), self._keys(neg)
            mats = mats[keys <= nkeys]
        self._mats = mats
        self.order = len(mats)
        lookup = np.full(p**4, -1, dtype=np.int64)
        lookup[self._keys(mats)] = np.arange(self.order)
        if self.projective:
            lookup[self._keys((-mats) % p)] = np.arange(self.order)
        self._lookup = lookup
        self.identity = int(lookup[self._keys(np.array([[1, 0, 0, 1]]))[0]])

    def _keys(self, mats: np.ndarray) -> np.ndarray:
        p = self.p
        return ((mats[:, 0] * p + mats[:, 1]) * p + mats[:, 2]) * p + mats[:, 3]

    def params(self) -> dict:
        out: dict = {"p": self.p}
        if self.projective:
            out["projective"] = True
        return out

    def element(self, i: int) -> tuple[tuple[int, int], tuple[int, int]]:
        a, b, c, d = (int(x) for x in self._mats[i])
        return ((a, b), (c, d))

    def index(self, element) -> int:
        flat = np.asarray(element, dtype=np.int64).reshape(1, 4) % self.p
        out = int(self._lookup[self._keys(flat)[0]])
        if out < 0:
            raise ParameterError(f"{element!r} is not in {self!r}")
        return out

    def label(self, i: int) -> str:
        a, b, c, d = (int(x) for x in self._mats[i])
        return f"[{a},{b};{c},{d}]"

    def _product(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        p = self.p
        a = left[:, 0] * right[:, 0] + left[:, 1] * right[:, 2]
        b = left[:, 0] * right[:, 1] + left[:, 1] * right[:, 3]
        c = left[:, 2] * right[:, 0] + left[:, 3] * right[:, 2]
        d = left[:, 2] * right[:, 1] + left[:, 3] * right[:, 3]
        out = np.stack([a, b, c, d], axis=1) % p
        return self._lookup[self._keys(out)]

    def mul(self, a: int, b: int) -> int:
        return int(self._product(self._mats[[a]], self._mats[[b]])[0])

    def left_table(self, s: int) -> np.ndarray:
        left = np.broadcast_to(self._mats[s], self._mats.shape)
        return self._product(left, self._mats)

    def right_table(self, h: int) -> np.ndarray:
        right = np.broadcast_to(self._mats[h], self._mats.shape)
        return self._product(self._mats, right)

    @functools.cached_property
    def _inverse(self) -> np.ndarray:
        m = self._mats
        adj = np.stack([m[:, 3], -m[:, 1], -m[:, 2], m[:, 0]], axis=1) % self.p
        return self._lookup[self._keys(adj)]

    def generators(self) -> list[int]:
        return [self.index(((1, 1), (0, 1))), self.index(((1, 0), (1, 1)))]


class ProductGroup(FiniteGroup):
    """Direct product; element indices are mixed-radix with the last factor fastest."""

    kind = "product"

    def __init__(self, components: Sequence[FiniteGroup]) -> None:
        components = tuple(components)
        if not components:
            raise ParameterError("product of an empty list of groups")
        order = math.prod(g.order for g in components)
        if order > _order_cap():
            raise SizeError(f"product order {order} exceeds the cap {_order_cap()}")
        self.components = components
        self.order = order
        strides = []
        acc = 1
        for g in reversed(components):
            strides.append(acc)
            acc *= g.order
        self.strides = tuple(reversed(strides))
        self.identity = self.pack([g.identity for g in components])

    def params(self) -> dict:
        return {"components": [g.descriptor() for g in self.components]}

    def pack(self, digits: Iterable[int]) -> int:
        return int(sum(int(x) * s for x, s in zip(digits, self.strides)))

    def unpack(self, i: int) -> tuple[int, ...]:
        i = int(i)
        return tuple((i // s) % g.order for s, g in zip(self.strides, self.components))

    @functools.cached_property
    def digits(self) -> np.ndarray:
        """``digits[g, c]`` is the component-``c`` index of element ``g``."""
        idx = np.arange(self.order, dtype=np.int64)
        return np.stack(
            [(idx // s) % g.order for s, g in zip(self.strides, self.components)], axis=1
        )

    def element(self, i: int) -> tuple:
        return tuple(g.element(x) for g, x in zip(self.components, self.unpack(i)))

    def index(self, element) -> int:
        if len(element) != len(self.components):
            raise ParameterError(f"{element!r} does not have {len(self.components)} components")
        return self.pack(g.index(x) for g, x in zip(self.components, element))

    def label(self, i: int) -> str:
        parts = (g.label(x) for g, x in zip(self.components, self.unpack(i)))
        return "(" + ",".join(parts) + ")"

    def mul(self, a: int, b: int) -> int:
        return self.pack(
            g.mul(x, y) for g, x, y in zip(self.components, self.unpack(a), self.unpack(b))
        )

    def _combine(self, tables: list[np.ndarray]) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        for c, (tab, stride) in enumerate(zip(tables, self.strides)):
            out += tab[self.digits[:, c]] * stride
        return out

    def left_table(self, s: int) -> np.ndarray:
        return self._combine([g.left_table(x) for g, x in zip(self.components, self.unpack(s))])

    def right_table(self, h: int) -> np.ndarray:
        return self._combine([g.right_table(x) for g, x in zip(self.components, self.unpack(h))])

    @functools.cached_property
    def _inverse(self) -> np.ndarray:
        return self._combine([g.inverse_table() for g in self.components])

    def embed(self, c: int, x: int) -> int:
        """Index of the element equal to ``x`` in factor ``c`` and identity elsewhere."""
        digits = [g.identity for g in self.components]
        digits[c] = int(x)
        return self.pack(digits)

    def project(self, g: int, c: int) -> int:
        return self.unpack(g)[c]

    def generators(self) -> list[int]:
        return [self.embed(c, x) for c, g in enumerate(self.components) for x in g.generators()]


def make_group(kind: str, params: dict | None = None, **kwargs) -> FiniteGroup:
    """Build a group from its kind name and parameters.

    >>> make_group("cyclic", m=5).inv(2)
    3
    """
    p = dict(params or {})
    p.update(kwargs)
    try:
        if kind == "cyclic":
            return CyclicGroup(p["m"])
        if kind == "boolean-vector":
            return BooleanVectorGroup(p["t"])
        if kind == "special-linear":
            return SpecialLinearGroup(p["p"], projective=p.get("projective", False))
        if kind == "product":
            comps = [c if isinstance(c, FiniteGroup) else group_from_descriptor(c) for c in p["components"]]
            return ProductGroup(comps)
    except KeyError as exc:
        raise ParameterError(f"missing parameter {exc.args[0]!r} for group kind {kind!r}") from None
    raise ParameterError(f"unknown group kind {kind!r}")


def product_group(components: Sequence[FiniteGroup]) -> ProductGroup:
    return ProductGroup(components)


def group_from_descriptor(desc: dict) -> FiniteGroup:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ParameterError(f"bad group descriptor {desc!r}")
    return make_group(desc["kind"], desc.get("params", {}))


@dataclass(frozen=True)
class Enumeration:
    """Ordered element list of a group with the reverse lookup."""

    group: FiniteGroup
    elements: tuple

    def element_at(self, i: int):
        return self.elements[i]

    def index_of(self, element) -> int:
        return self.group.index(element)

    def __len__(self) -> int:
        return len(self.elements)


def enumerate_and_index(group: FiniteGroup, cap: int | None = None) -> Enumeration:
    cap = _order_cap() if cap is None else cap
    if group.order > cap:
        raise SizeError(f"group order {group.order} exceeds the enumeration cap {cap}")
    return Enumeration(group, tuple(group.element(i) for i in range(group.order)))


@dataclass(frozen=True)
class GeneratorSet:
    """Symmetric generator list ordered so that ``elements[i+K]`` inverts ``elements[i]``."""

    group: FiniteGroup
    elements: tuple[int, ...]
    half_size: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(int(x) for x in self.elements))
        k = self.half_size
        els = self.elements
        if k < 1 or len(els) != 2 * k:
            raise ParameterError(f"generator list of length {len(els)} does not match half size {k}")
        if len(set(els)) != len(els):
            raise ParameterError("generator elements must be distinct")
        inv = self.group.inverse_table()
        for i, g in enumerate(els):
            if g == self.group.identity:
                raise ParameterError("generator set contains the identity")
            if inv[g] == g:
                raise ParameterError(f"generator {self.group.label(g)} has order 2")
            if inv[g] != els[(i + k) % (2 * k)]:
                raise ParameterError(f"inverse of position {i} is not at position {(i + k) % (2 * k)}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def to_json(self) -> dict:
        return {"group": self.group.descriptor(), "elements": list(self.elements), "half_size": self.half_size}

    @classmethod
    def from_json(cls, data: dict) -> "GeneratorSet":
        return cls(group_from_descriptor(data["group"]), tuple(data["elements"]), int(data["half_size"]))


def sample_symmetric_generators(group: FiniteGroup, K: int, rng_seed=None) -> GeneratorSet:
    """Draw ``K`` uniform distinct non-involutions (no two mutually inverse), then append inverses."""
    if K < 1:
        raise ParameterError(f"K must be positive, got {K}")
    rng = as_rng(rng_seed)
    inv = group.inverse_table()
    idx = np.arange(group.order)
    candidates = idx[(idx != group.identity) & (inv != idx)]
    if len(candidates) // 2 < K:
        raise InfeasibleError(
            f"{group!r} has {len(candidates) // 2} inverse pairs of non-involutions, need {K}"
        )
    chosen: list[int] = []
    taken: set[int] = set()
    for pos in rng.permutation(len(candidates)):
        g = int(candidates[pos])
        if g in taken:
            continue
        chosen.append(g)
        taken.update((g, int(inv[g])))
        if len(chosen) == K:
            break
    return GeneratorSet(group, tuple(chosen) + tuple(int(inv[g]) for g in chosen), K)
