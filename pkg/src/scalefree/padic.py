"""Bounded-precision p-adic numbers, the Monna embedding and ultrametric ball trees.

A nonzero value is stored as ``p**r * u`` where ``u`` is a p-adic unit known
to ``precision`` base-p digits.  Digits are little-endian (``digits[0]`` is the
coefficient of ``p**0`` in the unit) and trailing zeros are dropped, so
``digits[0] != 0`` and ``len(digits) <= precision``.  Zero is the sentinel
``r = inf`` with no digits.

Arithmetic truncates to the digits both operands actually know; nothing is
rounded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "INF",
    "DEFAULT_PRECISION",
    "PAdicNumber",
    "TreeNode",
    "UltrametricTree",
    "PrimeMismatchError",
    "padic_from_digits",
    "padic_add",
    "padic_mul",
    "padic_neg",
    "padic_sub",
    "padic_abs",
    "monna_map",
    "build_ball_tree",
    "is_prime",
]

INF = math.inf
DEFAULT_PRECISION = 32


class PrimeMismatchError(ValueError):
    """Raised when values over different primes are combined."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p must be a prime integer, got {p!r}")


def _to_digits(u: int, p: int, n: int) -> tuple[int, ...]:
    """Base-p digits of ``u mod p**n``, little-endian, trailing zeros stripped."""
    out = []
    for _ in range(n):
        if u == 0:
            break
        u, d = divmod(u, p)
        out.append(d)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _from_digits(digits: Sequence[int], p: int) -> int:
    u = 0
    for d in reversed(digits):
        u = u * p + d
    return u


@dataclass(frozen=True)
class PAdicNumber:
    """A p-adic number ``p**r * (d0 + d1 p + d2 p**2 + ...)``.

    Instances are expected in canonical form; use :func:`padic_from_digits`,
    :meth:`from_int` or :meth:`from_fraction` to build one from raw data.
    """

    p: int
    r: float | int
    digits: tuple[int, ...]
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        _check_prime(self.p)
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if self.r == INF:
            if self.digits:
                raise ValueError("zero must have an empty digit sequence")
            return
        if not isinstance(self.r, int):
            raise ValueError(f"valuation must be an integer or INF, got {self.r!r}")
        if not self.digits or self.digits[0] == 0:
            raise ValueError("nonzero canonical form needs digits[0] != 0")
        if self.digits[-1] == 0:
            raise ValueError("canonical digits carry no trailing zeros")
        if len(self.digits) > self.precision:
            raise ValueError("more digits than precision")
        for d in self.digits:
            if not 0 <= d < self.p:
                raise ValueError(f"digit {d} out of range [0, {self.p})")

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, p: int, precision: int = DEFAULT_PRECISION) -> "PAdicNumber":
        return cls(p, INF, (), precision)

    @classmethod
    def from_int(cls, n: int, p: int, precision: int = DEFAULT_PRECISION) -> "PAdicNumber":
        """Embed an integer (negative values get their infinite p-1 tail, truncated)."""
        _check_prime(p)
        if n == 0:
            return cls.zero(p, precision)
        r = 0
        while n % p == 0:
            n //= p
            r += 1
        return cls(p, r, _to_digits(n % p**precision, p, precision), precision)

    @classmethod
    def from_fraction(cls, q, p: int, precision: int = DEFAULT_PRECISION) -> "PAdicNumber":
        """Embed a rational number; the unit part of the denominator is inverted mod p**precision."""
        _check_prime(p)
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, precision)
        num, den = q.numerator, q.denominator
        r = 0
        while num % p == 0:
            num //= p
            r += 1
        while den % p == 0:
            den //= p
            r -= 1
        mod = p**precision
        u = (num * pow(den, -1, mod)) % mod
        return cls(p, r, _to_digits(u, p, precision), precision)

    # views ----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.r == INF

    @property
    def unit(self) -> int:
        """Integer representative of the unit part, in ``[0, p**precision)``."""
        return _from_digits(self.digits, self.p)

    @property
    def absolute_precision(self) -> float | int:
        """Exponent ``k`` such that the value is known modulo ``p**k``."""
        return INF if self.is_zero else self.r + self.precision

    def to_fraction(self) -> Fraction:
        """The truncated value ``p**r * unit`` as an exact rational."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.p) ** self.r * self.unit

    def digit_at(self, k: int) -> int:
        """Coefficient of ``p**k`` in the truncated expansion."""
        if self.is_zero or k < self.r:
            return 0
        i = k - self.r
        return self.digits[i] if i < len(self.digits) else 0

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PAdicNumber(p={self.p}, 0)"
        return f"PAdicNumber(p={self.p}, r={self.r}, digits={list(self.digits)})"

    def __add__(self, other):
        return padic_add(self, other)

    def __sub__(self, other):
        return padic_sub(self, other)

    def __mul__(self, other):
        return padic_mul(self, other)

    def __neg__(self):
        return padic_neg(self)

    def __abs__(self):
        return padic_abs(self)


def padic_from_digits(p: int, r: int, digits: Sequence[int],
                      precision: int = DEFAULT_PRECISION) -> PAdicNumber:
    """Canonicalise ``p**r * sum(digits[i] p**i)``.

    Leading zero digits move into the valuation, trailing zeros are dropped and
    an all-zero sequence gives the zero sentinel.

    >>> padic_from_digits(3, 0, [0, 1])
    PAdicNumber(p=3, r=1, digits=[1])
    """
    _check_prime(p)
    digits = [int(d) for d in digits]
    for d in digits:
        if not 0 <= d < p:
            raise ValueError(f"digit {d} out of range [0, {p})")
    lead = 0
    while lead < len(digits) and digits[lead] == 0:
        lead += 1
    if lead == len(digits):
        return PAdicNumber.zero(p, precision)
    body = digits[lead:lead + precision]
    while body[-1] == 0:
        body.pop()
    return PAdicNumber(p, r + lead, tuple(body), precision)


def _same_prime(a: PAdicNumber, b: PAdicNumber) -> None:
    if a.p != b.p:
        raise PrimeMismatchError(f"cannot combine {a.p}-adic and {b.p}-adic values")


def _canonical(p: int, m: int, s: int, abs_prec, precision: int) -> PAdicNumber:
    # value = p**m * s, known modulo p**abs_prec
    if abs_prec != INF:
        s %= p ** (abs_prec - m)
    if s == 0:
        return PAdicNumber.zero(p, precision)
    v = 0
    while s % p == 0:
        s //= p
        v += 1
    r = m + v
    rel = precision if abs_prec == INF else min(precision, abs_prec - r)
    return PAdicNumber(p, r, _to_digits(s % p**rel, p, rel), precision)


def padic_add(a: PAdicNumber, b: PAdicNumber) -> PAdicNumber:
    _same_prime(a, b)
    precision = min(a.precision, b.precision)
    if a.is_zero or b.is_zero:
        x = b if a.is_zero else a
        if x.is_zero:
            return PAdicNumber.zero(x.p, precision)
        return _canonical(x.p, x.r, x.unit, x.absolute_precision, precision)
    m = min(a.r, b.r)
    s = a.unit * a.p ** (a.r - m) + b.unit * b.p ** (b.r - m)
    abs_prec = min(a.absolute_precision, b.absolute_precision)
    return _canonical(a.p, m, s, abs_prec, precision)


def padic_neg(a: PAdicNumber) -> PAdicNumber:
    if a.is_zero:
        return a
    mod = a.p**a.precision
    return PAdicNumber(a.p, a.r, _to_digits((-a.unit) % mod, a.p, a.precision), a.precision)


def padic_sub(a: PAdicNumber, b: PAdicNumber) -> PAdicNumber:
    return padic_add(a, padic_neg(b))


def padic_mul(a: PAdicNumber, b: PAdicNumber) -> PAdicNumber:
    _same_prime(a, b)
    precision = min(a.precision, b.precision)
    if a.is_zero or b.is_zero:
        return PAdicNumber.zero(a.p, precision)
    u = (a.unit * b.unit) % a.p**precision
    return PAdicNumber(a.p, a.r + b.r, _to_digits(u, a.p, precision), precision)


def padic_abs(a: PAdicNumber) -> Fraction:
    """``|a|_p = p**(-r)`` as an exact rational; zero maps to 0."""
    if a.is_zero:
        return Fraction(0)
    return Fraction(a.p) ** (-a.r)


def monna_map(a: PAdicNumber, exact: bool = False):
    """Monna image ``p**(-r) * (1 + sum_{i>=1} a_i p**(-2i))``.

    The formula is stated for normal-form values ``p**r (1 + a_1 p + ...)``,
    i.e. leading digit 1.  A unit with leading digit ``d0 != 1`` is first
    written as ``d0 * u'`` with ``u' = u / d0`` (exact division mod
    ``p**precision``, so ``u'`` has leading digit 1) and its image is ``d0``
    times the image of ``u'``.  This keeps the map injective on all canonical
    values.

    Returns a float, or a :class:`~fractions.Fraction` when ``exact`` is true.
    """
    if a.is_zero:
        raise ValueError("zero has no Monna image")
    p = a.p
    d0 = a.digits[0]
    if d0 == 1:
        tail = a.digits
    else:
        mod = p**a.precision
        tail = _to_digits((a.unit * pow(d0, -1, mod)) % mod, p, a.precision)
    total = Fraction(1)
    scale = Fraction(1, p * p)
    weight = scale
    for d in tail[1:]:
        if d:
            total += d * weight
        weight *= scale
    value = d0 * Fraction(p) ** (-a.r) * total
    return value if exact else float(value)


# ---------------------------------------------------------------------------
# ultrametric ball tree
# ---------------------------------------------------------------------------

@dataclass
class TreeNode:
    """A clopen ball: every point whose expansion starts with ``prefix``.

    ``prefix`` holds digits for absolute positions ``offset, offset + 1, ...``
    of the owning tree, so the ball radius is ``p**-(offset + len(prefix))``.
    """

    prefix: tuple[int, ...]
    radius_exp: int
    p: int
    children: list["TreeNode"] = field(default_factory=list)
    points: list[PAdicNumber] = field(default_factory=list)

    @property
    def radius(self) -> Fraction:
        return Fraction(self.p) ** (-self.radius_exp)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def multiplicity(self) -> int:
        return len(self.points)

    def leaves(self):
        if self.is_leaf:
            yield self
        for c in self.children:
            yield from c.leaves()

    def members(self) -> list[PAdicNumber]:
        return [pt for leaf in self.leaves() for pt in leaf.points]

    def to_dict(self) -> dict:
        d = {"prefix": list(self.prefix), "radius_exp": self.radius_exp,
             "children": [c.to_dict() for c in self.children]}
        if self.is_leaf:
            d["multiplicity"] = self.multiplicity
        return d


@dataclass
class UltrametricTree:
    p: int
    offset: int
    root: TreeNode
    window: int  # number of digit positions compared

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[TreeNode]:
        return list(self.root.leaves())

    def key(self, x: PAdicNumber) -> tuple[int, ...]:
        return tuple(x.digit_at(self.offset + i) for i in range(self.window))

    def leaf_of(self, x: PAdicNumber) -> TreeNode:
        k = self.key(x)
        node = self.root
        while not node.is_leaf:
            for c in node.children:
                if k[:len(c.prefix)] == c.prefix:
                    node = c
                    break
            else:
                raise KeyError(f"{x!r} is not a member of this tree")
        if node.prefix != k:
            raise KeyError(f"{x!r} is not a member of this tree")
        return node

    def lca(self, a: PAdicNumber, b: PAdicNumber) -> TreeNode:
        ka, kb = self.key(a), self.key(b)
        node = self.root
        while True:
            nxt = None
            for c in node.children:
                n = len(c.prefix)
                if ka[:n] == c.prefix and kb[:n] == c.prefix:
                    nxt = c
                    break
            if nxt is None:
                return node
            node = nxt

    def distance(self, a: PAdicNumber, b: PAdicNumber) -> Fraction:
        """Tree distance: radius of the lowest common ball, 0 for a shared leaf."""
        node = self.lca(a, b)
        return Fraction(0) if node.is_leaf else node.radius

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.root.to_dict(), **kwargs)

    def to_dot(self) -> str:
        lines = ["digraph ultrametric {"]
        ids: dict[int, str] = {}
        for i, node in enumerate(self.nodes()):
            ids[id(node)] = f"n{i}"
            label = ",".join(str(d) for d in node.prefix)
            if node.is_leaf and node.multiplicity > 1:
                label += f" (x{node.multiplicity})"
            lines.append(f'  n{i} [label="{label}"];')
        for node in self.nodes():
            for c in node.children:
                lines.append(f'  {ids[id(node)]} -> {ids[id(c)]} [label="{self.p}^{-c.radius_exp}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_ball_tree(points: Iterable[PAdicNumber]) -> UltrametricTree:
    """Build the compressed prefix tree of clopen balls containing ``points``.

    Points are compared on the digit window every one of them knows, starting
    at the smallest valuation present.  Internal nodes exist only where balls
    split, so the root is the smallest ball containing every point; identical
    points share a leaf whose ``points`` list records the multiplicity.
    """
    pts = list(points)
    if not pts:
        raise ValueError("need at least one point")
    p = pts[0].p
    for x in pts:
        if x.p != p:
            raise PrimeMismatchError("all points must share one prime")
    precs = {x.precision for x in pts}
    if len(precs) != 1:
        raise ValueError("all points must share one precision")
    nonzero = [x for x in pts if not x.is_zero]
    if nonzero:
        offset = min(x.r for x in nonzero)
        top = min(x.absolute_precision for x in nonzero)
    else:
        offset, top = 0, precs.pop()
    window = top - offset

    keyed: dict[tuple[int, ...], list[PAdicNumber]] = {}
    for x in pts:
        k = tuple(x.digit_at(offset + i) for i in range(window))
        keyed.setdefault(k, []).append(x)

    def grow(keys: list[tuple[int, ...]], depth: int) -> TreeNode:
        if len(keys) == 1:
            k = keys[0]
            return TreeNode(k, offset + window, p, points=keyed[k])
        # descend while every key agrees
        while len({k[depth] for k in keys}) == 1:
            depth += 1
        node = TreeNode(keys[0][:depth], offset + depth, p)
        groups: dict[int, list] = {}
        for k in keys:
            groups.setdefault(k[depth], []).append(k)
        node.children = [grow(groups[d], depth + 1) for d in sorted(groups)]
        return node

    root = grow(sorted(keyed), 0)
    return UltrametricTree(p, offset, root, window)
