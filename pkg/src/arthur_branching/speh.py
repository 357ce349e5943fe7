"""Speh representations, Arthur-type representations and their derivatives."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .core_symbols import (
    CuspidalSymbol,
    Multisegment,
    Segment,
    ShiftedCuspidal,
    SupportMultiset,
    as_exponent,
    truncate,
)

__all__ = [
    "SpehRep",
    "ArthurTypeRep",
    "ArthurParameter",
    "Positivity",
    "speh",
    "zelevinsky_data",
    "zelevinsky_multisegment",
    "langlands_data",
    "cuspidal_support",
    "level",
    "highest_derivative",
    "speh_right_derivative",
    "speh_left_derivative",
    "right_derivative_at_order",
    "left_derivative_at_order",
    "hook_multisegments",
    "support_positivity",
    "dualize",
    "arthur_parameter",
    "from_arthur_parameter",
]



@dataclass(frozen=True)
class SpehRep:
    """``nu^twist * u_rho(m, d)``, or the essentially Speh ``u~_rho(m, d, k)`` when ``k > 0``."""

    rho: CuspidalSymbol
    m: int
    d: int
    k: int = 0
    twist: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "twist", as_exponent(self.twist))
        if self.m < 1 or self.d < 1:
            raise ValueError("Speh parameters m, d must be positive, got m=%r d=%r" % (self.m, self.d))
        if self.k < 0:
            raise ValueError("extension k must be non-negative, got %r" % (self.k,))

    @property
    def dimension(self) -> int:
        return self.rho.rank * self.m * (self.d + self.k)

    @property
    def is_cuspidal(self) -> bool:
        return self.m == 1 and self.d == 1 and self.k == 0

    @property
    def is_tempered(self) -> bool:
        return self.d == 1 and self.k == 0

    def sort_key(self):
        return (self.rho.name, self.rho.rank, self.twist, self.m, self.d, self.k)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        extra = ""
        if self.twist:
            extra = ";%s" % self.twist
        if self.k:
            return "ut(%s,%d,%d,%d%s)" % (self.rho.name, self.m, self.d, self.k, extra)
        return "u(%s,%d,%d%s)" % (self.rho.name, self.m, self.d, extra)


def speh(rho: CuspidalSymbol, m: int, d: int) -> SpehRep:
    return SpehRep(rho, m, d)


class ArthurTypeRep:
    """A product of Speh representations, stored as an unordered multiset."""

    __slots__ = ("factors", "_hash")

    def __init__(self, factors: Iterable[SpehRep] = ()):
        factors = tuple(sorted(factors, key=SpehRep.sort_key))
        for f in factors:
            if f.k:
                raise ValueError("Arthur-type factors cannot be essentially Speh: %r" % (f,))
        self.factors: tuple[SpehRep, ...] = factors
        self._hash = hash(factors)

    def __reduce__(self):
        return (ArthurTypeRep, (self.factors,))

    @property
    def dimension(self) -> int:
        return sum(f.dimension for f in self.factors)

    @property
    def is_generic(self) -> bool:
        return all(f.d == 1 for f in self.factors)

    @property
    def is_unitary(self) -> bool:
        return all(f.twist == 0 for f in self.factors)

    def counts(self) -> Counter:
        return Counter(self.factors)

    def symbols(self) -> set[CuspidalSymbol]:
        return {f.rho for f in self.factors}

    def __iter__(self) -> Iterator[SpehRep]:
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __eq__(self, other):
        return isinstance(other, ArthurTypeRep) and self.factors == other.factors

    def __hash__(self):
        return self._hash

    def __mul__(self, other: Union["ArthurTypeRep", SpehRep]) -> "ArthurTypeRep":
        if isinstance(other, SpehRep):
            return ArthurTypeRep(self.factors + (other,))
        return ArthurTypeRep(self.factors + other.factors)

    def remove(self, factor: SpehRep) -> "ArthurTypeRep":
        fs = list(self.factors)
        fs.remove(factor)
        return ArthurTypeRep(fs)

    def __repr__(self):
        return "ArthurTypeRep(%s)" % ("*".join(repr(f) for f in self.factors) or "1")


@dataclass(frozen=True)
class _ArthurSummand:
    rho: CuspidalSymbol
    tempered_m: int
    arthur_d: int


class ArthurParameter:
    """``sum rho (x) Sym^{m-1} (x) Sym^{d-1}`` as a multiset of ``(rho, m, d)``."""

    __slots__ = ("summands",)

    def __init__(self, summands: Iterable[tuple[CuspidalSymbol, int, int]]):
        self.summands = tuple(sorted(
            (_ArthurSummand(r, m, d) for r, m, d in summands),
            key=lambda s: (s.rho.name, s.rho.rank, s.tempered_m, s.arthur_d)))

    @property
    def dimension(self) -> int:
        return sum(s.rho.rank * s.tempered_m * s.arthur_d for s in self.summands)

    def __eq__(self, other):
        return isinstance(other, ArthurParameter) and self.summands == other.summands

    def __hash__(self):
        return hash(self.summands)

    def __repr__(self):
        parts = ["%s(x)Sym^%d(x)Sym^%d" % (s.rho.name, s.tempered_m - 1, s.arthur_d - 1) for s in self.summands]
        return "ArthurParameter(%s)" % (" + ".join(parts) or "0")


def arthur_parameter(x: ArthurTypeRep) -> ArthurParameter:
    if not x.is_unitary:
        raise ValueError("only unitary Arthur-type representations have Arthur parameters")
    return ArthurParameter((f.rho, f.m, f.d) for f in x)


def from_arthur_parameter(p: ArthurParameter) -> ArthurTypeRep:
    return ArthurTypeRep(SpehRep(s.rho, s.tempered_m, s.arthur_d) for s in p.summands)


def _centered(n: int) -> list[Fraction]:
    """``-(n-1)/2, ..., (n-1)/2``."""
    lo = Fraction(-(n - 1), 2)
    return [lo + i for i in range(n)]


def zelevinsky_data(u: SpehRep) -> Multisegment:
    """``m`` segments ``nu^{twist+i} Delta_rho(d)``, each extended by ``k`` at the top."""
    lo = Fraction(-(u.d - 1), 2)
    hi = Fraction(u.d - 1, 2) + u.k
    return Multisegment(Segment(u.rho, u.twist + s + lo, u.twist + s + hi) for s in _centered(u.m))


def langlands_data(u: SpehRep) -> Multisegment:
    """``d`` segments ``nu^{twist+j} Delta_rho(m)``; also the L-parameter of the summand."""
    if u.k:
        raise ValueError("Langlands data is only defined for Speh representations (k = 0)")
    lo = Fraction(-(u.m - 1), 2)
    hi = Fraction(u.m - 1, 2)
    return Multisegment(Segment(u.rho, u.twist + j + lo, u.twist + j + hi) for j in _centered(u.d))


def zelevinsky_multisegment(x) -> Multisegment:
    if isinstance(x, Multisegment):
        return x
    if isinstance(x, SpehRep):
        return zelevinsky_data(x)
    if isinstance(x, ArthurTypeRep):
        out = Multisegment()
        for f in x:
            out = out + zelevinsky_data(f)
        return out
    raise TypeError("expected SpehRep, ArthurTypeRep or Multisegment, got %r" % (type(x),))


def cuspidal_support(x: Union[SpehRep, ArthurTypeRep, Multisegment]) -> SupportMultiset:
    return zelevinsky_multisegment(x).support()


def level(x: Union[SpehRep, ArthurTypeRep]) -> int:
    if isinstance(x, SpehRep):
        if x.k:
            raise ValueError("level is only defined here for Speh representations (k = 0)")
        return x.rho.rank * x.m
    return sum(level(f) for f in x)


def highest_derivative(x: Union[SpehRep, ArthurTypeRep]):
    """``pi^-``: lowers ``d`` by one; a Speh factor with ``d = 1`` disappears.

    For a single Speh representation the result is ``None`` when it vanishes
    to the trivial representation of ``G_0``.
    """
    if isinstance(x, SpehRep):
        if x.k:
            raise ValueError("highest derivative is only defined here for k = 0")
        if x.d == 1:
            return None
        return SpehRep(x.rho, x.m, x.d - 1, 0, x.twist)
    out = []
    for f in x:
        g = highest_derivative(f)
        if g is not None:
            out.append(g)
    return ArthurTypeRep(out)


def _ordered_segments(u: SpehRep) -> list[Segment]:
    return sorted(zelevinsky_data(u), key=lambda s: s.a)


def speh_right_derivative(u: SpehRep, j: int) -> Multisegment:
    """Zelevinsky data of ``u^{(rank * j)}``: the ``j`` lowest segments lose their top end.

    At ``j = m`` this is ``nu^{-1/2} u_rho(m, d-1)``.
    """
    if not 0 <= j <= u.m:
        raise ValueError("derivative index %r out of range 0..%d" % (j, u.m))
    segs = _ordered_segments(u)
    out = [truncate(s, "right") for s in segs[:j]] + segs[j:]
    return Multisegment(s for s in out if s is not None)


def speh_left_derivative(u: SpehRep, j: int) -> Multisegment:
    """Zelevinsky data of ``^{(rank * j)}u``: the ``j`` highest segments lose their bottom end."""
    if not 0 <= j <= u.m:
        raise ValueError("derivative index %r out of range 0..%d" % (j, u.m))
    segs = _ordered_segments(u)
    cut = len(segs) - j
    out = segs[:cut] + [truncate(s, "left") for s in segs[cut:]]
    return Multisegment(s for s in out if s is not None)


def right_derivative_at_order(u: SpehRep, order: int) -> Multisegment | None:
    """``u^{(order)}`` or ``None`` when it vanishes."""
    if order < 0 or order % u.rho.rank:
        return None
    j = order // u.rho.rank
    if j > u.m:
        return None
    return speh_right_derivative(u, j)


def left_derivative_at_order(u: SpehRep, order: int) -> Multisegment | None:
    if order < 0 or order % u.rho.rank:
        return None
    j = order // u.rho.rank
    if j > u.m:
        return None
    return speh_left_derivative(u, j)


def hook_multisegments(rho: CuspidalSymbol, m: int, d: int) -> list[Multisegment]:
    """Hook-shaped multisegments attached to ``u_rho(m, d)``.

    The ``t``-th one has singletons from ``-(m+d-2)/2 + t`` up to
    ``(m-d)/2 - 1`` and a hook ``[(m-d)/2, (m+d-2)/2 - t]``, for
    ``t = 0 .. min(m, d) - 1``.
    """
    if m < 1 or d < 1:
        raise ValueError("m and d must be positive")
    low = Fraction(-(m + d - 2), 2)
    corner = Fraction(m - d, 2)
    top = Fraction(m + d - 2, 2)
    out = []
    for t in range(min(m, d)):
        segs = []
        x = low + t
        while x <= corner - 1:
            segs.append(Segment(rho, x, x))
            x += 1
        segs.append(Segment(rho, corner, top - t))
        out.append(Multisegment(segs))
    return out


class Positivity(enum.Enum):
    G_POSITIVE = "G_positive"
    G_NEGATIVE = "G_negative"
    BALANCED = "balanced"
    NEITHER = "neither"


def support_positivity(s: SupportMultiset) -> Positivity:
    """Compare ``mult(nu^a sigma)`` with ``mult(nu^{-a} sigma)`` for every ``a > 0``."""
    counts = s.counts()
    pos = neg = True
    for x in {ShiftedCuspidal(c.base, abs(c.shift)) for c in counts if c.shift != 0}:
        up = counts.get(x, 0)
        down = counts.get(ShiftedCuspidal(x.base, -x.shift), 0)
        pos = pos and up >= down
        neg = neg and down >= up
    if pos and neg:
        return Positivity.BALANCED
    if pos:
        return Positivity.G_POSITIVE
    if neg:
        return Positivity.G_NEGATIVE
    return Positivity.NEITHER


def _dual_speh(f: SpehRep) -> SpehRep:
    return SpehRep(f.rho.dual(), f.m, f.d, f.k, -f.twist)


def dualize(x: Union[ArthurTypeRep, SpehRep]):
    """Contragredient: ``u_rho(m, d) -> u_{rho^vee}(m, d)``."""
    if isinstance(x, SpehRep):
        return _dual_speh(x)
    return ArthurTypeRep(_dual_speh(f) for f in x)

