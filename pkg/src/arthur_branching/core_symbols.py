"""Cuspidal lines, Zelevinsky segments and multisegments.

Everything here is exact: exponents are :class:`fractions.Fraction` and all
values are immutable.  A *line* is a cuspidal symbol together with the class
of an exponent modulo the integers; two shifted cuspidals can only interact
(be linked, be merged into a segment) when they sit on the same line.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

Exponent = Fraction
ExponentLike = Union[int, str, Fraction]

__all__ = [
    "Exponent",
    "as_exponent",
    "CuspidalSymbol",
    "TRIVIAL",
    "ShiftedCuspidal",
    "Segment",
    "Multisegment",
    "SupportMultiset",
    "shift_segment",
    "truncate",
    "linked",
    "precedes",
    "zelevinsky_sort",
    "zelevinsky_dual",
    "generic_from_support",
    "line_of",
    "same_line",
]


def as_exponent(x: ExponentLike) -> Fraction:
    if isinstance(x, float):
        raise TypeError("exponents must be exact; got float %r" % (x,))
    return Fraction(x)


def _frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True, order=True)
class CuspidalSymbol:
    """An abstract unitarizable cuspidal representation of ``G_rank``.

    Identity is the pair ``(name, rank)``.  ``dual_partner`` names the
    contragredient; when it is missing the partner is minted by appending
    (or stripping) a trailing ``~``.
    """

    name: str
    rank: int = 1
    dual_partner: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError("cuspidal rank must be a positive integer, got %r" % (self.rank,))
        if not self.name:
            raise ValueError("cuspidal symbol needs a name")

    @property
    def partner_name(self) -> str:
        if self.dual_partner is not None:
            return self.dual_partner
        if self.name.endswith("~"):
            return self.name[:-1]
        return self.name + "~"

    @property
    def self_dual(self) -> bool:
        return self.partner_name == self.name

    def dual(self) -> "CuspidalSymbol":
        return CuspidalSymbol(self.partner_name, self.rank, self.name)

    def __str__(self):
        return self.name


# the trivial character of F^x
TRIVIAL = CuspidalSymbol("1", 1, "1")


@dataclass(frozen=True, order=True)
class ShiftedCuspidal:
    """``nu^shift * base``."""

    base: CuspidalSymbol
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "shift", as_exponent(self.shift))

    def twist(self, x: ExponentLike) -> "ShiftedCuspidal":
        return ShiftedCuspidal(self.base, self.shift + as_exponent(x))

    def same_line(self, other: "ShiftedCuspidal") -> bool:
        """Membership of ``other`` in the integer-twist line of ``self``."""
        diff = self.shift - other.shift
        return self.base == other.base and diff.denominator == 1

    def __str__(self):
        return "%s@%s" % (self.shift, self.base.name)


def line_of(base: CuspidalSymbol, exponent: Fraction) -> tuple:
    """Hashable key for the integer-twist line through ``nu^exponent base``."""
    return (base.name, base.rank, _frac_part(exponent))


def same_line(x: ShiftedCuspidal, y: ShiftedCuspidal) -> bool:
    return x.same_line(y)


@dataclass(frozen=True)
class Segment:
    """The Zelevinsky segment ``[nu^a base, nu^b base]``."""

    base: CuspidalSymbol
    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = as_exponent(self.a), as_exponent(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        diff = b - a
        if diff.denominator != 1 or diff < 0:
            raise ValueError("segment endpoints must differ by a non-negative integer: [%s, %s]" % (a, b))

    @property
    def length(self) -> int:
        return int(self.b - self.a) + 1

    @property
    def dimension(self) -> int:
        return self.length * self.base.rank

    @property
    def line(self) -> tuple:
        return line_of(self.base, self.a)

    def exponents(self) -> list[Fraction]:
        return [self.a + i for i in range(self.length)]

    def support(self) -> "SupportMultiset":
        return SupportMultiset(ShiftedCuspidal(self.base, x) for x in self.exponents())

    def sort_key(self):
        return (self.base.name, self.base.rank, self.a, self.b)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "[%s..%s]@%s" % (self.a, self.b, self.base.name)

    def __repr__(self):
        return "Segment(%s)" % self


def shift_segment(seg: Segment, x: ExponentLike) -> Segment:
    x = as_exponent(x)
    return Segment(seg.base, seg.a + x, seg.b + x)


def truncate(seg: Segment, end: str) -> Segment | None:
    """Drop one endpoint: ``right`` gives ``[a, b-1]``, ``left`` gives ``[a+1, b]``.

    Returns ``None`` when the segment has length one.
    """
    if end not in ("left", "right"):
        raise ValueError("end must be 'left' or 'right', got %r" % (end,))
    if seg.length == 1:
        return None
    if end == "right":
        return Segment(seg.base, seg.a, seg.b - 1)
    return Segment(seg.base, seg.a + 1, seg.b)


def linked(s: Segment, t: Segment) -> bool:
    """Same line, union is a segment, and neither contains the other."""
    if s.base != t.base or (s.a - t.a).denominator != 1:
        return False
    if s.b + 1 < t.a or t.b + 1 < s.a:
        return False
    s_in_t = t.a <= s.a and s.b <= t.b
    t_in_s = s.a <= t.a and t.b <= s.b
    return not (s_in_t or t_in_s)


def precedes(s: Segment, t: Segment) -> bool:
    return linked(s, t) and s.a < t.a


class SupportMultiset:
    """Finite multiset of :class:`ShiftedCuspidal`."""

    __slots__ = ("_items", "_hash")

    def __init__(self, entries: Iterable[ShiftedCuspidal] | Counter | None = None):
        if entries is None:
            counts: Counter = Counter()
        elif isinstance(entries, Counter):
            counts = Counter({k: v for k, v in entries.items() if v > 0})
        else:
            counts = Counter(entries)
        self._items = tuple(sorted(counts.items()))
        self._hash = hash(self._items)

    def __reduce__(self):
        return (SupportMultiset, (Counter(dict(self._items)),))

    def counts(self) -> Counter:
        return Counter(dict(self._items))

    def multiplicity(self, x: ShiftedCuspidal) -> int:
        return dict(self._items).get(x, 0)

    def as_set(self) -> frozenset:
        return frozenset(k for k, _ in self._items)

    def shift(self, x: ExponentLike) -> "SupportMultiset":
        x = as_exponent(x)
        return SupportMultiset(Counter({k.twist(x): v for k, v in self._items}))

    def lines(self) -> set[tuple]:
        return {line_of(k.base, k.shift) for k, _ in self._items}

    def in_line_closure(self, x: ShiftedCuspidal) -> bool:
        """Whether ``x`` lies in the integer-twist closure of this support."""
        return line_of(x.base, x.shift) in self.lines()

    def __add__(self, other: "SupportMultiset") -> "SupportMultiset":
        return SupportMultiset(self.counts() + other.counts())

    def __sub__(self, other: "SupportMultiset") -> "SupportMultiset":
        return SupportMultiset(self.counts() - other.counts())

    def __iter__(self) -> Iterator[ShiftedCuspidal]:
        for k, v in self._items:
            for _ in range(v):
                yield k

    def __len__(self):
        return sum(v for _, v in self._items)

    def __eq__(self, other):
        return isinstance(other, SupportMultiset) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __le__(self, other: "SupportMultiset") -> bool:
        mine, theirs = self.counts(), other.counts()
        return all(theirs[k] >= v for k, v in mine.items())

    def __repr__(self):
        inner = ", ".join("%s:%d" % (k, v) for k, v in self._items)
        return "SupportMultiset({%s})" % inner


class Multisegment:
    """Finite multiset of segments, stored in a canonical sorted order."""

    __slots__ = ("segments", "_hash")

    def __init__(self, segments: Iterable[Segment] = ()):
        self.segments: tuple[Segment, ...] = tuple(sorted(segments, key=Segment.sort_key))
        self._hash = hash(self.segments)

    def __reduce__(self):
        return (Multisegment, (self.segments,))

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)

    def __bool__(self):
        return bool(self.segments)

    def __eq__(self, other):
        return isinstance(other, Multisegment) and self.segments == other.segments

    def __hash__(self):
        return self._hash

    def __add__(self, other: "Multisegment") -> "Multisegment":
        return Multisegment(self.segments + other.segments)

    def counts(self) -> Counter:
        return Counter(self.segments)

    @property
    def dimension(self) -> int:
        return sum(s.dimension for s in self.segments)

    def support(self) -> SupportMultiset:
        return SupportMultiset(x for s in self.segments for x in s.support())

    def shift(self, x: ExponentLike) -> "Multisegment":
        return Multisegment(shift_segment(s, x) for s in self.segments)

    def by_line(self) -> dict[tuple, list[Segment]]:
        out: dict[tuple, list[Segment]] = {}
        for s in self.segments:
            out.setdefault(s.line, []).append(s)
        return out

    def contragredient(self) -> "Multisegment":
        """Segments ``[-b, -a]`` on the dual symbols."""
        return Multisegment(Segment(s.base.dual(), -s.b, -s.a) for s in self.segments)

    def negate(self) -> "Multisegment":
        """Segments ``[-b, -a]`` on the same symbols."""
        return Multisegment(Segment(s.base, -s.b, -s.a) for s in self.segments)

    def pairwise_unlinked(self) -> bool:
        segs = self.segments
        return not any(linked(segs[i], segs[j]) for i in range(len(segs)) for j in range(i + 1, len(segs)))

    def __str__(self):
        return "{" + ",".join(str(s) for s in self.segments) + "}"

    def __repr__(self):
        return "Multisegment(%s)" % self


def zelevinsky_sort(m: Multisegment | Iterable[Segment]) -> list[Segment]:
    """Order segments so that no segment precedes a later one."""
    return sorted(m, key=lambda s: (s.base.name, s.base.rank, _frac_part(s.a), -s.b, -s.a))


def _mw_line(segs: list[tuple[Fraction, Fraction]], rng=None) -> list[tuple[Fraction, Fraction]]:
    work = list(segs)
    if rng is not None:
        rng.shuffle(work)

    def shortest(positions):
        best = max(work[i][0] for i in positions)
        ties = [i for i in positions if work[i][0] == best]
        return rng.choice(ties) if rng is not None else ties[0]

    out = []
    while work:
        top = max(b for (_, b) in work)
        i = shortest([i for i, (_, b) in enumerate(work) if b == top])
        chosen = [i]
        end = top
        while True:
            a_prev = work[chosen[-1]][0]
            cands = [j for j, (a, b) in enumerate(work) if b == end - 1 and a < a_prev]
            if not cands:
                break
            chosen.append(shortest(cands))
            end -= 1
        out.append((end, top))
        for j in chosen:
            a, b = work[j]
            work[j] = (a, b - 1) if b > a else None
        work = [x for x in work if x is not None]
    return out


def zelevinsky_dual(m: Multisegment, rng=None) -> Multisegment:
    """The Zelevinsky involution, via the Moeglin-Waldspurger pass algorithm.

    Each pass takes the largest end ``e`` and the shortest segment ending
    there, then walks down one end at a time, each time taking the shortest
    segment ending at ``e - 1`` that starts strictly before the previous
    choice.  The ends visited form one dual segment; every visited segment
    loses its top exponent.  Lines are handled independently.

    ``rng`` (a :class:`random.Random`) shuffles the work list and breaks ties
    between identical candidates at random; the result must not change.
    """
    out: list[Segment] = []
    for segs in m.by_line().values():
        base = segs[0].base
        for a, b in _mw_line([(s.a, s.b) for s in segs], rng):
            out.append(Segment(base, a, b))
    return Multisegment(out)


def generic_from_support(support: SupportMultiset | Iterable[ShiftedCuspidal]) -> Multisegment:
    """The unique pairwise-unlinked multisegment with the given support.

    Built by repeatedly cutting the maximal runs of consecutive exponents out
    of the remaining support, line by line.
    """
    counts = support.counts() if isinstance(support, SupportMultiset) else Counter(support)
    per_line: dict[tuple, Counter] = {}
    bases: dict[tuple, CuspidalSymbol] = {}
    for x, v in counts.items():
        key = line_of(x.base, x.shift)
        per_line.setdefault(key, Counter())[x.shift] += v
        bases[key] = x.base
    out = []
    for key, mult in per_line.items():
        base = bases[key]
        mult = +mult
        while mult:
            xs = sorted(mult)
            start = prev = xs[0]
            runs = []
            for x in xs[1:]:
                if x != prev + 1:
                    runs.append((start, prev))
                    start = x
                prev = x
            runs.append((start, prev))
            for a, b in runs:
                out.append(Segment(base, a, b))
                for i in range(int(b - a) + 1):
                    mult[a + i] -= 1
            mult = +mult
    return Multisegment(out)
