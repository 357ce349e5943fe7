"""Deciding relevance of Arthur-type pairs, and related index predictions.

Two independent deciders live here:

* :func:`relevant` searches directly for a pairing of Speh factors in which
  every matched factor is the highest derivative of its partner.
* :func:`decide_recursive` peels off the factor with the largest ``m + d``,
  replacing it by a fresh cuspidal, and swaps the two sides (adding a fresh
  rank-two cuspidal to the smaller one) whenever the smaller side holds the
  largest factor.

They must agree on every corank-one pair.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .core_symbols import CuspidalSymbol, Multisegment, Segment, SupportMultiset, generic_from_support, shift_segment, truncate
from .errors import DimensionError, InconsistentWitness
from .speh import (
    ArthurTypeRep,
    SpehRep,
    cuspidal_support,
    dualize,
    highest_derivative,
    level,
    speh_left_derivative,
    speh_right_derivative,
)

__all__ = [
    "SymbolMint",
    "RelevanceWitness",
    "WeaklyRelevantWitness",
    "TraceStep",
    "relevant",
    "relevant_by_chains",
    "validate_witness",
    "decide_recursive",
    "weakly_relevant",
    "generic_ext_index",
    "candidate_derivative_indices",
    "ext_index_formula_check",
    "non_cuspidal_count",
]

HALF = Fraction(1, 2)


class SymbolMint:
    """Deterministic source of cuspidal symbols on brand new lines (``#f1``, ``#f2``, ...)."""

    def __init__(self, taken: Iterable[str] = (), prefix: str = "#f"):
        self.prefix = prefix
        self.taken = set(taken)
        self.counter = 0

    @classmethod
    def avoiding(cls, *reps: ArthurTypeRep) -> "SymbolMint":
        names = set()
        for rep in reps:
            for f in rep:
                names.add(f.rho.name)
                names.add(f.rho.partner_name)
        return cls(names)

    def __call__(self, rank: int) -> CuspidalSymbol:
        while True:
            self.counter += 1
            name = "%s%d" % (self.prefix, self.counter)
            if name not in self.taken and name + "~" not in self.taken:
                self.taken.add(name)
                return CuspidalSymbol(name, rank)


def cuspidal_factor(sigma: CuspidalSymbol) -> SpehRep:
    return SpehRep(sigma, 1, 1)


def non_cuspidal_count(*reps: ArthurTypeRep) -> int:
    return sum(1 for rep in reps for f in rep if not f.is_cuspidal)


def _raise_d(u: SpehRep) -> SpehRep:
    return SpehRep(u.rho, u.m, u.d + 1, 0, u.twist)


# -- the matching decider ----------------------------------------------------

@dataclass(frozen=True)
class RelevanceWitness:
    """A pairing certifying relevance.

    ``p_pairs`` hold ``(M-factor, N-factor)`` with ``N-factor = M-factor^-``;
    ``q_pairs`` hold ``(M-factor, N-factor)`` with ``M-factor = N-factor^-``.
    """

    p_pairs: tuple[tuple[SpehRep, SpehRep], ...] = ()
    q_pairs: tuple[tuple[SpehRep, SpehRep], ...] = ()
    free_M: tuple[SpehRep, ...] = ()
    free_N: tuple[SpehRep, ...] = ()

    @classmethod
    def build(cls, p_pairs=(), q_pairs=(), free_M=(), free_N=()) -> "RelevanceWitness":
        return cls(tuple(sorted(p_pairs, key=lambda pq: (pq[0].sort_key(), pq[1].sort_key()))),
                   tuple(sorted(q_pairs, key=lambda pq: (pq[0].sort_key(), pq[1].sort_key()))),
                   tuple(sorted(free_M, key=SpehRep.sort_key)),
                   tuple(sorted(free_N, key=SpehRep.sort_key)))

    def m_side(self) -> ArthurTypeRep:
        return ArthurTypeRep([u for u, _ in self.p_pairs] + [u for u, _ in self.q_pairs] + list(self.free_M))

    def n_side(self) -> ArthurTypeRep:
        return ArthurTypeRep([w for _, w in self.p_pairs] + [w for _, w in self.q_pairs] + list(self.free_N))


def validate_witness(M: ArthurTypeRep, N: ArthurTypeRep, w: RelevanceWitness) -> bool:
    if w.m_side() != M or w.n_side() != N:
        return False
    if any(u.d < 2 or highest_derivative(u) != v for u, v in w.p_pairs):
        return False
    if any(v.d < 2 or highest_derivative(v) != u for u, v in w.q_pairs):
        return False
    return all(u.d == 1 for u in w.free_M) and all(v.d == 1 for v in w.free_N)


def relevant(M: ArthurTypeRep, N: ArthurTypeRep) -> RelevanceWitness | None:
    """Return a relevance witness, or ``None`` when the pair is not relevant.

    Exhaustive backtracking over roles of the factors of ``M`` (p-pair,
    q-pair, or free when ``d = 1``); whatever is left of ``N`` must consist
    of ``d = 1`` factors.  Dimensions are not checked.
    """
    ms = M.factors

    @lru_cache(maxsize=None)
    def search(i: int, rest: tuple[SpehRep, ...]):
        if i == len(ms):
            return () if all(w.d == 1 for w in rest) else None
        u = ms[i]
        options = []
        if u.d >= 2:
            options.append(("p", highest_derivative(u)))
        options.append(("q", _raise_d(u)))
        for role, w in options:
            if w in rest:
                idx = rest.index(w)
                found = search(i + 1, rest[:idx] + rest[idx + 1:])
                if found is not None:
                    return ((role, u, w),) + found
        if u.d == 1:
            found = search(i + 1, rest)
            if found is not None:
                return (("free", u, None),) + found
        return None

    choice = search(0, N.factors)
    if choice is None:
        return None
    used = Counter(w for _, _, w in choice if w is not None)
    free_N = list((N.counts() - used).elements())
    return RelevanceWitness.build(
        p_pairs=[(u, w) for r, u, w in choice if r == "p"],
        q_pairs=[(u, w) for r, u, w in choice if r == "q"],
        free_M=[u for r, u, _ in choice if r == "free"],
        free_N=free_N,
    )


def relevant_by_chains(M: ArthurTypeRep, N: ArthurTypeRep) -> RelevanceWitness | None:
    """Linear-time matcher.

    For fixed ``(rho, m)`` the possible pairings form two paths,
    ``M_1 - N_2 - M_3 - ...`` and ``N_1 - M_2 - N_3 - ...`` (subscript ``d``);
    only the ``d = 1`` end may stay unmatched, so the flow along each path is
    forced from the top down.
    """
    groups: dict[tuple, tuple[Counter, Counter]] = {}
    for f in M:
        groups.setdefault((f.rho, f.m, f.twist), (Counter(), Counter()))[0][f.d] += 1
    for f in N:
        groups.setdefault((f.rho, f.m, f.twist), (Counter(), Counter()))[1][f.d] += 1

    p_pairs, q_pairs, free_M, free_N = [], [], [], []
    for (rho, m, twist), (a, b) in groups.items():
        top = max(list(a) + list(b))

        def unit(d):
            return SpehRep(rho, m, d, 0, twist)

        for start_in_m in (True, False):
            # node i (1-based d) lives on the M side iff (i odd) == start_in_m
            on_m = [None] + [((i % 2 == 1) == start_in_m) for i in range(1, top + 1)]
            counts = [0] + [(a if on_m[i] else b)[i] for i in range(1, top + 1)]
            flow = [0] * (top + 1)  # flow[i]: edges between node i and node i+1
            for i in range(top, 1, -1):
                flow[i - 1] = counts[i] - flow[i]
                if flow[i - 1] < 0:
                    return None
            if flow[1] > counts[1]:
                return None
            leftover = counts[1] - flow[1]
            (free_M if on_m[1] else free_N).extend([unit(1)] * leftover)
            for i in range(1, top):
                lower, upper = unit(i), unit(i + 1)
                if on_m[i + 1]:
                    p_pairs.extend([(upper, lower)] * flow[i])
                else:
                    q_pairs.extend([(lower, upper)] * flow[i])
    return RelevanceWitness.build(p_pairs, q_pairs, free_M, free_N)


# -- the recursive decider ---------------------------------------------------

@dataclass
class TraceStep:
    case: str
    removed_M: list = field(default_factory=list)
    removed_N: list = field(default_factory=list)
    minted: list = field(default_factory=list)
    non_cuspidal: int = 0


def _largest(rep: ArthurTypeRep) -> SpehRep | None:
    best = None
    for f in rep:
        if best is None or f.m + f.d > best.m + best.d:
            best = f
    return best


def decide_recursive(M: ArthurTypeRep, N: ArthurTypeRep, trace: list | None = None,
                     mint: SymbolMint | None = None) -> bool:
    """Decide ``Hom_{G_n}(pi_M, pi_N) != 0`` by the peeling recursion.

    ``trace``, if given, receives one :class:`TraceStep` per reduction.
    """
    if M.dimension != N.dimension + 1:
        raise DimensionError("expected dim M = dim N + 1, got %d and %d" % (M.dimension, N.dimension))
    if mint is None:
        mint = SymbolMint.avoiding(M, N)
    log = trace.append if trace is not None else (lambda step: None)
    budget = 4 * (len(M) + len(N)) + 4
    for _ in range(budget):
        count = non_cuspidal_count(M, N)
        if count == 0:
            log(TraceStep("base", non_cuspidal=0))
            return True
        p1 = _largest(M)
        q1 = _largest(N)
        top_m = p1.m + p1.d
        top_n = q1.m + q1.d if q1 is not None else 0
        if top_m >= top_n:
            target = highest_derivative(p1)
            removed_n = []
            if target is not None:
                if target not in N.factors:
                    log(TraceStep("fail", [p1], [], [], count))
                    return False
                N = N.remove(target)
                removed_n = [target]
            sigma = mint(p1.rho.rank * p1.m)
            M = M.remove(p1) * cuspidal_factor(sigma)
            log(TraceStep("1", [p1], removed_n, [sigma], count))
        else:
            sigma = mint(2)
            M, N = N * cuspidal_factor(sigma), M
            log(TraceStep("2", [], [], [sigma], count))
    raise RuntimeError("recursion failed to terminate")  # pragma: no cover


# -- weak relevance on multisegments ------------------------------------------

@dataclass(frozen=True)
class WeaklyRelevantWitness:
    """Roles of the segments of ``m``; ``matches`` hold ``(m-segment, role, n-segment or None)``."""

    matches: tuple[tuple[Segment, str, Segment | None], ...]
    unmatched_n: tuple[Segment, ...]


def _weak_targets(s: Segment):
    left = truncate(s, "left")
    yield "p", (shift_segment(left, -HALF) if left is not None else None)
    yield "q", Segment(s.base, s.a - HALF, s.b + HALF)
    yield "a", shift_segment(s, -HALF)
    yield "b", shift_segment(s, HALF)


def weakly_relevant(m: Multisegment, n: Multisegment) -> WeaklyRelevantWitness | None:
    """Search for the role decomposition making ``m`` and ``n`` weakly relevant.

    Relations, for an ``m``-segment ``D`` and an ``n``-segment ``E``:
    p: ``E = nu^{-1/2} (D minus its bottom)``; q: ``D = nu^{1/2} (E minus its top)``;
    a: ``E = nu^{-1/2} D``; b: ``D = nu^{-1/2} E``.  Length-one segments may stay
    unmatched (p-role in ``m``, q-role in ``n``).
    """
    ms = m.segments

    @lru_cache(maxsize=None)
    def search(i: int, rest: tuple[Segment, ...]):
        if i == len(ms):
            return () if all(e.length == 1 for e in rest) else None
        s = ms[i]
        for role, target in _weak_targets(s):
            if target is None:
                found = search(i + 1, rest)
                if found is not None:
                    return ((s, role, None),) + found
            elif target in rest:
                idx = rest.index(target)
                found = search(i + 1, rest[:idx] + rest[idx + 1:])
                if found is not None:
                    return ((s, role, target),) + found
        return None

    choice = search(0, n.segments)
    if choice is None:
        return None
    used = Counter(t for _, _, t in choice if t is not None)
    return WeaklyRelevantWitness(choice, tuple((n.counts() - used).elements()))


# -- Ext-degree index predictions ---------------------------------------------

def _check_corank(M: ArthurTypeRep, N: ArthurTypeRep):
    if M.dimension != N.dimension + 1:
        raise DimensionError("expected dim M = dim N + 1, got %d and %d" % (M.dimension, N.dimension))


def _generic_part_divides(M: ArthurTypeRep, support: SupportMultiset) -> bool:
    """Whether ``M = gen(support) x pi'`` as a multiset of Speh factors."""
    needed = []
    for seg in generic_from_support(support):
        if seg.a != -seg.b:
            return False
        needed.append(SpehRep(seg.base, seg.length, 1))
    return not (Counter(needed) - M.counts())


def generic_ext_index(M: ArthurTypeRep, N: ArthurTypeRep) -> int | None:
    """The unique derivative index that can carry non-zero Ext, or ``None``.

    Requires one of ``M``, ``N`` to be generic.  When only ``N`` is generic,
    existence is decided on the dual problem ``(sigma x N^vee, M^vee)`` for a
    fresh rank-two ``sigma``.
    """
    _check_corank(M, N)
    if not (M.is_generic or N.is_generic):
        raise ValueError("generic_ext_index needs at least one generic representation")
    n = N.dimension
    if M.is_generic and N.is_generic:
        return n + 1
    if M.is_generic:
        ok = _generic_part_divides(M, cuspidal_support(highest_derivative(N)))
        return level(N) + 1 if ok else None
    sigma = SymbolMint.avoiding(M, N)(2)
    big = dualize(N) * cuspidal_factor(sigma)
    small = dualize(M)
    ok = _generic_part_divides(big, cuspidal_support(highest_derivative(small)))
    return level(M) if ok else None


def _reachable_supports(factors: Iterable[SpehRep], side: str) -> dict[int, set[SupportMultiset]]:
    derive = speh_right_derivative if side == "right" else speh_left_derivative
    reach: dict[int, set[SupportMultiset]] = {0: {SupportMultiset()}}
    for f in factors:
        opts = [(f.rho.rank * j, derive(f, j).support()) for j in range(f.m + 1)]
        nxt: dict[int, set[SupportMultiset]] = {}
        for k, supps in reach.items():
            for order, s in opts:
                nxt.setdefault(k + order, set()).update(t + s for t in supps)
        reach = nxt
    return reach


def candidate_derivative_indices(M: ArthurTypeRep, N: ArthurTypeRep) -> set[int]:
    """Indices ``k`` where ``nu^{1/2} M^{(k)}`` and ``^{(k-1)}N`` can share a cuspidal support.

    Derivatives of products are split over the Speh factors in every possible
    way.  This is a support-level filter only: a matching index need not
    carry non-zero Ext.
    """
    _check_corank(M, N)
    right = _reachable_supports(M, "right")
    left = _reachable_supports(N, "left")
    out = set()
    for k in range(1, M.dimension + 1):
        shifted = {s.shift(HALF) for s in right.get(k, ())}
        if shifted & left.get(k - 1, set()):
            out.add(k)
    return out


def ext_index_formula_check(w: RelevanceWitness) -> int:
    """Evaluate both sides of the unique-derivative index formula on a witness.

    One side sums the tempered sizes ``rank * m`` over p-pairs and free
    ``M``-factors and subtracts one; the other sums them over q-pairs and free
    ``N``-factors.  They coincide exactly when the pair has corank one.
    """
    plus = sum(u.rho.rank * u.m for u, _ in w.p_pairs) + sum(u.rho.rank * u.m for u in w.free_M)
    minus = sum(v.rho.rank * v.m for _, v in w.q_pairs) + sum(v.rho.rank * v.m for v in w.free_N)
    if plus - 1 != minus:
        raise InconsistentWitness("index formulas disagree: %d vs %d" % (plus - 1, minus))
    return minus
