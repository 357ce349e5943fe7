"""Shared generators and independent oracles for the test-suite."""

import itertools
import random
from collections import Counter
from fractions import Fraction

from arthur_branching import TRIVIAL, ArthurTypeRep, CuspidalSymbol, Multisegment, Segment, SpehRep
from arthur_branching.verification import enumerate_arthur_reps

ONE = TRIVIAL
S = CuspidalSymbol("s")
SIGMA = CuspidalSymbol("sig")
HALF = Fraction(1, 2)


def u(rho, m, d, twist=0):
    return SpehRep(rho, m, d, 0, Fraction(twist))


def rep(*factors):
    return ArthurTypeRep(factors)


def golden():
    return rep(u(ONE, 1, 3), u(ONE, 1, 1), u(ONE, 1, 1)), rep(u(ONE, 1, 2), u(ONE, 2, 1))


def layered_pair(e):
    """``<Delta[e]> x St(Delta[e-2]) x sigma`` against ``St(Delta[e-1]) x <Delta[e-1]>``."""
    M = rep(u(ONE, 1, e), u(ONE, e - 2, 1), u(SIGMA, 1, 1))
    N = rep(u(ONE, e - 1, 1), u(ONE, 1, e - 1))
    return M, N


_REP_CACHE = {}


def reps_of_dim(dim, alphabet=(ONE, S)):
    key = (dim, tuple(alphabet))
    if key not in _REP_CACHE:
        _REP_CACHE[key] = list(enumerate_arthur_reps(dim, alphabet))
    return _REP_CACHE[key]


def random_rep(rng: random.Random, dim, alphabet=(ONE, S)):
    return rng.choice(reps_of_dim(dim, alphabet))


# -- expression generator for DSL round trips ------------------------------------

_NAMES = ["1", "s", "t", "rho", "x1", "#f3", "s~", "a_b"]


def random_symbol(rng):
    name = rng.choice(_NAMES)
    if name == "1" and rng.random() < 0.8:
        return TRIVIAL
    rank = rng.choice([1, 1, 1, 2, 3])
    partner = None
    roll = rng.random()
    if roll < 0.15:
        partner = name  # self-dual
    elif roll < 0.3:
        partner = rng.choice(_NAMES)
    return CuspidalSymbol(name, rank, partner)


def _consistent(symbols):
    """One symbol object per name, so the printed declarations are unambiguous."""
    by_name = {}
    return [by_name.setdefault(s.name, s) for s in symbols]


def random_twist(rng):
    return rng.choice([Fraction(0)] * 4 + [Fraction(1, 2), Fraction(-1, 2), Fraction(3), Fraction(-5, 3)])


def random_value(rng: random.Random):
    kind = rng.choice(["rep", "rep", "segment", "multisegment", "esspeh"])
    syms = _consistent([random_symbol(rng) for _ in range(3)])
    if kind == "rep":
        n = rng.randint(0, 4)
        return ArthurTypeRep(SpehRep(rng.choice(syms), rng.randint(1, 4), rng.randint(1, 4), 0, random_twist(rng))
                             for _ in range(n))
    if kind == "esspeh":
        return SpehRep(syms[0], rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3), random_twist(rng))

    def seg():
        a = Fraction(rng.randint(-6, 6), rng.choice([1, 2]))
        return Segment(rng.choice(syms), a, a + rng.randint(0, 3))

    if kind == "segment":
        return seg()
    return Multisegment(seg() for _ in range(rng.randint(0, 4)))


def symbols_in(value):
    if isinstance(value, SpehRep):
        return [value.rho]
    if isinstance(value, Segment):
        return [value.base]
    return [s for item in value for s in symbols_in(item)]


# -- independent derivative-support oracle --------------------------------------------

def _speh_support(m, d):
    """Exponent multiset of ``u(m, d)`` on its line, straight from the segment picture."""
    out = Counter()
    for i in range(m):
        s = Fraction(-(m - 1), 2) + i
        for t in range(d):
            out[s - Fraction(d - 1, 2) + t] += 1
    return out


def shifted_right_support(m, d, j):
    """``cupp(nu^{1/2} u(m,d)^{(j)})``: ``cupp(u^-)`` plus the run ``(d-m+1)/2 + j .. (m+d-1)/2``."""
    out = _speh_support(m, d - 1) if d > 1 else Counter()
    lo = Fraction(d - m + 1, 2) + j
    x = lo
    while x <= Fraction(m + d - 1, 2):
        out[x] += 1
        x += 1
    return out


def left_support(m, d, j):
    """``cupp(^{(j)} u(m,d))``: drop the bottoms ``(m-d)/2 - j + 1 .. (m-d)/2`` of the highest segments."""
    out = _speh_support(m, d)
    for i in range(j):
        out[Fraction(m - d, 2) - i] -= 1
    return +out


def oracle_candidate_indices(M, N):
    """Brute force over every per-factor split of the derivative orders (rank-one symbols only)."""
    def options(factors, support_fn):
        per = []
        for f in factors:
            per.append([(j, f.rho.name, support_fn(f.m, f.d, j)) for j in range(f.m + 1)])
        return per

    def combine(choice):
        total = Counter()
        for _, name, supp in choice:
            for x, c in supp.items():
                total[(name, x)] += c
        return sum(j for j, _, _ in choice), frozenset((+total).items())

    right = {combine(c) for c in itertools.product(*options(M, shifted_right_support))}
    left = {combine(c) for c in itertools.product(*options(N, left_support))}
    out = set()
    for k, supp in right:
        if (k - 1, supp) in left:
            out.add(k)
    return out
