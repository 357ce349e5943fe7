"""Restriction models and their reduction to the basic ``G_{n+1} > G_n`` problem.

Conventions: a problem asks about ``Hom_H(pi_big (x) zeta, pi_small)``.
``big`` lives on ``G_n`` and ``small`` on the smaller group appearing in
``H`` (``G_n`` again for the equal-rank Fourier-Jacobi model).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .branching import SymbolMint, cuspidal_factor, decide_recursive, relevant
from .errors import DimensionError, ModelError
from .speh import ArthurTypeRep, dualize

__all__ = [
    "ModelSpec",
    "BranchingProblem",
    "ReductionStep",
    "ExtFacts",
    "expected_dimensions",
    "validate",
    "reduce_to_basic",
    "model_answer",
    "multiplicity_and_ext_facts",
]

_ARITY = {"basic": 0, "bessel": 3, "fj": 3, "rs": 2, "eqfj": 0}


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ModelError("unknown model kind %r" % (self.kind,))
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.params) != _ARITY[self.kind]:
            raise ModelError("%s takes %d parameters, got %d" % (self.kind, _ARITY[self.kind], len(self.params)))
        if any(not isinstance(p, int) or p < 0 for p in self.params):
            raise ModelError("model parameters must be non-negative integers: %r" % (self.params,))
        if self.kind == "fj" and min(self.params) < 1:
            raise ModelError("Fourier-Jacobi parameters must all be at least 1: %r" % (self.params,))

    @classmethod
    def basic(cls):
        return cls("basic")

    @classmethod
    def bessel(cls, m1: int, m2: int, r: int):
        return cls("bessel", (m1, m2, r))

    @classmethod
    def fourier_jacobi(cls, m1: int, m2: int, r: int):
        return cls("fj", (m1, m2, r))

    @classmethod
    def rankin_selberg(cls, m: int, r: int):
        return cls("rs", (m, r))

    @classmethod
    def equal_rank_fj(cls):
        return cls("eqfj")

    @classmethod
    def parse(cls, text: str) -> "ModelSpec":
        text = text.strip()
        match = re.fullmatch(r"([a-z]+)(?::\s*(\d+(?:\s*,\s*\d+)*))?", text)
        if not match:
            raise ModelError("cannot parse model spec %r" % (text,))
        kind, args = match.groups()
        params = tuple(int(a) for a in args.split(",")) if args else ()
        return cls(kind, params)

    def __str__(self):
        if not self.params:
            return self.kind
        return "%s:%s" % (self.kind, ",".join(str(p) for p in self.params))

    def as_bessel(self) -> "ModelSpec":
        """Rankin-Selberg models are Bessel models with ``m1 = 0``."""
        if self.kind == "rs":
            m, r = self.params
            return ModelSpec("bessel", (0, m, r))
        return self


def expected_dimensions(model: ModelSpec, big_dim: int, small_dim: int) -> tuple[str, bool]:
    """The dimension equation of ``model`` as text, and whether the given dimensions satisfy it."""
    kind = model.kind
    if kind == "basic":
        return "dim big = dim small + 1", big_dim == small_dim + 1
    if kind == "eqfj":
        return "dim big = dim small", big_dim == small_dim
    if kind == "rs":
        m, r = model.params
        return ("dim big = m + r + 1 = %d and dim small = r = %d" % (m + r + 1, r),
                big_dim == m + r + 1 and small_dim == r)
    m1, m2, r = model.params
    total = m1 + m2 + r + (1 if kind == "bessel" else 0)
    label = "m1 + m2 + r + 1" if kind == "bessel" else "m1 + m2 + r"
    return ("dim big = %s = %d and dim small = r = %d" % (label, total, r),
            big_dim == total and small_dim == r)


@dataclass(frozen=True)
class BranchingProblem:
    big: ArthurTypeRep
    small: ArthurTypeRep
    model: ModelSpec = field(default_factory=ModelSpec.basic)


@dataclass
class ReductionStep:
    name: str
    before: BranchingProblem
    after: BranchingProblem
    minted: list = field(default_factory=list)


def validate(p: BranchingProblem) -> None:
    equation, ok = expected_dimensions(p.model, p.big.dimension, p.small.dimension)
    if not ok:
        raise DimensionError("%s model violated: %s (got big %d, small %d)"
                             % (p.model, equation, p.big.dimension, p.small.dimension))


def _bessel_to_basic(p: BranchingProblem, mint: SymbolMint, trace: list) -> BranchingProblem:
    m1, m2, _ = p.model.params
    sigma = mint(m1 + m2 + 2)
    out = BranchingProblem(dualize(p.small) * cuspidal_factor(sigma), dualize(p.big), ModelSpec.basic())
    trace.append(ReductionStep("bessel to basic: add a fresh cuspidal to the smaller side, swap and dualize",
                               p, out, [sigma]))
    return out


def reduce_to_basic(p: BranchingProblem, trace: list | None = None,
                    mint: SymbolMint | None = None) -> BranchingProblem:
    """Rewrite ``p`` as an equivalent basic problem, recording each rewrite in ``trace``."""
    validate(p)
    if trace is None:
        trace = []
    if mint is None:
        mint = SymbolMint.avoiding(p.big, p.small)
    kind = p.model.kind
    if kind == "basic":
        return p
    if kind == "eqfj":
        chi = mint(1)
        out = BranchingProblem(p.big * cuspidal_factor(chi), p.small, ModelSpec.basic())
        trace.append(ReductionStep("equal-rank fourier-jacobi to basic: multiply by a fresh character", p, out, [chi]))
    elif kind == "rs":
        out = BranchingProblem(p.big, p.small, p.model.as_bessel())
        trace.append(ReductionStep("rankin-selberg read as bessel with m1 = 0", p, out))
        out = _bessel_to_basic(out, mint, trace)
    elif kind == "bessel":
        out = _bessel_to_basic(p, mint, trace)
    else:
        m1, m2, r = p.model.params
        swapped = BranchingProblem(dualize(p.big), dualize(p.small), ModelSpec.bessel(m2 - 1, m1, r))
        trace.append(ReductionStep("fourier-jacobi to bessel: transpose-inverse swap and dualize both sides",
                                   p, swapped))
        validate(swapped)
        out = _bessel_to_basic(swapped, mint, trace)
    validate(out)
    return out


def model_answer(p: BranchingProblem, cross_check: bool = True) -> bool:
    """Whether the model problem has a non-zero Hom; ``cross_check`` re-derives it via the basic reduction."""
    validate(p)
    answer = relevant(p.big, p.small) is not None
    if cross_check:
        basic = reduce_to_basic(p)
        if decide_recursive(basic.big, basic.small) != answer:
            raise AssertionError("model reduction changed the answer for %r" % (p,))
    return answer


@dataclass(frozen=True)
class ExtFacts:
    hom_dim_at_most_one: bool
    ext_finite: bool
    ext_vanishes_above_zero: bool


def multiplicity_and_ext_facts(p: BranchingProblem) -> ExtFacts:
    validate(p)
    return ExtFacts(True, True, p.big.is_generic and p.small.is_generic)
