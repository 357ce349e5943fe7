"""Exhaustive cross-checks of the deciders on small instances, and JSONL reports."""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .branching import (
    SymbolMint,
    candidate_derivative_indices,
    cuspidal_factor,
    decide_recursive,
    generic_ext_index,
    relevant,
    relevant_by_chains,
    validate_witness,
    weakly_relevant,
)
from .dsl import to_text
from .core_symbols import TRIVIAL, CuspidalSymbol, Multisegment, Segment, zelevinsky_dual
from .speh import ArthurTypeRep, SpehRep, dualize, level, zelevinsky_data, zelevinsky_multisegment

__all__ = [
    "JOBS_ENV",
    "ALL_CHECKS",
    "EnumerationConfig",
    "EnumerationReport",
    "InvolutionConfig",
    "default_jobs",
    "golden_instance",
    "speh_factors",
    "enumerate_arthur_reps",
    "corank_one_pairs",
    "check_instance",
    "shrink_counterexample",
    "run_equivalence_suite",
    "run_involution_suite",
    "write_report",
]

JOBS_ENV = "ARTHUR_BRANCHING_JOBS"
ALL_CHECKS = frozenset({"equivalence", "accelerator", "necessity", "duality", "invariance", "ext"})
_LINE_NAMES = ["s", "t", "r", "q", "p"]


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class EnumerationConfig:
    """Bounds of a corpus run.

    ``exponent_window`` keeps only Speh factors whose cuspidal support lies
    inside ``[lo, hi]``; ``None`` removes the restriction.
    """

    max_big_dim: int = 6
    num_lines: int = 2
    line_ranks: tuple[int, ...] = (1, 1)
    exponent_window: tuple[int, int] | None = (-1, 1)
    checks: frozenset = ALL_CHECKS
    jobs: int = field(default_factory=default_jobs)
    include_golden: bool = True

    def __post_init__(self):
        if self.max_big_dim < 0:
            raise ValueError("max_big_dim must be non-negative")
        if len(self.line_ranks) != self.num_lines:
            raise ValueError("need one rank per line: %d lines, ranks %r" % (self.num_lines, self.line_ranks))
        unknown = set(self.checks) - ALL_CHECKS
        if unknown:
            raise ValueError("unknown checks: %s" % ", ".join(sorted(unknown)))

    def alphabet(self) -> list[CuspidalSymbol]:
        out = []
        names = iter(_LINE_NAMES)
        for i, rank in enumerate(self.line_ranks):
            if i == 0 and rank == 1:
                out.append(TRIVIAL)
            else:
                out.append(CuspidalSymbol(next(names), rank))
        return out


def golden_instance() -> tuple[ArthurTypeRep, ArthurTypeRep]:
    """``<[-1,1]> x 1 x 1`` against ``<[-1/2,1/2]> x St([-1/2,1/2])`` in ``GL_5 x GL_4``."""
    one = TRIVIAL
    return (ArthurTypeRep([SpehRep(one, 1, 3), SpehRep(one, 1, 1), SpehRep(one, 1, 1)]),
            ArthurTypeRep([SpehRep(one, 1, 2), SpehRep(one, 2, 1)]))


def _in_window(u: SpehRep, window) -> bool:
    if window is None:
        return True
    radius = Fraction(u.m + u.d - 2, 2)
    lo, hi = window
    return lo <= -radius and radius <= hi


def speh_factors(max_dim: int, alphabet: Iterable[CuspidalSymbol], window=None) -> list[SpehRep]:
    out = []
    for rho in alphabet:
        for m in range(1, max_dim + 1):
            for d in range(1, max_dim + 1):
                u = SpehRep(rho, m, d)
                if u.dimension <= max_dim and _in_window(u, window):
                    out.append(u)
    return sorted(out, key=SpehRep.sort_key)


def enumerate_arthur_reps(dim: int, alphabet: Iterable[CuspidalSymbol], window=None) -> Iterator[ArthurTypeRep]:
    """Every unitary Arthur-type representation of ``G_dim`` over ``alphabet``, each exactly once."""
    if dim < 0:
        raise ValueError("dimension must be non-negative")
    factors = speh_factors(dim, list(alphabet), window)

    def build(start: int, remaining: int):
        if remaining == 0:
            yield ()
            return
        for i in range(start, len(factors)):
            f = factors[i]
            if f.dimension <= remaining:
                for rest in build(i, remaining - f.dimension):
                    yield (f,) + rest

    for combo in build(0, dim):
        yield ArthurTypeRep(combo)


def corank_one_pairs(cfg: EnumerationConfig) -> list[tuple[ArthurTypeRep, ArthurTypeRep]]:
    alphabet = cfg.alphabet()
    cache = {}

    def reps(n):
        if n not in cache:
            cache[n] = list(enumerate_arthur_reps(n, alphabet, cfg.exponent_window))
        return cache[n]

    pairs = []
    for n in range(cfg.max_big_dim):
        for M in reps(n + 1):
            for N in reps(n):
                pairs.append((M, N))
    return pairs


# -- per-instance checks -----------------------------------------------------

def _text(rep: ArthurTypeRep) -> str:
    return to_text(rep)


def _failures(M: ArthurTypeRep, N: ArthurTypeRep, checks=ALL_CHECKS) -> tuple[dict, list[str]]:
    """Evaluate every requested check; returns the record fields and the names of failed checks."""
    rec: dict = {}
    failed = []
    witness = relevant(M, N)
    matcher = witness is not None
    rec["matcher"] = matcher
    if matcher and not validate_witness(M, N, witness):
        failed.append("witness")
    if "equivalence" in checks:
        rec["recursive"] = decide_recursive(M, N)
        rec["agree"] = rec["recursive"] == matcher
        if not rec["agree"]:
            failed.append("equivalence")
    if "accelerator" in checks:
        fast = relevant_by_chains(M, N)
        if (fast is not None) != matcher or (fast is not None and not validate_witness(M, N, fast)):
            failed.append("accelerator")
    if "necessity" in checks:
        weak = weakly_relevant(zelevinsky_multisegment(M), zelevinsky_multisegment(N)) is not None
        rec["weakly_relevant"] = weak
        if matcher and not weak:
            failed.append("necessity")
    if "duality" in checks:
        rec["dual_matcher"] = relevant(dualize(M), dualize(N)) is not None
        if rec["dual_matcher"] != matcher:
            failed.append("duality")
    if "invariance" in checks:
        mint = SymbolMint.avoiding(M, N)
        swapped = relevant(N * cuspidal_factor(mint(2)), M) is not None
        augmented = relevant(M * cuspidal_factor(mint(1)), N * cuspidal_factor(mint(1))) is not None
        if swapped != matcher or augmented != matcher:
            failed.append("invariance")
    if "ext" in checks and (M.is_generic or N.is_generic):
        j = generic_ext_index(M, N)
        cands = candidate_derivative_indices(M, N)
        rec["generic_ext_index"] = j
        rec["candidate_indices"] = sorted(cands)
        ok = True
        if j is not None:
            ok = cands <= {j}
            if not M.is_generic:
                ok = ok and j == level(M)
            elif not N.is_generic:
                ok = ok and j == level(N) + 1
            else:
                ok = ok and j == N.dimension + 1
        if not ok:
            failed.append("ext")
    return rec, failed


def check_instance(job: tuple[int, ArthurTypeRep, ArthurTypeRep, frozenset]) -> dict:
    index, M, N, checks = job
    rec = {"index": index, "M": _text(M), "N": _text(N)}
    try:
        fields, failed = _failures(M, N, checks)
        rec.update(fields)
        rec["failed"] = failed
        rec["error"] = None
    except Exception as exc:  # surfaced in the report, never dropped
        rec["failed"] = ["error"]
        rec["error"] = "%s: %s" % (type(exc).__name__, exc)
    return rec


def shrink_counterexample(M: ArthurTypeRep, N: ArthurTypeRep,
                          still_fails: Callable[[ArthurTypeRep, ArthurTypeRep], bool]) -> tuple[ArthurTypeRep, ArthurTypeRep]:
    """Greedily drop factors, keeping the corank, while ``still_fails`` holds."""
    progress = True
    while progress:
        progress = False
        options = []
        for f in set(M):
            for g in set(N):
                if f.dimension == g.dimension:
                    options.append((M.remove(f), N.remove(g)))
        for smaller in options:
            if still_fails(*smaller):
                M, N = smaller
                progress = True
                break
    return M, N


def _shrink(M: ArthurTypeRep, N: ArthurTypeRep, failed: list[str], checks) -> dict:
    target = set(failed)

    def still_fails(m, n):
        try:
            return bool(target & set(_failures(m, n, checks)[1]))
        except Exception:
            return "error" in target
    M2, N2 = shrink_counterexample(M, N, still_fails)
    return {"M": _text(M2), "N": _text(N2), "failed": sorted(target)}


@dataclass
class EnumerationReport:
    records: list[dict]
    summary: dict

    @property
    def ok(self) -> bool:
        return self.summary["failures"] == 0

    def count(self, check: str) -> int:
        return self.summary["violations"].get(check, 0)


def run_equivalence_suite(cfg: EnumerationConfig, pairs: list | None = None,
                          report_path: str | None = None) -> EnumerationReport:
    """Run every configured check on every corank-one pair within bounds (plus the golden instance)."""
    start = time.perf_counter()
    if pairs is None:
        pairs = corank_one_pairs(cfg)
    pairs = list(pairs)
    golden = golden_instance()
    if cfg.include_golden and golden not in pairs:
        pairs.insert(0, golden)
    checks = frozenset(cfg.checks)
    jobs = [(i, M, N, checks) for i, (M, N) in enumerate(pairs)]
    if cfg.jobs > 1 and len(jobs) > 1:
        chunk = max(1, len(jobs) // (cfg.jobs * 8))
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(check_instance, jobs, chunksize=chunk))
    else:
        records = [check_instance(job) for job in jobs]
    records.sort(key=lambda r: r["index"])
    for rec, (M, N) in zip(records, pairs):
        if (M, N) == golden:
            rec["golden"] = True

    violations: dict[str, int] = {}
    counterexamples = []
    for rec, (M, N) in zip(records, pairs):
        for name in rec["failed"]:
            violations[name] = violations.get(name, 0) + 1
        if rec["failed"] and len(counterexamples) < 10:
            counterexamples.append(_shrink(M, N, rec["failed"], checks))
    failures = sum(1 for r in records if r["failed"])
    summary = {
        "summary": True,
        "instances": len(records),
        "relevant": sum(1 for r in records if r.get("matcher")),
        "agree": sum(1 for r in records if r.get("agree")),
        "failures": failures,
        "violations": violations,
        "errors": sum(1 for r in records if r.get("error")),
        "counterexamples": counterexamples,
        "checks": sorted(checks),
        "config": {
            "max_big_dim": cfg.max_big_dim,
            "line_ranks": list(cfg.line_ranks),
            "exponent_window": list(cfg.exponent_window) if cfg.exponent_window is not None else None,
            "jobs": cfg.jobs,
        },
        "elapsed_seconds": round(time.perf_counter() - start, 3),
    }
    report = EnumerationReport(records, summary)
    if report_path is not None:
        write_report(report, report_path)
    return report


def write_report(report: EnumerationReport, path: str) -> None:
    with open(path, "w") as fh:
        for rec in report.records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        fh.write(json.dumps(report.summary, sort_keys=True) + "\n")


# -- involution checks ---------------------------------------------------------

@dataclass(frozen=True)
class InvolutionConfig:
    max_support: int = 6
    exponents: tuple[int, int] = (0, 4)
    speh_max: int = 4
    random_trials: int = 1000
    seed: int = 0


def _all_multisegments(max_support: int, lo: int, hi: int, base: CuspidalSymbol) -> Iterator[Multisegment]:
    segs = [Segment(base, a, b) for a in range(lo, hi + 1) for b in range(a, hi + 1)]

    def build(start, room):
        yield ()
        for i in range(start, len(segs)):
            if segs[i].length <= room:
                for rest in build(i, room - segs[i].length):
                    yield (segs[i],) + rest

    for combo in build(0, max_support):
        yield Multisegment(combo)


def run_involution_suite(cfg: InvolutionConfig = InvolutionConfig()) -> dict:
    rho = TRIVIAL
    lo, hi = cfg.exponents
    failures = []
    count = 0
    for m in _all_multisegments(cfg.max_support, lo, hi, rho):
        count += 1
        d = zelevinsky_dual(m)
        if zelevinsky_dual(d) != m or d.support() != m.support():
            failures.append(("involution", str(m)))

    speh_pairs = 0
    for m_ in range(1, cfg.speh_max + 1):
        for d_ in range(1, cfg.speh_max + 1):
            speh_pairs += 1
            if zelevinsky_dual(zelevinsky_data(SpehRep(rho, m_, d_))) != zelevinsky_data(SpehRep(rho, d_, m_)):
                failures.append(("speh", "u(%d,%d)" % (m_, d_)))

    rng = random.Random(cfg.seed)
    pool = list(_all_multisegments(cfg.max_support, lo, hi, rho))
    for _ in range(cfg.random_trials):
        m = rng.choice(pool)
        if zelevinsky_dual(m, rng=rng) != zelevinsky_dual(m):
            failures.append(("tie-break", str(m)))

    singles_ok = all(zelevinsky_dual(Multisegment([Segment(rho, x, x)])) == Multisegment([Segment(rho, x, x)])
                     for x in range(lo, hi + 1))
    if not singles_ok:
        failures.append(("singleton", ""))
    return {
        "multisegments": count,
        "speh_identities": speh_pairs,
        "random_trials": cfg.random_trials,
        "failures": failures,
        "ok": not failures,
    }
