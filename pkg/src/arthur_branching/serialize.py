"""Plain-JSON views of the library's values (consumed by the CLI and reports)."""

from __future__ import annotations

from .branching import RelevanceWitness, TraceStep, WeaklyRelevantWitness
from .core_symbols import CuspidalSymbol, Multisegment, Segment
from .dsl import to_text
from .speh import ArthurTypeRep, SpehRep

__all__ = [
    "symbol_json",
    "speh_json",
    "rep_json",
    "segment_json",
    "multisegment_json",
    "witness_json",
    "weak_witness_json",
    "trace_json",
]


def symbol_json(s: CuspidalSymbol) -> dict:
    return {"name": s.name, "rank": s.rank, "dual": s.partner_name}


def speh_json(u: SpehRep) -> dict:
    return {"rho": u.rho.name, "rank": u.rho.rank, "m": u.m, "d": u.d, "k": u.k, "twist": str(u.twist)}


def rep_json(x: ArthurTypeRep) -> dict:
    return {"text": to_text(x), "dimension": x.dimension, "factors": [speh_json(f) for f in x]}


def segment_json(s: Segment) -> dict:
    return {"rho": s.base.name, "rank": s.base.rank, "a": str(s.a), "b": str(s.b)}


def multisegment_json(m: Multisegment) -> dict:
    return {"text": to_text(m, declare=False), "segments": [segment_json(s) for s in m]}


def witness_json(w: RelevanceWitness | None):
    if w is None:
        return None
    return {
        "p_pairs": [[speh_json(u), speh_json(v)] for u, v in w.p_pairs],
        "q_pairs": [[speh_json(u), speh_json(v)] for u, v in w.q_pairs],
        "free_M": [speh_json(u) for u in w.free_M],
        "free_N": [speh_json(v) for v in w.free_N],
    }


def weak_witness_json(w: WeaklyRelevantWitness | None):
    if w is None:
        return None
    return {
        "matches": [{"segment": str(s), "role": role, "partner": str(t) if t is not None else None}
                    for s, role, t in w.matches],
        "unmatched_n": [str(t) for t in w.unmatched_n],
    }


def trace_json(steps: list[TraceStep]) -> list[dict]:
    return [{
        "case": st.case,
        "removed_M": [speh_json(u) for u in st.removed_M],
        "removed_N": [speh_json(u) for u in st.removed_N],
        "minted": [symbol_json(s) for s in st.minted],
    } for st in steps]
