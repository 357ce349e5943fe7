import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arthur_branching import (
    CuspidalSymbol,
    DimensionError,
    InconsistentWitness,
    Multisegment,
    Segment,
    candidate_derivative_indices,
    decide_recursive,
    ext_index_formula_check,
    generic_ext_index,
    relevant,
    relevant_by_chains,
    validate_witness,
    weakly_relevant,
)
from arthur_branching.branching import RelevanceWitness, SymbolMint

from _support import ONE, S, SIGMA, golden, layered_pair, oracle_candidate_indices, random_rep, rep, u

H = Fraction(1, 2)


def seg(a, b, base=ONE):
    return Segment(base, Fraction(a), Fraction(b))


# -- matching decider -------------------------------------------------------------

def test_golden_witness():
    M, N = golden()
    w = relevant(M, N)
    assert w.p_pairs == ((u(ONE, 1, 3), u(ONE, 1, 2)),)
    assert w.q_pairs == ()
    assert w.free_M == (u(ONE, 1, 1), u(ONE, 1, 1))
    assert w.free_N == (u(ONE, 2, 1),)
    assert validate_witness(M, N, w)


def test_relevance_examples():
    assert relevant(rep(u(ONE, 1, 1)), rep()) is not None
    assert relevant(rep(u(ONE, 1, 2)), rep(u(S, 1, 1))) is None
    tempered_m = rep(u(ONE, 2, 1), u(S, 3, 1))
    tempered_n = rep(u(ONE, 1, 1), u(S, 1, 1), u(S, 2, 1))
    assert relevant(tempered_m, tempered_n) is not None


def test_q_pairs_are_found():
    # the N-factor u(1,1,2) has highest derivative u(1,1,1) sitting in M
    M, N = rep(u(ONE, 1, 1), u(S, 1, 1)), rep(u(ONE, 1, 2))
    w = relevant(M, N)
    assert w is not None and w.q_pairs == ((u(ONE, 1, 1), u(ONE, 1, 2)),)
    assert validate_witness(M, N, w)


def test_relevance_ignores_corank():
    assert relevant(rep(u(ONE, 1, 3)), rep(u(ONE, 1, 2), u(ONE, 4, 1))) is not None


def test_validate_witness_rejects_forgeries():
    M, N = golden()
    forged = RelevanceWitness.build(free_M=list(M), free_N=list(N))
    assert not validate_witness(M, N, forged)


def test_chain_matcher_on_long_chain():
    # M_1 - N_2 - M_3 - N_4 on a single (rho, m)
    M = rep(u(ONE, 2, 1), u(ONE, 2, 3))
    N = rep(u(ONE, 2, 2), u(ONE, 2, 4))
    w = relevant_by_chains(M, N)
    assert w is not None and validate_witness(M, N, w)
    assert relevant(M, N) is not None
    assert relevant_by_chains(rep(u(ONE, 2, 3)), rep(u(ONE, 2, 4), u(ONE, 2, 4))) is None


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_chain_matcher_agrees_with_backtracking(seed, n):
    rng = random.Random(seed)
    M, N = random_rep(rng, n), random_rep(rng, rng.randint(0, n))
    slow, fast = relevant(M, N), relevant_by_chains(M, N)
    assert (slow is None) == (fast is None)
    if fast is not None:
        assert validate_witness(M, N, fast)


# -- recursive decider ------------------------------------------------------------

def test_recursive_trace_on_golden():
    M, N = golden()
    trace = []
    assert decide_recursive(M, N, trace)
    assert trace[0].case == "1"
    assert trace[0].removed_M == [u(ONE, 1, 3)] and trace[0].removed_N == [u(ONE, 1, 2)]
    assert trace[1].case == "2"
    assert trace[-1].case == "base"


def test_recursive_examples():
    assert decide_recursive(rep(u(ONE, 1, 1)), rep())
    trace = []
    assert not decide_recursive(rep(u(ONE, 1, 2)), rep(u(S, 1, 1)), trace)
    assert trace[-1].case == "fail"


def test_recursive_requires_corank_one():
    with pytest.raises(DimensionError):
        decide_recursive(rep(u(ONE, 1, 2)), rep())


def test_tie_goes_to_first_case():
    # m + d = 3 on both sides
    trace = []
    decide_recursive(rep(u(ONE, 1, 2), u(S, 1, 1)), rep(u(ONE, 2, 1)), trace)
    assert trace[0].case == "fail" and trace[0].removed_M == [u(ONE, 1, 2)]
    trace = []
    assert decide_recursive(rep(u(ONE, 1, 2), u(S, 1, 1)), rep(u(ONE, 1, 1), u(S, 1, 1)), trace)
    assert trace[0].case == "1"


def test_minted_symbols_are_fresh():
    poison = CuspidalSymbol("#f1")
    M = rep(u(poison, 1, 2), u(ONE, 1, 1))
    N = rep(u(poison, 1, 1), u(ONE, 1, 1))
    trace = []
    decide_recursive(M, N, trace)
    minted = [s.name for step in trace for s in step.minted]
    assert "#f1" not in minted and len(set(minted)) == len(minted)
    mint = SymbolMint(["#f1~"])
    assert mint(1).name == "#f2"


def test_non_cuspidal_count_drops_in_first_case():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 6)
        M, N = random_rep(rng, n + 1), random_rep(rng, n)
        trace = []
        decide_recursive(M, N, trace)
        for before, after in zip(trace, trace[1:]):
            if before.case == "1":
                assert after.non_cuspidal < before.non_cuspidal


# -- weak relevance ---------------------------------------------------------------

def test_weak_relevance_examples():
    w = weakly_relevant(Multisegment([seg(-1, 1)]), Multisegment([seg(-H, H)]))
    assert w is not None and w.matches[0][1] == "p"
    assert weakly_relevant(Multisegment([seg(0, 0)]), Multisegment()) is not None
    assert weakly_relevant(Multisegment([seg(0, 1)]), Multisegment([seg(5, 5)])) is None


@pytest.mark.parametrize("m_seg, n_seg, role", [
    ((0, 2), (-H, 3 * H + 1), "q"),
    ((0, 1), (-H, H), "a"),
    ((0, 1), (H, 3 * H), "b"),
])
def test_weak_relevance_roles(m_seg, n_seg, role):
    w = weakly_relevant(Multisegment([seg(*m_seg)]), Multisegment([seg(*n_seg)]))
    assert w is not None and w.matches[0][1] == role


def test_unmatched_n_segments_must_be_short():
    assert weakly_relevant(Multisegment(), Multisegment([seg(0, 0)])) is not None
    assert weakly_relevant(Multisegment(), Multisegment([seg(0, 1)])) is None


# -- Ext indices ------------------------------------------------------------------

def test_generic_ext_index_examples():
    M = rep(u(ONE, 2, 1), u(SIGMA, 3, 1))
    N = rep(u(ONE, 2, 2))
    assert generic_ext_index(M, N) == 3
    assert generic_ext_index(rep(u(ONE, 1, 1), u(SIGMA, 4, 1)), N) is None
    both = generic_ext_index(rep(u(ONE, 2, 1), u(S, 1, 1)), rep(u(ONE, 2, 1)))
    assert both == 3


def test_generic_ext_index_when_only_n_is_generic():
    M = rep(u(ONE, 1, 2), u(ONE, 1, 1))
    assert generic_ext_index(M, rep(u(ONE, 1, 1), u(S, 1, 1))) == 2
    assert generic_ext_index(M, rep(u(ONE, 2, 1))) is None


def test_generic_ext_index_errors():
    with pytest.raises(ValueError):
        generic_ext_index(rep(u(ONE, 1, 3)), rep(u(ONE, 1, 2)))
    with pytest.raises(DimensionError):
        generic_ext_index(rep(u(ONE, 1, 1)), rep(u(ONE, 1, 1)))


@pytest.mark.parametrize("e, expected", [(3, {2, 3}), (4, {2, 4}), (5, {2, 5})])
def test_example_candidate_indices(e, expected):
    M, N = layered_pair(e)
    assert oracle_candidate_indices(M, N) == expected
    assert candidate_derivative_indices(M, N) == expected


def test_candidate_indices_on_cuspidal_pairs():
    M = rep(u(ONE, 1, 1), u(S, 1, 1), u(ONE, 1, 1))
    N = rep(u(ONE, 1, 1), u(S, 1, 1))
    assert candidate_derivative_indices(M, N) == {3}


def test_candidate_indices_against_oracle():
    rng = random.Random(9)
    for _ in range(150):
        n = rng.randint(0, 5)
        M, N = random_rep(rng, n + 1), random_rep(rng, n)
        assert candidate_derivative_indices(M, N) == oracle_candidate_indices(M, N)


def test_formula_index_examples():
    M, N = golden()
    assert ext_index_formula_check(relevant(M, N)) == 2
    cusp_m = rep(u(ONE, 1, 1), u(S, 1, 1), u(S, 1, 1))
    cusp_n = rep(u(ONE, 1, 1), u(S, 1, 1))
    assert ext_index_formula_check(relevant(cusp_m, cusp_n)) == 2
    assert ext_index_formula_check(relevant(rep(u(ONE, 3, 1)), rep(u(ONE, 2, 1)))) == 2


def test_formula_index_on_bad_witness():
    bad = RelevanceWitness.build(free_M=[u(ONE, 1, 1)], free_N=[u(ONE, 1, 1)])
    with pytest.raises(InconsistentWitness):
        ext_index_formula_check(bad)


def test_formula_index_matches_the_hom_layer():
    # the Hom-carrying index is always among the support-level candidates
    rng = random.Random(21)
    checked = 0
    for _ in range(300):
        n = rng.randint(0, 5)
        M, N = random_rep(rng, n + 1), random_rep(rng, n)
        w = relevant(M, N)
        if w is None:
            continue
        checked += 1
        assert ext_index_formula_check(w) + 1 in candidate_derivative_indices(M, N)
    assert checked > 50
