import json

import pytest

from shootout.complexity import (
    DEFAULT_LIBRARY,
    QuestionPlan,
    consistent_histories,
    min_depth,
    plan_from_dict,
    verify_plan,
)
from shootout.errors import DomainError
from shootout.mechanisms import (
    ADJUSTED_CATCH_UP,
    ALTERNATING,
    CATCH_UP,
    STANDARD,
    TeamId,
    composite,
)

A, B = TeamId.A, TeamId.B
LIB = {p.id: p for p in DEFAULT_LIBRARY}
ABBA_THEN_CU = composite(4, ALTERNATING, CATCH_UP)
EXPECTED = {
    STANDARD: (0, 0),
    ALTERNATING: (1, 1),
    CATCH_UP: (2, 2),
    ADJUSTED_CATCH_UP: (3, 2),
    ABBA_THEN_CU: (3, 2),
}


def test_library_shape():
    assert len(DEFAULT_LIBRARY) == 12
    assert len(LIB) == 12


def test_history_count():
    assert sum(1 for _ in consistent_histories(STANDARD, 4)) == 1 + 4 + 16 + 64
    with pytest.raises(DomainError):
        list(consistent_histories(STANDARD, 11))


def test_constant_plan():
    assert verify_plan(QuestionPlan.leaf(A), STANDARD, 8)
    assert not verify_plan(QuestionPlan.leaf(A), ALTERNATING, 8)


def test_parity_plan_for_alternating():
    plan = QuestionPlan.ask(LIB["next_round_even"], QuestionPlan.leaf(B), QuestionPlan.leaf(A))
    assert verify_plan(plan, ALTERNATING, 8)
    assert not verify_plan(plan, CATCH_UP, 8)


@pytest.mark.parametrize("mech", list(EXPECTED))
def test_min_depth(mech):
    res = min_depth(mech, DEFAULT_LIBRARY, 8, 4)
    assert res.found
    assert (res.worst_case_depth, res.best_case_leaf_depth) == EXPECTED[mech]
    assert verify_plan(res.witness_plan, mech, 8)
    assert res.best_case_leaf_depth <= res.worst_case_depth


@pytest.mark.parametrize("mech", list(EXPECTED))
def test_zero_depth_iff_constant(mech):
    kickers = {first for _, _, first in consistent_histories(mech, 8)}
    assert (min_depth(mech).worst_case_depth == 0) == (len(kickers) == 1)


def test_alternating_plan_ignores_kick_results():
    plan = min_depth(ALTERNATING).witness_plan
    assert plan.predicates() <= {"next_round_even"} | {f"next_round_le_{k}" for k in range(1, 9)}


@pytest.mark.parametrize("mech", [CATCH_UP, ADJUSTED_CATCH_UP, ABBA_THEN_CU])
def test_removing_a_used_predicate_never_helps(mech):
    base = min_depth(mech)
    for pid in base.witness_plan.predicates():
        lib = [p for p in DEFAULT_LIBRARY if p.id != pid]
        res = min_depth(mech, lib)
        assert not res.found or res.worst_case_depth >= base.worst_case_depth


def test_search_budget_exhausted():
    res = min_depth(CATCH_UP, DEFAULT_LIBRARY, 8, 1)
    assert not res.found and res.worst_case_depth is None
    parity_only = [LIB["next_round_even"]]
    assert not min_depth(CATCH_UP, parity_only).found


def test_guards():
    with pytest.raises(DomainError):
        min_depth(CATCH_UP, [])
    with pytest.raises(DomainError):
        min_depth(CATCH_UP, DEFAULT_LIBRARY, 8, 5)
    with pytest.raises(DomainError):
        QuestionPlan()
    with pytest.raises(DomainError):
        QuestionPlan(predicate=LIB["next_round_even"], yes=QuestionPlan.leaf(A))


def test_plan_serialisation_round_trips():
    plan = min_depth(ADJUSTED_CATCH_UP).witness_plan
    again = plan_from_dict(json.loads(plan.to_json()))
    assert again == plan
    text = plan.to_text()
    assert text.startswith("if next_round_sudden_death then")
    assert text.count("else") == 5  # one per question
    with pytest.raises(DomainError):
        plan_from_dict({"ask": "moon_phase", "yes": {"leaf": "A"}, "no": {"leaf": "B"}})


def test_paths_ask_distinct_predicates():
    def paths(node, seen):
        if node.is_leaf:
            return
        assert node.predicate.id not in seen
        for child in (node.yes, node.no):
            paths(child, seen | {node.predicate.id})

    for mech in EXPECTED:
        paths(min_depth(mech).witness_plan, frozenset())
