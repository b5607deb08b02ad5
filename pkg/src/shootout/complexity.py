"""How many yes/no questions about the history name the next first kicker?

A question plan is a binary decision tree over history predicates with teams
at the leaves. ``min_depth`` searches plans breadth-first by depth over a
fixed predicate library and checks the winner exhaustively against every
consistent history up to a horizon.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .errors import DomainError
from .mechanisms import (
    KickResult,
    Mechanism,
    RoundRecord,
    TeamId,
    _dictate,
)

__all__ = [
    "Predicate",
    "QuestionPlan",
    "ComplexityResult",
    "DEFAULT_LIBRARY",
    "DEFAULT_HORIZON",
    "consistent_histories",
    "verify_plan",
    "min_depth",
    "plan_from_dict",
]

DEFAULT_HORIZON = 8
MAX_HORIZON = 10
MAX_SEARCH_DEPTH = 4
MAX_PLAN_DEPTH = 6


@dataclass(frozen=True)
class Predicate:
    id: str
    evaluate: Callable[[int, Sequence[RoundRecord], int], bool]

    def __call__(self, rnd: int, rounds: Sequence[RoundRecord], regular: int) -> bool:
        return bool(self.evaluate(rnd, rounds, regular))


def _round_at_most(k: int) -> Predicate:
    return Predicate(f"next_round_le_{k}", lambda rnd, rounds, regular: rnd <= k)


DEFAULT_LIBRARY: tuple[Predicate, ...] = (
    Predicate("next_round_even", lambda rnd, rounds, regular: rnd % 2 == 0),
    Predicate("next_round_sudden_death", lambda rnd, rounds, regular: rnd > regular),
    Predicate(
        "prev_first_was_A",
        lambda rnd, rounds, regular: bool(rounds) and rounds[-1].first_kicker is TeamId.A,
    ),
    Predicate(
        "prev_missed_then_scored",
        lambda rnd, rounds, regular: bool(rounds) and rounds[-1].first_missed_second_scored,
    ),
) + tuple(_round_at_most(k) for k in range(1, 9))


@dataclass(frozen=True)
class QuestionPlan:
    """Leaf when ``team`` is set, otherwise ask ``predicate`` and follow
    ``yes`` or ``no``."""

    team: TeamId | None = None
    predicate: Predicate | None = None
    yes: QuestionPlan | None = None
    no: QuestionPlan | None = None

    def __post_init__(self):
        if (self.team is None) == (self.predicate is None):
            raise DomainError("a plan node is either a leaf or a question")
        if self.predicate is not None and (self.yes is None or self.no is None):
            raise DomainError("a question needs both branches")

    @classmethod
    def leaf(cls, team: TeamId) -> QuestionPlan:
        return cls(team=team)

    @classmethod
    def ask(cls, predicate: Predicate, yes: QuestionPlan, no: QuestionPlan) -> QuestionPlan:
        return cls(predicate=predicate, yes=yes, no=no)

    @property
    def is_leaf(self) -> bool:
        return self.team is not None

    @property
    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.yes.depth, self.no.depth)

    @property
    def shallowest_leaf(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + min(self.yes.shallowest_leaf, self.no.shallowest_leaf)

    def predicates(self) -> set[str]:
        if self.is_leaf:
            return set()
        return {self.predicate.id} | self.yes.predicates() | self.no.predicates()

    def decide(self, rnd: int, rounds: Sequence[RoundRecord], regular: int) -> TeamId:
        node = self
        while not node.is_leaf:
            node = node.yes if node.predicate(rnd, rounds, regular) else node.no
        return node.team

    def to_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        if self.is_leaf:
            return f"{pad}{self.team.value}"
        return (
            f"{pad}if {self.predicate.id} then\n{self.yes.to_text(indent + 1)}\n"
            f"{pad}else\n{self.no.to_text(indent + 1)}"
        )

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"leaf": self.team.value}
        return {"ask": self.predicate.id, "yes": self.yes.to_dict(), "no": self.no.to_dict()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def plan_from_dict(data: dict, library: Sequence[Predicate] = DEFAULT_LIBRARY) -> QuestionPlan:
    if "leaf" in data:
        return QuestionPlan.leaf(TeamId(data["leaf"]))
    by_id = {p.id: p for p in library}
    try:
        pred = by_id[data["ask"]]
    except KeyError as exc:
        raise DomainError(f"unknown predicate {exc.args[0]!r}") from None
    return QuestionPlan.ask(
        pred, plan_from_dict(data["yes"], library), plan_from_dict(data["no"], library)
    )


@dataclass(frozen=True)
class ComplexityResult:
    mechanism: Mechanism
    horizon: int
    worst_case_depth: int | None
    best_case_leaf_depth: int | None
    witness_plan: QuestionPlan | None

    @property
    def found(self) -> bool:
        return self.witness_plan is not None

    def as_dict(self) -> dict:
        return {
            "mechanism": str(self.mechanism),
            "horizon": self.horizon,
            "found": self.found,
            "worst_case_depth": self.worst_case_depth,
            "best_case_leaf_depth": self.best_case_leaf_depth,
            "witness_plan": self.witness_plan.to_dict() if self.found else None,
            "witness_text": self.witness_plan.to_text() if self.found else None,
        }


_ROUND_OUTCOMES = tuple(
    (a, b) for a in (KickResult.SCORED, KickResult.MISSED) for b in (KickResult.SCORED, KickResult.MISSED)
)


def consistent_histories(
    mech: Mechanism, horizon: int, regular: int = 5
) -> Iterator[tuple[int, tuple[RoundRecord, ...], TeamId]]:
    """Every ``(round, history, first_kicker)`` with round ≤ horizon, over all
    kick outcomes, first kickers as the mechanism dictates."""
    if not 1 <= horizon <= MAX_HORIZON:
        raise DomainError(f"horizon must be in 1..{MAX_HORIZON}, got {horizon}")

    def walk(rounds):
        rnd = len(rounds) + 1
        first = _dictate(mech, rnd, rounds, regular)
        yield rnd, rounds, first
        if rnd < horizon:
            for r1, r2 in _ROUND_OUTCOMES:
                yield from walk(rounds + (RoundRecord(first, r1, r2),))

    yield from walk(())


def verify_plan(
    plan: QuestionPlan, mech: Mechanism, horizon: int = DEFAULT_HORIZON, regular: int = 5
) -> bool:
    return all(
        plan.decide(rnd, rounds, regular) is first
        for rnd, rounds, first in consistent_histories(mech, horizon, regular)
    )


def min_depth(
    mech: Mechanism,
    library: Sequence[Predicate] = DEFAULT_LIBRARY,
    horizon: int = DEFAULT_HORIZON,
    max_depth: int = MAX_SEARCH_DEPTH,
    regular: int = 5,
) -> ComplexityResult:
    """Shallowest plan over ``library`` that names every first kicker.

    Depths are tried in increasing order and predicates in library order, so
    the witness is deterministic. A result with ``found`` false means no plan
    exists within ``max_depth``.
    """
    if not library:
        raise DomainError("predicate library is empty")
    if not 0 <= max_depth <= MAX_SEARCH_DEPTH:
        raise DomainError(f"max_depth must be in 0..{MAX_SEARCH_DEPTH}")
    library = tuple(library)

    # collapse histories that every predicate sees alike
    cases: dict[tuple[bool, ...], set[TeamId]] = {}
    for rnd, rounds, first in consistent_histories(mech, horizon, regular):
        key = tuple(p(rnd, rounds, regular) for p in library)
        cases.setdefault(key, set()).add(first)
    if any(len(t) > 1 for t in cases.values()):
        return ComplexityResult(mech, horizon, None, None, None)
    labelled = tuple(sorted((key, t.pop()) for key, t in cases.items()))

    memo: dict[tuple, QuestionPlan | None] = {}

    def search(items: tuple, budget: int) -> QuestionPlan | None:
        teams = {team for _, team in items}
        if len(teams) <= 1:
            return QuestionPlan.leaf(teams.pop() if teams else TeamId.A)
        if budget == 0:
            return None
        memo_key = (items, budget)
        if memo_key in memo:
            return memo[memo_key]
        found = None
        for i, pred in enumerate(library):
            yes = tuple(it for it in items if it[0][i])
            no = tuple(it for it in items if not it[0][i])
            # a split that separates nothing cannot help; skipping it also keeps
            # predicates distinct along every path
            if not yes or not no:
                continue
            y = search(yes, budget - 1)
            if y is None:
                continue
            n = search(no, budget - 1)
            if n is None:
                continue
            found = QuestionPlan.ask(pred, y, n)
            break
        memo[memo_key] = found
        return found

    for depth in range(max_depth + 1):
        plan = search(labelled, depth)
        if plan is not None:
            return ComplexityResult(mech, horizon, plan.depth, plan.shallowest_leaf, plan)
    return ComplexityResult(mech, horizon, None, None, None)
