"""Teams, kick outcomes, shootout histories and first-mover rules.

A mechanism is a pure function of ``(round, history)`` naming the team that
kicks first in that round. Rounds are 1-indexed and sudden death begins at
``regular_rounds + 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

from .errors import ConsistencyError, DomainError

__all__ = [
    "TeamId",
    "KickResult",
    "RoundRecord",
    "ShootoutHistory",
    "Variant",
    "Mechanism",
    "STANDARD",
    "ALTERNATING",
    "CATCH_UP",
    "ADJUSTED_CATCH_UP",
    "composite",
    "parse_mechanism",
    "first_kicker",
    "ScheduleRow",
    "replay_schedule",
    "parse_kicks",
    "format_kicks",
    "is_decided",
    "regular_phase_winner",
    "mechanism_program",
    "program_kicker",
]

MAX_COMPOSITE_DEPTH = 4


class TeamId(str, Enum):
    """The two teams; ``A`` takes the very first kick of the shootout."""

    A = "A"
    B = "B"

    @property
    def other(self) -> TeamId:
        return TeamId.B if self is TeamId.A else TeamId.A


class KickResult(str, Enum):
    SCORED = "S"
    MISSED = "M"

    @property
    def scored(self) -> bool:
        return self is KickResult.SCORED


class RoundRecord(NamedTuple):
    """One completed round. The second kicker is always ``first_kicker.other``."""

    first_kicker: TeamId
    first_result: KickResult
    second_result: KickResult

    @property
    def second_kicker(self) -> TeamId:
        return self.first_kicker.other

    @property
    def first_missed_second_scored(self) -> bool:
        return not self.first_result.scored and self.second_result.scored

    def goals(self, team: TeamId) -> int:
        if team is self.first_kicker:
            return int(self.first_result.scored)
        return int(self.second_result.scored)


@dataclass(frozen=True)
class ShootoutHistory:
    rounds: tuple[RoundRecord, ...] = ()
    regular_rounds: int = 5

    def __post_init__(self):
        if self.regular_rounds < 1:
            raise DomainError("regular_rounds must be a positive integer")
        object.__setattr__(self, "rounds", tuple(self.rounds))

    def __len__(self) -> int:
        return len(self.rounds)

    def score(self, team: TeamId, upto: int | None = None) -> int:
        rounds = self.rounds if upto is None else self.rounds[:upto]
        return sum(r.goals(team) for r in rounds)

    def append(self, record: RoundRecord) -> ShootoutHistory:
        return ShootoutHistory(self.rounds + (record,), self.regular_rounds)


class Variant(str, Enum):
    STANDARD = "standard"
    ALTERNATING = "abba"
    CATCH_UP = "catchup"
    ADJUSTED_CATCH_UP = "adj-catchup"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class Mechanism:
    """A shootout rule.

    Composite rules apply ``before`` for rounds below ``switch_round`` and
    ``after`` from ``switch_round`` on, with ``after`` counting
    ``switch_round`` as its own first round. A Catch-Up rule whose first
    local round is not round 1 of the shootout applies its usual transition
    to the last round played under ``before``.
    """

    variant: Variant
    switch_round: int | None = None
    before: Mechanism | None = field(default=None, repr=False)
    after: Mechanism | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.variant is Variant.COMPOSITE:
            if self.before is None or self.after is None or self.switch_round is None:
                raise DomainError("composite needs switch_round, before and after")
            if self.switch_round < 2:
                raise DomainError("composite switch_round must be at least 2")
            if self.depth > MAX_COMPOSITE_DEPTH:
                raise DomainError(
                    f"composite nesting deeper than {MAX_COMPOSITE_DEPTH}"
                )
        elif any(x is not None for x in (self.switch_round, self.before, self.after)):
            raise DomainError(f"{self.variant.value} takes no composite fields")

    @property
    def depth(self) -> int:
        if self.variant is not Variant.COMPOSITE:
            return 0
        return 1 + max(self.before.depth, self.after.depth)

    def __str__(self) -> str:
        if self.variant is Variant.COMPOSITE:
            return f"composite({self.switch_round},{self.before},{self.after})"
        return self.variant.value


STANDARD = Mechanism(Variant.STANDARD)
ALTERNATING = Mechanism(Variant.ALTERNATING)
CATCH_UP = Mechanism(Variant.CATCH_UP)
ADJUSTED_CATCH_UP = Mechanism(Variant.ADJUSTED_CATCH_UP)

_SIMPLE = {
    "standard": STANDARD,
    "abab": STANDARD,
    "abba": ALTERNATING,
    "alternating": ALTERNATING,
    "catchup": CATCH_UP,
    "catch-up": CATCH_UP,
    "adj-catchup": ADJUSTED_CATCH_UP,
    "adjusted-catchup": ADJUSTED_CATCH_UP,
}


def composite(switch_round: int, before: Mechanism, after: Mechanism) -> Mechanism:
    return Mechanism(Variant.COMPOSITE, switch_round, before, after)


_TOKEN = re.compile(r"\s*([A-Za-z][A-Za-z-]*|\d+|[(),])")


def parse_mechanism(text: str) -> Mechanism:
    """Parse ``standard``, ``abba``, ``catchup``, ``adj-catchup`` or
    ``composite(<k>,<before>,<after>)`` (nestable)."""
    tokens: list[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DomainError(f"cannot parse mechanism {text!r} at offset {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.reverse()

    def expect(tok: str) -> None:
        if not tokens or tokens.pop() != tok:
            raise DomainError(f"malformed mechanism {text!r}: expected {tok!r}")

    def parse() -> Mechanism:
        if not tokens:
            raise DomainError(f"malformed mechanism {text!r}")
        name = tokens.pop().lower()
        if name == "composite":
            expect("(")
            if not tokens or not tokens[-1].isdigit():
                raise DomainError(f"malformed mechanism {text!r}: missing switch round")
            k = int(tokens.pop())
            expect(",")
            before = parse()
            expect(",")
            after = parse()
            expect(")")
            return composite(k, before, after)
        try:
            return _SIMPLE[name]
        except KeyError:
            raise DomainError(f"unknown mechanism {name!r}") from None

    mech = parse()
    if tokens:
        raise DomainError(f"trailing input in mechanism {text!r}")
    return mech


def _catch_up(rnd: int, rounds: Sequence[RoundRecord]) -> TeamId:
    if rnd == 1:
        return TeamId.A
    prev = rounds[rnd - 2]
    if prev.first_missed_second_scored:
        return prev.first_kicker
    return prev.first_kicker.other


def _dictate(
    mech: Mechanism, rnd: int, rounds: Sequence[RoundRecord], regular: int, offset: int = 0
) -> TeamId:
    # offset = number of rounds played before this rule's own round 1
    v = mech.variant
    if v is Variant.STANDARD:
        return TeamId.A
    if v is Variant.ALTERNATING:
        return TeamId.A if (rnd - offset) % 2 == 1 else TeamId.B
    if v is Variant.CATCH_UP:
        return _catch_up(rnd, rounds)
    if v is Variant.ADJUSTED_CATCH_UP:
        if rnd <= regular:
            return _catch_up(rnd, rounds)
        return TeamId.B if (rnd - regular) % 2 == 1 else TeamId.A
    if rnd - offset < mech.switch_round:
        return _dictate(mech.before, rnd, rounds, regular, offset)
    return _dictate(mech.after, rnd, rounds, regular, offset + mech.switch_round - 1)


def first_kicker(
    mech: Mechanism, rnd: int, history: ShootoutHistory, *, check: bool = True
) -> TeamId:
    """Team kicking first in round ``rnd`` given the ``rnd - 1`` rounds played.

    With ``check`` (the default) every recorded first kicker is validated
    against the mechanism and a :class:`ConsistencyError` is raised on the
    first mismatch.
    """
    if rnd < 1:
        raise DomainError(f"round must be positive, got {rnd}")
    rounds = history.rounds
    if len(rounds) != rnd - 1:
        raise DomainError(
            f"round {rnd} needs a history of {rnd - 1} rounds, got {len(rounds)}"
        )
    regular = history.regular_rounds
    if check:
        for k, rec in enumerate(rounds, start=1):
            expected = _dictate(mech, k, rounds, regular)
            if rec.first_kicker is not expected:
                raise ConsistencyError(
                    f"round {k}: history has {rec.first_kicker.value} first, "
                    f"{mech} dictates {expected.value}"
                )
    return _dictate(mech, rnd, rounds, regular)


# -- kick strings and schedules ------------------------------------------------


def parse_kicks(text: str) -> list[KickResult]:
    """Parse a kick string such as ``"SS.MM.SS"`` into kick results.

    Groups are per round, in kick order, separated by ``.``; whitespace is
    ignored.
    """
    cleaned = "".join(text.split())
    if not cleaned:
        return []
    out = []
    for group in cleaned.split("."):
        if len(group) != 2:
            raise DomainError(f"kick group {group!r} must have exactly two kicks")
        for ch in group.upper():
            if ch not in "SM":
                raise DomainError(f"kick result must be S or M, got {ch!r}")
            out.append(KickResult(ch))
    return out


def format_kicks(rounds: Iterable[RoundRecord], pending: KickResult | None = None) -> str:
    groups = [r.first_result.value + r.second_result.value for r in rounds]
    if pending is not None:
        groups.append(pending.value)
    return ".".join(groups)


class ScheduleRow(NamedTuple):
    round: int
    first_kicker: TeamId
    first_result: KickResult
    second_result: KickResult


def replay_schedule(
    mech: Mechanism, kick_results: Sequence[KickResult] | str, regular_rounds: int = 5
) -> list[ScheduleRow]:
    """Assign kick outcomes, in kick order, to the kickers ``mech`` schedules."""
    if isinstance(kick_results, str):
        kick_results = parse_kicks(kick_results)
    if len(kick_results) % 2:
        raise DomainError("kick results must have even length")
    history = ShootoutHistory((), regular_rounds)
    rows = []
    for i in range(0, len(kick_results), 2):
        rnd = i // 2 + 1
        first = _dictate(mech, rnd, history.rounds, regular_rounds)
        rec = RoundRecord(first, KickResult(kick_results[i]), KickResult(kick_results[i + 1]))
        history = history.append(rec)
        rows.append(ScheduleRow(rnd, *rec))
    return rows


# -- decision status -----------------------------------------------------------


def regular_phase_winner(
    score_a: int, score_b: int, left_a: int, left_b: int
) -> TeamId | None:
    """Winner if one side leads by more than the other can still score."""
    if score_a > score_b + left_b:
        return TeamId.A
    if score_b > score_a + left_a:
        return TeamId.B
    return None


def is_decided(history: ShootoutHistory) -> TeamId | None:
    """Winner of the shootout recorded in ``history``, or ``None`` if it goes on.

    Rounds are scanned in order and the first decision wins; anything
    recorded after it cannot change the result.
    """
    n = history.regular_rounds
    sa = sb = 0
    for k, rec in enumerate(history.rounds, start=1):
        sa += rec.goals(TeamId.A)
        sb += rec.goals(TeamId.B)
        if k <= n:
            winner = regular_phase_winner(sa, sb, n - k, n - k)
        else:
            winner = None if sa == sb else (TeamId.A if sa > sb else TeamId.B)
        if winner is not None:
            return winner
    return None


# -- flat rule programs for the kernels ----------------------------------------

STANDARD_KIND, ALTERNATING_KIND, CATCH_UP_KIND, ADJUSTED_KIND = range(4)
_KIND = {
    Variant.STANDARD: STANDARD_KIND,
    Variant.ALTERNATING: ALTERNATING_KIND,
    Variant.CATCH_UP: CATCH_UP_KIND,
    Variant.ADJUSTED_CATCH_UP: ADJUSTED_KIND,
}


def _segments(mech: Mechanism, start: int) -> list[tuple[int, int, int]]:
    if mech.variant is not Variant.COMPOSITE:
        return [(start, _KIND[mech.variant], start)]
    boundary = start + mech.switch_round - 1
    head = [s for s in _segments(mech.before, start) if s[0] < boundary]
    return head + _segments(mech.after, boundary)


def mechanism_program(mech: Mechanism) -> tuple[tuple[int, int, int], ...]:
    """Flatten ``mech`` into ``(start_round, kind, anchor_round)`` segments.

    The active segment for a round is the last one starting at or before it.
    ``anchor_round`` is the segment's own round 1, used for alternation
    parity. The kernels evaluate first kickers from this form.
    """
    return tuple(_segments(mech, 1))


def program_kicker(
    program: Sequence[tuple[int, int, int]],
    rnd: int,
    prev_first: TeamId | None,
    prev_missed_scored: bool,
    regular: int,
) -> TeamId:
    """First kicker of ``rnd`` from a flat program and the previous round only."""
    start, kind, anchor = program[0]
    for seg in program[1:]:
        if seg[0] > rnd:
            break
        start, kind, anchor = seg
    if kind == STANDARD_KIND:
        return TeamId.A
    if kind == ALTERNATING_KIND:
        return TeamId.A if (rnd - anchor) % 2 == 0 else TeamId.B
    if kind == ADJUSTED_KIND and rnd > regular:
        return TeamId.B if (rnd - regular) % 2 == 1 else TeamId.A
    if rnd == 1:
        return TeamId.A
    return prev_first if prev_missed_scored else prev_first.other
