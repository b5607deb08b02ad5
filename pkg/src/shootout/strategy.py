"""Strategy-proofness: can a team ever gain by missing a kick on purpose?

Backward induction over every reachable regular-phase kick. At each kick the
kicking team's winning probability is computed twice, once for an honest
attempt and once for a certain miss, with every later kick honest. Sudden
death is closed with :func:`shootout.engine.sudden_death_value`; deliberate
misses inside sudden death are not modelled because they cannot change the
order there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import sudden_death_value
from .errors import DomainError, ResourceError, UnsupportedModelError
from .mechanisms import (
    KickResult,
    Mechanism,
    RoundRecord,
    ShootoutHistory,
    TeamId,
    _dictate,
    format_kicks,
    regular_phase_winner,
)
from .model import Probability, ScoringModel

__all__ = ["DecisionState", "Violation", "ManipulationReport", "check_strategy_proofness"]

MAX_STRATEGY_ROUNDS = 10
FLOAT_SLACK = 1e-12


@dataclass(frozen=True)
class DecisionState:
    round: int
    kicks_taken_this_round: int
    score_a: int
    score_b: int
    history: ShootoutHistory
    kicker: TeamId
    pending: KickResult | None = None

    @property
    def kick_string(self) -> str:
        """Kicks so far, e.g. ``"SS.MS.M"`` for a state mid round 3."""
        return format_kicks(self.history.rounds, self.pending)


@dataclass(frozen=True)
class Violation:
    state: DecisionState
    honest_value: Probability
    miss_value: Probability

    def as_dict(self) -> dict:
        s = self.state
        return {
            "round": s.round,
            "kick": s.kicks_taken_this_round + 1,
            "kicker": s.kicker.value,
            "score": [s.score_a, s.score_b],
            "history": s.kick_string,
            "honest_value": str(self.honest_value),
            "miss_value": str(self.miss_value),
        }


@dataclass(frozen=True)
class ManipulationReport:
    mechanism: Mechanism
    rounds: int
    model: ScoringModel
    violations: tuple[Violation, ...] = field(default=())
    states_checked: int = 0
    honest_win_prob_a: Probability = 0

    @property
    def strategy_proof(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "mechanism": str(self.mechanism),
            "rounds": self.rounds,
            "p": str(self.model.p),
            "q": str(self.model.q),
            "strategy_proof": self.strategy_proof,
            "states_checked": self.states_checked,
            "honest_win_prob_a": str(self.honest_win_prob_a),
            "violations": [v.as_dict() for v in self.violations],
        }


def check_strategy_proofness(
    mech: Mechanism, rounds: int, model: ScoringModel
) -> ManipulationReport:
    if not model.is_uniform:
        raise UnsupportedModelError("strategy-proofness is checked for uniform models only")
    if rounds < 1:
        raise DomainError(f"rounds must be positive, got {rounds}")
    if rounds > MAX_STRATEGY_ROUNDS:
        raise ResourceError(f"rounds above {MAX_STRATEGY_ROUNDS} are not searched")
    p, q = model.p, model.q
    p_sd, q_sd = model.sudden_death
    exact = model.is_exact
    beats = (lambda a, b: a > b) if exact else (lambda a, b: a > b + FLOAT_SLACK)
    sd_value = {
        t: sudden_death_value(mech, rounds, t, p_sd, q_sd) for t in (TeamId.A, TeamId.B)
    }
    violations: list[Violation] = []
    checked = 0

    def for_team(team, value_a):
        return value_a if team is TeamId.A else 1 - value_a

    def after_round(hist):
        # A's winning probability once all rounds in hist are complete
        k = len(hist.rounds)
        sa, sb = hist.score(TeamId.A), hist.score(TeamId.B)
        if sa != sb and k == rounds:
            return 1 if sa > sb else 0
        if k == rounds:
            first_sd = _dictate(mech, rounds + 1, hist.rounds, rounds)
            return sd_value[first_sd]
        return play(hist)

    def kick(state, scoring, resolve):
        # resolve(result) -> A's value after this kick lands with result
        nonlocal checked
        checked += 1
        scored = resolve(KickResult.SCORED)
        missed = resolve(KickResult.MISSED)
        honest = scoring * scored + (1 - scoring) * missed
        k = state.kicker
        if beats(for_team(k, missed), for_team(k, honest)):
            violations.append(Violation(state, for_team(k, honest), for_team(k, missed)))
        return honest

    def play(hist):
        rnd = len(hist.rounds) + 1
        sa, sb = hist.score(TeamId.A), hist.score(TeamId.B)
        first = _dictate(mech, rnd, hist.rounds, rounds)
        second = first.other
        left = rounds - rnd

        def resolve_first(r1):
            fa = sa + (r1.scored and first is TeamId.A)
            fb = sb + (r1.scored and first is TeamId.B)
            left_a = left + (second is TeamId.A)
            left_b = left + (second is TeamId.B)
            winner = regular_phase_winner(fa, fb, left_a, left_b)
            if winner is not None:
                return 1 if winner is TeamId.A else 0

            def resolve_second(r2):
                nxt = hist.append(RoundRecord(first, r1, r2))
                winner = regular_phase_winner(
                    nxt.score(TeamId.A), nxt.score(TeamId.B), left, left
                )
                if winner is not None:
                    return 1 if winner is TeamId.A else 0
                return after_round(nxt)

            state = DecisionState(rnd, 1, fa, fb, hist, second, r1)
            return kick(state, q, resolve_second)

        state = DecisionState(rnd, 0, sa, sb, hist, first)
        return kick(state, p, resolve_first)

    root = play(ShootoutHistory((), rounds))
    return ManipulationReport(mech, rounds, model, tuple(violations), checked, root)
