"""Exact outcome probabilities, sudden-death closure and Monte Carlo play.

Two independent routes produce outcome distributions:

* exact mode walks every kick sequence of the regular phase, asking the
  mechanism definition (:func:`shootout.mechanisms.first_kicker` semantics)
  for each round's first kicker, with integer numerators over a common
  denominator so rational inputs give exact :class:`~fractions.Fraction`
  results;
* float mode hands the flattened rule program to the kernels
  (compiled when available).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from ._backend import BACKEND, kernels
from .errors import DegenerateModelError, DomainError, ResourceError
from .mechanisms import (
    STANDARD_KIND,
    KickResult,
    Mechanism,
    RoundRecord,
    TeamId,
    _dictate,
    mechanism_program,
    program_kicker,
    regular_phase_winner,
)
from .model import Probability, ScoringModel

__all__ = [
    "MAX_ROUNDS",
    "GENERATOR",
    "OutcomeDistribution",
    "SimulationResult",
    "enumerate_outcomes",
    "enumerate_until_decided",
    "sudden_death_win_prob",
    "sudden_death_value",
    "overall_win_prob",
    "expected_sudden_death_rounds",
    "expected_total_kicks",
    "simulate",
]

MAX_ROUNDS = 12
GENERATOR = "splitmix64-counter"

_RESULT = (KickResult.MISSED, KickResult.SCORED)
_OUTCOMES = ((1, 1), (1, 0), (0, 1), (0, 0))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Regular-phase result probabilities.

    The tie mass is split by which team kicks first in the first
    sudden-death round.
    """

    p_a_win: Probability
    p_b_win: Probability
    p_tie_a_first_sd: Probability
    p_tie_b_first_sd: Probability

    @property
    def p_tie(self) -> Probability:
        return self.p_tie_a_first_sd + self.p_tie_b_first_sd

    @property
    def total(self) -> Probability:
        return self.p_a_win + self.p_b_win + self.p_tie

    @property
    def is_exact(self) -> bool:
        return all(
            isinstance(x, Fraction)
            for x in (self.p_a_win, self.p_b_win, self.p_tie_a_first_sd, self.p_tie_b_first_sd)
        )


def _check_rounds(rounds: int) -> None:
    if rounds < 1:
        raise DomainError(f"rounds must be positive, got {rounds}")
    if rounds > MAX_ROUNDS:
        raise ResourceError(
            f"{rounds} rounds means 2^{2 * rounds} sequences; ceiling is {MAX_ROUNDS} rounds"
        )


def _round_weights(ps, qs, exact: bool):
    """Per-round outcome weights keyed by (first scored, second scored), and
    the common denominator they are scaled by."""
    table = []
    scale = 1
    for p, q in zip(ps, qs):
        if exact:
            pn, pd = p.numerator, p.denominator
            qn, qd = q.numerator, q.denominator
            scale *= pd * qd
        else:
            pn, pd, qn, qd = float(p), 1.0, float(q), 1.0
        first = {1: pn, 0: pd - pn}
        second = {1: qn, 0: qd - qn}
        table.append([((o1, o2), first[o1] * second[o2]) for o1, o2 in _OUTCOMES])
    return table, scale


def _walk_full(mech: Mechanism, rounds: int, weights) -> list:
    acc = [0, 0, 0, 0]

    def walk(rnd, hist, w, sa, sb):
        f = _dictate(mech, rnd, hist, rounds)
        if rnd > rounds:
            if sa > sb:
                acc[0] += w
            elif sb > sa:
                acc[1] += w
            else:
                acc[2 if f is TeamId.A else 3] += w
            return
        for (o1, o2), wt in weights[rnd - 1]:
            if not wt:
                continue
            rec = RoundRecord(f, _RESULT[o1], _RESULT[o2])
            if f is TeamId.A:
                walk(rnd + 1, hist + (rec,), w * wt, sa + o1, sb + o2)
            else:
                walk(rnd + 1, hist + (rec,), w * wt, sa + o2, sb + o1)

    walk(1, (), 1, 0, 0)
    return acc


def enumerate_outcomes(
    mech: Mechanism, rounds: int, model: ScoringModel, *, exact: bool | None = None,
    route: str = "auto",
) -> OutcomeDistribution:
    """Distribution of regular-phase results over all ``2**(2*rounds)`` sequences.

    ``exact`` defaults to ``model.is_exact``. ``route`` picks the evaluation
    path: ``"definition"`` (mechanism rules, any arithmetic), ``"kernel"``
    (flat rule program, float only) or ``"auto"`` (definition when exact,
    kernel otherwise).
    """
    _check_rounds(rounds)
    ps, qs = model.rates(rounds)
    if exact is None:
        exact = model.is_exact
    if exact and not model.is_exact:
        raise DomainError("exact enumeration needs rational probabilities")
    if route == "auto":
        route = "definition" if exact else "kernel"
    if route == "kernel":
        if exact:
            raise DomainError("the kernel route is float only")
        starts, kinds, anchors = zip(*mechanism_program(mech))
        a, b, ta, tb = kernels.outcome_probs(
            list(starts), list(kinds), list(anchors), rounds,
            [float(x) for x in ps], [float(x) for x in qs],
        )
        return OutcomeDistribution(a, b, ta, tb)
    if route != "definition":
        raise DomainError(f"unknown route {route!r}")
    weights, scale = _round_weights(ps, qs, exact)
    acc = _walk_full(mech, rounds, weights)
    if exact:
        return OutcomeDistribution(*(Fraction(x, scale) for x in acc))
    return OutcomeDistribution(*(float(x) for x in acc))


def enumerate_until_decided(
    mech: Mechanism, rounds: int, model: ScoringModel
) -> tuple[OutcomeDistribution, Probability]:
    """Walk the regular phase kick by kick, stopping once a result is certain.

    Returns the outcome distribution and the expected number of regular-phase
    kicks. Arithmetic follows the model (exact when rational).
    """
    _check_rounds(rounds)
    ps, qs = model.rates(rounds)
    one = Fraction(1) if model.is_exact else 1.0
    acc = [one * 0] * 4
    kicks = [one * 0]

    def walk(rnd, hist, prob, sa, sb):
        f = _dictate(mech, rnd, hist, rounds)
        if rnd > rounds:
            acc[2 if f is TeamId.A else 3] += prob
            return
        p, q = ps[rnd - 1], qs[rnd - 1]
        left_first, left_second = rounds - rnd, rounds - rnd + 1
        kicks[0] += prob
        for o1 in (1, 0):
            w1 = prob * (p if o1 else 1 - p)
            if not w1:
                continue
            a1, b1 = (sa + o1, sb) if f is TeamId.A else (sa, sb + o1)
            if f is TeamId.A:
                winner = regular_phase_winner(a1, b1, left_first, left_second)
            else:
                winner = regular_phase_winner(a1, b1, left_second, left_first)
            if winner is not None:
                acc[0 if winner is TeamId.A else 1] += w1
                continue
            kicks[0] += w1
            for o2 in (1, 0):
                w2 = w1 * (q if o2 else 1 - q)
                if not w2:
                    continue
                a2, b2 = (a1, b1 + o2) if f is TeamId.A else (a1 + o2, b1)
                winner = regular_phase_winner(a2, b2, left_first, left_first)
                if winner is not None:
                    acc[0 if winner is TeamId.A else 1] += w2
                    continue
                rec = RoundRecord(f, _RESULT[o1], _RESULT[o2])
                walk(rnd + 1, hist + (rec,), w2, a2, b2)

    walk(1, (), one, 0, 0)
    return OutcomeDistribution(*acc), kicks[0]


# -- sudden death ----------------------------------------------------------------


def _resolution(p, q):
    r = p + q - 2 * p * q
    if r == 0:
        raise DegenerateModelError(
            f"sudden death never resolves with p={p}, q={q}"
        )
    return r


def sudden_death_win_prob(p_sd: Probability, q_sd: Probability) -> Probability:
    """Probability that the team kicking first in sudden death wins it, when
    the first kick alternates between the teams every round."""
    _resolution(p_sd, q_sd)
    return (1 - q_sd + p_sd * q_sd) / (2 - p_sd - q_sd + 2 * p_sd * q_sd)


def expected_sudden_death_rounds(p_sd: Probability, q_sd: Probability) -> Probability:
    return 1 / _resolution(p_sd, q_sd)


def sudden_death_value(
    mech: Mechanism, rounds: int, first: TeamId, p_sd: Probability, q_sd: Probability
) -> Probability:
    """Probability that A wins sudden death when ``first`` opens it.

    Tied sudden-death rounds are always SS or MM, so the kicker sequence is
    fixed once the opener is known: it ends either constant (Standard) or
    alternating. The alternating tail is the closed form of
    :func:`sudden_death_win_prob`.
    """
    _resolution(p_sd, q_sd)
    program = mechanism_program(mech)
    win_first = p_sd * (1 - q_sd)
    win_second = (1 - p_sd) * q_sd
    cont = p_sd * q_sd + (1 - p_sd) * (1 - q_sd)
    tail_start = max(program[-1][0], rounds + 1)
    rnd, f, weight = rounds + 1, first, 1
    value = 0
    while rnd < tail_start:
        value += weight * (win_first if f is TeamId.A else win_second)
        weight *= cont
        rnd += 1
        f = program_kicker(program, rnd, f, False, rounds)
    if program[-1][1] == STANDARD_KIND:
        tail = (win_first if f is TeamId.A else win_second) / (1 - cont)
    else:
        alpha = sudden_death_win_prob(p_sd, q_sd)
        tail = alpha if f is TeamId.A else 1 - alpha
    return value + weight * tail


def overall_win_prob(
    mech: Mechanism, rounds: int, model: ScoringModel, *, exact: bool | None = None
) -> Probability:
    """Probability that A wins, sudden death included."""
    dist = enumerate_outcomes(mech, rounds, model, exact=exact)
    p_sd, q_sd = model.sudden_death
    if not dist.is_exact:
        p_sd, q_sd = float(p_sd), float(q_sd)
    return (
        dist.p_a_win
        + dist.p_tie_a_first_sd * sudden_death_value(mech, rounds, TeamId.A, p_sd, q_sd)
        + dist.p_tie_b_first_sd * sudden_death_value(mech, rounds, TeamId.B, p_sd, q_sd)
    )


def expected_total_kicks(mech: Mechanism, rounds: int, model: ScoringModel) -> Probability:
    """Expected kicks actually taken, with early termination in the regular
    phase and two kicks per sudden-death round."""
    sd_rounds = expected_sudden_death_rounds(*model.sudden_death)
    dist, regular_kicks = enumerate_until_decided(mech, rounds, model)
    return regular_kicks + 2 * dist.p_tie * sd_rounds


# -- Monte Carlo -------------------------------------------------------------------


@dataclass(frozen=True)
class SimulationResult:
    trials: int
    a_wins: int
    b_wins: int
    ties_a_first_sd: int
    ties_b_first_sd: int
    kicks: int
    seed: int
    generator: str = GENERATOR
    backend: str = BACKEND

    @property
    def ties(self) -> int:
        return self.ties_a_first_sd + self.ties_b_first_sd

    @property
    def p_a_win(self) -> float:
        return self.a_wins / self.trials

    @property
    def p_b_win(self) -> float:
        return self.b_wins / self.trials

    @property
    def p_tie(self) -> float:
        return self.ties / self.trials

    @property
    def mean_kicks(self) -> float:
        return self.kicks / self.trials

    def standard_error(self, x: float) -> float:
        return math.sqrt(x * (1 - x) / self.trials)

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "generator": self.generator,
            "a_wins": self.a_wins,
            "b_wins": self.b_wins,
            "ties_a_first_sd": self.ties_a_first_sd,
            "ties_b_first_sd": self.ties_b_first_sd,
            "kicks": self.kicks,
            "p_a_win": self.p_a_win,
            "p_b_win": self.p_b_win,
            "p_tie": self.p_tie,
            "mean_kicks": self.mean_kicks,
        }


def simulate(
    mech: Mechanism,
    rounds: int,
    model: ScoringModel,
    seed: int,
    trials: int,
    *,
    workers: int = 1,
    backend=None,
) -> SimulationResult:
    """Play ``trials`` full shootouts, sudden death included.

    Trial ``i`` draws from its own SplitMix64 stream keyed by ``(seed, i)``,
    so results do not depend on ``workers``.
    """
    if trials < 1:
        raise DomainError("trials must be positive")
    if not 0 <= seed < 2**64:
        raise DomainError("seed must fit in 64 unsigned bits")
    if workers < 1:
        raise DomainError("workers must be positive")
    if rounds < 1:
        raise DomainError(f"rounds must be positive, got {rounds}")
    p_sd, q_sd = model.sudden_death
    _resolution(p_sd, q_sd)
    ps, qs = model.rates(rounds)
    starts, kinds, anchors = (list(x) for x in zip(*mechanism_program(mech)))
    impl = kernels if backend is None else backend
    args = (starts, kinds, anchors, rounds, [float(x) for x in ps],
            [float(x) for x in qs], float(p_sd), float(q_sd), seed)

    bounds = [trials * k // workers for k in range(workers + 1)]
    spans = [(lo, hi - lo) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    if len(spans) == 1:
        parts = [impl.simulate_counts(*args, *spans[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            parts = list(pool.map(lambda s: impl.simulate_counts(*args, *s), spans))
    a, b, ta, tb, kicks = (sum(x) for x in zip(*parts))
    name = getattr(impl, "__name__", "").rsplit(".", 1)[-1]
    return SimulationResult(
        trials, a, b, ta, tb, kicks, seed,
        backend="cython" if name == "_ckernels" else "python",
    )
