"""Fairness metrics, parameter sweeps, alpha thresholds and tie reports."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .engine import enumerate_outcomes, overall_win_prob, sudden_death_win_prob
from .errors import DomainError, SingularityError
from .mechanisms import ADJUSTED_CATCH_UP, ALTERNATING, CATCH_UP, Mechanism
from .model import PRESETS, Probability, ScoringModel, to_probability

__all__ = [
    "COMPARED",
    "FairnessReport",
    "fairness_bias",
    "table3",
    "q_grid",
    "sweep_q",
    "empirical_bars",
    "Comparison",
    "ThresholdResult",
    "alpha_threshold",
    "region_boundary",
    "region_curve",
    "tie_probability",
    "tie_bars",
]

COMPARED = (CATCH_UP, ADJUSTED_CATCH_UP, ALTERNATING)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class FairnessReport:
    mechanism: Mechanism
    rounds: int
    model: ScoringModel
    win_prob_a: Probability

    @property
    def bias(self) -> Probability:
        return self.win_prob_a - HALF

    @property
    def distance(self) -> Probability:
        """Distance from a fair contest; smaller is fairer."""
        return abs(self.bias)


def fairness_bias(
    mech: Mechanism, rounds: int, model: ScoringModel, *, exact: bool | None = None
) -> FairnessReport:
    win = overall_win_prob(mech, rounds, model, exact=exact)
    return FairnessReport(mech, rounds, model, win)


def table3(
    model: ScoringModel,
    rounds: Iterable[int] = range(1, 9),
    mechanisms: Sequence[Mechanism] = COMPARED,
    *,
    exact: bool | None = None,
) -> list[FairnessReport]:
    """Win probability of A for every (rounds, mechanism) pair, row-major."""
    return [
        fairness_bias(mech, n, model, exact=exact) for n in rounds for mech in mechanisms
    ]


def q_grid(p, start="0.5", step="0.01") -> list[Fraction]:
    """Decimal grid ``start, start + step, ...`` up to and including ``p``."""
    p, start, step = Fraction(to_probability(p)), Fraction(start), Fraction(step)
    if step <= 0:
        raise DomainError("grid step must be positive")
    out = []
    q = start
    while q <= p:
        out.append(q)
        q += step
    return out


def sweep_q(
    mech: Mechanism,
    rounds: int,
    p,
    q_values: Sequence,
    *,
    sd_follows: bool = True,
    sudden_death=None,
    exact: bool = False,
) -> list[tuple[Probability, Probability]]:
    """Win probability of A along a grid of second-kicker rates ``q``.

    With ``sd_follows`` sudden death uses the same ``(p, q)``; otherwise the
    fixed pair ``sudden_death``. Float arithmetic unless ``exact``.
    """
    if not sd_follows and sudden_death is None:
        raise DomainError("a fixed sudden_death pair is needed when sd_follows is off")
    p = to_probability(p)
    curve = []
    prev = None
    for q in q_values:
        q = to_probability(q)
        if q > p:
            raise DomainError(f"q={q} exceeds p={p}")
        if prev is not None and q < prev:
            raise DomainError("q grid must be ordered")
        prev = q
        sd = (p, q) if sd_follows else sudden_death
        model = ScoringModel.uniform(p, q, sd)
        if not exact:
            model = model.as_float()
        curve.append((q, overall_win_prob(mech, rounds, model)))
    return curve


def empirical_bars(
    sd_pairs: Sequence,
    model: ScoringModel = PRESETS["apesteguia2010"],
    rounds: int = 5,
    mechanisms: Sequence[Mechanism] = COMPARED,
) -> list[tuple[tuple, Mechanism, Probability]]:
    """Win probability of A per sudden-death pair and mechanism."""
    out = []
    for p_sd, q_sd in sd_pairs:
        m = model.with_sudden_death(p_sd, q_sd)
        for mech in mechanisms:
            out.append(((p_sd, q_sd), mech, overall_win_prob(mech, rounds, m)))
    return out


# -- alpha thresholds --------------------------------------------------------------


class Comparison(str, Enum):
    VS_CATCH_UP = "catchup"
    VS_ALTERNATING = "abba"

    @property
    def rival(self) -> Mechanism:
        return CATCH_UP if self is Comparison.VS_CATCH_UP else ALTERNATING


@dataclass(frozen=True)
class ThresholdResult:
    """Largest sudden-death first-mover win probability up to which Adjusted
    Catch-Up is at least as fair as the rival rule.

    ``alpha_star`` is ``None`` when there is no crossing in [1/2, 1]: then
    ``adjusted_fairer`` says whether Adjusted Catch-Up is at least as fair
    on the whole interval.
    """

    comparison: Comparison
    alpha_star: Probability | None
    adjusted_fairer: bool

    @property
    def found(self) -> bool:
        return self.alpha_star is not None


def _affine_win(mech: Mechanism, rounds: int, model: ScoringModel):
    # A's win probability as c0 + c1 * alpha, valid for rules whose sudden
    # death alternates the first kick
    d = enumerate_outcomes(mech, rounds, model)
    return d.p_a_win + d.p_tie_b_first_sd, d.p_tie_a_first_sd - d.p_tie_b_first_sd


def _gap(coeffs, alpha):
    return abs(coeffs[0] + coeffs[1] * alpha - HALF)


def alpha_threshold(
    comparison: Comparison | str,
    model: ScoringModel = PRESETS["apesteguia2010"],
    rounds: int = 5,
    *,
    tol: float = 1e-12,
    exact: bool = False,
) -> ThresholdResult:
    """Locate the crossing of the two fairness gaps as functions of alpha.

    Bisection on [1/2, 1] by default; ``exact`` solves the piecewise-linear
    crossing in rationals instead (needs a rational model).
    """
    comparison = Comparison(comparison)
    adj = _affine_win(ADJUSTED_CATCH_UP, rounds, model)
    rival = _affine_win(comparison.rival, rounds, model)

    def f(alpha):
        return _gap(adj, alpha) - _gap(rival, alpha)

    lo, hi = HALF, Fraction(1)
    if f(lo) > 0:
        return ThresholdResult(comparison, None, False)
    if f(hi) <= 0:
        return ThresholdResult(comparison, None, True)
    if exact:
        return ThresholdResult(comparison, _exact_crossing(adj, rival, f), True)
    lo_f, hi_f = 0.5, 1.0
    adj_f = tuple(float(c) for c in adj)
    rival_f = tuple(float(c) for c in rival)
    while hi_f - lo_f > tol:
        mid = (lo_f + hi_f) / 2
        if abs(adj_f[0] + adj_f[1] * mid - 0.5) <= abs(rival_f[0] + rival_f[1] * mid - 0.5):
            lo_f = mid
        else:
            hi_f = mid
    return ThresholdResult(comparison, (lo_f + hi_f) / 2, True)


def _exact_crossing(adj, rival, f):
    # |A| = |R| on a line means A = R or A = -R; take the largest root where
    # f turns positive
    candidates = []
    for sign in (1, -1):
        slope = adj[1] - sign * rival[1]
        if slope:
            root = -(adj[0] - HALF - sign * (rival[0] - HALF)) / slope
            if HALF <= root <= 1:
                candidates.append(root)
    eps = Fraction(1, 10**12)
    for root in sorted(candidates, reverse=True):
        if f(min(root + eps, Fraction(1))) > 0 and f(root) <= 0:
            return root
    raise DomainError("no sign change found at any crossing candidate")


def region_boundary(p, alpha_star) -> Probability:
    """Smallest ``q`` with sudden-death first-mover win probability at most
    ``alpha_star``, i.e. the ``q`` solving ``W(p, q) = alpha_star``."""
    p, a = to_probability(p), to_probability(alpha_star)
    if not HALF <= a < 1:
        raise DomainError("alpha_star must lie in [1/2, 1)")
    den = 1 - a - p + 2 * a * p
    if den == 0:
        raise SingularityError(f"boundary undefined at p={p}, alpha={a}")
    return (1 - 2 * a + a * p) / den


def region_curve(alpha_star, p_values: Sequence) -> list[tuple[Probability, Probability]]:
    return [(to_probability(p), region_boundary(p, alpha_star)) for p in p_values]


def sudden_death_alpha(p, q) -> Probability:
    return sudden_death_win_prob(to_probability(p), to_probability(q))


# -- ties --------------------------------------------------------------------------


def tie_probability(mech: Mechanism, rounds: int, model: ScoringModel) -> Probability:
    return enumerate_outcomes(mech, rounds, model).p_tie


def tie_bars(
    configs: Sequence[tuple[str, ScoringModel]],
    rounds: int = 5,
    mechanisms: Sequence[Mechanism] = (CATCH_UP, ALTERNATING),
) -> list[tuple[str, Mechanism, Probability]]:
    return [
        (label, mech, tie_probability(mech, rounds, model))
        for label, model in configs
        for mech in mechanisms
    ]
