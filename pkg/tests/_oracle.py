"""Brute-force reference computations written without the package's rule
engine, used to cross-check it."""

from fractions import Fraction
from itertools import product

A, B = "A", "B"


def _other(t):
    return B if t == A else A


def next_first(rule, rnd, prev_first, prev_outcome, regular=5):
    """First kicker of ``rnd`` (1-based) from the previous round alone.

    ``rule`` is one of standard, abba, catchup, adj-catchup, abba3-catchup.
    ``prev_outcome`` is (first scored, second scored) of round ``rnd - 1``.
    """
    if rule == "standard":
        return A
    if rule == "abba":
        return A if rnd % 2 else B
    if rule == "abba3-catchup" and rnd <= 3:
        return A if rnd % 2 else B
    if rule == "adj-catchup" and rnd > regular:
        return B if (rnd - regular) % 2 else A
    if rnd == 1:
        return A
    first_scored, second_scored = prev_outcome
    if not first_scored and second_scored:
        return prev_first
    return _other(prev_first)


def regular_phase(rule, rounds, ps, qs):
    """(A wins, B wins, tie with A first in round rounds+1, tie with B first)."""
    acc = [0, 0, 0, 0]
    for seq in product(((1, 1), (1, 0), (0, 1), (0, 0)), repeat=rounds):
        w = 1
        sa = sb = 0
        first, prev = None, None
        for i, (f, s) in enumerate(seq):
            first = next_first(rule, i + 1, first, prev, rounds)
            p, q = ps[i], qs[i]
            w *= (p if f else 1 - p) * (q if s else 1 - q)
            if first == A:
                sa, sb = sa + f, sb + s
            else:
                sa, sb = sa + s, sb + f
            prev = (f, s)
        nxt = next_first(rule, rounds + 1, first, prev, rounds)
        if sa > sb:
            acc[0] += w
        elif sb > sa:
            acc[1] += w
        else:
            acc[2 if nxt == A else 3] += w
    return acc


def sudden_death_series(rule, rounds, first, p, q, terms=4000):
    """A's sudden-death win probability by summing rounds one at a time.

    Tied rounds are SS or MM, neither of which is "first missed, second
    scored", so Catch-Up hands the first kick over every round.
    """
    p, q = float(p), float(q)
    value, weight = 0.0, 1.0
    cont = p * q + (1 - p) * (1 - q)
    f = first
    for k in range(terms):
        rnd = rounds + 1 + k
        if k:
            f = next_first(rule, rnd, f, (1, 1), rounds)
        value += weight * (p * (1 - q) if f == A else (1 - p) * q)
        weight *= cont
    return value


def overall(rule, rounds, ps, qs, p_sd, q_sd):
    a, _, ta, tb = regular_phase(rule, rounds, ps, qs)
    return (
        float(a)
        + float(ta) * sudden_death_series(rule, rounds, A, p_sd, q_sd)
        + float(tb) * sudden_death_series(rule, rounds, B, p_sd, q_sd)
    )

