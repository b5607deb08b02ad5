"""Pure-Python fallback for the compiled kernels in ``_ckernels.pyx``.

Same signatures and, for Monte Carlo, the same counter-based SplitMix64
draws, so both backends return identical counts for identical inputs.
"""

from __future__ import annotations

import numpy as np

from .mechanisms import ADJUSTED_KIND, ALTERNATING_KIND, STANDARD_KIND

GOLDEN = 0x9E3779B97F4A7C15
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 18


def _segment(starts, rnd):
    i = 0
    while i + 1 < len(starts) and starts[i + 1] <= rnd:
        i += 1
    return i


def _kicker(starts, kinds, anchors, regular, rnd, prev_first, prev_ms):
    i = _segment(starts, rnd)
    kind = kinds[i]
    if kind == STANDARD_KIND:
        return 0
    if kind == ALTERNATING_KIND:
        return (rnd - anchors[i]) % 2
    if kind == ADJUSTED_KIND and rnd > regular:
        return 1 if (rnd - regular) % 2 == 1 else 0
    if rnd == 1:
        return 0
    return prev_first if prev_ms else 1 - prev_first


def outcome_probs(starts, kinds, anchors, regular, ps, qs):
    """Return ``(a_win, b_win, tie_a_first, tie_b_first)`` over all sequences."""
    if regular < 1 or len(ps) != regular or len(qs) != regular:
        raise ValueError("rates must have one entry per regular round")
    acc = [0.0, 0.0, 0.0, 0.0]
    ps = [float(x) for x in ps]
    qs = [float(x) for x in qs]

    def walk(rnd, prob, sa, sb, prev_first, prev_ms):
        f = _kicker(starts, kinds, anchors, regular, rnd, prev_first, prev_ms)
        if rnd > regular:
            if sa > sb:
                acc[0] += prob
            elif sb > sa:
                acc[1] += prob
            else:
                acc[2 + f] += prob
            return
        p, q = ps[rnd - 1], qs[rnd - 1]
        for o1 in (0, 1):
            w1 = p if o1 else 1.0 - p
            for o2 in (0, 1):
                w = w1 * (q if o2 else 1.0 - q)
                if f == 0:
                    na, nb = sa + o1, sb + o2
                else:
                    na, nb = sa + o2, sb + o1
                walk(rnd + 1, prob * w, na, nb, f, (not o1) and bool(o2))

    walk(1, 1.0, 0, 0, 0, False)
    return tuple(acc)


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _uniform(keys, j):
    x = _mix(keys + np.uint64((j + 1) * GOLDEN % 2**64))
    return (x >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def _vector_kicker(starts, kinds, anchors, regular, rnd, prev_first, prev_ms):
    i = _segment(starts, rnd)
    kind = kinds[i]
    if kind == STANDARD_KIND:
        return np.zeros_like(prev_first)
    if kind == ALTERNATING_KIND:
        return np.full_like(prev_first, (rnd - anchors[i]) % 2)
    if kind == ADJUSTED_KIND and rnd > regular:
        return np.full_like(prev_first, 1 if (rnd - regular) % 2 == 1 else 0)
    if rnd == 1:
        return np.zeros_like(prev_first)
    return np.where(prev_ms, prev_first, 1 - prev_first)


def _decide(sa, sb, left_a, left_b):
    winner = np.full(sa.shape, -1, dtype=np.int8)
    winner[sa > sb + left_b] = 0
    winner[sb > sa + left_a] = 1
    return winner


def _play_chunk(starts, kinds, anchors, regular, ps, qs, p_sd, q_sd, seed, first, n):
    with np.errstate(over="ignore"):
        t = np.arange(first, first + n, dtype=np.uint64)
        keys = _mix(np.uint64(seed) + (t + np.uint64(1)) * np.uint64(GOLDEN))
    sa = np.zeros(n, dtype=np.int64)
    sb = np.zeros(n, dtype=np.int64)
    prev_first = np.zeros(n, dtype=np.int64)
    prev_ms = np.zeros(n, dtype=bool)
    winner = np.full(n, -1, dtype=np.int8)
    kicks = 0
    for rnd in range(1, regular + 1):
        alive = winner < 0
        f = _vector_kicker(starts, kinds, anchors, regular, rnd, prev_first, prev_ms)
        s1 = _uniform(keys, 2 * (rnd - 1)) < ps[rnd - 1]
        kicks += int(alive.sum())
        sa += alive & s1 & (f == 0)
        sb += alive & s1 & (f == 1)
        left_f, left_s = regular - rnd, regular - rnd + 1
        left_a = np.where(f == 0, left_f, left_s)
        left_b = np.where(f == 0, left_s, left_f)
        decided = _decide(sa, sb, left_a, left_b)
        winner = np.where(alive, decided, winner)
        alive = winner < 0
        s2 = _uniform(keys, 2 * (rnd - 1) + 1) < qs[rnd - 1]
        kicks += int(alive.sum())
        sa += alive & s2 & (f == 1)
        sb += alive & s2 & (f == 0)
        decided = _decide(sa, sb, left_f, left_f)
        winner = np.where(alive, decided, winner)
        prev_first = f
        prev_ms = ~s1 & s2

    tied = np.flatnonzero(winner < 0)
    rnd = regular + 1
    f = _vector_kicker(starts, kinds, anchors, regular, rnd, prev_first[tied], prev_ms[tied])
    tie_a = int((f == 0).sum())
    tie_b = int((f == 1).sum())
    keys = keys[tied]
    while tied.size:
        s1 = _uniform(keys, 2 * (rnd - 1)) < p_sd
        s2 = _uniform(keys, 2 * (rnd - 1) + 1) < q_sd
        kicks += 2 * tied.size
        done = s1 != s2
        winner[tied[done]] = np.where(s1[done], f[done], 1 - f[done])
        tied, keys, f = tied[~done], keys[~done], f[~done]
        rnd += 1
        f = _vector_kicker(starts, kinds, anchors, regular, rnd, f, np.zeros(f.shape, bool))
    a_wins = int((winner == 0).sum())
    return a_wins, n - a_wins, tie_a, tie_b, kicks


def simulate_counts(starts, kinds, anchors, regular, ps, qs, p_sd, q_sd, seed,
                    first_trial, n_trials):
    """Play ``n_trials`` shootouts; return
    ``(a_wins, b_wins, tie_a_first, tie_b_first, kicks)``."""
    if regular < 1 or len(ps) != regular or len(qs) != regular:
        raise ValueError("rates must have one entry per regular round")
    ps = [float(x) for x in ps]
    qs = [float(x) for x in qs]
    totals = [0, 0, 0, 0, 0]
    done = 0
    while done < n_trials:
        n = min(_CHUNK, n_trials - done)
        part = _play_chunk(starts, kinds, anchors, regular, ps, qs, float(p_sd),
                           float(q_sd), seed, first_trial + done, n)
        totals = [a + b for a, b in zip(totals, part)]
        done += n
    return tuple(totals)
