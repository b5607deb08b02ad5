# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: float outcome enumeration and Monte Carlo play.

Teams are encoded 0 (A) and 1 (B). Rule programs arrive as parallel
``starts``/``kinds``/``anchors`` arrays, see ``mechanisms.mechanism_program``.
"""

from libc.stdint cimport uint64_t

cdef enum:
    MAX_SEGMENTS = 64
    MAX_ROUNDS = 64

cdef enum:
    STANDARD = 0
    ALTERNATING = 1
    CATCH_UP = 2
    ADJUSTED = 3

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef struct Program:
    int n
    int regular
    int starts[MAX_SEGMENTS]
    int kinds[MAX_SEGMENTS]
    int anchors[MAX_SEGMENTS]


cdef int _load(Program* prog, starts, kinds, anchors, int regular) except -1:
    cdef int i, n = len(starts)
    if n < 1 or n > MAX_SEGMENTS:
        raise ValueError("rule program must have 1..%d segments" % MAX_SEGMENTS)
    prog.n = n
    prog.regular = regular
    for i in range(n):
        prog.starts[i] = starts[i]
        prog.kinds[i] = kinds[i]
        prog.anchors[i] = anchors[i]
    return 0


cdef inline int _kicker(const Program* prog, int rnd, int prev_first, bint prev_ms) noexcept nogil:
    cdef int i = 0, k
    while i + 1 < prog.n and prog.starts[i + 1] <= rnd:
        i += 1
    k = prog.kinds[i]
    if k == STANDARD:
        return 0
    if k == ALTERNATING:
        return (rnd - prog.anchors[i]) % 2
    if k == ADJUSTED and rnd > prog.regular:
        return 1 if (rnd - prog.regular) % 2 == 1 else 0
    if rnd == 1:
        return 0
    return prev_first if prev_ms else 1 - prev_first


cdef void _walk(const Program* prog, int rnd, double prob, int sa, int sb,
                int prev_first, bint prev_ms, const double* ps, const double* qs,
                double* acc) noexcept nogil:
    cdef int f = _kicker(prog, rnd, prev_first, prev_ms)
    cdef int o1, o2, na, nb
    cdef double p, q, w1, w
    if rnd > prog.regular:
        if sa > sb:
            acc[0] += prob
        elif sb > sa:
            acc[1] += prob
        else:
            acc[2 + f] += prob
        return
    p = ps[rnd - 1]
    q = qs[rnd - 1]
    for o1 in range(2):
        w1 = p if o1 else 1.0 - p
        for o2 in range(2):
            w = w1 * (q if o2 else 1.0 - q)
            if f == 0:
                na = sa + o1
                nb = sb + o2
            else:
                na = sa + o2
                nb = sb + o1
            _walk(prog, rnd + 1, prob * w, na, nb, f, (not o1) and o2, ps, qs, acc)


def outcome_probs(starts, kinds, anchors, int regular, ps, qs):
    """Return ``(a_win, b_win, tie_a_first, tie_b_first)`` over all sequences."""
    cdef Program prog
    cdef double p_arr[MAX_ROUNDS]
    cdef double q_arr[MAX_ROUNDS]
    cdef double acc[4]
    cdef int i
    if regular < 1 or regular > MAX_ROUNDS or len(ps) != regular or len(qs) != regular:
        raise ValueError("rates must have one entry per regular round")
    _load(&prog, starts, kinds, anchors, regular)
    for i in range(regular):
        p_arr[i] = ps[i]
        q_arr[i] = qs[i]
    acc[0] = acc[1] = acc[2] = acc[3] = 0.0
    with nogil:
        _walk(&prog, 1, 1.0, 0, 0, 0, False, p_arr, q_arr, acc)
    return acc[0], acc[1], acc[2], acc[3]


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t key, uint64_t j) noexcept nogil:
    return (_mix(key + (j + 1) * GOLDEN) >> 11) * (1.0 / 9007199254740992.0)


cdef inline int _decided(int sa, int sb, int left_a, int left_b) noexcept nogil:
    if sa > sb + left_b:
        return 0
    if sb > sa + left_a:
        return 1
    return -1


def simulate_counts(starts, kinds, anchors, int regular, ps, qs, double p_sd,
                    double q_sd, unsigned long long seed, long long first_trial,
                    long long n_trials):
    """Play ``n_trials`` shootouts; return
    ``(a_wins, b_wins, tie_a_first, tie_b_first, kicks)``."""
    cdef Program prog
    cdef double p_arr[MAX_ROUNDS]
    cdef double q_arr[MAX_ROUNDS]
    cdef long long t, a_wins = 0, b_wins = 0, tie_a = 0, tie_b = 0, kicks = 0
    cdef uint64_t key
    cdef int rnd, f, sa, sb, prev_first, winner, left_f, left_s
    cdef bint prev_ms, s1, s2
    cdef int i
    if regular < 1 or regular > MAX_ROUNDS or len(ps) != regular or len(qs) != regular:
        raise ValueError("rates must have one entry per regular round")
    _load(&prog, starts, kinds, anchors, regular)
    for i in range(regular):
        p_arr[i] = ps[i]
        q_arr[i] = qs[i]
    with nogil:
        for t in range(first_trial, first_trial + n_trials):
            key = _mix(seed + (<uint64_t>t + 1) * GOLDEN)
            sa = sb = 0
            prev_first = 0
            prev_ms = False
            winner = -1
            for rnd in range(1, regular + 1):
                f = _kicker(&prog, rnd, prev_first, prev_ms)
                left_s = regular - rnd + 1
                left_f = regular - rnd
                s1 = _uniform(key, 2 * (rnd - 1)) < p_arr[rnd - 1]
                kicks += 1
                if s1:
                    if f == 0:
                        sa += 1
                    else:
                        sb += 1
                if f == 0:
                    winner = _decided(sa, sb, left_f, left_s)
                else:
                    winner = _decided(sa, sb, left_s, left_f)
                if winner >= 0:
                    break
                s2 = _uniform(key, 2 * (rnd - 1) + 1) < q_arr[rnd - 1]
                kicks += 1
                if s2:
                    if f == 0:
                        sb += 1
                    else:
                        sa += 1
                winner = _decided(sa, sb, left_f, left_f)
                if winner >= 0:
                    break
                prev_first = f
                prev_ms = (not s1) and s2
            if winner < 0:
                rnd = regular + 1
                f = _kicker(&prog, rnd, prev_first, prev_ms)
                if f == 0:
                    tie_a += 1
                else:
                    tie_b += 1
                while True:
                    s1 = _uniform(key, 2 * (rnd - 1)) < p_sd
                    s2 = _uniform(key, 2 * (rnd - 1) + 1) < q_sd
                    kicks += 2
                    if s1 != s2:
                        winner = f if s1 else 1 - f
                        break
                    prev_first = f
                    prev_ms = False
                    rnd += 1
                    f = _kicker(&prog, rnd, prev_first, prev_ms)
            if winner == 0:
                a_wins += 1
            else:
                b_wins += 1
    return a_wins, b_wins, tie_a, tie_b, kicks
