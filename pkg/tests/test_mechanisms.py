from itertools import product

import pytest
from hypothesis import given, strategies as st

import _oracle
from shootout.errors import ConsistencyError, DomainError
from shootout.mechanisms import (
    ADJUSTED_CATCH_UP,
    ALTERNATING,
    CATCH_UP,
    STANDARD,
    KickResult,
    RoundRecord,
    ShootoutHistory,
    TeamId,
    composite,
    first_kicker,
    format_kicks,
    is_decided,
    mechanism_program,
    parse_kicks,
    parse_mechanism,
    program_kicker,
    replay_schedule,
)
from shootout.reference import TABLE1, TABLE1_BLUE, TABLE1_RED

S, M = KickResult.SCORED, KickResult.MISSED
A, B = TeamId.A, TeamId.B
ABBA_THEN_CU = composite(4, ALTERNATING, CATCH_UP)
ORACLE_NAME = {
    STANDARD: "standard",
    ALTERNATING: "abba",
    CATCH_UP: "catchup",
    ADJUSTED_CATCH_UP: "adj-catchup",
    ABBA_THEN_CU: "abba3-catchup",
}


def history_from(mech, outcomes, regular=5):
    h = ShootoutHistory((), regular)
    for o1, o2 in outcomes:
        f = first_kicker(mech, len(h) + 1, h)
        h = h.append(RoundRecord(f, S if o1 else M, S if o2 else M))
    return h


@pytest.mark.parametrize("mech", list(ORACLE_NAME))
def test_first_kicker_matches_hand_rules(mech):
    name = ORACLE_NAME[mech]
    for n in range(0, 7):
        for outcomes in product(((1, 1), (1, 0), (0, 1), (0, 0)), repeat=n):
            h = history_from(mech, outcomes)
            got = first_kicker(mech, n + 1, h)
            prev_first = h.rounds[-1].first_kicker.value if n else None
            prev = outcomes[-1] if n else None
            assert got.value == _oracle.next_first(name, n + 1, prev_first, prev)


def test_round_one_is_always_a():
    for mech in ORACLE_NAME:
        assert first_kicker(mech, 1, ShootoutHistory(())) is A


def test_catch_up_transition():
    h = ShootoutHistory((RoundRecord(A, M, S),))
    assert first_kicker(CATCH_UP, 2, h) is A
    for r1, r2 in ((S, S), (S, M), (M, M)):
        assert first_kicker(CATCH_UP, 2, ShootoutHistory((RoundRecord(A, r1, r2),))) is B


def test_adjusted_opens_sudden_death_with_b_then_alternates():
    # A leads 4-3 after four rounds, then misses while B scores in round 5:
    # plain Catch-Up gives A round 6, the adjusted rule gives B
    outcomes = [(1, 0), (1, 1), (1, 1), (1, 1), (0, 1)]
    h = history_from(CATCH_UP, outcomes[:4])
    assert (h.score(A), h.score(B)) == (4, 3)
    assert first_kicker(CATCH_UP, 5, h) is A
    assert first_kicker(CATCH_UP, 6, history_from(CATCH_UP, outcomes)) is A
    h_adj = history_from(ADJUSTED_CATCH_UP, outcomes)
    seq = []
    for rnd in range(6, 10):
        f = first_kicker(ADJUSTED_CATCH_UP, rnd, h_adj)
        seq.append(f)
        h_adj = h_adj.append(RoundRecord(f, S, S))
    assert seq == [B, A, B, A]


def test_abba_alternates_into_sudden_death():
    h = ShootoutHistory(())
    for rnd in range(1, 12):
        f = first_kicker(ALTERNATING, rnd, h)
        assert f is (A if rnd % 2 else B)
        h = h.append(RoundRecord(f, M, S))


def test_first_kicker_rejects_bad_inputs():
    with pytest.raises(DomainError):
        first_kicker(STANDARD, 0, ShootoutHistory(()))
    with pytest.raises(DomainError):
        first_kicker(STANDARD, 3, ShootoutHistory(()))
    bad = ShootoutHistory((RoundRecord(A, S, S), RoundRecord(A, S, S)))
    with pytest.raises(ConsistencyError):
        first_kicker(ALTERNATING, 3, bad)
    assert first_kicker(ALTERNATING, 3, bad, check=False) is A


@pytest.mark.parametrize("name", sorted(TABLE1))
def test_table1_replay(name):
    kicks, schedule = TABLE1[name]
    rows = replay_schedule(parse_mechanism(name), kicks)
    assert "".join(r.first_kicker.value for r in rows) == schedule
    red = "".join((r.first_result if r.first_kicker is A else r.second_result).value for r in rows)
    blue = "".join((r.second_result if r.first_kicker is A else r.first_result).value for r in rows)
    assert (red, blue) == (TABLE1_RED, TABLE1_BLUE)


def test_replay_rejects_odd_kick_lists():
    with pytest.raises(DomainError):
        replay_schedule(STANDARD, [S, S, M])


def test_kick_strings_round_trip():
    assert parse_kicks("SS.mm . SM") == [S, S, M, M, S, M]
    assert parse_kicks("") == []
    recs = [RoundRecord(A, S, M), RoundRecord(B, M, M)]
    assert format_kicks(recs, S) == "SM.MM.S"
    for bad in ("S", "SSS", "SX", "SS..MM"):
        with pytest.raises(DomainError):
            parse_kicks(bad)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("ABAB", STANDARD),
        ("alternating", ALTERNATING),
        ("catch-up", CATCH_UP),
        ("adjusted-catchup", ADJUSTED_CATCH_UP),
        ("composite(4, abba, catchup)", ABBA_THEN_CU),
    ],
)
def test_parse_mechanism(text, expected):
    assert parse_mechanism(text) == expected


@pytest.mark.parametrize(
    "text",
    ["", "nope", "composite(", "composite(1,abba,catchup)", "composite(x,abba,catchup)",
     "abba abba", "composite(2,abba,catchup"],
)
def test_parse_mechanism_rejects(text):
    with pytest.raises(DomainError):
        parse_mechanism(text)


def test_composite_nesting_is_bounded():
    m = CATCH_UP
    for _ in range(4):
        m = composite(2, ALTERNATING, m)
    assert m.depth == 4
    with pytest.raises(DomainError):
        composite(2, ALTERNATING, m)


def test_mechanism_text_round_trips():
    nested = composite(3, STANDARD, composite(2, ALTERNATING, ADJUSTED_CATCH_UP))
    assert parse_mechanism(str(nested)) == nested


def test_after_rule_counts_its_own_rounds():
    # after switching at round 4, ABBA restarts its parity: round 4 is A
    m = composite(4, STANDARD, ALTERNATING)
    h = ShootoutHistory(())
    seq = []
    for rnd in range(1, 8):
        f = first_kicker(m, rnd, h)
        seq.append(f.value)
        h = h.append(RoundRecord(f, S, S))
    assert "".join(seq) == "AAAABAB"


def test_is_decided():
    h = history_from(STANDARD, [(1, 0), (1, 0), (1, 0)])
    assert is_decided(h) is A
    h = history_from(STANDARD, [(1, 0), (1, 0)])
    assert is_decided(h) is None
    tied = history_from(STANDARD, [(1, 1)] * 5 + [(1, 1), (0, 1)])
    assert is_decided(tied) is B


mechanisms = st.sampled_from(list(ORACLE_NAME) + [
    composite(3, CATCH_UP, ALTERNATING),
    composite(2, ADJUSTED_CATCH_UP, composite(3, STANDARD, CATCH_UP)),
])
outcome_lists = st.lists(st.tuples(st.booleans(), st.booleans()), max_size=10)


@given(mechanisms, outcome_lists, st.integers(min_value=1, max_value=8))
def test_program_agrees_with_definition(mech, outcomes, regular):
    # the flat program used by the kernels must reproduce the rule definition
    h = history_from(mech, outcomes, regular)
    program = mechanism_program(mech)
    rnd = len(h) + 1
    prev = h.rounds[-1] if h.rounds else None
    got = program_kicker(
        program, rnd,
        prev.first_kicker if prev else None,
        prev.first_missed_second_scored if prev else False,
        regular,
    )
    assert got is first_kicker(mech, rnd, h)
