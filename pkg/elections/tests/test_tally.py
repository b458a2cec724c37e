from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from elections.voting.ballots import Election, profile_from_rankings
from elections.voting.exceptions import InvalidElectionError, ProfileExhaustedError
from elections.voting.genmodels import CultureKind, CultureModel, sample_ic
from elections.voting.tally import (
    Elected,
    Eliminated,
    ExhaustedDelta,
    TieBreakMode,
    TiePolicy,
    droop_quota,
    irv,
    sequential_rcv,
    stv,
    tabulate,
)

from .strategies import load_fixture, profiles, scaled, split

A, B, C, D = range(4)
H, L, R = range(3)


@pytest.fixture
def four():
    return load_fixture("four_candidates.blt")


@pytest.fixture
def genola():
    return load_fixture("genola.blt")


def _totals(outcome, table=0):
    return [r.totals for r in outcome.tables[table].rounds]


# --- golden elections ------------------------------------------------------------


def test_droop_quota():
    assert droop_quota(10000, 2) == 3334
    assert droop_quota(378, 2) == 127
    assert droop_quota(100, 2) == 34
    assert droop_quota(10000, 4) == 2001
    with pytest.raises(InvalidElectionError):
        droop_quota(0, 1)


def test_irv_four_candidates(four):
    outcome = irv(four.profile)
    assert outcome.winners == (C,)
    assert _totals(outcome) == [
        {A: 3700, B: 1801, C: 2498, D: 2001},
        {A: 3700, C: 3399, D: 2901},
        {A: 3700, C: 4000},
    ]
    rounds = outcome.tables[0].rounds
    assert rounds[0].events == (Eliminated(B),)
    assert rounds[1].events == (Eliminated(D), ExhaustedDelta(Fraction(2300)))
    assert rounds[2].exhausted == 2300
    assert rounds[2].events == (Elected(C),)
    assert not outcome.lot_used


def test_sequential_rcv_four_candidates(four):
    outcome = sequential_rcv(four)
    assert outcome.winners == (C, D)
    assert len(outcome.tables) == 2
    assert _totals(outcome, table=1) == [
        {A: 3700, B: 2299, D: 4001},
        {A: 4601, D: 5399},
    ]


def test_sequential_rcv_third_seat_drops_exhausted_voters(four):
    outcome = sequential_rcv(four.with_seats(3))
    assert outcome.winners == (C, D, A)
    third = outcome.tables[2].rounds[0]
    assert third.totals == {A: 5700, B: 3699}
    assert sum(third.totals.values()) == 9399


def test_stv_four_candidates(four):
    outcome = stv(four)
    assert outcome.winners == (A, B)
    assert outcome.quota == 3334
    rounds = outcome.tables[0].rounds
    assert len(rounds) == 3
    assert rounds[0].events[0] == Elected(A, Fraction(366))
    assert rounds[1].totals[B] == 1801 + Fraction(3600 * 366, 3700)
    assert rounds[1].totals[C] == 2498 + Fraction(100 * 366, 3700)
    assert rounds[1].retained == 3334
    assert rounds[1].events == (Eliminated(D),)
    assert rounds[2].totals[B] == 1801 + 1400 + Fraction(3600 * 366, 3700)
    assert rounds[2].events[0].candidate == B


def test_stv_truncated_transfers_lose_fractions(four):
    outcome = stv(four, truncate_transfers=True)
    assert outcome.winners == (A, B)
    second = outcome.tables[0].rounds[1]
    assert second.totals[B] == 1801 + 3600 * Fraction(9891, 100000)
    assert second.lost == Fraction(33, 1000)
    assert sum(second.totals.values()) + second.exhausted + second.lost == 10000


def test_genola_irv_elects_robison_outright(genola):
    outcome = irv(genola.profile)
    assert outcome.winners == (R,)
    assert len(outcome.tables[0].rounds) == 1


def test_genola_sequential_rcv(genola):
    outcome = sequential_rcv(genola)
    assert outcome.winners == (R, L)
    assert _totals(outcome, table=1) == [{H: 179, L: 184}]


def test_genola_stv(genola):
    outcome = stv(genola)
    assert outcome.quota == 127
    assert outcome.winners == (R, H)
    rounds = outcome.tables[0].rounds
    assert rounds[1].totals[H] == 93 + Fraction(86 * 70, 197)
    assert rounds[1].totals[L] == 88 + Fraction(96 * 70, 197)
    assert rounds[1].exhausted == Fraction(15 * 70, 197)
    assert rounds[1].events[0] == Eliminated(L)
    assert rounds[2].events[0] == Elected(H, rounds[2].totals[H] - 127)


def test_excellence_versus_proportionality():
    election = load_fixture("excellence.blt")
    assert stv(election).winners == (A, C)
    assert sequential_rcv(election).winners == (A, B)


def test_disjoint_fixture():
    election = load_fixture("disjoint_s4.blt")
    outcome = irv(election.profile)
    assert outcome.winners == (3,)
    assert outcome.tables[0].rounds[-1].totals == {0: 4998, 3: 5002}
    zero = [e for e in outcome.tie_events if e.resolution == "zero_vote"]
    assert [e.chosen for e in zero] == [7, 6]

    outcome = stv(election)
    assert outcome.winners == (0, 1, 2, 4)
    second = outcome.tables[0].rounds[1].totals
    assert (second[1], second[2], second[4]) == (2251, 2250, 2248)

    assert sequential_rcv(election).winner_set == {3, 5, 6, 7}


# --- ties ----------------------------------------------------------------------


def _backward_profile():
    return profile_from_rankings(
        "ABCD", [(6, "A"), (4, "B"), (3, "CB"), (1, "DC")]
    )


def test_backward_tie_break():
    outcome = irv(_backward_profile())
    assert outcome.winners == (B,)
    event = outcome.tie_events[0]
    assert event.purpose == "elimination"
    assert event.candidates == (B, C)
    assert event.chosen == C
    assert event.resolution == "backward"
    assert not outcome.lot_used


def test_lot_only_mode_skips_backward_resolution(caplog):
    policy = TiePolicy(TieBreakMode.LOT_ONLY, seed=3)
    with caplog.at_level("WARNING", logger="elections.voting.tally"):
        outcome = irv(_backward_profile(), policy)
    assert outcome.lot_used
    assert outcome.tie_events[0].resolution == "lot"
    assert "decided by lot" in caplog.text


def test_lot_depends_on_seed_only():
    profile = profile_from_rankings("ABC", [(1, "A"), (1, "B")])
    winners = {irv(profile, TiePolicy(seed=seed)).winners for seed in range(32)}
    assert winners == {(A,), (B,)}
    again = irv(profile, TiePolicy(seed=11))
    assert again == irv(profile, TiePolicy(seed=11))
    assert again.lot_used


def test_zero_vote_candidates_excluded_without_lot():
    profile = profile_from_rankings("ABCDE", [(3, "AB"), (2, "BA"), (1, "E")])
    outcome = irv(profile)
    assert outcome.winners == (A,)
    first = outcome.tie_events[0]
    assert first.resolution == "zero_vote"
    assert first.chosen == D
    assert not outcome.lot_used


def test_sequential_rcv_runs_out_of_ballots():
    profile = profile_from_rankings("ABC", [(3, "A")])
    with pytest.raises(ProfileExhaustedError):
        sequential_rcv(Election(profile, 2))


def test_tie_policy_seed_range():
    with pytest.raises(InvalidElectionError):
        TiePolicy(seed=-1)
    with pytest.raises(InvalidElectionError):
        TiePolicy(seed=2**64)


def test_tabulate_dispatch(four):
    assert tabulate("seqrcv", four) == sequential_rcv(four)
    assert tabulate("irv", four).winners == (C,)
    with pytest.raises(InvalidElectionError, match="unknown method"):
        tabulate("borda", four)


def test_record_rounds_off_keeps_winners(four):
    outcome = stv(four, record_rounds=False)
    assert outcome.tables == ()
    assert outcome.winners == (A, B)


# --- properties ------------------------------------------------------------------


@st.composite
def elections(draw, **kwargs):
    profile = draw(profiles(min_candidates=3, max_candidates=6, **kwargs))
    seats = draw(st.integers(1, len(profile.candidates) - 1))
    return Election(profile, seats)


@given(profile=profiles())
@settings(max_examples=150, deadline=None)
def test_irv_conserves_votes(profile):
    outcome = irv(profile)
    for r in outcome.tables[0].rounds:
        assert sum(r.totals.values()) + r.exhausted == profile.total_voters
    sizes = [len(r.totals) for r in outcome.tables[0].rounds]
    assert sizes == list(range(sizes[0], sizes[0] - len(sizes), -1))


@given(election=elections(), truncate=st.booleans())
@settings(max_examples=150, deadline=None)
def test_stv_conserves_votes_and_fills_seats(election, truncate):
    outcome = stv(election, truncate_transfers=truncate)
    assert len(outcome.winner_set) == election.seats
    assert outcome.winner_set <= election.profile.candidates
    previous = None
    for r in outcome.tables[0].rounds:
        assert sum(r.totals.values()) + r.exhausted + r.lost == election.voters
        assert r.lost >= 0
        if not truncate:
            assert r.lost == 0
        if previous is not None:
            assert r.exhausted >= previous.exhausted
        previous = r


@given(election=elections())
@settings(max_examples=150, deadline=None)
def test_sequential_rcv_seats_distinct_winners(election):
    try:
        outcome = sequential_rcv(election)
    except ProfileExhaustedError:
        return
    assert len(outcome.winner_set) == election.seats
    assert outcome.winners[0] == irv(election.profile).winners[0]


@given(profile=profiles(min_candidates=3, max_candidates=6))
@settings(max_examples=150, deadline=None)
def test_single_seat_methods_agree(profile):
    election = Election(profile, 1)
    single = irv(profile)
    assert sequential_rcv(election).winners == single.winners
    transferable = stv(election)
    assume(not single.lot_used and not transferable.lot_used)
    assert transferable.winners == single.winners


def test_single_seat_methods_agree_on_ic_elections():
    compared = 0
    for seed in range(1000):
        model = CultureModel(CultureKind.IC, n=3 + seed % 4, v=101, seed=seed)
        election = Election(sample_ic(model), 1)
        single = irv(election.profile)
        assert sequential_rcv(election).winners == single.winners
        transferable = stv(election)
        if single.lot_used or transferable.lot_used:
            continue
        assert transferable.winners == single.winners
        compared += 1
    assert compared > 500


@given(election=elections(), factor=st.integers(2, 7))
@settings(max_examples=100, deadline=None)
def test_irv_and_sequential_rcv_scale_invariant(election, factor):
    bigger = Election(scaled(election.profile, factor), election.seats)
    small, large = irv(election.profile), irv(bigger.profile)
    assert large.winners == small.winners
    assert large.tie_events == small.tie_events
    try:
        expected = sequential_rcv(election)
    except ProfileExhaustedError:
        return
    got = sequential_rcv(bigger)
    assert got.winners == expected.winners
    assert got.tie_events == expected.tie_events


def test_stv_is_not_scale_invariant_under_the_droop_quota():
    # The quota is floor(V / (S + 1)) + 1, so doubling every count does not
    # double it: A falls one vote short at V=64 and reaches quota exactly at 128.
    columns = [(3, ["A"]), (40, ["B", "A"]), (21, ["C"])]
    profile = profile_from_rankings(["A", "B", "C"], columns)
    small = stv(Election(profile, 2))
    large = stv(Election(scaled(profile, 2), 2))

    assert (small.quota, large.quota) == (22, 43)
    assert small.winner_set == {B, C}
    assert large.winner_set == {A, B}
    assert not small.lot_used and not large.lot_used
    assert _totals(small)[1] == {A: 21, B: 22, C: 21}
    assert [(t.purpose, t.chosen, t.resolution) for t in small.tie_events] == [
        ("elimination", A, "backward")
    ]
    assert _totals(large)[0][A] + 37 == large.quota


@given(election=elections(), truncate=st.booleans())
@settings(max_examples=100, deadline=None)
def test_split_entries_give_identical_counts(election, truncate):
    halves = Election(split(election.profile), election.seats)
    assert irv(halves.profile) == irv(election.profile)
    assert stv(halves, truncate_transfers=truncate) == stv(
        election, truncate_transfers=truncate
    )


@given(election=elections(), seed=st.integers(0, 2**64 - 1))
@settings(max_examples=60, deadline=None)
def test_counts_are_deterministic(election, seed):
    policy = TiePolicy(seed=seed)
    assert stv(election, policy) == stv(election, TiePolicy(seed=seed))
    assert irv(election.profile, policy) == irv(election.profile, policy)
