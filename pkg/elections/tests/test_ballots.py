from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from elections.voting.ballots import (
    Ballot,
    Election,
    PreferenceProfile,
    first_place_totals,
    parse_blt,
    profile_from_rankings,
    remove_candidates,
    serialize_blt,
)
from elections.voting.exceptions import (
    BltFormatError,
    ElectionError,
    ExplicitTieError,
    InvalidElectionError,
    ProfileExhaustedError,
)

from .strategies import FIXTURE_FILES, FIXTURES, load_fixture, profiles

A, B, C, D = range(4)
H, L, R = range(3)


def test_parse_genola():
    election = load_fixture("genola.blt")
    profile = election.profile
    assert profile.num_candidates == 3
    assert election.seats == 2
    assert profile.total_voters == 378
    assert len(profile.entries) == 9
    assert profile.candidate_names == ("Hughes", "Lundberg", "Robison")
    assert profile.entries[1] == (Ballot((H, L, R)), 58)
    assert profile.title == "2021 Genola city council"


def test_parse_keeps_counts_and_order():
    profile = load_fixture("four_candidates.blt").profile
    assert profile.total_voters == 10000
    assert [count for _, count in profile.entries] == [
        1799, 1801, 100, 901, 900, 498, 2000, 1400, 601
    ]
    assert profile.entries[5][0].ranking == (C, B, D, A)


def test_single_candidate_election_rejected():
    with pytest.raises(BltFormatError, match="fewer than candidates"):
        parse_blt(b'1 1\n1 1 0\n0\n"A"\n"t"')


@pytest.mark.parametrize(
    "text, message",
    [
        (b'2 x\n1 1 0\n0\n"A"\n"B"\n"t"\n', "expected integers"),
        (b'2\n1 1 0\n0\n"A"\n"B"\n"t"\n', "malformed header"),
        (b'2 1\n1 1 1 0\n0\n"A"\n"B"\n"t"\n', "ranked twice"),
        (b'2 1\n1 3 0\n0\n"A"\n"B"\n"t"\n', "out of range"),
        (b'2 1\n1 1 2\n0\n"A"\n"B"\n"t"\n', "0 sentinel"),
        (b'2 1\n1 0\n0\n"A"\n"B"\n"t"\n', "no candidate"),
        (b'2 1\n0 1 0\n0\n"A"\n"B"\n"t"\n', "must be positive"),
        (b'2 1\n1 1 0\n"A"\n"B"\n"t"\n', "0 sentinel"),
        (b'2 1\n1 1 0\n0\n"A"\n"B"\n', "names and a title"),
        (b'2 1\n1 1 0\n0\nA\n"B"\n"t"\n', "double-quoted"),
        (b'2 1\n1 1 0\n0\n"A"\n"B"\n"t"\n"extra"\n', "after the title"),
        (b'2 1\n0\n"A"\n"B"\n"t"\n', "no ballots"),
    ],
)
def test_malformed_blt_rejected(text, message):
    with pytest.raises(BltFormatError, match=message):
        parse_blt(text)


def test_explicit_ties_have_their_own_error():
    with pytest.raises(ExplicitTieError) as excinfo:
        parse_blt(b'3 1\n5 1=2 3 0\n0\n"A"\n"B"\n"C"\n"t"\n')
    assert excinfo.value.line_no == 2
    assert isinstance(excinfo.value, BltFormatError)


def test_parse_accepts_crlf_bom_and_extra_spaces():
    text = '\ufeff3  1\r\n4 1  2 0\r\n\r\n2 3 0\r\n0\r\n"A"\r\n"B"\r\n"C"\r\n"crlf"\r\n'
    election = parse_blt(text.encode("utf-8"))
    assert election.voters == 6
    assert election.profile.entries[0] == (Ballot((A, B)), 4)


def test_non_utf8_bytes_are_a_format_error():
    with pytest.raises(BltFormatError, match="not UTF-8"):
        parse_blt(b'3 1\n4 1 2 0\n0\n"\xff"\n"B"\n"C"\n"t"\n')


def test_party_suffix_is_metadata():
    election = parse_blt(
        b'3 1\n1 1 0\n1 3 0\n0\n"Ann Smith (SNP)"\n"Bob (Lab)"\n"Cy"\n"t"\n'
    )
    profile = election.profile
    assert profile.candidate_names == ("Ann Smith", "Bob", "Cy")
    assert profile.party(0) == "SNP"
    assert profile.party(1) == "Lab"
    assert profile.party(2) is None


def test_withdrawn_candidates_are_removed_before_counting():
    election = parse_blt(
        b'4 2\n-2\n3 2 1 0\n2 2 0\n4 3 4 0\n0\n"A"\n"B"\n"C"\n"D"\n"t"\n'
    )
    profile = election.profile
    assert profile.withdrawn == frozenset({B})
    assert profile.candidates == frozenset({A, C, D})
    assert profile.total_voters == 7
    assert (Ballot((A,)), 3) in profile.entries


@pytest.mark.parametrize("name", FIXTURE_FILES)
def test_fixtures_round_trip(name):
    election = load_fixture(name)
    again = parse_blt(serialize_blt(election))
    assert again.seats == election.seats
    assert again.profile.same_ballots(election.profile)
    assert again.profile.title == election.profile.title


def test_serialize_keeps_withdrawn_line_and_parties():
    text = b'3 1\n-3\n2 1 2 0\n0\n"A (X)"\n"B"\n"C"\n"t"\n'
    assert serialize_blt(parse_blt(text)) == text


def test_serialize_rejects_names_that_look_like_party_suffixes():
    columns = [(3, ["Smith (Jr)", "Brown"]), (2, ["Brown"])]
    plain = profile_from_rankings(["Smith (Jr)", "Brown", "Green"], columns)
    with pytest.raises(InvalidElectionError, match="party suffix"):
        serialize_blt(Election(plain, 1))

    with_party = profile_from_rankings(
        ["Smith (Jr)", "Brown", "Green"], columns, parties={"Smith (Jr)": "Lab"}
    )
    back = parse_blt(serialize_blt(Election(with_party, 1))).profile
    assert back.candidate_names == ("Smith (Jr)", "Brown", "Green")
    assert back.parties == ("Lab", None, None)


def test_serialize_rejects_fractional_weights():
    profile = PreferenceProfile(2, ("A", "B"), ((Ballot((A,), Fraction(1, 2)), 1),))
    with pytest.raises(InvalidElectionError):
        serialize_blt(Election(profile, 1))


def test_genola_fixture_text_round_trips_exactly():
    data = (FIXTURES / "genola.blt").read_bytes()
    assert serialize_blt(parse_blt(data)) == data


@pytest.mark.parametrize(
    "ranking, weight",
    [((), 1), ((0, 0), 1), ((0,), -1)],
)
def test_ballot_invariants(ranking, weight):
    with pytest.raises(InvalidElectionError):
        Ballot(ranking, weight)


def test_profile_invariants():
    with pytest.raises(InvalidElectionError):
        PreferenceProfile(2, ("A", "B"), ((Ballot((2,)), 1),))
    with pytest.raises(InvalidElectionError):
        PreferenceProfile(2, ("A", "B"), ())
    with pytest.raises(InvalidElectionError):
        PreferenceProfile(2, ("A",), ((Ballot((0,)), 1),))


def test_election_seat_bounds():
    profile = load_fixture("excellence.blt").profile
    with pytest.raises(InvalidElectionError):
        Election(profile, 0)
    with pytest.raises(InvalidElectionError):
        Election(profile, 4)
    assert Election(profile, 3).seats == 3


def test_remove_candidate_from_four_candidates():
    profile = load_fixture("four_candidates.blt").profile
    reduced = remove_candidates(profile, {C})
    assert (Ballot((B, D, A)), 498) in reduced.entries
    totals = first_place_totals(reduced, reduced.candidates)
    assert totals.totals == {A: 3700, B: 2299, D: 4001}
    assert totals.exhausted == 0


def test_remove_robison_drops_exhausted_ballots():
    profile = load_fixture("genola.blt").profile
    reduced = remove_candidates(profile, {R})
    assert reduced.total_voters == 363
    assert all(R not in b.ranking for b, _ in reduced.entries)


def test_remove_nothing_is_identity():
    profile = load_fixture("genola.blt").profile
    assert remove_candidates(profile, set()) is profile


def test_remove_every_candidate_fails():
    profile = load_fixture("genola.blt").profile
    with pytest.raises(InvalidElectionError):
        remove_candidates(profile, {H, L, R})


def test_remove_emptying_every_ballot_fails():
    profile = profile_from_rankings("ABC", [(3, "A")])
    with pytest.raises(ProfileExhaustedError):
        remove_candidates(profile, {A})


def test_first_place_totals_examples():
    profile = load_fixture("four_candidates.blt").profile
    totals = first_place_totals(profile, profile.candidates)
    assert totals.totals == {A: 3700, B: 1801, C: 2498, D: 2001}
    assert totals.exhausted == 0

    totals = first_place_totals(profile, {A, C})
    assert totals.totals == {A: 3700, C: 4000}
    assert totals.exhausted == 2300

    single = profile_from_rankings("AB", [(1, "AB")])
    assert first_place_totals(single, {B}).totals == {B: 1}


def test_first_place_totals_needs_a_continuing_candidate():
    profile = load_fixture("excellence.blt").profile
    with pytest.raises(ElectionError):
        first_place_totals(profile, set())


def test_merged_combines_identical_ballots():
    profile = profile_from_rankings("ABC", [(2, "AB"), (3, "C"), (4, "AB")])
    merged = profile.merged()
    assert merged.entries == ((Ballot((A, B)), 6), (Ballot((C,)), 3))
    assert merged.same_ballots(profile)


def test_index_of_unknown_name():
    profile = load_fixture("genola.blt").profile
    assert profile.index_of("Robison") == R
    with pytest.raises(KeyError):
        profile.index_of("Nobody")


@given(profile=profiles(), data=st.data())
@settings(max_examples=100, deadline=None)
def test_first_place_conservation(profile, data):
    continuing = data.draw(
        st.sets(st.sampled_from(sorted(profile.candidates)), min_size=1)
    )
    totals = first_place_totals(profile, continuing)
    assert sum(totals.totals.values()) + totals.exhausted == profile.total_voters


@given(profile=profiles(min_candidates=4, max_candidates=6), data=st.data())
@settings(max_examples=100, deadline=None)
def test_removal_composes(profile, data):
    candidates = sorted(profile.candidates)
    x = data.draw(st.sets(st.sampled_from(candidates), max_size=1))
    y = data.draw(st.sets(st.sampled_from([c for c in candidates if c not in x]), max_size=1))
    try:
        expected = remove_candidates(profile, x | y)
    except ProfileExhaustedError:
        return
    stepwise = remove_candidates(remove_candidates(profile, x), y)
    assert stepwise.same_ballots(expected)
    assert stepwise.withdrawn == expected.withdrawn
