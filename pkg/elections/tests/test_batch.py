import pytest

from elections.services.batch_analysis import analyse_election, run_batch
from elections.utils.party_map import load_party_map

from .strategies import FIXTURES, load_fixture


@pytest.fixture
def party_map():
    return load_party_map(FIXTURES / "four_candidates_parties.csv")


@pytest.fixture
def batch(tmp_path, party_map):
    bad = tmp_path / "bad.blt"
    bad.write_text("garbage\n")
    paths = [
        FIXTURES / "four_candidates.blt",
        FIXTURES / "genola.blt",
        FIXTURES / "excellence.blt",
        tmp_path / "missing.blt",
        bad,
    ]
    return run_batch(paths, seed=1, party_map=party_map)


def test_records_in_input_order(batch):
    assert [r.title for r in batch.records] == [
        "Four candidates, ten thousand voters",
        "2021 Genola city council",
        "Excellence versus proportionality",
    ]


def test_four_candidate_record(batch):
    record = batch.records[0]
    assert record.rcv_winners == ("C", "D")
    assert record.stv_winners == ("A", "B")
    assert record.diff == 2
    assert record.committee is None
    assert not record.rcv_selects_committee
    assert (record.rcv_parties, record.stv_parties) == (2, 1)
    assert record.misrep_rcv.count == 3600
    assert record.misrep_stv.count == 2601


def test_genola_record(batch):
    record = batch.records[1]
    assert record.rcv_winners == ("Robison", "Lundberg")
    assert record.stv_winners == ("Robison", "Hughes")
    assert record.committee == ("Lundberg", "Robison")
    assert record.rcv_selects_committee
    assert not record.stv_selects_committee
    assert record.rcv_parties is None
    assert str(record.maxrep_rcv) == "46.3"
    assert record.voters == 378


def test_failures_are_collected(batch):
    assert [e.file.rsplit("/", 1)[-1] for e in batch.errors] == ["missing.blt", "bad.blt"]
    assert "line 1" in batch.errors[1].error


def test_aggregate(batch):
    assert batch.aggregate == {
        "elections": 3,
        "errors": 2,
        "different_winners": 3,
        "diff_counts": {"1": 2, "2": 1},
        "committee_exists": 2,
        "rcv_selects_committee": 2,
        "stv_selects_committee": 0,
        "with_party_data": 2,
        "stv_more_parties": 1,
        "stv_two_more_parties": 0,
        "rcv_more_parties": 1,
        "stv_higher_misrep": 0,
    }


def test_to_dict_is_plain_data(batch):
    data = batch.to_dict()
    assert data["schema_version"] == 1
    first = data["records"][0]
    assert first["rcv_winners"] == ["C", "D"]
    assert first["misrep_rcv"] == "36.0"
    assert first["committee"] is None
    assert data["errors"][1]["file"].endswith("bad.blt")


def test_seat_override():
    result = run_batch([FIXTURES / "genola.blt"], s_override=1)
    assert result.records[0].s == 1
    assert result.records[0].diff == 0

    result = run_batch([FIXTURES / "genola.blt"], s_override=3)
    assert not result.records
    assert "fewer than candidates" in result.errors[0].error


def test_independents_can_share_a_label(party_map):
    election = load_fixture("four_candidates.blt")
    merged = {**party_map, "C": "Ind"}
    record = analyse_election(election, party_map=merged, independents_distinct=False)
    assert record.rcv_parties == 1
    record = analyse_election(election, party_map=merged, independents_distinct=True)
    assert record.rcv_parties == 2


def test_blt_party_suffixes_are_used_without_a_map(tmp_path):
    path = tmp_path / "suffixes.blt"
    path.write_text('3 2\n3 1 2 0\n2 3 1 0\n0\n"A (X)"\n"B (Y)"\n"C (X)"\n"t"\n')
    record = run_batch([path]).records[0]
    assert record.rcv_parties is not None
    assert record.stv_parties is not None
