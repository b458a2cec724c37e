import pytest

from elections.utils.party_map import load_party_map
from elections.voting.exceptions import ElectionError

from .strategies import FIXTURES


def test_load_fixture_map():
    assert load_party_map(FIXTURES / "four_candidates_parties.csv") == {
        "A": "SNP",
        "B": "SNP",
        "C": "Lab",
        "D": "Ind",
    }


def test_headers_and_cells_are_trimmed(tmp_path):
    path = tmp_path / "parties.csv"
    path.write_text("Candidate , PARTY\n Ann Smith , Green \nBob,\n")
    assert load_party_map(path) == {"Ann Smith": "Green"}


def test_missing_column(tmp_path):
    path = tmp_path / "parties.csv"
    path.write_text("name,party\nA,X\n")
    with pytest.raises(ElectionError, match="candidate"):
        load_party_map(path)


def test_duplicate_candidate(tmp_path):
    path = tmp_path / "parties.csv"
    path.write_text("candidate,party\nA,X\nA,Y\n")
    with pytest.raises(ElectionError, match="twice"):
        load_party_map(path)
