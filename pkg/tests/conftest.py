import pytest
from hypothesis import HealthCheck, settings

from sentcomp.embeddings import load_text_vectors
from sentcomp.lexicon import load_pos_file, load_scl, phrase_records

from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def lex():
    return load_scl(DATA / "scl_opp.tsv")


@pytest.fixture(scope="session")
def pos_table():
    return load_pos_file(DATA / "scl_opp_pos.tsv")


@pytest.fixture(scope="session")
def bigrams(lex, pos_table):
    return phrase_records(lex, pos_table, n=2)


@pytest.fixture(scope="session")
def trigrams(lex, pos_table):
    return phrase_records(lex, pos_table, n=3)


@pytest.fixture(scope="session")
def phrases(lex, pos_table):
    return phrase_records(lex, pos_table)


@pytest.fixture(scope="session")
def store():
    # Shared read-only store; tests that assert on the miss counter load
    # their own copy instead.
    return load_text_vectors(DATA / "embeddings_100d.txt.gz")
