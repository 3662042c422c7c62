from pathlib import Path

import pytest
from hypothesis import settings

from syngraph.annotations import read_dga_xml
from syngraph.chat import extract_child_utterances, parse_chat

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

CORPORA = Path(__file__).resolve().parent.parent / "corpora"


@pytest.fixture(scope="session")
def peter7_cha_path() -> Path:
    return CORPORA / "peter7.cha"


@pytest.fixture(scope="session")
def peter7_xml_path() -> Path:
    return CORPORA / "peter7.dga.xml"


@pytest.fixture(scope="session")
def peter7_transcript(peter7_cha_path):
    return parse_chat(peter7_cha_path.read_text(encoding="utf-8"), corpus_id="peter7")


@pytest.fixture(scope="session")
def peter7_utterances(peter7_transcript):
    return extract_child_utterances(peter7_transcript)


@pytest.fixture(scope="session")
def peter7_doc(peter7_xml_path):
    return read_dga_xml(peter7_xml_path.read_bytes())
