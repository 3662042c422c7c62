import hypothesis.strategies as st
import pytest
from hypothesis import given

from syngraph.chat import (
    DEFAULT_PUNCTUATION,
    Age,
    TokenKind,
    extract_child_utterances,
    make_token,
    normalize,
    parse_chat,
    tokenize,
)
from strategies import token_lists

EXPECTED_SIX = [
    "xxx telephone go right there",
    "xxx need it my need it xxx",
    "xxx",
    "0",
    "xxx",
    "put in there",
]


def test_parse_source_listing(peter7_transcript):
    codes = {e.code for e in peter7_transcript.entries}
    assert {"*PAT:", "*CHI:", "*MOT:", "*LOI:"} <= codes
    assert {"%mor:", "%act:", "%com:", "%exp:"} <= codes
    assert peter7_transcript.diagnostics == ()


def test_parse_classifies_every_line(peter7_cha_path):
    text = peter7_cha_path.read_text(encoding="utf-8")
    t = parse_chat(text)
    # continuations merged: entry count equals non-indented lines
    expected = sum(1 for line in text.splitlines() if line.strip() and line[0] not in " \t")
    assert len(t.entries) == expected


def test_parse_empty_input():
    t = parse_chat("")
    assert t.entries == ()
    assert t.diagnostics == ()


def test_orphan_dependent_tiers_reported():
    t = parse_chat("%mor:\tfoo\n%mor:\tbar\n")
    assert t.entries == ()
    assert len(t.diagnostics) == 2
    assert all("orphan" in d.message for d in t.diagnostics)


def test_malformed_speaker_code_skipped():
    t = parse_chat("*chi:\thello\n*CHI:\thi .\n")
    assert len(t.entries) == 1
    assert len(t.diagnostics) == 1
    assert "malformed" in t.diagnostics[0].message


def test_continuation_lines_merged():
    t = parse_chat("*CHI:\tput in\n\tthere .\n")
    assert len(t.entries) == 1
    assert t.entries[0].text == "put in there ."


def test_header_lines_tolerated():
    t = parse_chat("@UTF8\n@Begin\n*CHI:\thi .\n@End\n")
    assert len(t.entries) == 1
    assert t.diagnostics == ()


def test_extract_six_child_utterances(peter7_utterances):
    assert [u.text for u in peter7_utterances] == EXPECTED_SIX


def test_extract_tokenizes_and_strips():
    t = parse_chat("*CHI:\tput in there .\n")
    (u,) = extract_child_utterances(t)
    assert [tok.norm for tok in u.tokens] == ["put", "in", "there"]


def test_extract_no_matching_speaker():
    t = parse_chat("*MOT:\tthe wire .\n")
    assert extract_child_utterances(t) == []


def test_extract_preserves_order(peter7_utterances):
    line_nos = [u.line_no for u in peter7_utterances]
    assert line_nos == sorted(line_nos)


def test_extract_context_turns(peter7_utterances):
    first = peter7_utterances[0]
    assert first.before
    assert first.before[-1].speaker.code == "*PAT:"
    assert any(d.code == "%com:" for d in first.before[-1].dependents)


def test_normalize_kinds():
    tokens = tokenize("xxx telephone go right there")
    assert [t.kind for t in tokens] == [
        TokenKind.UNTRANSCRIBED,
        TokenKind.WORD,
        TokenKind.WORD,
        TokenKind.WORD,
        TokenKind.WORD,
    ]


def test_normalize_null_marker():
    tokens = tokenize("0")
    assert len(tokens) == 1
    assert tokens[0].kind is TokenKind.NULL_MARKER


def test_normalize_case_folds():
    assert make_token("Telephone").norm == "telephone"
    assert make_token("YYY").kind is TokenKind.UNTRANSCRIBED


def test_apostrophes_kept_inside_tokens():
    tokens = tokenize("that's a truck ?")
    assert [t.norm for t in tokens] == ["that's", "a", "truck"]


def test_custom_punctuation_set():
    tokens = tokenize("a-b.", punctuation="-.")
    assert [t.norm for t in tokens] == ["a", "b"]


def test_age_parsing():
    assert Age.parse("2;1.0") == Age(2, 1, 0)
    assert Age.parse("1;9.21") == Age(1, 9, 21)
    assert Age.parse("1;9") == Age(1, 9, 0)
    assert str(Age(2, 3, 21)) == "2;3.21"
    with pytest.raises(ValueError):
        Age.parse("21 months")


@given(token_lists())
def test_normalize_idempotent(tokens):
    once = normalize(tokens)
    assert normalize(once) == once


@given(st.text(max_size=80))
def test_tokenize_output_is_punctuation_free(text):
    for tok in tokenize(text):
        assert not set(tok.norm) & set(DEFAULT_PUNCTUATION)
        assert tok.norm == tok.surface.lower()
