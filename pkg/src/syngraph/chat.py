"""CHAT-style transcript ingestion.

Parses line-oriented transcripts into speaker/dependent tier lines,
pulls out one speaker's utterances with surrounding conversational
context, and normalizes surface strings into word tokens. Node identity
downstream is the case-folded surface form, so "Telephone" and
"telephone" are one word type.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator

log = logging.getLogger(__name__)

#: Characters removed from utterance text before whitespace-splitting.
#: Apostrophes stay inside tokens ("that's", "don't" are single tokens).
DEFAULT_PUNCTUATION = ".,;:!?<>¿*"

#: Default main-tier code for the child's productions.
DEFAULT_SPEAKER = "*CHI:"

UNTRANSCRIBED_FORMS = frozenset({"xxx", "yyy"})
NULL_MARKER_FORM = "0"

_SPEAKER_RE = re.compile(r"^\*[A-Z]{3}:$")
_DEPENDENT_RE = re.compile(r"^%[a-z]+:$")


class TokenKind(Enum):
    WORD = "word"
    UNTRANSCRIBED = "untranscribed"
    NULL_MARKER = "null_marker"


@dataclass(frozen=True)
class Token:
    """A surface token, its case-folded identity, and its kind tag."""

    surface: str
    norm: str
    kind: TokenKind


def make_token(surface: str) -> Token:
    """Build a Token from a surface string, tagging xxx/yyy and the "0" line."""
    norm = surface.lower()
    if norm in UNTRANSCRIBED_FORMS:
        kind = TokenKind.UNTRANSCRIBED
    elif norm == NULL_MARKER_FORM:
        kind = TokenKind.NULL_MARKER
    else:
        kind = TokenKind.WORD
    return Token(surface=surface, norm=norm, kind=kind)


@lru_cache(maxsize=16)
def _strip_table(punctuation: str) -> dict[int, str]:
    return str.maketrans({ch: " " for ch in punctuation})


def tokenize(text: str, punctuation: str = DEFAULT_PUNCTUATION) -> tuple[Token, ...]:
    """Strip the configured punctuation characters, then whitespace-split."""
    cleaned = text.translate(_strip_table(punctuation))
    return tuple(make_token(w) for w in cleaned.split())


def normalize(utterance: "RawUtterance | Iterable[Token]") -> tuple[Token, ...]:
    """Re-derive norm and kind for every token; idempotent."""
    tokens = getattr(utterance, "tokens", utterance)
    return tuple(make_token(t.surface) for t in tokens)


@dataclass(frozen=True)
class Age:
    """Child age in the years;months.days notation (e.g. "2;1.0")."""

    years: int
    months: int
    days: int = 0

    _RE = re.compile(r"^(\d+);(\d+)(?:\.(\d+))?$")

    @classmethod
    def parse(cls, value: str) -> "Age":
        m = cls._RE.match(value.strip())
        if m is None:
            raise ValueError(f"bad age {value!r}; expected years;months.days")
        return cls(int(m.group(1)), int(m.group(2)), int(m.group(3) or 0))

    def sort_key(self) -> tuple[int, int, int]:
        return (self.years, self.months, self.days)

    def __str__(self) -> str:
        return f"{self.years};{self.months}.{self.days}"


@dataclass(frozen=True)
class TierLine:
    """One transcript line: a speaker tier (*XXX:) or dependent tier (%yyy:)."""

    code: str
    text: str
    line_no: int

    @property
    def is_speaker(self) -> bool:
        return self.code.startswith("*")


@dataclass(frozen=True)
class Turn:
    """A speaker line together with its attached dependent tiers."""

    speaker: TierLine
    dependents: tuple[TierLine, ...] = ()

    def dependent_texts(self, code: str) -> tuple[str, ...]:
        return tuple(d.text for d in self.dependents if d.code == code)


@dataclass(frozen=True)
class ParseDiagnostic:
    line_no: int
    message: str
    text: str


@dataclass(frozen=True)
class Transcript:
    """Ordered tier lines of one transcript file plus parse diagnostics."""

    entries: tuple[TierLine, ...]
    corpus_id: str = ""
    age: Age | None = None
    diagnostics: tuple[ParseDiagnostic, ...] = ()

    def turns(self) -> Iterator[Turn]:
        """Group entries into speaker turns with their dependent tiers."""
        speaker: TierLine | None = None
        dependents: list[TierLine] = []
        for line in self.entries:
            if line.is_speaker:
                if speaker is not None:
                    yield Turn(speaker, tuple(dependents))
                speaker = line
                dependents = []
            else:
                dependents.append(line)
        if speaker is not None:
            yield Turn(speaker, tuple(dependents))


@dataclass(frozen=True)
class RawUtterance:
    """One extracted utterance with transcript provenance and context turns."""

    tokens: tuple[Token, ...]
    corpus_id: str
    line_no: int
    before: tuple[Turn, ...] = ()
    after: tuple[Turn, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.tokens

    @property
    def text(self) -> str:
        return " ".join(t.norm for t in self.tokens)


def parse_chat(text: str, corpus_id: str = "", age: Age | None = None) -> Transcript:
    """Parse a CHAT-style transcript into tier lines.

    Indented lines continue the previous tier line. @-header lines are
    tolerated and skipped. Malformed tier codes and orphan dependent
    tiers (no preceding speaker line) are skipped and reported as
    diagnostics.
    """
    entries: list[TierLine] = []
    diagnostics: list[ParseDiagnostic] = []
    seen_speaker = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if raw[0] in " \t":
            if entries:
                prev = entries[-1]
                entries[-1] = TierLine(prev.code, prev.text + " " + raw.strip(), prev.line_no)
            else:
                diagnostics.append(
                    ParseDiagnostic(line_no, "continuation line before any tier line", raw)
                )
            continue
        if raw.startswith("@"):
            continue
        m = re.match(r"^(\S+)[ \t]*(.*)$", raw)
        code, rest = m.group(1), m.group(2).strip()
        if _SPEAKER_RE.match(code):
            entries.append(TierLine(code, rest, line_no))
            seen_speaker = True
        elif _DEPENDENT_RE.match(code):
            if seen_speaker:
                entries.append(TierLine(code, rest, line_no))
            else:
                diagnostics.append(ParseDiagnostic(line_no, "orphan dependent tier", raw))
        elif code.startswith("*") or code.startswith("%"):
            diagnostics.append(ParseDiagnostic(line_no, f"malformed tier code {code!r}", raw))
        else:
            diagnostics.append(ParseDiagnostic(line_no, "unrecognized line", raw))
    return Transcript(
        entries=tuple(entries),
        corpus_id=corpus_id,
        age=age,
        diagnostics=tuple(diagnostics),
    )


def extract_child_utterances(
    transcript: Transcript,
    speaker: str = DEFAULT_SPEAKER,
    punctuation: str = DEFAULT_PUNCTUATION,
    context_window: int = 3,
) -> list[RawUtterance]:
    """Pull every utterance of one speaker, in transcript order.

    Each utterance keeps the ``context_window`` preceding and following
    speaker turns (with their dependent tiers) for downstream advisory
    checks such as imitation detection.
    """
    if not _SPEAKER_RE.match(speaker):
        raise ValueError(f"bad speaker code {speaker!r}")
    turns = list(transcript.turns())
    out: list[RawUtterance] = []
    for idx, turn in enumerate(turns):
        if turn.speaker.code != speaker:
            continue
        out.append(
            RawUtterance(
                tokens=tokenize(turn.speaker.text, punctuation),
                corpus_id=transcript.corpus_id,
                line_no=turn.speaker.line_no,
                before=tuple(turns[max(0, idx - context_window) : idx]),
                after=tuple(turns[idx + 1 : idx + 1 + context_window]),
            )
        )
    return out
