"""Advisory structural flags for the human annotator.

Every operation here is deterministic, advisory, and side-effect free:
flags point the annotator at non-accepted items, onomatopoeia, likely
imitations, duplicated functional words, discourse items, list
sequences, and a couple of simple utterance-initial patterns (negation
standing in for an auxiliary, object/possessive pronoun as subject).
Nothing in this module decides acceptance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .chat import Token, TokenKind


class FlagKind(Enum):
    NON_ACCEPTED_ITEM = "non_accepted_item"
    ONOMATOPOEIA = "onomatopoeia"
    IMITATION_CANDIDATE = "imitation_candidate"
    DUPLICATION = "duplication"
    DISCOURSE_ITEM = "discourse_item"
    SCHWA_CANDIDATE = "schwa_candidate"
    TA_CANDIDATE = "ta_candidate"
    LIST_SEQUENCE = "list_sequence"
    PRONOUN_CASE = "pronoun_case"
    MISSING_COPULA = "missing_copula"


@dataclass(frozen=True)
class AdvisoryFlag:
    kind: FlagKind
    span: tuple[int, ...]  # 1-based token positions
    suggestion: str

    def __post_init__(self) -> None:
        if not self.span:
            raise ValueError("flag span must be non-empty")


@dataclass(frozen=True)
class NonAcceptedLexicon:
    """Word lists driving classify_token; the three sets are disjoint."""

    items: frozenset[str]
    onomatopoeia: frozenset[str]
    context_sensitive: frozenset[str]

    def __post_init__(self) -> None:
        if (
            self.items & self.onomatopoeia
            or self.items & self.context_sensitive
            or self.onomatopoeia & self.context_sensitive
        ):
            raise ValueError("lexicon sections must be pairwise disjoint")

    @classmethod
    def from_file(cls, path: Path | str) -> "NonAcceptedLexicon":
        """Read a sectioned plain-text lexicon.

        Sections are [non_accepted], [onomatopoeia], [context_sensitive];
        one item per line, '#' starts a comment.
        """
        sections: dict[str, set[str]] = {
            "non_accepted": set(),
            "onomatopoeia": set(),
            "context_sensitive": set(),
        }
        current: set[str] | None = None
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                name = line[1:-1].strip()
                if name not in sections:
                    raise ValueError(f"unknown lexicon section {name!r}")
                current = sections[name]
                continue
            if current is None:
                raise ValueError(f"lexicon item {line!r} before any section header")
            current.add(line.lower())
        return cls(
            items=frozenset(sections["non_accepted"]),
            onomatopoeia=frozenset(sections["onomatopoeia"]),
            context_sensitive=frozenset(sections["context_sensitive"]),
        )


DEFAULT_LEXICON = NonAcceptedLexicon(
    items=frozenset(
        {
            "ah", "awoh", "ay", "hey", "hmm", "huh", "ka", "ma", "mm", "mmhm",
            "oh", "oop", "oops", "ow", "sh", "ssh", "uh", "uhhuh", "uhoh",
            "um", "whoops", "woo", "yum",
        }
    ),
    onomatopoeia=frozenset({"choo", "moo", "woof", "bee"}),
    context_sensitive=frozenset({"a", "an", "s", "ta"}),
)

#: Utterance-initial conversational items that may link to what follows.
DEFAULT_DISCOURSE_ITEMS = frozenset({"hello", "hi", "ok", "okay", "bye", "goodbye"})

NUMBER_WORDS = frozenset(
    {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"}
)

# Closed functional classes for duplication detection; overridable by
# coarse part-of-speech hints from a %mor tier.
PREPOSITIONS = frozenset(
    {
        "at", "in", "on", "to", "of", "for", "with", "from", "up", "down",
        "out", "off", "over", "under", "by", "into", "onto", "about",
    }
)
DETERMINERS = frozenset(
    {"the", "a", "an", "this", "that", "these", "those", "another", "some", "any", "no"}
)
QUANTIFIERS = frozenset(
    {"one", "two", "three", "four", "five", "more", "all", "both", "many", "much", "few"}
)

#: Object/possessive forms that early grammars use in subject position.
_NON_SUBJECT_PRONOUNS = frozenset({"me", "my", "him", "her", "them", "us"})

UNTRANSCRIBED_CONVERSATION_MARKER = "untranscribed adult conversation"


def classify_token(
    token: Token, lexicon: NonAcceptedLexicon = DEFAULT_LEXICON, position: int = 1
) -> AdvisoryFlag | None:
    """Flag a word token that is on one of the non-accepted lists.

    Context-sensitive items are still flagged (the decision needs a
    human): "a"/"an" as schwa candidates, "ta" as a preposition-precursor
    candidate, anything else on that list as a plain non-accepted item.
    """
    if token.kind is not TokenKind.WORD:
        return None
    w = token.norm
    span = (position,)
    if w in lexicon.items:
        return AdvisoryFlag(
            FlagKind.NON_ACCEPTED_ITEM, span, f"{w!r} is a non-accepted item; exclude from structures"
        )
    if w in lexicon.onomatopoeia:
        return AdvisoryFlag(
            FlagKind.ONOMATOPOEIA,
            span,
            f"{w!r} is onomatopoeia; treat as nonexistent unless it replaces a lexical item",
        )
    if w in lexicon.context_sensitive:
        if w in ("a", "an"):
            return AdvisoryFlag(
                FlagKind.SCHWA_CANDIDATE,
                span,
                f"{w!r} may be a proto-functional schwa or purely phonological; decide from context",
            )
        if w == "ta":
            return AdvisoryFlag(
                FlagKind.TA_CANDIDATE,
                span,
                "'ta' may stand in for the preposition 'to'; decide from context",
            )
        return AdvisoryFlag(
            FlagKind.NON_ACCEPTED_ITEM,
            span,
            f"{w!r} is non-accepted in some contexts; human judgment required",
        )
    return None


def strip_onomatopoeia(
    tokens: Sequence[Token], lexicon: NonAcceptedLexicon = DEFAULT_LEXICON
) -> tuple[Token, ...]:
    """Drop onomatopoeia tokens (maximal runs go entirely); order preserved."""
    return tuple(t for t in tokens if t.norm not in lexicon.onomatopoeia)


@dataclass(frozen=True)
class AdultTurn:
    """One preceding adult utterance offered as imitation context."""

    speaker: str
    tokens: tuple[Token, ...]

    @property
    def text(self) -> str:
        return " ".join(t.norm for t in self.tokens)


def flag_imitation(
    tokens: Sequence[Token],
    adult_turns: Sequence[AdultTurn],
    comments_before: Sequence[str] = (),
    window: int = 3,
) -> AdvisoryFlag | None:
    """Flag a likely imitation of recent adult speech.

    Fires when a comment tier immediately before the utterance mentions
    an untranscribed adult conversation, or when the utterance's word
    multiset is contained in one of the last ``window`` adult turns.
    High recall by design; the human decides.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    word_positions = tuple(
        i for i, t in enumerate(tokens, start=1) if t.kind is TokenKind.WORD
    )
    if not word_positions:
        return None
    for comment in comments_before:
        if UNTRANSCRIBED_CONVERSATION_MARKER in comment.lower():
            return AdvisoryFlag(
                FlagKind.IMITATION_CANDIDATE,
                word_positions,
                f"follows comment {comment!r}; may imitate untranscribed adult speech",
            )
    child_words = Counter(t.norm for t in tokens if t.kind is TokenKind.WORD)
    for turn in reversed(adult_turns[-window:]):
        adult_words = Counter(t.norm for t in turn.tokens if t.kind is TokenKind.WORD)
        if not (child_words - adult_words):
            return AdvisoryFlag(
                FlagKind.IMITATION_CANDIDATE,
                word_positions,
                f"tokens contained in adult turn {turn.speaker} {turn.text!r}; may be an imitation",
            )
    return None


def _functional_class(norm: str, hint: str | None) -> str | None:
    if hint in ("prep", "det", "qn"):
        return hint
    if hint is not None:
        return None
    if norm in PREPOSITIONS:
        return "prep"
    if norm in DETERMINERS:
        return "det"
    if norm in QUANTIFIERS:
        return "qn"
    return None


def flag_duplication(
    tokens: Sequence[Token], pos_hints: Sequence[str | None] | None = None
) -> list[AdvisoryFlag]:
    """Flag adjacent duplicated functional words.

    Fires on preposition-preposition, determiner-determiner, and
    determiner-quantifier pairs. The suggestion keeps one member of the
    pair (the determiner over the quantifier, else the first) and leaves
    the other as an independent lexical item.
    """
    flags: list[AdvisoryFlag] = []
    for i in range(len(tokens) - 1):
        a, b = tokens[i], tokens[i + 1]
        if a.kind is not TokenKind.WORD or b.kind is not TokenKind.WORD:
            continue
        ca = _functional_class(a.norm, pos_hints[i] if pos_hints else None)
        cb = _functional_class(b.norm, pos_hints[i + 1] if pos_hints else None)
        if ca is None or cb is None:
            continue
        pair = {ca, cb}
        if pair == {"prep"} or pair == {"det"}:
            keep, drop = a, b
        elif pair == {"det", "qn"}:
            keep, drop = (a, b) if ca == "det" else (b, a)
        else:
            continue
        remaining = " ".join(
            t.norm for j, t in enumerate(tokens) if j != (i if drop is a else i + 1)
        )
        flags.append(
            AdvisoryFlag(
                FlagKind.DUPLICATION,
                (i + 1, i + 2),
                f"duplicated functional words; keep {keep.norm!r}, exclude {drop.norm!r} "
                f"from the structure as an independent lexical item: {remaining!r}",
            )
        )
    return flags


def flag_discourse_item(
    tokens: Sequence[Token],
    discourse_items: frozenset[str] = DEFAULT_DISCOURSE_ITEMS,
) -> AdvisoryFlag | None:
    """Flag list sequences and conversational discourse items.

    An all-number utterance is a list (no structure). A discourse item
    surrounded by a repeated phrase reads as pragmatic (reject); an
    utterance-initial one suggests a link to the first following word.
    """
    words = [(i, t) for i, t in enumerate(tokens, start=1) if t.kind is TokenKind.WORD]
    if len(words) >= 2 and all(t.norm in NUMBER_WORDS for _, t in words):
        return AdvisoryFlag(
            FlagKind.LIST_SEQUENCE,
            tuple(i for i, _ in words),
            "number/list sequence; not a syntactic structure",
        )
    for idx, (pos, tok) in enumerate(words):
        if tok.norm not in discourse_items:
            continue
        before = tuple(t.norm for _, t in words[:idx])
        after = tuple(t.norm for _, t in words[idx + 1 :])
        if before and before == after:
            return AdvisoryFlag(
                FlagKind.DISCOURSE_ITEM,
                (pos,),
                f"reject {tok.norm!r}: pragmatic use inside a repeated sequence",
            )
        if idx == 0 and len(words) > 1:
            nxt_pos, nxt = words[1]
            return AdvisoryFlag(
                FlagKind.DISCOURSE_ITEM,
                (pos,),
                f"link {tok.norm!r} to the first element of what follows: "
                f"arc {tok.norm} -> {nxt.norm}",
            )
        if idx == 0:
            return AdvisoryFlag(
                FlagKind.DISCOURSE_ITEM,
                (pos,),
                f"stand-alone {tok.norm!r}: reject as pragmatic or keep as an isolated item",
            )
    return None


def pattern_flags(tokens: Sequence[Token]) -> list[AdvisoryFlag]:
    """Simple utterance-initial hints: negation-for-auxiliary and pronoun case."""
    flags: list[AdvisoryFlag] = []
    words = [(i, t) for i, t in enumerate(tokens, start=1) if t.kind is TokenKind.WORD]
    if len(words) >= 2:
        pos, first = words[0]
        if first.norm == "no":
            flags.append(
                AdvisoryFlag(
                    FlagKind.MISSING_COPULA,
                    (pos,),
                    "utterance-initial 'no': may replace an auxiliary (\"don't ...\") and head "
                    "a structure, or stand alone; decide from context",
                )
            )
        if first.norm in _NON_SUBJECT_PRONOUNS:
            flags.append(
                AdvisoryFlag(
                    FlagKind.PRONOUN_CASE,
                    (pos,),
                    f"{first.norm!r} in subject position: likely case error for 'I'; "
                    "treat as structured",
                )
            )
    return flags


def utterance_flags(
    tokens: Sequence[Token],
    lexicon: NonAcceptedLexicon = DEFAULT_LEXICON,
    pos_hints: Sequence[str | None] | None = None,
) -> list[AdvisoryFlag]:
    """All context-free advisory flags for one utterance, in position order."""
    flags: list[AdvisoryFlag] = []
    for pos, tok in enumerate(tokens, start=1):
        f = classify_token(tok, lexicon, position=pos)
        if f is not None:
            flags.append(f)
    flags.extend(flag_duplication(tokens, pos_hints))
    discourse = flag_discourse_item(tokens)
    if discourse is not None:
        flags.append(discourse)
    flags.extend(pattern_flags(tokens))
    flags.sort(key=lambda f: (f.span, f.kind.value))
    return flags
