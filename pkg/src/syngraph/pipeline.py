"""End-to-end corpus processing and report emission.

A corpus series lists (corpus_id, transcript, annotation, age) entries.
Each corpus runs independently: extraction from the transcript,
annotation loading (or skeleton emission when no annotation exists
yet), graph building, and the metric suite. A failure in one corpus is
recorded and the series continues. Identical inputs produce
byte-identical CSV/JSON output.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .annotations import (
    AnnotatedDocument,
    DgaParseError,
    DocumentValidationError,
    read_dga_xml,
    skeleton_document,
    write_dga_xml,
)
from .chat import (
    DEFAULT_PUNCTUATION,
    DEFAULT_SPEAKER,
    Age,
    RawUtterance,
    extract_child_utterances,
    parse_chat,
    tokenize,
)
from .criteria import (
    DEFAULT_LEXICON,
    AdultTurn,
    AdvisoryFlag,
    NonAcceptedLexicon,
    flag_imitation,
    utterance_flags,
)
from .graph import build_graph, edge_list_text, graph_to_dict
from .metrics import (
    DEFAULT_SMALLWORLD_TOL,
    REPORT_COLUMNS,
    MetricsReport,
    compute_report,
    report_to_dict,
)

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Raised for unusable configuration or series files."""


@dataclass(frozen=True)
class PipelineConfig:
    punctuation: str = DEFAULT_PUNCTUATION
    speaker: str = DEFAULT_SPEAKER
    imitation_window: int = 3
    context_window: int = 3
    smallworld_tol: float = DEFAULT_SMALLWORLD_TOL
    poisson_n: str = "gcc"
    lexicon: Path | None = None
    jobs: int = 1

    @classmethod
    def from_file(cls, path: Path | str) -> "PipelineConfig":
        """Read key=value lines; '#' starts a comment; unknown keys fail."""
        values: dict = {}
        for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in ("punctuation", "speaker", "poisson_n"):
                values[key] = value
            elif key in ("imitation_window", "context_window", "jobs"):
                values[key] = int(value)
            elif key == "smallworld_tol":
                values[key] = float(value)
            elif key == "lexicon":
                values[key] = Path(value)
            else:
                raise ConfigError(f"{path}:{line_no}: unknown config key {key!r}")
        config = cls(**values)
        if config.poisson_n not in ("gcc", "all"):
            raise ConfigError(f"poisson_n must be 'gcc' or 'all', not {config.poisson_n!r}")
        return config

    def load_lexicon(self) -> NonAcceptedLexicon:
        if self.lexicon is None:
            return DEFAULT_LEXICON
        return NonAcceptedLexicon.from_file(self.lexicon)


@dataclass(frozen=True)
class CorpusEntry:
    corpus_id: str
    transcript: Path | None = None
    annotation: Path | None = None
    age: Age | None = None


@dataclass(frozen=True)
class CorpusSeries:
    entries: tuple[CorpusEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        ids = [e.corpus_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate corpus ids in series: {ids}")
        ages = [e.age for e in self.entries]
        if all(a is not None for a in ages) and ages:
            keys = [a.sort_key() for a in ages]
            if keys != sorted(keys):
                raise ConfigError("series entries are not in chronological age order")

    @classmethod
    def from_tsv(cls, path: Path | str) -> "CorpusSeries":
        """Read a series manifest: corpus_id, transcript[, annotation[, age]].

        Tab-separated, one corpus per line, empty fields allowed; paths
        resolve relative to the manifest location.
        """
        base = Path(path).parent
        entries: list[CorpusEntry] = []
        for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise ConfigError(f"{path}:{line_no}: expected at least corpus_id<TAB>transcript")
            corpus_id = fields[0].strip()
            transcript = fields[1].strip()
            annotation = fields[2].strip() if len(fields) > 2 else ""
            age_text = fields[3].strip() if len(fields) > 3 else ""
            try:
                age = Age.parse(age_text) if age_text else None
            except ValueError as e:
                raise ConfigError(f"{path}:{line_no}: {e}") from None
            entries.append(
                CorpusEntry(
                    corpus_id=corpus_id,
                    transcript=base / transcript if transcript else None,
                    annotation=base / annotation if annotation else None,
                    age=age,
                )
            )
        return cls(entries=tuple(entries))


@dataclass(frozen=True)
class CorpusFailure:
    corpus_id: str
    stage: str  # "read" | "annotation"
    message: str


@dataclass
class RunResult:
    reports: list[MetricsReport] = field(default_factory=list)
    failures: list[CorpusFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def imitation_context(
    utterance: RawUtterance, speaker: str, punctuation: str = DEFAULT_PUNCTUATION
) -> tuple[list[AdultTurn], list[str]]:
    """Adult turns preceding the utterance plus comment tiers of the last turn."""
    adult_turns: list[AdultTurn] = []
    comments: list[str] = []
    for turn in utterance.before:
        if turn.speaker.code != speaker:
            adult_turns.append(
                AdultTurn(
                    speaker=turn.speaker.code,
                    tokens=tokenize(turn.speaker.text, punctuation),
                )
            )
    if utterance.before:
        comments = list(utterance.before[-1].dependent_texts("%com:"))
    return adult_turns, comments


def advisory_flags_for(
    utterance: RawUtterance, config: PipelineConfig, lexicon: NonAcceptedLexicon
) -> list[AdvisoryFlag]:
    """Context-free flags plus the context-aware imitation flag."""
    flags = utterance_flags(utterance.tokens, lexicon)
    adult_turns, comments = imitation_context(utterance, config.speaker, config.punctuation)
    imitation = flag_imitation(
        utterance.tokens, adult_turns, comments, window=config.imitation_window
    )
    if imitation is not None:
        flags.append(imitation)
    return flags


def utterances_to_dicts(utterances: Sequence[RawUtterance]) -> list[dict]:
    return [
        {"corpus": u.corpus_id, "line_no": u.line_no, "tokens": [t.norm for t in u.tokens]}
        for u in utterances
    ]


def flags_to_dicts(
    utterances: Sequence[RawUtterance], config: PipelineConfig, lexicon: NonAcceptedLexicon
) -> list[dict]:
    out = []
    for u in utterances:
        flags = advisory_flags_for(u, config, lexicon)
        out.append(
            {
                "corpus": u.corpus_id,
                "line_no": u.line_no,
                "flags": [
                    {"kind": f.kind.value, "span": list(f.span), "suggestion": f.suggestion}
                    for f in flags
                ],
            }
        )
    return out


def _json_bytes(payload) -> bytes:
    return json.dumps(payload, indent=2, ensure_ascii=False).encode("utf-8")


def _process_entry(
    entry: CorpusEntry,
    config: PipelineConfig,
    lexicon: NonAcceptedLexicon,
    out_dir: Path | None,
) -> tuple[MetricsReport | None, CorpusFailure | None]:
    utterances: list[RawUtterance] = []
    if entry.transcript is not None:
        try:
            text = entry.transcript.read_text(encoding="utf-8")
        except OSError as e:
            return None, CorpusFailure(entry.corpus_id, "read", str(e))
        transcript = parse_chat(text, corpus_id=entry.corpus_id, age=entry.age)
        for diag in transcript.diagnostics:
            log.warning("%s:%d: %s", entry.corpus_id, diag.line_no, diag.message)
        utterances = extract_child_utterances(
            transcript,
            speaker=config.speaker,
            punctuation=config.punctuation,
            context_window=config.context_window,
        )

    doc: AnnotatedDocument
    if entry.annotation is not None and entry.annotation.exists():
        try:
            doc = read_dga_xml(entry.annotation.read_bytes())
        except (DgaParseError, DocumentValidationError) as e:
            return None, CorpusFailure(entry.corpus_id, "annotation", str(e))
    else:
        doc = skeleton_document(entry.corpus_id, utterances)
        if out_dir is not None:
            (out_dir / f"{entry.corpus_id}.dga.xml").write_bytes(write_dga_xml(doc))

    graph = build_graph([doc])
    report = compute_report(
        entry.corpus_id,
        graph,
        [doc],
        smallworld_tol=config.smallworld_tol,
        poisson_n=config.poisson_n,
        age=str(entry.age) if entry.age is not None else None,
    )
    if out_dir is not None:
        if utterances:
            (out_dir / f"{entry.corpus_id}.utterances.json").write_bytes(
                _json_bytes(utterances_to_dicts(utterances))
            )
            (out_dir / f"{entry.corpus_id}.flags.json").write_bytes(
                _json_bytes(flags_to_dicts(utterances, config, lexicon))
            )
        (out_dir / f"{entry.corpus_id}.edges.txt").write_text(
            edge_list_text(graph), encoding="utf-8"
        )
        (out_dir / f"{entry.corpus_id}.graph.json").write_bytes(_json_bytes(graph_to_dict(graph)))
    return report, None


def run(
    series: CorpusSeries,
    config: PipelineConfig = PipelineConfig(),
    out_dir: Path | None = None,
) -> RunResult:
    """Process every series entry in order; per-corpus failures don't abort."""
    lexicon = config.load_lexicon()
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    result = RunResult()
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(
                pool.map(lambda e: _process_entry(e, config, lexicon, out_dir), series.entries)
            )
    else:
        outcomes = [_process_entry(e, config, lexicon, out_dir) for e in series.entries]
    for report, failure in outcomes:
        if failure is not None:
            result.failures.append(failure)
        if report is not None:
            result.reports.append(report)
    return result


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(reports: Sequence[MetricsReport], fmt: str = "csv") -> bytes:
    """Serialize reports deterministically; CSV columns are fixed.

    Undefined values are empty CSV cells and JSON nulls.
    """
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in reports:
            d = report_to_dict(r)
            writer.writerow([_csv_cell(d[col]) for col in REPORT_COLUMNS])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        return _json_bytes([report_to_dict(r) for r in reports])
    raise ValueError(f"unknown format {fmt!r}")
