"""Command-line interface.

Verbs:
    extract   transcripts -> utterance JSON, advisory flags, skeleton XML
    analyze   annotations/series -> graphs + metric reports
    report    stored report JSON -> CSV or JSON
    serve     start the annotation service over a workspace directory

Exit codes: 0 full success, 1 partial failure, 2 fatal configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .annotations import skeleton_document, write_dga_xml
from .chat import extract_child_utterances, parse_chat
from .metrics import report_from_dict
from .pipeline import (
    ConfigError,
    CorpusEntry,
    CorpusSeries,
    PipelineConfig,
    emit,
    flags_to_dicts,
    run,
    utterances_to_dicts,
)

log = logging.getLogger(__name__)


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="key=value config file")
    parser.add_argument("--speaker", default=None, help="main tier code (default *CHI:)")
    parser.add_argument("--punctuation", default=None, help="characters stripped from utterances")
    parser.add_argument("--lexicon", type=Path, default=None, help="non-accepted lexicon file")
    parser.add_argument(
        "--poisson-n",
        choices=("gcc", "all"),
        default=None,
        help="node count for the random-graph baseline",
    )
    parser.add_argument("--smallworld-tol", type=float, default=None)
    parser.add_argument("--imitation-window", type=int, default=None)


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    overrides = {}
    for attr, key in (
        ("speaker", "speaker"),
        ("punctuation", "punctuation"),
        ("lexicon", "lexicon"),
        ("poisson_n", "poisson_n"),
        ("smallworld_tol", "smallworld_tol"),
        ("imitation_window", "imitation_window"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def cmd_extract(args: argparse.Namespace) -> int:
    config = _build_config(args)
    lexicon = config.load_lexicon()
    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for path in args.transcripts:
        corpus_id = path.stem
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            log.error("%s: %s", path, e)
            failures += 1
            continue
        transcript = parse_chat(text, corpus_id=corpus_id)
        for diag in transcript.diagnostics:
            log.warning("%s:%d: %s", path, diag.line_no, diag.message)
        utterances = extract_child_utterances(
            transcript, speaker=config.speaker, punctuation=config.punctuation
        )
        (out_dir / f"{corpus_id}.utterances.json").write_text(
            json.dumps(utterances_to_dicts(utterances), indent=2, ensure_ascii=False),
            encoding="utf-8",
        )
        (out_dir / f"{corpus_id}.flags.json").write_text(
            json.dumps(flags_to_dicts(utterances, config, lexicon), indent=2, ensure_ascii=False),
            encoding="utf-8",
        )
        (out_dir / f"{corpus_id}.dga.xml").write_bytes(
            write_dga_xml(skeleton_document(corpus_id, utterances))
        )
        print(f"{corpus_id}: {len(utterances)} utterances -> {out_dir}")
    return 1 if failures else 0


def cmd_analyze(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if args.series is not None:
        series = CorpusSeries.from_tsv(args.series)
    elif args.annotations:
        series = CorpusSeries(
            entries=tuple(
                CorpusEntry(corpus_id=path.stem.removesuffix(".dga"), annotation=path)
                for path in args.annotations
            )
        )
    else:
        raise ConfigError("analyze needs --series or annotation XML files")
    out_dir: Path = args.out
    result = run(series, config, out_dir=out_dir)
    (out_dir / "reports.json").write_bytes(emit(result.reports, "json"))
    (out_dir / "reports.csv").write_bytes(emit(result.reports, "csv"))
    for failure in result.failures:
        log.error("%s (%s): %s", failure.corpus_id, failure.stage, failure.message)
    for report in result.reports:
        print(
            f"{report.corpus_id}: N_w={report.n_words} gcc={report.gcc_size} "
            f"S_avg={report.avg_structure_size}"
        )
    print(f"reports written to {out_dir}")
    return 0 if result.ok else 1


def cmd_report(args: argparse.Namespace) -> int:
    payload = json.loads(args.reports.read_text(encoding="utf-8"))
    reports = [report_from_dict(d) for d in payload]
    data = emit(reports, args.format)
    if args.output is not None:
        args.output.write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _build_config(args)
    app = create_app(
        args.workspace,
        ui_dir=args.ui,
        lexicon=config.load_lexicon(),
        smallworld_tol=config.smallworld_tol,
        poisson_n=config.poisson_n,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="syngraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="extract utterances from CHAT transcripts")
    p_extract.add_argument("transcripts", nargs="+", type=Path)
    p_extract.add_argument("-o", "--out", type=Path, default=Path("out"))
    _add_config_options(p_extract)
    p_extract.set_defaults(func=cmd_extract)

    p_analyze = sub.add_parser("analyze", help="build graphs and metrics from annotations")
    p_analyze.add_argument("annotations", nargs="*", type=Path)
    p_analyze.add_argument("--series", type=Path, default=None, help="series manifest (TSV)")
    p_analyze.add_argument("-o", "--out", type=Path, default=Path("out"))
    _add_config_options(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_report = sub.add_parser("report", help="format stored reports")
    p_report.add_argument("reports", type=Path, help="reports.json produced by analyze")
    p_report.add_argument("--format", choices=("csv", "json"), default="csv")
    p_report.add_argument("-o", "--output", type=Path, default=None)
    p_report.set_defaults(func=cmd_report)

    p_serve = sub.add_parser("serve", help="start the annotation service")
    p_serve.add_argument("workspace", type=Path)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui", type=Path, default=None, help="static UI directory")
    _add_config_options(p_serve)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        log.error("configuration error: %s", e)
        return 2
    except OSError as e:
        log.error("%s", e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
