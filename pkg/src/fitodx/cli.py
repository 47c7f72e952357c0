"""Command-line interface: diagnose, lint, matrix, serve.

Exit codes are stable so scripts can branch without parsing text:

    0  diagnosed / lint clean / command succeeded
    1  lint reported error-severity findings, or the matrix is too large
    2  input problems: unreadable or invalid KB, bad answers file, bad flags
    3  questionnaire completed with no matching rule
    4  batch answers file is missing a question the engine needed

Parseable output (JSON, CSV) goes to stdout; prompts and diagnostics go
to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import socket
import sys
from typing import Optional

from . import analysis, engine, sessionlog
from .dsl import ParseResult, load_kb_file
from .model import Answer, Diagnosed, KnowledgeBase, QuestionId

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_INPUT = 2
EXIT_NO_MATCH = 3
EXIT_MISSING_ANSWER = 4

_YES_TOKENS = frozenset(["si", "sí", "s"])
_NO_TOKENS = frozenset(["no", "n"])


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _load(kb_path: str) -> tuple[Optional[KnowledgeBase], int]:
    """Parse the KB for a command; on failure print diagnostics, return 2."""
    result: ParseResult = load_kb_file(kb_path)
    for diag in result.diagnostics:
        _err(f"{kb_path}:{diag}")
    if result.kb is None:
        return None, EXIT_INPUT
    return result.kb, EXIT_OK


def _read_answers(kb: KnowledgeBase, path: str) -> dict[QuestionId, Answer]:
    """Strict answers file: every key must name a KB question, every value
    must be canonical 'si' or 'no'."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("answers file must be a JSON object")
    answers: dict[QuestionId, Answer] = {}
    for key, value in raw.items():
        try:
            qid = QuestionId.from_key(key)
            kb.question(qid)
        except (ValueError, KeyError):
            raise ValueError(f"unknown question key: {key!r}")
        if value not in ("si", "no"):
            raise ValueError(f"answer for {key} must be \"si\" or \"no\", got {value!r}")
        answers[qid] = Answer(value)
    return answers


def _print_outcome(outcome, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(sessionlog.outcome_to_json(outcome), ensure_ascii=False))
    elif isinstance(outcome, Diagnosed):
        d = outcome.diagnosis
        print(d.name)
        if d.info:
            print(d.info)
        if d.treatment:
            print(f"Tratamiento: {d.treatment}")
    else:
        print(f"sin diagnóstico (módulo {outcome.last_module})")
    return EXIT_OK if isinstance(outcome, Diagnosed) else EXIT_NO_MATCH


def cmd_diagnose(args: argparse.Namespace) -> int:
    kb, code = _load(args.kb)
    if kb is None:
        return code
    if args.answers is None:
        return _interactive(kb, args.format)
    try:
        answers = _read_answers(kb, args.answers)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        _err(f"cannot use answers file {args.answers}: {exc}")
        return EXIT_INPUT
    try:
        outcome, _ = engine.run_with_answers(kb, answers)
    except engine.MissingAnswer as exc:
        _err(str(exc))
        return EXIT_MISSING_ANSWER
    return _print_outcome(outcome, args.format)


def _ask_interactive(prompt: str) -> Optional[Answer]:
    """One question on the terminal; None when input runs out."""
    while True:
        print(f"{prompt} [si/no] ", end="", file=sys.stderr, flush=True)
        line = sys.stdin.readline()
        if not line:
            return None
        token = line.strip().casefold()
        if token in _YES_TOKENS:
            return Answer.SI
        if token in _NO_TOKENS:
            return Answer.NO
        _err("respuesta no reconocida; responda si o no")


def _interactive(kb: KnowledgeBase, fmt: str) -> int:
    state = engine.start(kb)
    while state.pending is not None:
        answer = _ask_interactive(kb.question(state.pending).text)
        if answer is None:
            _err("input ended before the questionnaire finished")
            return EXIT_INPUT
        engine.submit_answer(state, state.pending, answer)
    assert state.outcome is not None
    code = _print_outcome(state.outcome, fmt)
    report = engine.explain(state)
    if fmt != "json":
        if report.fired_rule is not None:
            _err(f"-- regla aplicada: {report.fired_module}.{report.fired_rule}")
            for pair in report.supporting:
                _err(f"   {pair.prompt} = {pair.answer.token}")
        for failed in report.failed_rules:
            _err(
                f"-- regla descartada: {failed.module}.{failed.rule} "
                f"(en {failed.failed_at.global_key()})"
            )
    return code


def _finding_json(finding: analysis.LintFinding) -> dict:
    payload: dict = {
        "code": finding.code.value,
        "severity": finding.severity.value,
        "module": finding.module,
        "subjects": list(finding.subjects),
        "message": finding.message,
    }
    if finding.proof is not None:
        payload["proof"] = {local: answer.token for local, answer in finding.proof}
    return payload


def cmd_lint(args: argparse.Namespace) -> int:
    kb, code = _load(args.kb)
    if kb is None:
        return code
    findings = analysis.lint(kb)
    if args.format == "json":
        print(json.dumps([_finding_json(f) for f in findings], ensure_ascii=False, indent=2))
    else:
        for f in findings:
            subjects = ", ".join(f.subjects)
            line = f"{f.severity.value}[{f.code.value}] {f.module}: {subjects}: {f.message}"
            if f.proof is not None:
                witness = " ".join(f"{local}={a.token}" for local, a in f.proof)
                line += f" (witness: {witness})"
            print(line)
    has_errors = any(f.severity is analysis.LintSeverity.ERROR for f in findings)
    return EXIT_FINDINGS if has_errors else EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    kb, code = _load(args.kb)
    if kb is None:
        return code
    module = kb.module_map.get(args.module)
    if module is None:
        _err(f"no module named {args.module!r} in {args.kb}")
        return EXIT_INPUT
    try:
        csv_text = analysis.matrix_csv(module, cap=args.cap)
    except analysis.TooLarge as exc:
        _err(str(exc))
        return EXIT_FINDINGS
    if args.out is None:
        sys.stdout.write(csv_text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import config_from_env, create_app

    try:
        config = config_from_env(os.environ, kb_path=args.kb)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    overrides = {
        "host": args.host,
        "port": args.port,
        "log_path": args.log,
        "image_dir": args.image_dir,
        "ttl_seconds": args.ttl,
    }
    config = dataclasses.replace(
        config, **{k: v for k, v in overrides.items() if v is not None}
    )

    kb, code = _load(config.kb_path)
    if kb is None:
        return code
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((config.host, config.port))
        probe.close()
    except OSError as exc:
        _err(f"cannot bind {config.host}:{config.port}: {exc}")
        return EXIT_INPUT
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fitodx",
        description="Rule-based diagnosis of crop pests and diseases",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagnose", help="run a questionnaire, interactively or from a file")
    p.add_argument("--kb", required=True, help="knowledge base file (.fdx)")
    p.add_argument("--answers", help="JSON file mapping module.question to si/no")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("lint", help="report rule-base defects")
    p.add_argument("--kb", required=True, help="knowledge base file (.fdx)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("matrix", help="export a module's full decision matrix as CSV")
    p.add_argument("--kb", required=True, help="knowledge base file (.fdx)")
    p.add_argument("--module", required=True, help="module to enumerate")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--cap", type=int, default=analysis.DEFAULT_CAP,
                   help="refuse to enumerate more assignments than this")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("serve", help="serve the HTTP session API")
    p.add_argument("--kb", required=True, help="knowledge base file (.fdx)")
    p.add_argument("--host", help="listen address (default 127.0.0.1)")
    p.add_argument("--port", type=int, help="listen port (default 8080)")
    p.add_argument("--log", help="session log path (default sessions.jsonl)")
    p.add_argument("--image-dir", help="directory served under /v1/images")
    p.add_argument("--ttl", type=float, help="idle session eviction, seconds")
    p.set_defaults(func=cmd_serve)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(run())
