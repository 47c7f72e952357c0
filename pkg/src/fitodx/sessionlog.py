"""Durable session logging: JSON serialization of trace events and an
append-only JSONL log that can be replayed to reconstruct outcomes.

One log line per engine transition: ``{"ts": ..., "session_id": ...,
"event": {...}}``. The ``Asked`` events alone determine a session fully
(the engine is deterministic in the answers), so replay feeds them back
through a fresh engine and checks that the recorded outcome matches what
the log claims happened.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional, Union

from .engine import (
    Asked,
    Dispatched,
    Finished,
    RuleFailed,
    RuleFired,
    TraceEvent,
    start,
    submit_answer,
)
from .model import (
    Answer,
    Diagnosed,
    Diagnosis,
    KnowledgeBase,
    NoMatch,
    Outcome,
    QuestionId,
)


def outcome_to_json(outcome: Outcome) -> dict:
    if isinstance(outcome, Diagnosed):
        return {
            "status": "diagnosed",
            "module": outcome.module,
            "rule": outcome.rule,
            "diagnosis": {
                "name": outcome.diagnosis.name,
                "info": outcome.diagnosis.info,
                "treatment": outcome.diagnosis.treatment,
                "images": list(outcome.diagnosis.images),
            },
        }
    return {"status": "no_match", "module": outcome.last_module}


def outcome_from_json(data: dict) -> Outcome:
    if data["status"] == "diagnosed":
        d = data["diagnosis"]
        return Diagnosed(
            data["module"],
            data["rule"],
            Diagnosis(d["name"], d["info"], d["treatment"], tuple(d["images"])),
        )
    return NoMatch(data["module"])


def event_to_json(event: TraceEvent) -> dict:
    if isinstance(event, Asked):
        return {
            "type": "asked",
            "question": event.question.global_key(),
            "prompt": event.prompt,
            "answer": event.answer.token,
        }
    if isinstance(event, RuleFailed):
        return {
            "type": "rule_failed",
            "module": event.module,
            "rule": event.rule,
            "failed_at": event.failed_at.global_key(),
        }
    if isinstance(event, RuleFired):
        return {"type": "rule_fired", "module": event.module, "rule": event.rule}
    if isinstance(event, Dispatched):
        return {
            "type": "dispatched",
            "from": event.from_module,
            "to": event.to_module,
        }
    if isinstance(event, Finished):
        return {"type": "finished", "outcome": outcome_to_json(event.outcome)}
    raise TypeError(f"not a trace event: {event!r}")


def event_from_json(data: dict) -> TraceEvent:
    kind = data["type"]
    if kind == "asked":
        return Asked(
            QuestionId.from_key(data["question"]),
            data["prompt"],
            Answer(data["answer"]),
        )
    if kind == "rule_failed":
        return RuleFailed(
            data["module"], data["rule"], QuestionId.from_key(data["failed_at"])
        )
    if kind == "rule_fired":
        return RuleFired(data["module"], data["rule"])
    if kind == "dispatched":
        return Dispatched(data["from"], data["to"])
    if kind == "finished":
        return Finished(outcome_from_json(data["outcome"]))
    raise ValueError(f"unknown trace event type: {kind!r}")


def serialize_trace(trace: list[TraceEvent]) -> str:
    """Canonical one-line-per-event text form of a trace.

    Deterministic byte for byte: fixed key order, no ASCII escaping of
    non-ASCII prompt text, compact separators, LF separators.
    """
    return "\n".join(
        json.dumps(event_to_json(e), ensure_ascii=False, separators=(",", ":"))
        for e in trace
    )


class SessionLog:
    """Append-only JSONL log of session transitions.

    One ``append`` call writes exactly one line and flushes it, under a
    lock, so concurrent sessions interleave whole lines. The file is the
    durable source of truth; the in-memory session table is a cache.
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")
        self._lock = threading.Lock()

    def append(self, session_id: str, event: TraceEvent) -> None:
        line = json.dumps(
            {
                "ts": datetime.now(timezone.utc).isoformat(),
                "session_id": session_id,
                "event": event_to_json(event),
            },
            ensure_ascii=False,
            separators=(",", ":"),
        )
        with self._lock:
            self._fh.write(line + "\n")
            self._fh.flush()

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def __enter__(self) -> "SessionLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


@dataclass
class ReplayedSession:
    """Result of re-running one logged session."""

    session_id: str
    outcome: Optional[Outcome]
    logged_outcome: Optional[Outcome]
    answers: dict[QuestionId, Answer]

    @property
    def consistent(self) -> bool:
        """True when replay reproduces exactly what the log recorded."""
        return self.outcome == self.logged_outcome


def _read_lines(path: Union[str, Path]) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            raw = raw.strip()
            if not raw:
                continue
            try:
                yield json.loads(raw)
            except json.JSONDecodeError:
                # A torn final line after a crash is expected; any complete
                # prior line is still replayable.
                continue


def replay_log(path: Union[str, Path], kb: KnowledgeBase) -> dict[str, ReplayedSession]:
    """Reconstruct every logged session by re-running its answers.

    Returns per-session replay results keyed by session id. Sessions whose
    log ends mid-questionnaire come back with ``outcome`` from the partial
    re-run (None unless the partial answers already decide it) and no
    logged outcome.
    """
    asked: dict[str, list[Asked]] = {}
    logged_outcome: dict[str, Outcome] = {}
    order: list[str] = []
    for record in _read_lines(path):
        sid = record["session_id"]
        if sid not in asked:
            asked[sid] = []
            order.append(sid)
        event = event_from_json(record["event"])
        if isinstance(event, Asked):
            asked[sid].append(event)
        elif isinstance(event, Finished):
            logged_outcome[sid] = event.outcome

    out: dict[str, ReplayedSession] = {}
    for sid in order:
        answers = {e.question: e.answer for e in asked[sid]}
        state = start(kb)
        for e in asked[sid]:
            if state.pending != e.question:
                break  # log disagrees with the KB; stop feeding answers
            submit_answer(state, e.question, e.answer)
        out[sid] = ReplayedSession(
            session_id=sid,
            outcome=state.outcome,
            logged_outcome=logged_outcome.get(sid),
            answers=answers,
        )
    return out
