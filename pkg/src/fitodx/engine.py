"""Inference engine: runs a diagnosis session over a knowledge base.

Evaluation follows the source text of the knowledge base: rules are tried
in declaration order, a rule's literals are evaluated left to right, and
the first rule whose literals all hold fires. Answers are obtained by
suspending on a pending question; once answered, a question is memoized
and never asked again in the session. A literal mismatch abandons the
current rule and moves to the next one. A ``dispatch`` consequent moves
evaluation into the target module for good: evaluation never returns to
the dispatching module, so running out of rules in the target ends the
session with no match.

The engine is pull-based. ``start`` returns a state suspended on the first
question; callers feed answers through ``submit_answer`` until ``outcome``
is set. ``run_with_answers`` wraps that loop for batch use. All mutation
happens in place; the contract is exclusive access to one state at a time.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

from .dsl import ParseDiagnostic, Severity, validate_kb
from .model import (
    Answer,
    Diagnose,
    Diagnosed,
    KnowledgeBase,
    NoMatch,
    Outcome,
    QuestionId,
)


class InvalidKb(ValueError):
    """The knowledge base has validation errors and cannot be run."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        lines = "; ".join(str(d) for d in diagnostics[:5])
        super().__init__(f"knowledge base failed validation: {lines}")


class NotPending(ValueError):
    """An answer was submitted for a question the session is not awaiting."""

    def __init__(self, question: QuestionId, pending: Optional[QuestionId]):
        self.question = question
        self.pending = pending
        awaited = pending.global_key() if pending else "nothing"
        super().__init__(
            f"answer for {question.global_key()} but the session awaits {awaited}"
        )


class SessionFinished(ValueError):
    """An answer was submitted after the session reached an outcome."""


class SessionUnfinished(ValueError):
    """An explanation was requested before the session reached an outcome."""


class MissingAnswer(KeyError):
    """Batch evaluation needed a question the answer map does not cover."""

    def __init__(self, question: QuestionId):
        self.question = question
        super().__init__(question.global_key())

    def __str__(self) -> str:
        return f"no answer provided for question {self.question.global_key()}"


# ---------------------------------------------------------------------------
# Trace events

@dataclass(frozen=True)
class Asked:
    """A question was put to the user and answered."""

    question: QuestionId
    prompt: str
    answer: Answer


@dataclass(frozen=True)
class RuleFailed:
    """A rule was abandoned because a literal did not hold."""

    module: str
    rule: str
    failed_at: QuestionId


@dataclass(frozen=True)
class RuleFired:
    """Every literal of the rule held."""

    module: str
    rule: str


@dataclass(frozen=True)
class Dispatched:
    """Evaluation moved into another module."""

    from_module: str
    to_module: str


@dataclass(frozen=True)
class Finished:
    """The session reached its outcome. Always the last event."""

    outcome: Outcome


TraceEvent = Union[Asked, RuleFailed, RuleFired, Dispatched, Finished]


@dataclass(frozen=True)
class Cursor:
    """Evaluation position: which literal of which rule of which module."""

    module: str
    rule_index: int
    literal_index: int


@dataclass
class EngineState:
    """A running (or finished) diagnosis session.

    Not a value type: ``submit_answer`` mutates it in place under the
    caller's exclusive access. The knowledge base itself is immutable and
    freely shared between sessions.
    """

    kb: KnowledgeBase
    memo: dict[str, Answer] = field(default_factory=dict)
    trace: list[TraceEvent] = field(default_factory=list)
    cursor: Cursor = Cursor("", 0, 0)
    pending: Optional[QuestionId] = None
    outcome: Optional[Outcome] = None

    @property
    def finished(self) -> bool:
        return self.outcome is not None


# Knowledge bases are immutable, so a structural check holds for the object's
# lifetime; sessions are created far more often than bases are loaded. Track
# already-checked objects by id, evicted via weakref when the base is freed.
_checked_kb_ids: set[int] = set()


def _ensure_valid(kb: KnowledgeBase) -> None:
    if id(kb) in _checked_kb_ids:
        return
    errors = [d for d in validate_kb(kb) if d.severity is Severity.ERROR]
    if errors:
        raise InvalidKb(errors)
    _checked_kb_ids.add(id(kb))
    weakref.finalize(kb, _checked_kb_ids.discard, id(kb))


def start(kb: KnowledgeBase) -> EngineState:
    """Begin a session at the entry module's first rule.

    Raises InvalidKb when validation reports any error; warnings (such as
    an unreachable module) do not block execution.
    """
    _ensure_valid(kb)
    state = EngineState(kb=kb, cursor=Cursor(kb.entry, 0, 0))
    _advance(state)
    return state


def submit_answer(state: EngineState, q: QuestionId, a: Answer) -> EngineState:
    """Record the answer to the pending question and resume evaluation.

    Returns the same state object after mutating it to either the next
    pending question or a final outcome.
    """
    if state.outcome is not None:
        raise SessionFinished(f"session already finished in {state.cursor.module}")
    if state.pending != q:
        raise NotPending(q, state.pending)
    key = q.global_key()
    assert key not in state.memo, f"question {key} answered twice"
    state.memo[key] = a
    state.trace.append(Asked(q, state.kb.question(q).text, a))
    state.pending = None
    _advance(state)
    return state


def _advance(state: EngineState) -> None:
    """Evaluate until the next unanswered question or a final outcome."""
    kb = state.kb
    while True:
        cur = state.cursor
        module = kb.module(cur.module)
        if cur.rule_index >= len(module.rules):
            state.outcome = NoMatch(module.name)
            state.trace.append(Finished(state.outcome))
            return
        rule = module.rules[cur.rule_index]
        if cur.literal_index >= len(rule.literals):
            state.trace.append(RuleFired(module.name, rule.id))
            consequent = rule.consequent
            if isinstance(consequent, Diagnose):
                state.outcome = Diagnosed(module.name, rule.id, consequent.diagnosis)
                state.trace.append(Finished(state.outcome))
                return
            state.trace.append(Dispatched(module.name, consequent.target))
            state.cursor = Cursor(consequent.target, 0, 0)
            continue
        literal = rule.literals[cur.literal_index]
        known = state.memo.get(literal.question.global_key())
        if known is None:
            state.pending = literal.question
            return
        if known is literal.expected:
            state.cursor = Cursor(cur.module, cur.rule_index, cur.literal_index + 1)
        else:
            state.trace.append(RuleFailed(module.name, rule.id, literal.question))
            state.cursor = Cursor(cur.module, cur.rule_index + 1, 0)


def run_with_answers(
    kb: KnowledgeBase, answers: Mapping[QuestionId, Answer]
) -> tuple[Outcome, list[TraceEvent]]:
    """Run a whole session from a preset answer map.

    The outcome and trace are identical to the interactive path fed the
    same answers one at a time. Raises MissingAnswer if the engine needs a
    question the map does not cover.
    """
    state = start(kb)
    while state.pending is not None:
        q = state.pending
        if q not in answers:
            raise MissingAnswer(q)
        submit_answer(state, q, answers[q])
    assert state.outcome is not None
    return state.outcome, state.trace


def asked_questions(state: EngineState) -> list[QuestionId]:
    """Questions asked so far, in first-ask order (each appears once)."""
    return [e.question for e in state.trace if isinstance(e, Asked)]


def _asked_events(state: EngineState) -> Iterator[Asked]:
    for e in state.trace:
        if isinstance(e, Asked):
            yield e


# ---------------------------------------------------------------------------
# Explanation

@dataclass(frozen=True)
class SupportPair:
    """One (question, answer) of the fired rule, in the rule's ask order."""

    question: QuestionId
    prompt: str
    answer: Answer


@dataclass(frozen=True)
class FailedRule:
    """A rule tried before the outcome, with the question that sank it."""

    module: str
    rule: str
    failed_at: QuestionId


@dataclass(frozen=True)
class Explanation:
    """Why the session ended the way it did."""

    outcome: Outcome
    fired_module: Optional[str]
    fired_rule: Optional[str]
    supporting: tuple[SupportPair, ...]
    failed_rules: tuple[FailedRule, ...]


def explain(state: EngineState) -> Explanation:
    """Build the explanation report for a finished session.

    For a diagnosis, ``supporting`` holds the fired rule's literals with
    the answers that satisfied them; ``failed_rules`` lists every abandoned
    rule across all modules in trial order. Raises SessionUnfinished while
    the session still has a pending question.
    """
    if state.outcome is None:
        raise SessionUnfinished("session has no outcome yet")
    failed = tuple(
        FailedRule(e.module, e.rule, e.failed_at)
        for e in state.trace
        if isinstance(e, RuleFailed)
    )
    if isinstance(state.outcome, NoMatch):
        return Explanation(state.outcome, None, None, (), failed)
    fired_module = state.outcome.module
    fired_rule_id = state.outcome.rule
    rule = next(
        r for r in state.kb.module(fired_module).rules if r.id == fired_rule_id
    )
    supporting = tuple(
        SupportPair(
            lit.question,
            state.kb.question(lit.question).text,
            state.memo[lit.question.global_key()],
        )
        for lit in rule.literals
    )
    return Explanation(state.outcome, fired_module, fired_rule_id, supporting, failed)
