import random

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from fitodx import (
    Answer,
    Asked,
    Diagnose,
    Diagnosed,
    Diagnosis,
    Dispatch,
    Dispatched,
    Finished,
    InvalidKb,
    KnowledgeBase,
    Literal,
    MissingAnswer,
    NoMatch,
    NotPending,
    Question,
    QuestionId,
    Rule,
    RuleFailed,
    RuleFired,
    RuleModule,
    SessionFinished,
    SessionUnfinished,
    asked_questions,
    explain,
    parse_kb,
    run_with_answers,
    serialize_kb,
    start,
    submit_answer,
)
from helpers import (
    CROP_LOCALS,
    TOBACCO_ASK_ORDER,
    pythium_session_answers,
    random_kb,
    random_total_assignment,
)


def drive(kb, answers):
    """Feed answers to a session one pending question at a time."""
    state = start(kb)
    while not state.finished:
        qid = state.pending
        submit_answer(state, qid, answers[qid])
    return state


def _toy_kb():
    qids = [QuestionId("m", f"q{i}") for i in (1, 2)]
    return KnowledgeBase(
        "t", 1, "m",
        (RuleModule(
            "m",
            tuple(Question(q, f"{q.local}?") for q in qids),
            (
                Rule("r1", (Literal(qids[0], Answer.SI), Literal(qids[1], Answer.SI)),
                     Diagnose(Diagnosis("A"))),
                Rule("r2", (Literal(qids[0], Answer.SI), Literal(qids[1], Answer.NO)),
                     Diagnose(Diagnosis("B"))),
            ),
        ),),
    )


def test_crop_menu_asked_in_declaration_order(reference_kb):
    state = start(reference_kb)
    order = []
    while not state.finished and state.pending.module == "principal":
        order.append(state.pending.local)
        submit_answer(state, state.pending, Answer.SI if state.pending.local == "es_tabaco" else Answer.NO)
    assert order == CROP_LOCALS
    assert state.pending == QuestionId("tabaco", "p1")
    assert Dispatched("principal", "tabaco") in state.trace


def test_tobacco_session_full_ask_order(reference_kb):
    answers = pythium_session_answers()
    state = drive(reference_kb, answers)
    asked = [q.global_key() for q in asked_questions(state)]
    assert asked == [f"principal.{l}" for l in CROP_LOCALS] + [
        f"tabaco.{p}" for p in TOBACCO_ASK_ORDER
    ]
    assert len(asked) == 19
    assert isinstance(state.outcome, Diagnosed)
    assert state.outcome.diagnosis.name == "PYTHIUM APHANIDERMATUM (DAMPING OFF)"
    assert state.outcome.module == "tabaco" and state.outcome.rule == "pythium"
    assert isinstance(state.trace[-1], Finished)


def test_each_question_asked_at_most_once(reference_kb):
    state = drive(reference_kb, pythium_session_answers())
    keys = [q.global_key() for q in asked_questions(state)]
    assert len(keys) == len(set(keys))


def test_first_match_wins():
    kb = _toy_kb()
    outcome, trace = run_with_answers(
        kb, {QuestionId("m", "q1"): Answer.SI, QuestionId("m", "q2"): Answer.SI})
    assert outcome == Diagnosed("m", "r1", Diagnosis("A"))
    assert not any(isinstance(e, RuleFailed) for e in trace)


def test_failed_rule_then_next():
    kb = _toy_kb()
    state = drive(kb, {QuestionId("m", "q1"): Answer.SI, QuestionId("m", "q2"): Answer.NO})
    assert state.outcome == Diagnosed("m", "r2", Diagnosis("B"))
    assert RuleFailed("m", "r1", QuestionId("m", "q2")) in state.trace
    # q2's memoized answer is reused by r2; only two questions ever asked
    assert [q.local for q in asked_questions(state)] == ["q1", "q2"]


def test_no_match_when_rules_exhausted():
    kb = _toy_kb()
    state = drive(kb, {QuestionId("m", "q1"): Answer.NO})
    assert state.outcome == NoMatch("m")
    # q1=no fails both rules at their first literal; q2 never asked
    assert [q.local for q in asked_questions(state)] == ["q1"]
    assert [e for e in state.trace if isinstance(e, RuleFailed)] == [
        RuleFailed("m", "r1", QuestionId("m", "q1")),
        RuleFailed("m", "r2", QuestionId("m", "q1")),
    ]


def test_all_no_reaches_no_match_in_entry(reference_kb):
    answers = {QuestionId("principal", l): Answer.NO for l in CROP_LOCALS}
    outcome, _ = run_with_answers(reference_kb, answers)
    assert outcome == NoMatch("principal")


def test_start_rejects_invalid_kb():
    result = parse_kb('kb "t" version 1 entry m module m { question q "x?" rule r { q = si dispatch m } }')
    assert result.kb is None
    bad = KnowledgeBase(
        "t", 1, "m",
        (RuleModule("m", (Question(QuestionId("m", "q"), "x?"),),
                    (Rule("r", (Literal(QuestionId("m", "q"), Answer.SI),), Dispatch("m")),)),),
    )
    with pytest.raises(InvalidKb) as exc:
        start(bad)
    assert any(d.code == "DISPATCH_CYCLE" for d in exc.value.diagnostics)


def test_start_tolerates_warnings():
    src = (
        'kb "t" version 1 entry m '
        'module m { question q "x?" rule r { q = si diagnose { name: "D" } } } '
        'module solo { question q "y?" rule r { q = si diagnose { name: "E" } } }'
    )
    result = parse_kb(src)
    assert result.ok and result.diagnostics  # carries the warning
    state = start(result.kb)
    assert state.pending == QuestionId("m", "q")


def test_submit_answer_guards():
    kb = _toy_kb()
    state = start(kb)
    with pytest.raises(NotPending):
        submit_answer(state, QuestionId("m", "q2"), Answer.SI)
    submit_answer(state, QuestionId("m", "q1"), Answer.NO)
    assert state.finished
    with pytest.raises(SessionFinished):
        submit_answer(state, QuestionId("m", "q2"), Answer.SI)


def test_run_with_answers_missing_answer():
    kb = _toy_kb()
    with pytest.raises(MissingAnswer) as exc:
        run_with_answers(kb, {QuestionId("m", "q1"): Answer.SI})
    assert exc.value.question == QuestionId("m", "q2")
    assert "m.q2" in str(exc.value)


def test_explain_fired_rule():
    kb = _toy_kb()
    state = drive(kb, {QuestionId("m", "q1"): Answer.SI, QuestionId("m", "q2"): Answer.NO})
    report = explain(state)
    assert (report.fired_module, report.fired_rule) == ("m", "r2")
    assert [(p.question.local, p.answer) for p in report.supporting] == [
        ("q1", Answer.SI), ("q2", Answer.NO)]
    assert [p.prompt for p in report.supporting] == ["q1?", "q2?"]
    assert [(f.module, f.rule, f.failed_at.local) for f in report.failed_rules] == [
        ("m", "r1", "q2")]


def test_explain_supporting_follows_rule_literal_order(reference_kb):
    state = drive(reference_kb, pythium_session_answers())
    report = explain(state)
    assert [p.question.local for p in report.supporting] == TOBACCO_ASK_ORDER
    assert all(p.prompt == reference_kb.question(p.question).text
               for p in report.supporting)
    assert report.outcome == state.outcome


def test_explain_no_match():
    kb = _toy_kb()
    state = drive(kb, {QuestionId("m", "q1"): Answer.NO})
    report = explain(state)
    assert report.fired_module is None and report.fired_rule is None
    assert report.supporting == ()
    assert len(report.failed_rules) == 2


def test_explain_requires_finished():
    state = start(_toy_kb())
    with pytest.raises(SessionUnfinished):
        explain(state)


def test_batch_equals_interactive(reference_kb):
    answers = pythium_session_answers()
    state = drive(reference_kb, answers)
    outcome, trace = run_with_answers(reference_kb, answers)
    assert outcome == state.outcome
    assert trace == state.trace


def test_rule_fired_events_on_dispatch_path(reference_kb):
    state = drive(reference_kb, pythium_session_answers())
    fired = [e for e in state.trace if isinstance(e, RuleFired)]
    assert fired == [RuleFired("principal", "tabaco"), RuleFired("tabaco", "pythium")]


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_kb_batch_interactive_and_serialization_agree(seed):
    rng = random.Random(seed)
    kb = random_kb(rng)
    answers = random_total_assignment(kb, rng)
    outcome, trace = run_with_answers(kb, answers)
    state = drive(kb, answers)
    assert state.outcome == outcome and state.trace == trace
    # a round-tripped KB drives the identical session
    clone = parse_kb(serialize_kb(kb)).kb
    assert run_with_answers(clone, answers) == (outcome, trace)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_sessions_never_repeat_questions(seed):
    rng = random.Random(seed)
    kb = random_kb(rng)
    state = drive(kb, random_total_assignment(kb, rng))
    keys = [q.global_key() for q in asked_questions(state)]
    assert len(keys) == len(set(keys))
    assert isinstance(state.trace[-1], Finished)
    assert isinstance(state.outcome, (Diagnosed, NoMatch))
