"""Rule-based expert-system shell for crop pest and disease diagnosis.

The package splits into a generic shell (data model, text format,
inference engine, static analysis, HTTP service, CLI) and a reference
knowledge base under ``kb/`` covering seven crops.
"""

from .analysis import (
    IncompleteAssignment,
    LintCode,
    LintFinding,
    LintSeverity,
    TooLarge,
    classify,
    classify_kb,
    enumerate_matrix,
    lint,
    matrix_csv,
)
from .dsl import (
    NO_SPAN,
    ParseDiagnostic,
    ParseResult,
    Severity,
    SourceSpan,
    load_kb_file,
    parse_kb,
    serialize_kb,
    validate_kb,
)
from .engine import (
    Asked,
    Cursor,
    Dispatched,
    EngineState,
    Explanation,
    FailedRule,
    Finished,
    InvalidKb,
    MissingAnswer,
    NotPending,
    RuleFailed,
    RuleFired,
    SessionFinished,
    SessionUnfinished,
    SupportPair,
    TraceEvent,
    asked_questions,
    explain,
    run_with_answers,
    start,
    submit_answer,
)
from .sessionlog import (
    ReplayedSession,
    SessionLog,
    event_from_json,
    event_to_json,
    outcome_from_json,
    outcome_to_json,
    replay_log,
    serialize_trace,
)
from .model import (
    Answer,
    Consequent,
    Diagnose,
    Diagnosed,
    Diagnosis,
    Dispatch,
    KnowledgeBase,
    Literal,
    NoMatch,
    Outcome,
    Question,
    QuestionId,
    Rule,
    RuleModule,
    UnknownAnswerToken,
    answer_from_token,
    global_key,
    is_identifier,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "Asked",
    "Consequent",
    "Cursor",
    "Diagnose",
    "Diagnosed",
    "Diagnosis",
    "Dispatch",
    "Dispatched",
    "EngineState",
    "Explanation",
    "FailedRule",
    "Finished",
    "IncompleteAssignment",
    "InvalidKb",
    "KnowledgeBase",
    "LintCode",
    "LintFinding",
    "LintSeverity",
    "Literal",
    "MissingAnswer",
    "NO_SPAN",
    "NoMatch",
    "NotPending",
    "Outcome",
    "ParseDiagnostic",
    "ParseResult",
    "Question",
    "QuestionId",
    "ReplayedSession",
    "Rule",
    "RuleFailed",
    "RuleFired",
    "RuleModule",
    "SessionFinished",
    "SessionLog",
    "SessionUnfinished",
    "Severity",
    "SourceSpan",
    "SupportPair",
    "TooLarge",
    "TraceEvent",
    "UnknownAnswerToken",
    "answer_from_token",
    "asked_questions",
    "classify",
    "classify_kb",
    "enumerate_matrix",
    "event_from_json",
    "event_to_json",
    "explain",
    "global_key",
    "is_identifier",
    "lint",
    "load_kb_file",
    "matrix_csv",
    "outcome_from_json",
    "outcome_to_json",
    "parse_kb",
    "replay_log",
    "run_with_answers",
    "serialize_kb",
    "serialize_trace",
    "start",
    "submit_answer",
    "validate_kb",
]
