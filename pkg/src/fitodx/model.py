"""Immutable data model for diagnosis knowledge bases.

A knowledge base is a set of rule modules. Each module declares yes/no
questions and an ordered list of production rules; a rule is an ordered
conjunction of (question, expected answer) literals whose consequent either
names a diagnosis or dispatches evaluation into another module. Rule order
matters: earlier rules win.

Everything here is frozen after construction and safe to share across
threads. Cross-object invariants (unique names, resolvable references,
acyclic dispatch) are checked by :func:`fitodx.dsl.validate_kb`, not by the
constructors, so partially invalid knowledge bases can be built in memory
and then diagnosed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Union

IDENT_RE = re.compile(r"[a-z_][a-z0-9_]*\Z")


class UnknownAnswerToken(ValueError):
    """Raised when a token is neither an affirmative nor a negative answer."""

    def __init__(self, token: str):
        super().__init__(f"unknown answer token: {token!r} (expected 'si' or 'no')")
        self.token = token


class Answer(Enum):
    """The two possible answers to any question."""

    SI = "si"
    NO = "no"

    @property
    def token(self) -> str:
        return self.value

    def __repr__(self) -> str:  # keeps traces and test output compact
        return f"Answer.{self.name}"


_ASCII_LOWER = str.maketrans(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ", "abcdefghijklmnopqrstuvwxyz"
)


def answer_from_token(token: str) -> Answer:
    """Parse a user-supplied answer token.

    Surrounding whitespace is trimmed and ASCII letters are lowercased before
    matching. The accented form "sí" is accepted as an affirmative.
    """
    normalized = token.strip().translate(_ASCII_LOWER)
    if normalized in ("si", "sí"):
        return Answer.SI
    if normalized == "no":
        return Answer.NO
    raise UnknownAnswerToken(token)


def is_identifier(name: str) -> bool:
    """True if ``name`` is a legal module/question/rule identifier."""
    return bool(IDENT_RE.match(name))


@dataclass(frozen=True)
class QuestionId:
    """Module-scoped question identity. The global key is ``module.local``."""

    module: str
    local: str

    def __post_init__(self) -> None:
        if not is_identifier(self.module):
            raise ValueError(f"invalid module identifier: {self.module!r}")
        if not is_identifier(self.local):
            raise ValueError(f"invalid question identifier: {self.local!r}")

    def global_key(self) -> str:
        # '.' is not a legal identifier character, so the key is injective.
        return f"{self.module}.{self.local}"

    @classmethod
    def from_key(cls, key: str) -> "QuestionId":
        parts = key.split(".")
        if len(parts) != 2:
            raise ValueError(f"invalid question key: {key!r} (expected 'module.local')")
        return cls(parts[0], parts[1])


def global_key(q: QuestionId) -> str:
    """Canonical global key of a question id."""
    return q.global_key()


@dataclass(frozen=True)
class Question:
    """An askable yes/no prompt."""

    id: QuestionId
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError(f"question {self.id.global_key()} has empty text")


@dataclass(frozen=True)
class Literal:
    """One (ask, compare) step of a rule body."""

    question: QuestionId
    expected: Answer


@dataclass(frozen=True)
class Diagnosis:
    """Payload of a successful diagnosis: headline name plus display data."""

    name: str
    info: str = ""
    treatment: str = ""
    images: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("diagnosis name must be nonempty")


@dataclass(frozen=True)
class Diagnose:
    """Consequent: conclude with a diagnosis."""

    diagnosis: Diagnosis


@dataclass(frozen=True)
class Dispatch:
    """Consequent: continue evaluation in another module."""

    target: str


Consequent = Union[Diagnose, Dispatch]


@dataclass(frozen=True)
class Rule:
    """Ordered conjunction of literals with a consequent.

    Literal order is significant and preserved verbatim: it is the order in
    which the questions will be asked.
    """

    id: str
    literals: tuple[Literal, ...]
    consequent: Consequent

    def __post_init__(self) -> None:
        if not is_identifier(self.id):
            raise ValueError(f"invalid rule identifier: {self.id!r}")
        if not self.literals:
            raise ValueError(f"rule {self.id} has no literals")


@dataclass(frozen=True)
class RuleModule:
    """One named block of questions and rules; earlier rules have priority."""

    name: str
    questions: tuple[Question, ...]
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        if not is_identifier(self.name):
            raise ValueError(f"invalid module identifier: {self.name!r}")

    @cached_property
    def question_map(self) -> dict[str, Question]:
        """Declared questions keyed by local id (first declaration wins)."""
        table: dict[str, Question] = {}
        for q in self.questions:
            table.setdefault(q.id.local, q)
        return table

    @cached_property
    def referenced_locals(self) -> tuple[str, ...]:
        """Local ids referenced by rules, in declaration order then first use."""
        used = {lit.question.local for rule in self.rules for lit in rule.literals}
        ordered = [q.id.local for q in self.questions if q.id.local in used]
        seen = set(ordered)
        for rule in self.rules:
            for lit in rule.literals:
                if lit.question.local not in seen:
                    seen.add(lit.question.local)
                    ordered.append(lit.question.local)
        return tuple(ordered)


@dataclass(frozen=True)
class KnowledgeBase:
    """A titled, versioned collection of modules with a designated entry."""

    title: str
    version: int
    entry: str
    modules: tuple[RuleModule, ...]

    def __post_init__(self) -> None:
        if self.version < 0:
            raise ValueError("knowledge base version must be nonnegative")

    @cached_property
    def module_map(self) -> dict[str, RuleModule]:
        table: dict[str, RuleModule] = {}
        for m in self.modules:
            table.setdefault(m.name, m)
        return table

    def module(self, name: str) -> RuleModule:
        return self.module_map[name]

    def question(self, qid: QuestionId) -> Question:
        """Resolve a question id to its declaration. KeyError if absent."""
        q = self.module_map[qid.module].question_map.get(qid.local)
        if q is None:
            raise KeyError(qid.global_key())
        return q


@dataclass(frozen=True)
class Diagnosed:
    """A rule fired with a diagnosis; carries the exact record it named."""

    module: str
    rule: str
    diagnosis: Diagnosis


@dataclass(frozen=True)
class NoMatch:
    """The last tried module ran out of rules without any of them firing."""

    last_module: str


Outcome = Union[Diagnosed, NoMatch]
