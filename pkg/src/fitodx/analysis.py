"""Static analysis over knowledge bases: reference classifier, exhaustive
decision matrices, and lint findings for rule-base defects.

``classify`` is the ground truth the engine is tested against: a direct,
memoless reading of first-match semantics over a total assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional

from .model import (
    Answer,
    Diagnose,
    Diagnosed,
    Dispatch,
    KnowledgeBase,
    NoMatch,
    Outcome,
    QuestionId,
    Rule,
    RuleModule,
)

DEFAULT_CAP = 2 ** 16


class IncompleteAssignment(KeyError):
    """The assignment does not cover a question a rule references."""

    def __init__(self, question: str):
        self.question = question
        super().__init__(question)

    def __str__(self) -> str:
        return f"assignment does not cover question {self.question!r}"


class TooLarge(ValueError):
    """The module references too many questions to enumerate."""

    def __init__(self, n_questions: int, cap: int):
        self.n_questions = n_questions
        self.cap = cap
        super().__init__(
            f"2^{n_questions} assignments exceed the enumeration cap of {cap}"
        )


def classify(module: RuleModule, assignment: Mapping[str, Answer]) -> Optional[Rule]:
    """First-match classification of a total assignment, keyed by local id.

    Scans rules in declaration order and returns the first whose literals
    all hold, or None when no rule matches. Pure: no asking, no memo.
    Raises IncompleteAssignment if a referenced question has no value.
    """
    for local in module.referenced_locals:
        if local not in assignment:
            raise IncompleteAssignment(local)
    for rule in module.rules:
        if all(assignment[lit.question.local] is lit.expected for lit in rule.literals):
            return rule
    return None


def classify_kb(kb: KnowledgeBase, assignment: Mapping[QuestionId, Answer]) -> Outcome:
    """Compose ``classify`` along the dispatch path, starting at the entry.

    Takes the same whole-KB answer map as the engine's batch driver, so the
    two can be compared directly on any total assignment.
    """
    current = kb.entry
    while True:
        module = kb.module(current)
        local_view = {
            q.local: a for q, a in assignment.items() if q.module == current
        }
        rule = classify(module, local_view)
        if rule is None:
            return NoMatch(current)
        if isinstance(rule.consequent, Diagnose):
            return Diagnosed(current, rule.id, rule.consequent.diagnosis)
        current = rule.consequent.target


def enumerate_matrix(
    module: RuleModule, cap: int = DEFAULT_CAP
) -> list[tuple[dict[str, Answer], Optional[Rule]]]:
    """Every total assignment over the module's referenced questions, with
    its classification.

    Rows are in lexicographic order of the question declaration order with
    No < Si, so the output is byte-stable across runs. Raises TooLarge when
    2^n exceeds ``cap``.
    """
    locals_ = module.referenced_locals
    n = len(locals_)
    if 2 ** n > cap:
        raise TooLarge(n, cap)
    rows: list[tuple[dict[str, Answer], Optional[Rule]]] = []
    for bits in range(2 ** n):
        assignment = {
            local: (Answer.SI if (bits >> (n - 1 - i)) & 1 else Answer.NO)
            for i, local in enumerate(locals_)
        }
        rows.append((assignment, classify(module, assignment)))
    return rows


def matrix_csv(module: RuleModule, cap: int = DEFAULT_CAP) -> str:
    """The decision matrix as CSV: question columns plus a ``result``
    column holding the fired rule id or ``NO_MATCH``. LF line endings.
    """
    locals_ = module.referenced_locals
    lines = [",".join((*locals_, "result"))]
    for assignment, rule in enumerate_matrix(module, cap):
        cells = [assignment[local].token for local in locals_]
        cells.append(rule.id if rule is not None else "NO_MATCH")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Lint

class LintCode(Enum):
    SHADOWED_RULE = "SHADOWED_RULE"
    UNSATISFIABLE_RULE = "UNSATISFIABLE_RULE"
    DUPLICATE_DIAGNOSIS_NAME = "DUPLICATE_DIAGNOSIS_NAME"
    UNUSED_QUESTION = "UNUSED_QUESTION"
    AMBIGUOUS_PAIR = "AMBIGUOUS_PAIR"


class LintSeverity(Enum):
    ERROR = "error"
    WARNING = "warning"


_SEVERITY = {
    LintCode.SHADOWED_RULE: LintSeverity.ERROR,
    LintCode.UNSATISFIABLE_RULE: LintSeverity.ERROR,
    LintCode.DUPLICATE_DIAGNOSIS_NAME: LintSeverity.ERROR,
    LintCode.UNUSED_QUESTION: LintSeverity.WARNING,
    LintCode.AMBIGUOUS_PAIR: LintSeverity.WARNING,
}


@dataclass(frozen=True)
class LintFinding:
    code: LintCode
    module: str
    subjects: tuple[str, ...]
    message: str
    proof: Optional[tuple[tuple[str, Answer], ...]] = None

    @property
    def severity(self) -> LintSeverity:
        return _SEVERITY[self.code]

    def proof_assignment(self) -> Optional[dict[str, Answer]]:
        """The witness assignment as a dict, when the finding carries one."""
        return dict(self.proof) if self.proof is not None else None


def _literal_pairs(rule: Rule) -> set[tuple[str, Answer]]:
    return {(lit.question.local, lit.expected) for lit in rule.literals}


def _consistent(pairs: set[tuple[str, Answer]]) -> bool:
    return len({local for local, _ in pairs}) == len(pairs)


def _witness(pairs: set[tuple[str, Answer]], order: tuple[str, ...]) -> tuple[tuple[str, Answer], ...]:
    value = dict(pairs)
    return tuple((local, value[local]) for local in order if local in value)


def lint(kb: KnowledgeBase) -> list[LintFinding]:
    """Rule-base defect report for a structurally valid knowledge base.

    Errors: a rule that can never fire because its literals contradict
    each other (UNSATISFIABLE_RULE, rejected earlier by validation but
    re-checked here), a rule unreachable because an earlier rule's literal
    set is a subset of its own (SHADOWED_RULE, exact for conjunctions of
    boolean literals), and two rules in one module naming the same
    diagnosis (DUPLICATE_DIAGNOSIS_NAME). Warnings: a declared question no
    rule references (UNUSED_QUESTION) and two rules over disjoint question
    sets that can both be satisfied at once, silently resolved by rule
    order (AMBIGUOUS_PAIR). SHADOWED_RULE and AMBIGUOUS_PAIR findings carry
    a witness assignment.
    """
    findings: list[LintFinding] = []
    for module in kb.modules:
        order = module.referenced_locals
        pairs_by_rule = [_literal_pairs(r) for r in module.rules]
        consistent = [_consistent(p) for p in pairs_by_rule]

        for rule, ok in zip(module.rules, consistent):
            if not ok:
                findings.append(LintFinding(
                    LintCode.UNSATISFIABLE_RULE, module.name, (rule.id,),
                    f"rule '{rule.id}' requires contradictory answers and can never fire",
                ))

        shadowed: list[LintFinding] = []
        for j, later in enumerate(module.rules):
            if not consistent[j]:
                continue
            for i in range(j):
                if consistent[i] and pairs_by_rule[i] <= pairs_by_rule[j]:
                    witness = _witness(pairs_by_rule[j], order)
                    _confirm_shadowed(module, later)
                    shadowed.append(LintFinding(
                        LintCode.SHADOWED_RULE, module.name, (later.id, module.rules[i].id),
                        f"rule '{later.id}' can never fire: every assignment satisfying it "
                        f"already satisfies the earlier rule '{module.rules[i].id}'",
                        proof=witness,
                    ))
                    break
        findings.extend(shadowed)

        by_name: dict[str, list[str]] = {}
        for rule in module.rules:
            if isinstance(rule.consequent, Diagnose):
                by_name.setdefault(rule.consequent.diagnosis.name, []).append(rule.id)
        for name, rule_ids in by_name.items():
            if len(rule_ids) > 1:
                findings.append(LintFinding(
                    LintCode.DUPLICATE_DIAGNOSIS_NAME, module.name, tuple(rule_ids),
                    f"rules {', '.join(repr(r) for r in rule_ids)} all diagnose {name!r}",
                ))

        referenced = set(order)
        for question in module.questions:
            if question.id.local not in referenced:
                findings.append(LintFinding(
                    LintCode.UNUSED_QUESTION, module.name, (question.id.local,),
                    f"question '{question.id.local}' is declared but no rule uses it",
                ))

        for j in range(len(module.rules)):
            if not consistent[j]:
                continue
            for i in range(j):
                if not consistent[i]:
                    continue
                qs_i = {local for local, _ in pairs_by_rule[i]}
                qs_j = {local for local, _ in pairs_by_rule[j]}
                if qs_i and qs_j and not (qs_i & qs_j):
                    merged = pairs_by_rule[i] | pairs_by_rule[j]
                    findings.append(LintFinding(
                        LintCode.AMBIGUOUS_PAIR, module.name,
                        (module.rules[i].id, module.rules[j].id),
                        f"rules '{module.rules[i].id}' and '{module.rules[j].id}' test "
                        f"disjoint questions and can both be satisfied at once; rule "
                        f"order alone decides between them",
                        proof=_witness(merged, order),
                    ))
    return findings


def _confirm_shadowed(module: RuleModule, rule: Rule) -> None:
    """Belt-and-braces check: a rule flagged as shadowed never classifies.

    The subset criterion is exact for conjunctions over yes/no questions,
    so a disagreement here is an implementation bug, not a KB problem.
    """
    if 2 ** len(module.referenced_locals) > DEFAULT_CAP:
        return
    for _, fired in enumerate_matrix(module):
        assert fired is not rule, (
            f"subset shadowing criterion disagreed with enumeration on rule {rule.id}"
        )
