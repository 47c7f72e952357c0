"""Shared test data: the published questionnaire sequences and random
generators for knowledge bases and assignments.
"""

from __future__ import annotations

import random
import string

from fitodx import (
    Answer,
    Diagnose,
    Diagnosis,
    Dispatch,
    KnowledgeBase,
    Literal,
    Question,
    QuestionId,
    Rule,
    RuleModule,
)

CROP_LOCALS = [
    "es_arroz",
    "es_tabaco",
    "es_tomate",
    "es_maiz",
    "es_pimiento",
    "es_pepino",
    "es_frijol",
]

CROP_PROMPTS = {
    "es_arroz": "es cultivo de arroz ?",
    "es_tabaco": "es cultivo de tabaco  ?",
    "es_tomate": "es cultivo de tomate ?",
    "es_maiz": "es cultivo de maíz  ?",
    "es_pimiento": "es cultivo de pimiento ?",
    "es_pepino": "es cultivo de pepino ?",
    "es_frijol": "es cultivo de frijol  ?",
}

# The tobacco questionnaire's published answers, by variable.
TOBACCO_PYTHIUM_ANSWERS = {
    "p1": "no", "p2": "no", "p3": "si", "p4": "no", "p5": "no", "p6": "no",
    "p7": "no", "p8": "no", "p9": "si", "p10": "no", "p11": "no", "p12": "si",
}

# Ask order of the tobacco module's first rule (its literal order).
TOBACCO_ASK_ORDER = ["p1", "p3", "p2", "p4", "p9", "p12", "p7", "p10", "p5", "p6", "p8", "p11"]

RICE_PIRICULARIA_ANSWERS = {
    "p1": "si", "p2": "no", "p3": "si", "p4": "si", "p5": "no", "p6": "si",
    "p7": "no", "p8": "no", "p9": "no", "p10": "no", "p11": "no",
}


def crop_dispatch_answers(crop_local: str) -> dict[QuestionId, Answer]:
    """The seven crop answers with a single affirmative."""
    return {
        QuestionId("principal", local): Answer.SI if local == crop_local else Answer.NO
        for local in CROP_LOCALS
    }


def pythium_session_answers() -> dict[QuestionId, Answer]:
    """All 19 answers of the published tobacco walkthrough."""
    answers = crop_dispatch_answers("es_tabaco")
    answers.update(
        {QuestionId("tabaco", k): Answer(v) for k, v in TOBACCO_PYTHIUM_ANSWERS.items()}
    )
    return answers


def piricularia_session_answers() -> dict[QuestionId, Answer]:
    answers = crop_dispatch_answers("es_arroz")
    answers.update(
        {QuestionId("arroz", k): Answer(v) for k, v in RICE_PIRICULARIA_ANSWERS.items()}
    )
    return answers


def all_questions(kb: KnowledgeBase) -> list[QuestionId]:
    return [q.id for m in kb.modules for q in m.questions]


def random_total_assignment(kb: KnowledgeBase, rng: random.Random) -> dict[QuestionId, Answer]:
    return {q: rng.choice((Answer.SI, Answer.NO)) for q in all_questions(kb)}


# ---------------------------------------------------------------------------
# Random knowledge bases (valid by construction) for round-trip and
# property tests.

_TEXT_ALPHABET = (
    string.ascii_letters + string.digits + " ?¿¡!.,;:()%°áéíóúñÁÉÑ'"
    + '"\\\n\t'
)


def _ident(rng: random.Random, taken: set[str]) -> str:
    while True:
        first = rng.choice(string.ascii_lowercase + "_")
        rest = "".join(
            rng.choice(string.ascii_lowercase + string.digits + "_")
            for _ in range(rng.randint(0, 8))
        )
        name = first + rest
        if name not in taken:
            taken.add(name)
            return name


def _text(rng: random.Random) -> str:
    return "".join(rng.choice(_TEXT_ALPHABET) for _ in range(rng.randint(1, 40)))


def random_kb(rng: random.Random) -> KnowledgeBase:
    """A structurally valid random knowledge base.

    Dispatch edges only point at later modules, so dispatch is acyclic by
    construction; every rule references only questions declared in its own
    module. Unreachable modules are allowed (validation warns, engine and
    serializer do not care).
    """
    module_names: set[str] = set()
    n_modules = rng.randint(1, 5)
    names = [_ident(rng, module_names) for _ in range(n_modules)]

    modules = []
    for index, name in enumerate(names):
        question_names: set[str] = set()
        n_questions = rng.randint(1, 6)
        locals_ = [_ident(rng, question_names) for _ in range(n_questions)]
        questions = tuple(
            Question(QuestionId(name, local), _text(rng)) for local in locals_
        )
        rule_names: set[str] = set()
        rules = []
        for _ in range(rng.randint(1, 5)):
            chosen = rng.sample(locals_, rng.randint(1, len(locals_)))
            literals = tuple(
                Literal(QuestionId(name, local), rng.choice((Answer.SI, Answer.NO)))
                for local in chosen
            )
            can_dispatch = index + 1 < len(names)
            if can_dispatch and rng.random() < 0.3:
                consequent = Dispatch(names[rng.randint(index + 1, len(names) - 1)])
            else:
                consequent = Diagnose(
                    Diagnosis(
                        name=_text(rng),
                        info=_text(rng) if rng.random() < 0.5 else "",
                        treatment=_text(rng) if rng.random() < 0.3 else "",
                        images=tuple(_text(rng) for _ in range(rng.randint(0, 2))),
                    )
                )
            rules.append(Rule(_ident(rng, rule_names), literals, consequent))
        modules.append(RuleModule(name, questions, tuple(rules)))
    return KnowledgeBase(
        title=_text(rng), version=rng.randint(0, 99), entry=names[0], modules=tuple(modules)
    )
