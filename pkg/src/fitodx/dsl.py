"""Text format for knowledge bases: parser, serializer, validator.

The format is line-friendly but whitespace-insensitive between tokens;
``#`` starts a comment running to the end of the line. The shape:

    kb "title" version 1 entry principal

    module principal {
      question es_arroz "es cultivo de arroz ?"
      rule arroz {
        es_arroz = si
        dispatch arroz
      }
    }

A rule body is one or more ``question = si|no`` literals followed by a
consequent: either ``dispatch <module>`` or a ``diagnose { ... }`` block
with a required ``name:`` and optional ``info:``, ``treatment:`` and
repeated ``image:`` entries. Identifiers are ``[a-z_][a-z0-9_]*``; strings
are double-quoted with ``\\"``, ``\\\\``, ``\\n`` and ``\\t`` escapes.

Parsing never raises on malformed input: every failure is reported as a
:class:`ParseDiagnostic` with a stable code and a source span, and the
parser resynchronizes so several errors can be reported in one run.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from .model import (
    Answer,
    Consequent,
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

KEYWORDS = frozenset(
    ["kb", "version", "entry", "module", "question", "rule", "dispatch",
     "diagnose", "name", "info", "treatment", "image", "si", "no"]
)


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """A position in the input: 1-based line/column, 0-based byte offset.

    Columns count Unicode scalar values; the byte offset indexes the UTF-8
    encoding of the input buffer.
    """

    line: int
    column: int
    offset: int


NO_SPAN = SourceSpan(1, 1, 0)


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    span: SourceSpan
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.span.line}:{self.span.column}: {self.severity.value}[{self.code}] {self.message}"


@dataclass
class ParseResult:
    """Outcome of a parse: a knowledge base, or error diagnostics.

    ``kb`` is set exactly when no error-severity diagnostic was produced;
    warnings may accompany a successful parse.
    """

    kb: Optional[KnowledgeBase]
    diagnostics: list[ParseDiagnostic]

    @property
    def ok(self) -> bool:
        return self.kb is not None

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]


# ---------------------------------------------------------------------------
# Lexer

class _TokKind(Enum):
    IDENT = "identifier"
    STRING = "string"
    INT = "integer"
    LBRACE = "'{'"
    RBRACE = "'}'"
    EQUALS = "'='"
    COLON = "':'"
    EOF = "end of input"


@dataclass(frozen=True)
class _Token:
    kind: _TokKind
    value: object
    span: SourceSpan


_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.offset = 0  # byte offset of self.pos
        self.diagnostics: list[ParseDiagnostic] = []

    def _span(self) -> SourceSpan:
        return SourceSpan(self.line, self.col, self.offset)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            ch = self.text[self.pos]
            self.pos += 1
            self.offset += len(ch.encode("utf-8"))
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1

    def _error(self, span: SourceSpan, message: str) -> None:
        self.diagnostics.append(
            ParseDiagnostic(Severity.ERROR, span, "SYNTAX", message)
        )

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._advance()
                continue
            if ch == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            span = self._span()
            if ch == "{":
                out.append(_Token(_TokKind.LBRACE, "{", span))
                self._advance()
            elif ch == "}":
                out.append(_Token(_TokKind.RBRACE, "}", span))
                self._advance()
            elif ch == "=":
                out.append(_Token(_TokKind.EQUALS, "=", span))
                self._advance()
            elif ch == ":":
                out.append(_Token(_TokKind.COLON, ":", span))
                self._advance()
            elif ch == '"':
                out.append(self._string(span))
            elif ch.isdigit() and ch.isascii():
                start = self.pos
                while self.pos < len(text) and text[self.pos].isdigit() and text[self.pos].isascii():
                    self._advance()
                out.append(_Token(_TokKind.INT, int(text[start:self.pos]), span))
            elif ch == "_" or ("a" <= ch <= "z"):
                start = self.pos
                while self.pos < len(text) and (
                    text[self.pos] == "_"
                    or "a" <= text[self.pos] <= "z"
                    or ("0" <= text[self.pos] <= "9")
                ):
                    self._advance()
                out.append(_Token(_TokKind.IDENT, text[start:self.pos], span))
            else:
                self._error(span, f"unexpected character {ch!r}")
                self._advance()
        out.append(_Token(_TokKind.EOF, None, self._span()))
        return out

    def _string(self, open_span: SourceSpan) -> _Token:
        text = self.text
        self._advance()  # opening quote
        parts: list[str] = []
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == '"':
                self._advance()
                return _Token(_TokKind.STRING, "".join(parts), open_span)
            if ch == "\n":
                break  # strings are single-line; use \n for embedded newlines
            if ch == "\\":
                esc_span = self._span()
                self._advance()
                if self.pos >= len(text):
                    break
                esc = text[self.pos]
                if esc in _ESCAPES:
                    parts.append(_ESCAPES[esc])
                else:
                    self._error(esc_span, f"unknown escape sequence \\{esc}")
                    parts.append(esc)
                self._advance()
            else:
                parts.append(ch)
                self._advance()
        self._error(open_span, "unterminated string")
        return _Token(_TokKind.STRING, "".join(parts), open_span)


# ---------------------------------------------------------------------------
# Parsed declarations (spans survive until semantic checking)

@dataclass
class _QuestionDecl:
    name: str
    text: str
    span: SourceSpan
    text_span: SourceSpan


@dataclass
class _LiteralDecl:
    module: str
    question: str
    answer: Answer
    span: SourceSpan


@dataclass
class _DiagnoseDecl:
    name: str
    info: str
    treatment: str
    images: tuple[str, ...]
    span: SourceSpan
    name_span: SourceSpan


@dataclass
class _DispatchDecl:
    target: str
    span: SourceSpan


@dataclass
class _RuleDecl:
    name: str
    literals: list[_LiteralDecl]
    consequent: Union[_DiagnoseDecl, _DispatchDecl]
    span: SourceSpan


@dataclass
class _ModuleDecl:
    name: str
    questions: list[_QuestionDecl]
    rules: list[_RuleDecl]
    span: SourceSpan


@dataclass
class _KbDecl:
    title: str
    version: int
    entry: str
    entry_span: SourceSpan
    modules: list[_ModuleDecl]


# ---------------------------------------------------------------------------
# Parser

class _ParseAbort(Exception):
    """Internal signal: give up on the current declaration and resync."""


class _Parser:
    def __init__(self, tokens: list[_Token], diagnostics: list[ParseDiagnostic]):
        self.tokens = tokens
        self.idx = 0
        self.diagnostics = diagnostics

    @property
    def tok(self) -> _Token:
        return self.tokens[self.idx]

    def peek(self, ahead: int = 1) -> _Token:
        return self.tokens[min(self.idx + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        t = self.tok
        if t.kind is not _TokKind.EOF:
            self.idx += 1
        return t

    def error(self, message: str, span: Optional[SourceSpan] = None) -> None:
        self.diagnostics.append(
            ParseDiagnostic(Severity.ERROR, span or self.tok.span, "SYNTAX", message)
        )

    def expect(self, kind: _TokKind, what: str) -> _Token:
        if self.tok.kind is kind:
            return self.advance()
        self.error(f"expected {what}, found {self._describe(self.tok)}")
        raise _ParseAbort()

    def expect_keyword(self, word: str) -> _Token:
        if self.tok.kind is _TokKind.IDENT and self.tok.value == word:
            return self.advance()
        self.error(f"expected '{word}', found {self._describe(self.tok)}")
        raise _ParseAbort()

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind is _TokKind.IDENT and self.tok.value == word

    @staticmethod
    def _describe(tok: _Token) -> str:
        if tok.kind is _TokKind.IDENT:
            return f"'{tok.value}'"
        if tok.kind is _TokKind.STRING:
            return "string"
        if tok.kind is _TokKind.INT:
            return "integer"
        return tok.kind.value

    def sync_to(self, words: frozenset[str], stop_at_rbrace: bool = False) -> None:
        """Skip tokens until one of ``words``, EOF, or (optionally) '}'."""
        while self.tok.kind is not _TokKind.EOF:
            if self.tok.kind is _TokKind.IDENT and self.tok.value in words:
                return
            if stop_at_rbrace and self.tok.kind is _TokKind.RBRACE:
                return
            self.advance()

    # -- grammar productions ------------------------------------------------

    def parse_kb_file(self) -> Optional[_KbDecl]:
        decl: Optional[_KbDecl] = None
        try:
            self.expect_keyword("kb")
            title = self.expect(_TokKind.STRING, "knowledge base title string")
            self.expect_keyword("version")
            version = self.expect(_TokKind.INT, "version integer")
            self.expect_keyword("entry")
            entry = self.expect(_TokKind.IDENT, "entry module identifier")
            decl = _KbDecl(
                title=str(title.value),
                version=int(version.value),  # type: ignore[arg-type]
                entry=str(entry.value),
                entry_span=entry.span,
                modules=[],
            )
        except _ParseAbort:
            self.sync_to(frozenset(["module"]))
        while self.tok.kind is not _TokKind.EOF:
            if self.at_keyword("module"):
                module = self.parse_module()
                if module is not None and decl is not None:
                    decl.modules.append(module)
            else:
                self.error(f"expected 'module', found {self._describe(self.tok)}")
                self.advance()
                self.sync_to(frozenset(["module"]))
        return decl

    def parse_module(self) -> Optional[_ModuleDecl]:
        kw = self.advance()  # 'module'
        try:
            name = self.expect(_TokKind.IDENT, "module name")
            self.expect(_TokKind.LBRACE, "'{'")
        except _ParseAbort:
            self.sync_to(frozenset(["module"]))
            return None
        decl = _ModuleDecl(str(name.value), [], [], kw.span)
        while True:
            if self.tok.kind is _TokKind.RBRACE:
                self.advance()
                return decl
            if self.tok.kind is _TokKind.EOF:
                self.error("unexpected end of input inside module block", kw.span)
                return decl
            try:
                if self.at_keyword("question"):
                    decl.questions.append(self.parse_question())
                elif self.at_keyword("rule"):
                    rule = self.parse_rule(decl.name)
                    if rule is not None:
                        decl.rules.append(rule)
                else:
                    self.error(
                        f"expected 'question', 'rule' or '}}', found {self._describe(self.tok)}"
                    )
                    raise _ParseAbort()
            except _ParseAbort:
                self.advance_if_stuck()
                self.sync_to(frozenset(["question", "rule", "module"]), stop_at_rbrace=True)
                if self.at_keyword("module"):
                    # Missing '}': treat the module as closed and let the
                    # caller pick up the next one.
                    return decl

    def advance_if_stuck(self) -> None:
        if self.tok.kind in (_TokKind.EOF, _TokKind.RBRACE):
            return
        if self.tok.kind is _TokKind.IDENT and self.tok.value in ("question", "rule", "module"):
            return  # already at a recovery point; re-entering makes progress
        self.advance()

    def parse_question(self) -> _QuestionDecl:
        kw = self.advance()  # 'question'
        name = self.expect(_TokKind.IDENT, "question identifier")
        text = self.expect(_TokKind.STRING, "question text string")
        if not text.value:
            self.error("question text must be nonempty", text.span)
            raise _ParseAbort()
        return _QuestionDecl(str(name.value), str(text.value), kw.span, text.span)

    def parse_rule(self, module_name: str) -> Optional[_RuleDecl]:
        kw = self.advance()  # 'rule'
        name = self.expect(_TokKind.IDENT, "rule identifier")
        self.expect(_TokKind.LBRACE, "'{'")
        literals: list[_LiteralDecl] = []
        consequent: Optional[Union[_DiagnoseDecl, _DispatchDecl]] = None
        while True:
            if self.tok.kind is _TokKind.RBRACE:
                end = self.advance()
                break
            if self.tok.kind is _TokKind.EOF:
                self.error("unexpected end of input inside rule block", kw.span)
                end = self.tok
                break
            if self.at_keyword("dispatch") and self.peek().kind is not _TokKind.EQUALS:
                d = self.advance()
                target = self.expect(_TokKind.IDENT, "dispatch target module")
                consequent = _DispatchDecl(str(target.value), d.span)
                self.expect(_TokKind.RBRACE, "'}' after consequent")
                break
            if self.at_keyword("diagnose") and self.peek().kind is not _TokKind.EQUALS:
                consequent = self.parse_diagnose()
                self.expect(_TokKind.RBRACE, "'}' after consequent")
                break
            if self.tok.kind is _TokKind.IDENT and self.peek().kind is _TokKind.EQUALS:
                q = self.advance()
                self.advance()  # '='
                ans = self.expect(_TokKind.IDENT, "'si' or 'no'")
                if ans.value == "si":
                    expected = Answer.SI
                elif ans.value == "no":
                    expected = Answer.NO
                else:
                    self.error(f"expected 'si' or 'no', found '{ans.value}'", ans.span)
                    raise _ParseAbort()
                literals.append(
                    _LiteralDecl(module_name, str(q.value), expected, q.span)
                )
                continue
            self.error(
                f"expected a literal or a consequent, found {self._describe(self.tok)}"
            )
            raise _ParseAbort()
        if consequent is None:
            self.error("rule has no consequent ('dispatch' or 'diagnose')", kw.span)
            return None
        if not literals:
            self.error("rule must have at least one literal", kw.span)
            return None
        return _RuleDecl(str(name.value), literals, consequent, kw.span)

    def parse_diagnose(self) -> _DiagnoseDecl:
        kw = self.advance()  # 'diagnose'
        self.expect(_TokKind.LBRACE, "'{'")
        self.expect_keyword("name")
        self.expect(_TokKind.COLON, "':'")
        name = self.expect(_TokKind.STRING, "diagnosis name string")
        if not name.value:
            self.error("diagnosis name must be nonempty", name.span)
            raise _ParseAbort()
        info = ""
        treatment = ""
        images: list[str] = []
        if self.at_keyword("info"):
            self.advance()
            self.expect(_TokKind.COLON, "':'")
            info = str(self.expect(_TokKind.STRING, "info string").value)
        if self.at_keyword("treatment"):
            self.advance()
            self.expect(_TokKind.COLON, "':'")
            treatment = str(self.expect(_TokKind.STRING, "treatment string").value)
        while self.at_keyword("image"):
            self.advance()
            self.expect(_TokKind.COLON, "':'")
            images.append(str(self.expect(_TokKind.STRING, "image path string").value))
        self.expect(_TokKind.RBRACE, "'}' closing the diagnose block")
        return _DiagnoseDecl(str(name.value), info, treatment, tuple(images), kw.span, name.span)


# ---------------------------------------------------------------------------
# Semantic checks (shared between the parser and validate_kb)

def _check_and_build(decl: _KbDecl) -> tuple[Optional[KnowledgeBase], list[ParseDiagnostic]]:
    diags: list[ParseDiagnostic] = []

    def err(span: SourceSpan, code: str, message: str) -> None:
        diags.append(ParseDiagnostic(Severity.ERROR, span, code, message))

    def warn(span: SourceSpan, code: str, message: str) -> None:
        diags.append(ParseDiagnostic(Severity.WARNING, span, code, message))

    module_spans: dict[str, SourceSpan] = {}
    for m in decl.modules:
        if m.name in module_spans:
            err(m.span, "DUP_MODULE", f"duplicate module '{m.name}'")
        else:
            module_spans[m.name] = m.span

    for m in decl.modules:
        declared: set[str] = set()
        for q in m.questions:
            if q.name in declared:
                err(q.span, "DUP_QUESTION", f"duplicate question '{q.name}' in module '{m.name}'")
            declared.add(q.name)
        rule_names: set[str] = set()
        for r in m.rules:
            if r.name in rule_names:
                err(r.span, "DUP_RULE", f"duplicate rule '{r.name}' in module '{m.name}'")
            rule_names.add(r.name)
            seen: dict[str, Answer] = {}
            for lit in r.literals:
                if lit.module != m.name or lit.question not in declared:
                    err(
                        lit.span,
                        "UNDEF_QUESTION",
                        f"rule '{r.name}' references undeclared question "
                        f"'{lit.question}' in module '{m.name}'",
                    )
                    continue
                if lit.question in seen:
                    if seen[lit.question] is not lit.answer:
                        err(
                            lit.span,
                            "CONTRADICTION",
                            f"rule '{r.name}' requires '{lit.question}' to be both "
                            f"'{seen[lit.question].token}' and '{lit.answer.token}'",
                        )
                    else:
                        err(
                            lit.span,
                            "DUP_LITERAL",
                            f"rule '{r.name}' repeats literal '{lit.question} = {lit.answer.token}'",
                        )
                else:
                    seen[lit.question] = lit.answer
            if isinstance(r.consequent, _DispatchDecl):
                if r.consequent.target not in module_spans:
                    err(
                        r.consequent.span,
                        "UNDEF_MODULE",
                        f"rule '{r.name}' dispatches to unknown module '{r.consequent.target}'",
                    )

    if decl.entry not in module_spans:
        err(decl.entry_span, "NO_ENTRY", f"entry module '{decl.entry}' is not defined")

    # Dispatch cycles: DFS over module -> target edges, reported at the
    # dispatch declaration that closes the cycle.
    edges: dict[str, list[tuple[str, SourceSpan]]] = {m.name: [] for m in decl.modules}
    for m in decl.modules:
        for r in m.rules:
            c = r.consequent
            if isinstance(c, _DispatchDecl) and c.target in module_spans:
                edges[m.name].append((c.target, c.span))

    color: dict[str, int] = {}  # 0 unvisited, 1 on stack, 2 done

    def visit(node: str, path: list[str]) -> None:
        color[node] = 1
        path.append(node)
        for target, span in edges.get(node, []):
            if color.get(target, 0) == 1:
                cycle = path[path.index(target):] + [target]
                err(span, "DISPATCH_CYCLE", "dispatch cycle: " + " -> ".join(cycle))
            elif color.get(target, 0) == 0:
                visit(target, path)
        path.pop()
        color[node] = 2

    for m in decl.modules:
        if color.get(m.name, 0) == 0:
            visit(m.name, [])

    # Reachability from the entry module (warning only).
    if decl.entry in module_spans:
        reachable = {decl.entry}
        frontier = [decl.entry]
        while frontier:
            node = frontier.pop()
            for target, _ in edges.get(node, []):
                if target not in reachable:
                    reachable.add(target)
                    frontier.append(target)
        for m in decl.modules:
            if m.name not in reachable:
                warn(
                    m.span,
                    "UNREACHABLE_MODULE",
                    f"module '{m.name}' is not reachable from entry '{decl.entry}'",
                )

    if any(d.severity is Severity.ERROR for d in diags):
        return None, diags

    modules = tuple(
        RuleModule(
            name=m.name,
            questions=tuple(
                Question(QuestionId(m.name, q.name), q.text) for q in m.questions
            ),
            rules=tuple(
                Rule(
                    id=r.name,
                    literals=tuple(
                        Literal(QuestionId(lit.module, lit.question), lit.answer)
                        for lit in r.literals
                    ),
                    consequent=(
                        Dispatch(r.consequent.target)
                        if isinstance(r.consequent, _DispatchDecl)
                        else Diagnose(
                            Diagnosis(
                                name=r.consequent.name,
                                info=r.consequent.info,
                                treatment=r.consequent.treatment,
                                images=r.consequent.images,
                            )
                        )
                    ),
                )
                for r in m.rules
            ),
        )
        for m in decl.modules
    )
    kb = KnowledgeBase(decl.title, decl.version, decl.entry, modules)
    return kb, diags


def _decl_of(kb: KnowledgeBase) -> _KbDecl:
    """Rebuild the declaration view of an in-memory knowledge base.

    Used to run the same semantic checks over programmatically built
    knowledge bases; every span is the origin sentinel.
    """
    modules = []
    for m in kb.modules:
        questions = [
            _QuestionDecl(q.id.local if q.id.module == m.name else q.id.global_key(),
                          q.text, NO_SPAN, NO_SPAN)
            for q in m.questions
        ]
        rules = []
        for r in m.rules:
            literals = [
                _LiteralDecl(lit.question.module, lit.question.local, lit.expected, NO_SPAN)
                for lit in r.literals
            ]
            consequent: Union[_DiagnoseDecl, _DispatchDecl]
            if isinstance(r.consequent, Dispatch):
                consequent = _DispatchDecl(r.consequent.target, NO_SPAN)
            else:
                d = r.consequent.diagnosis
                consequent = _DiagnoseDecl(d.name, d.info, d.treatment, d.images, NO_SPAN, NO_SPAN)
            rules.append(_RuleDecl(r.id, literals, consequent, NO_SPAN))
        modules.append(_ModuleDecl(m.name, questions, rules, NO_SPAN))
    return _KbDecl(kb.title, kb.version, kb.entry, NO_SPAN, modules)


# ---------------------------------------------------------------------------
# Public API

def parse_kb(source: Union[str, bytes]) -> ParseResult:
    """Parse DSL text into a validated knowledge base.

    Accepts raw bytes as well; invalid UTF-8 yields a single fatal
    diagnostic. Never raises on malformed input.
    """
    if isinstance(source, bytes):
        try:
            text = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            span = SourceSpan(1, 1, exc.start)
            return ParseResult(None, [
                ParseDiagnostic(Severity.ERROR, span, "SYNTAX",
                                f"input is not valid UTF-8 at byte {exc.start}")
            ])
    else:
        text = source

    lexer = _Lexer(text)
    tokens = lexer.tokens()
    diagnostics = list(lexer.diagnostics)
    parser = _Parser(tokens, diagnostics)
    decl = parser.parse_kb_file()
    if decl is None:
        if not any(d.severity is Severity.ERROR for d in diagnostics):
            diagnostics.append(
                ParseDiagnostic(Severity.ERROR, SourceSpan(1, 1, 0), "SYNTAX",
                                "missing 'kb' header")
            )
        return ParseResult(None, diagnostics)
    kb, semantic = _check_and_build(decl)
    diagnostics.extend(semantic)
    if any(d.severity is Severity.ERROR for d in diagnostics):
        return ParseResult(None, diagnostics)
    return ParseResult(kb, diagnostics)


def validate_kb(kb: KnowledgeBase) -> list[ParseDiagnostic]:
    """Check every structural invariant of an in-memory knowledge base.

    Returns one diagnostic per violation (same codes as the parser) plus an
    UNREACHABLE_MODULE warning for modules no dispatch path reaches.
    """
    _, diags = _check_and_build(_decl_of(kb))
    return diags


def _escape(value: str) -> str:
    out = value.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\t", "\\t")


def serialize_kb(kb: KnowledgeBase) -> str:
    """Emit the canonical text form: two-space indent, one declaration per
    line, LF line endings. ``parse_kb(serialize_kb(kb))`` is structurally
    equal to ``kb``, and serialization is a fixpoint of parse+serialize.
    """
    lines: list[str] = []
    lines.append(f'kb "{_escape(kb.title)}" version {kb.version} entry {kb.entry}')
    for m in kb.modules:
        lines.append("")
        lines.append(f"module {m.name} {{")
        for q in m.questions:
            lines.append(f'  question {q.id.local} "{_escape(q.text)}"')
        for r in m.rules:
            lines.append(f"  rule {r.id} {{")
            for lit in r.literals:
                lines.append(f"    {lit.question.local} = {lit.expected.token}")
            c = r.consequent
            if isinstance(c, Dispatch):
                lines.append(f"    dispatch {c.target}")
            else:
                d = c.diagnosis
                lines.append("    diagnose {")
                lines.append(f'      name: "{_escape(d.name)}"')
                if d.info:
                    lines.append(f'      info: "{_escape(d.info)}"')
                if d.treatment:
                    lines.append(f'      treatment: "{_escape(d.treatment)}"')
                for img in d.images:
                    lines.append(f'      image: "{_escape(img)}"')
                lines.append("    }")
            lines.append("  }")
        lines.append("}")
    return "\n".join(lines) + "\n"


def load_kb_file(path: Union[str, Path]) -> ParseResult:
    """Read and parse a ``.fdx`` file. I/O errors become diagnostics."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        return ParseResult(None, [
            ParseDiagnostic(Severity.ERROR, NO_SPAN, "IO", f"cannot read {path}: {exc}")
        ])
    return parse_kb(data)
