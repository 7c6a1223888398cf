"""Text front end: formulas, theory files and scenario case blocks.

Formula grammar (loosest binding first)::

    formula  := imp ('<->' imp)?
    imp      := disj ('->' imp)?
    disj     := conj (('|' | '\\/') conj)*
    conj     := unary (('&' | '/\\') unary)*
    unary    := '~' unary | '[' op ']' unary | '<' op '>' unary
              | 'box' unary | 'dia' unary | '[]' unary | '<>' unary
              | ('forall' | 'exists') VAR (':' SORT)? unary | primary
    op       := 'eps' | action (';' action)*
    primary  := 'true' | 'false' | '(' formula ')' | atom | term ('<' | '<=' | '=') term

Time terms are linear: ``t+d``, ``ds+d1``, ``6+3``, ``1/10``, ``2*t``, ``t-1``.
Unicode connectives (``¬ ∧ ∨ → ↔ □ ◇ ∀ ∃ ⊤ ⊥``) are accepted as well.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .syntax import (BOTTOM, OBJ, SORTS, TIME, TOP, ActionTerm, And, App, Atom, Box,
                     Compare, Const, Exists, Forall, Iff, Implies, Modal, Not, Or,
                     Signature, TimeExpr, Var, diamond, possibly, render,
                     render_action, render_number, render_term, term_sort)


class DalSyntaxError(ValueError):
    """Lexical, grammatical, declaration or sort error with a source position."""

    def __init__(self, message, offset=0, line=1, column=1, time_names=()):
        self.message = message
        self.time_names = set(time_names)  # names that would parse as time terms
        self.offset = offset
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column}, offset {offset})")


_UNICODE = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "↔": "<->", "□": "box",
            "◇": "dia", "∀": "forall", "∃": "exists", "⊤": "true", "⊥": "false",
            "≤": "<=", "ε": "eps"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><->|->|<=|\\/|/\\|\[\]|<>|[~&|()\[\];,<>=+\-*/:!])
  | (?P<uni>[¬∧∨→↔□◇∀∃⊤⊥≤ε])
""", re.VERBOSE)

KEYWORDS = {"true", "false", "box", "dia", "forall", "exists", "eps"}


@dataclass
class Token:
    kind: str  # num, ident, op, eof
    text: str
    offset: int


def tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DalSyntaxError(f"unexpected character {text[pos]!r}", *_position(text, pos))
        kind = m.lastgroup
        if kind == "uni":
            mapped = _UNICODE[m.group()]
            out.append(Token("ident" if mapped.isalpha() else "op", mapped, pos))
        elif kind != "ws":
            value = m.group()
            if value == "!":
                value = "~"
            out.append(Token(kind, value, pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return offset, line, col


class _Scope:
    def __init__(self, name, sort=None):
        self.name = name
        self.sort = sort


class FormulaParser:
    """Recursive-descent parser over one formula text.

    ``signature`` is consulted for declared symbols. With ``strict=False``
    undeclared predicates, actions and constants are added to it on first use
    (sorts inferred from position). ``free_variables`` decides what an
    undeclared identifier in term position is: a free variable (theory laws) or,
    when False, a constant (strict mode then reports it as undeclared). A dict
    ``{name: sort}`` allows free variables and fixes the sorts of those named.
    """

    def __init__(self, text, signature=None, strict=False, free_variables=False,
                 base_offset=0, base_text=None, time_hints=()):
        self.text = text
        self.sig = signature if signature is not None else Signature()
        self.strict = strict
        self.free_variables = isinstance(free_variables, dict) or bool(free_variables)
        self.tokens = tokenize(text)
        self.i = 0
        self.scopes: list = []
        self.free_sorts: dict = dict(free_variables) if isinstance(free_variables, dict) else {}
        self.base_offset = base_offset
        self.base_text = base_text
        self.time_hints = set(time_hints)

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message, token=None, time_names=()):
        token = token or self.tok
        if self.base_text is not None:
            off, line, col = _position(self.base_text, self.base_offset + token.offset)
        else:
            off, line, col = _position(self.text, token.offset)
        return DalSyntaxError(message, off, line, col, time_names)

    def accept(self, text):
        if self.tok.kind in ("op", "ident") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    def ident(self) -> str:
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            found = self.tok.text or "end of input"
            raise self.error(f"expected identifier, found {found!r}")
        name = self.tok.text
        self.i += 1
        return name

    # -- entry points
    def parse_formula(self):
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def parse_action(self) -> ActionTerm:
        a = self.action()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return a

    def parse_time(self) -> TimeExpr:
        e = self.time_expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    # -- formulas
    def formula(self):
        left = self.implication()
        if self.accept("<->"):
            right = self.implication()
            left = Iff(left, right)
            if self.tok.text == "<->":
                raise self.error("'<->' is not associative; add parentheses")
        return left

    def implication(self):
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.tok.kind == "op" and self.tok.text in ("|", "\\/"):
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("&", "/\\"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if t.kind == "op":
            if t.text == "~":
                self.i += 1
                return Not(self.unary())
            if t.text == "[]":
                self.i += 1
                return Box(self.unary())
            if t.text == "<>":
                self.i += 1
                return possibly(self.unary())
            if t.text == "[":
                self.i += 1
                ops = self.operator()
                self.expect("]")
                return Modal(ops, self.unary())
            if t.text == "<":
                self.i += 1
                ops = self.operator()
                self.expect(">")
                return diamond(ops, self.unary())
        if t.kind == "ident":
            if t.text == "box":
                self.i += 1
                return Box(self.unary())
            if t.text == "dia":
                self.i += 1
                return possibly(self.unary())
            if t.text in ("forall", "exists"):
                return self.quantified()
        return self.primary()

    def quantified(self):
        kind = self.tok.text
        self.i += 1
        name = self.ident()
        sort = None
        if self.accept(":"):
            sort_tok = self.tok
            sort = self.ident()
            if sort not in SORTS:
                raise self.error(f"unknown sort {sort!r}", sort_tok)
        scope = _Scope(name, sort)
        self.scopes.append(scope)
        try:
            body = self.unary()
        finally:
            self.scopes.pop()
        var = Var(name, scope.sort or OBJ)
        return (Forall if kind == "forall" else Exists)(var, body)

    def operator(self) -> tuple:
        if self.accept("eps"):
            return ()
        ops = [self.action()]
        while self.accept(";"):
            ops.append(self.action())
        return tuple(ops)

    def action(self) -> ActionTerm:
        tok = self.tok
        name = self.ident()
        if name in self.sig.preds:
            raise self.error(f"{name} is a predicate, not an action", tok)
        args = []
        if self.accept("("):
            if not self.accept(")"):
                args = self.arguments(name, self.sig.actions.get(name))
                self.expect(")")
        return ActionTerm(name, self._declare("action", name, self.sig.actions, args, tok))

    def primary(self):
        t = self.tok
        if t.kind == "ident" and t.text == "true":
            self.i += 1
            return TOP
        if t.kind == "ident" and t.text == "false":
            self.i += 1
            return BOTTOM
        if t.kind == "op" and t.text == "(":
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident" and t.text not in KEYWORDS:
            nxt = self.peek()
            if t.text in self.sig.preds:
                return self.atom()
            if t.text in self.sig.actions:
                raise self.error(f"{t.text} is an action, not a predicate")
            if self._is_term_name(t.text):
                return self.comparison()
            if nxt.kind == "op" and nxt.text in ("+", "-", "*", "<", "<=", "="):
                return self.comparison()
            return self.atom()
        if t.kind == "num" or (t.kind == "op" and t.text == "-"):
            return self.comparison()
        found = t.text or "end of input"
        raise self.error(f"expected a formula, found {found!r}")

    def _is_term_name(self, name) -> bool:
        return (name in self.sig.objects or name in self.sig.times or name in self.time_hints
                or self._bound(name) is not None or name in self.free_sorts)

    def atom(self):
        tok = self.tok
        name = self.ident()
        args = []
        if self.accept("("):
            if not self.accept(")"):
                args = self.arguments(name, self.sig.preds.get(name))
                self.expect(")")
        return Atom(name, self._declare("predicate", name, self.sig.preds, args, tok))

    def _declare(self, kind, name, table, args, tok):
        sorts = table.get(name)
        if sorts is None:
            if self.strict:
                raise self.error(f"undeclared {kind} {name}", tok)
            table[name] = tuple(term_sort(a) for a in args)
            return tuple(args)
        if len(sorts) != len(args):
            raise self.error(f"{kind} {name} expects {len(sorts)} arguments, got {len(args)}", tok)
        for s, a in zip(sorts, args):
            if term_sort(a) != s:
                raise self.error(f"{kind} {name}: argument {render_term(a)} is not of sort {s}", tok)
        return tuple(args)

    def arguments(self, owner, sorts):
        args = []
        k = 0
        while True:
            expected = sorts[k] if sorts is not None and k < len(sorts) else None
            args.append(self.term(expected))
            k += 1
            if not self.accept(","):
                return args

    def _comparison_sort(self):
        """Sort of a comparison whose left side is a name of unknown sort, by lookahead."""
        t, op = self.tok, self.peek()
        if t.kind != "ident" or self._name_sort(t.text) is not None or op.kind != "op":
            return None
        if op.text in ("<", "<="):
            return TIME
        if op.text != "=":
            return None
        r, after = self.peek(2), self.peek(3)
        if r.kind == "num" or (r.kind == "op" and r.text == "-"):
            return TIME
        if r.kind == "ident":
            if after.kind == "op" and after.text in ("+", "-", "*"):
                return TIME
            return self._name_sort(r.text)
        return None

    def comparison(self):
        start = self.tok
        lhs = self.term(self._comparison_sort())
        if not (self.tok.kind == "op" and self.tok.text in ("<", "<=", "=")):
            found = self.tok.text or "end of input"
            raise self.error(f"expected comparison operator, found {found!r}")
        op = self.tok.text
        self.i += 1
        rhs = self.term(term_sort(lhs))
        if term_sort(lhs) != term_sort(rhs):
            raise self.error("comparison between terms of different sorts", start,
                             _obj_names(lhs) | _obj_names(rhs))
        if term_sort(lhs) == OBJ and op != "=":
            raise self.error(f"'{op}' needs time terms", start, _obj_names(lhs) | _obj_names(rhs))
        return Compare(op, lhs, rhs)

    # -- terms
    def term(self, expected):
        if expected == TIME:
            return self.time_expr()
        t = self.tok
        if expected == OBJ:
            return self.object_term()
        # unknown sort: decide from the shape of the term
        if t.kind == "num" or (t.kind == "op" and t.text == "-"):
            return self.time_expr()
        if t.kind == "ident":
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text in ("+", "-", "*"):
                return self.time_expr()
            if nxt.kind == "op" and nxt.text == "(":
                return self.object_term()
            if self._name_sort(t.text) == TIME:
                return self.time_expr()
            return self.object_term()
        found = t.text or "end of input"
        raise self.error(f"expected a term, found {found!r}")

    def object_term(self):
        tok = self.tok
        name = self.ident()
        if self.tok.kind == "op" and self.tok.text == "(":
            self.i += 1
            args = self.arguments(name, self.sig.functions.get(name))
            self.expect(")")
            if name not in self.sig.functions:
                if self.strict:
                    raise self.error(f"undeclared function {name}", tok)
                self.sig.functions[name] = tuple(term_sort(a) for a in args)
            return App(name, tuple(args))
        return self.name_term(name, OBJ, tok)

    def _bound(self, name):
        for s in reversed(self.scopes):
            if s.name == name:
                return s
        return None

    def _name_sort(self, name):
        scope = self._bound(name)
        if scope is not None:
            return scope.sort
        sort = self.sig.const_sort(name)
        if sort is not None:
            return sort
        if name in self.time_hints and name not in self.free_sorts:
            return TIME
        return self.free_sorts.get(name)

    def name_term(self, name, sort, tok):
        scope = self._bound(name)
        if scope is not None:
            if scope.sort is None:
                scope.sort = sort
            elif scope.sort != sort:
                raise self.error(f"variable {name} used as both {scope.sort} and {sort}", tok, {name})
            return Var(name, sort)
        declared = self.sig.const_sort(name)
        if declared is not None:
            if declared != sort:
                raise self.error(f"constant {name} is {declared}-sorted, used as {sort}", tok, {name})
            return Const(name, sort)
        if name in self.sig.preds or name in self.sig.actions:
            raise self.error(f"{name} is not a term", tok)
        if self.free_variables:
            prev = self.free_sorts.setdefault(name, sort)
            if prev != sort:
                raise self.error(f"variable {name} used as both {prev} and {sort}", tok, {name})
            return Var(name, sort)
        if self.strict:
            raise self.error(f"undeclared constant {name}", tok)
        (self.sig.add_time if sort == TIME else self.sig.add_object)(name)
        return Const(name, sort)

    def time_expr(self) -> TimeExpr:
        negative = self.accept("-")
        total = self.time_summand()
        if negative:
            total = -total
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            sign = self.tok.text
            self.i += 1
            part = self.time_summand()
            total = total + part if sign == "+" else total - part
        return total

    def time_summand(self) -> TimeExpr:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            q = Fraction(t.text)
            if self.accept("/"):
                d = self.tok
                if d.kind != "num":
                    raise self.error("expected denominator")
                self.i += 1
                q = q / Fraction(d.text)
            if self.accept("*"):
                tok = self.tok
                name = self.ident()
                return TimeExpr.atom(self.name_term(name, TIME, tok)).scale(q)
            return TimeExpr(q)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            return TimeExpr.atom(self.name_term(t.text, TIME, t))
        found = t.text or "end of input"
        raise self.error(f"expected a time term, found {found!r}")


def _obj_names(t) -> set:
    if isinstance(t, (Var, Const)) and t.sort == OBJ:
        return {t.name}
    return set()


def parse_with_hints(text, signature, strict, entry="parse_formula", **kw):
    """Run ``FormulaParser(...).<entry>()``; in lenient mode, retry after sort clashes.

    Without declarations the sort of a name is guessed from its first use, so
    ``BB(t) -> t < 1`` first reads ``t`` as an object. The clash reports the
    names involved; they are then read as time terms from the start. A
    lenient parse only updates ``signature`` once it succeeds.
    """
    sig = signature if signature is not None else Signature()
    hints: set = set()
    while True:
        work = sig if strict else sig.copy()
        p = FormulaParser(text, work, strict=strict, time_hints=hints, **kw)
        try:
            result = getattr(p, entry)()
        except DalSyntaxError as exc:
            extra = exc.time_names - hints
            if strict or not extra:
                raise
            hints |= extra
            continue
        if work is not sig:
            sig.__dict__.update(work.__dict__)
        return result


def parse_formula(text, signature=None, strict=None, free_variables=False):
    """Parse one formula.

    Without a signature the symbols are inferred (and a fresh signature is
    filled in); with one, parsing is strict unless ``strict=False``.
    """
    if strict is None:
        strict = signature is not None
    return parse_with_hints(text, signature, strict, "parse_formula", free_variables=free_variables)


def parse_action(text, signature=None, strict=None, free_variables=False) -> ActionTerm:
    if strict is None:
        strict = signature is not None
    return parse_with_hints(text, signature, strict, "parse_action", free_variables=free_variables)


def parse_time(text, signature=None, free_variables=True) -> TimeExpr:
    return FormulaParser(text, signature, strict=False, free_variables=free_variables).parse_time()


def infer_signature(formulas) -> Signature:
    """Signature holding exactly the symbols the given formulas use."""
    from .syntax import subformulas, TimeExpr as _T
    sig = Signature()

    def term(t):
        if isinstance(t, Const):
            (sig.add_time if t.sort == TIME else sig.add_object)(t.name)
        elif isinstance(t, _T):
            for a, _ in t.parts:
                if isinstance(a, Const):
                    sig.add_time(a.name)
        elif isinstance(t, App):
            sig.functions.setdefault(t.symbol, tuple(term_sort(a) for a in t.args))
            for a in t.args:
                term(a)

    for phi in formulas:
        for f in subformulas(phi):
            if isinstance(f, Atom):
                sig.preds.setdefault(f.pred, tuple(term_sort(a) for a in f.args))
                for a in f.args:
                    term(a)
            elif isinstance(f, Compare):
                term(f.lhs)
                term(f.rhs)
            elif isinstance(f, Modal):
                for a in f.actions:
                    sig.actions.setdefault(a.symbol, tuple(term_sort(x) for x in a.args))
                    for x in a.args:
                        term(x)
    return sig


# ----------------------------------------------------------------- theories

STATEMENT_KINDS = ("axiom", "law", "fact", "occurs", "constraint", "query", "reject")


@dataclass
class Statement:
    kind: str
    formula: object  # Formula, or ActionTerm for ``occurs``
    label: str | None = None
    line: int = 0

    def render(self) -> str:
        body = render_action(self.formula) if self.kind == "occurs" else render(self.formula)
        label = f"({self.label}): " if self.label else ""
        return f"{self.kind} {label}{body}"


@dataclass
class Case:
    name: str
    statements: list = field(default_factory=list)
    bindings: dict = field(default_factory=dict)
    line: int = 0

    def of_kind(self, *kinds):
        return [s for s in self.statements if s.kind in kinds]


@dataclass
class Theory:
    signature: Signature = field(default_factory=Signature)
    statements: list = field(default_factory=list)
    bindings: dict = field(default_factory=dict)
    fluents: list = field(default_factory=list)
    infinitesimals: list = field(default_factory=list)
    cases: list = field(default_factory=list)
    declared: bool = False

    def of_kind(self, *kinds):
        return [s for s in self.statements if s.kind in kinds]

    def case(self, name) -> Case:
        for c in self.cases:
            if c.name == name:
                return c
        raise KeyError(f"no case named {name!r}")

    def render(self) -> str:
        return render_theory(self)


_LABEL = re.compile(r"\(\s*([A-Za-z0-9_.']+)\s*\)\s*:\s*")
_DECL = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)\s*(?:\(([^)]*)\))?\s*$")


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def _split_top(text: str, sep=";"):
    """Split at ``sep`` outside brackets, keeping offsets."""
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((start, text[start:k]))
            start = k + 1
    parts.append((start, text[start:]))
    return parts


class TheoryParser:
    def __init__(self, text: str, signature=None):
        self.text = text
        self.theory = Theory(signature=signature.copy() if signature else Signature())
        self._line_offsets = [0]
        for k, ch in enumerate(text):
            if ch == "\n":
                self._line_offsets.append(k + 1)

    def error(self, message, lineno, col=0):
        offset = self._line_offsets[lineno - 1] + col
        return DalSyntaxError(message, offset, lineno, col + 1)

    def parse(self) -> Theory:
        lines = self.text.split("\n")
        has_decl = any(_strip_comment(l).split()[:1] and _strip_comment(l).split()[0]
                       in ("const", "pred", "action", "func") for l in lines)
        self.theory.declared = has_decl or bool(self.theory.signature.preds)
        case = None
        for lineno, raw in enumerate(lines, start=1):
            line = _strip_comment(raw)
            if not line.strip():
                continue
            indent = len(line) - len(line.lstrip())
            stripped = line.strip()
            if case is None and stripped.startswith("case "):
                m = re.match(r"case\s+([A-Za-z0-9_\-]+)\s*\{(.*)$", stripped)
                if not m:
                    raise self.error("malformed case header, expected 'case NAME {'", lineno, indent)
                case = Case(m.group(1), line=lineno)
                rest = m.group(2)
                col = indent + stripped.index("{") + 1
                closed = rest.rstrip().endswith("}")
                if closed:
                    rest = rest.rstrip()[:-1]
                for off, piece in _split_top(rest):
                    if piece.strip():
                        self.statement(piece, lineno, col + off, case)
                if closed:
                    self.theory.cases.append(case)
                    case = None
                continue
            if case is not None:
                closed = stripped.endswith("}")
                body = line.rstrip()
                if closed:
                    body = body[: body.rfind("}")]
                for off, piece in _split_top(body):
                    if piece.strip():
                        self.statement(piece, lineno, off, case)
                if closed:
                    self.theory.cases.append(case)
                    case = None
                continue
            self.statement(line, lineno, 0, None)
        if case is not None:
            raise self.error(f"case {case.name} is not closed with '}}'", case.line)
        problems = self.theory.signature.problems()
        if problems:
            raise DalSyntaxError("; ".join(problems))
        return self.theory

    def statement(self, text, lineno, col, case):
        lead = len(text) - len(text.lstrip())
        text = text.strip()
        col += lead
        kw, _, rest = text.partition(" ")
        rest_col = col + len(kw) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        sig = self.theory.signature
        if kw in ("const", "pred", "action", "func", "sort", "fluent", "infinitesimal") and case is not None:
            raise self.error(f"'{kw}' declarations are not allowed inside a case", lineno, col)
        if kw == "sort":
            for s in _names(rest):
                if s not in SORTS:
                    raise self.error(f"unknown sort {s!r} (only obj and time)", lineno, rest_col)
        elif kw == "const":
            names, _, sort = rest.partition(":")
            sort = sort.strip() or OBJ
            if sort not in SORTS:
                raise self.error(f"unknown sort {sort!r}", lineno, rest_col)
            for n in _names(names):
                (sig.add_time if sort == TIME else sig.add_object)(n)
        elif kw in ("pred", "action", "func"):
            for decl in _split_decls(rest):
                m = _DECL.match(decl.strip())
                if not m:
                    raise self.error(f"malformed {kw} declaration {decl.strip()!r}", lineno, rest_col)
                sorts = tuple(_names(m.group(2) or ""))
                for s in sorts:
                    if s not in SORTS:
                        raise self.error(f"unknown sort {s!r}", lineno, rest_col)
                table = {"pred": sig.preds, "action": sig.actions, "func": sig.functions}[kw]
                table[m.group(1)] = sorts
        elif kw == "fluent":
            for n in _names(rest):
                if n not in sig.preds:
                    raise self.error(f"fluent {n} is not a declared predicate", lineno, rest_col)
                if TIME not in sig.preds[n]:
                    raise self.error(f"fluent {n} has no time argument", lineno, rest_col)
                if n not in self.theory.fluents:
                    self.theory.fluents.append(n)
        elif kw == "infinitesimal":
            for n in _names(rest):
                if n not in sig.times:
                    sig.add_time(n)
                if n not in self.theory.infinitesimals:
                    self.theory.infinitesimals.append(n)
        elif kw == "bind":
            name, eq, value = rest.partition("=")
            name = name.strip()
            if not eq or not name:
                raise self.error("expected 'bind NAME = VALUE'", lineno, rest_col)
            if name not in sig.times:
                raise self.error(f"bind: {name} is not a declared time constant", lineno, rest_col)
            try:
                expr = FormulaParser(value.strip(), sig, strict=True).parse_time()
                q = expr.value
            except (ValueError, DalSyntaxError):
                raise self.error(f"bind: value of {name} must be a rational number", lineno, rest_col)
            (case.bindings if case is not None else self.theory.bindings)[name] = q
        elif kw in STATEMENT_KINDS:
            label = None
            m = _LABEL.match(rest)
            if m:
                label = m.group(1)
                rest_col += m.end()
                rest = rest[m.end():]
            strict = self.theory.declared
            free = kw in ("axiom", "law")
            base = self._line_offsets[lineno - 1] + rest_col
            entry = "parse_action" if kw == "occurs" else "parse_formula"
            formula = parse_with_hints(rest, sig, strict, entry, free_variables=free,
                                       base_offset=base, base_text=self.text)
            if kw == "constraint" and not isinstance(formula, Compare):
                raise self.error("constraint must be a time comparison", lineno, rest_col)
            st = Statement(kw, formula, label, lineno)
            (case.statements if case is not None else self.theory.statements).append(st)
        else:
            raise self.error(f"unknown statement {kw!r}", lineno, col)


def _names(text):
    return [n.strip() for n in text.replace(",", " ").split() if n.strip()]


def _split_decls(text):
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def parse_theory(text: str, signature=None) -> Theory:
    return TheoryParser(text, signature).parse()


def load_theory(path) -> Theory:
    with open(path, encoding="utf-8") as fh:
        return parse_theory(fh.read())


def render_theory(th: Theory) -> str:
    """Canonical text of a theory; comments and layout are not preserved."""
    sig = th.signature
    out = []
    if sig.objects:
        out.append(f"const {', '.join(sig.objects)} : obj")
    times = [n for n in sig.times if n not in th.infinitesimals]
    if times:
        out.append(f"const {', '.join(times)} : time")
    if th.infinitesimals:
        out.append(f"infinitesimal {', '.join(th.infinitesimals)}")
    for kw, table in (("func", sig.functions), ("pred", sig.preds), ("action", sig.actions)):
        for name, sorts in table.items():
            out.append(f"{kw} {name}({', '.join(sorts)})" if sorts else f"{kw} {name}")
    if th.fluents:
        out.append(f"fluent {', '.join(th.fluents)}")
    for name, q in th.bindings.items():
        out.append(f"bind {name} = {render_number(q)}")
    for st in th.statements:
        out.append(st.render())
    for case in th.cases:
        out.append(f"case {case.name} {{")
        for name, q in case.bindings.items():
            out.append(f"  bind {name} = {render_number(q)}")
        for st in case.statements:
            out.append("  " + st.render())
        out.append("}")
    return "\n".join(out) + "\n"
