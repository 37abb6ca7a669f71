"""A minimal CCS term language and its expansion into finite LTSs.

The surface syntax::

    Def  ::= Name "=" Proc ";"
    Proc ::= "0" | Act "." Proc | Proc "+" Proc | Proc "|" Proc
           | Proc "\\" "{" Name ("," Name)* "}" | Name | "(" Proc ")"
    Act  ::= Name | "'" Name | "tau"

``'a`` is the co-action of ``a``; ``#`` starts a comment running to the end
of the line.  Prefix binds tighter than restriction, restriction tighter
than parallel, parallel tighter than choice; ``+`` and ``|`` associate left.

Expansion states are reachable terms compared structurally (no structural
congruence, no merging of distinct deadlocked terms).  Parallel components
interleave, and an action synchronizes with its co-action into an internal
step; restriction blocks both polarities of the restricted names.  At the
LTS level a surviving co-action ``'a`` is rendered as the visible name
``a!``, since action names cannot contain the quote character.
"""

import re
from collections import deque
from dataclasses import dataclass

from .errors import ParseError, StateBudgetError
from .lts import Action, Lts, TAU

DEFAULT_MAX_STATES = 10_000

_CO_SUFFIX = "!"


def co_name(name: str) -> str:
    """The LTS-level rendering of the co-action of a plain name."""
    return name + _CO_SUFFIX


def base_name(action: Action) -> str:
    """The plain name an action synchronizes/restricts under."""
    if action.is_tau:
        raise ValueError("the internal action has no base name")
    return action.name.removesuffix(_CO_SUFFIX)


def complement(action: Action) -> Action:
    if action.is_tau:
        raise ValueError("the internal action has no complement")
    if action.name.endswith(_CO_SUFFIX):
        return Action(action.name.removesuffix(_CO_SUFFIX))
    return Action(action.name + _CO_SUFFIX)


class CcsTerm:
    """Base class of the term variants below."""

    __slots__ = ()

    def __str__(self) -> str:
        return _render(self, 0)


@dataclass(frozen=True, slots=True)
class Nil(CcsTerm):
    pass


@dataclass(frozen=True, slots=True)
class Prefix(CcsTerm):
    action: Action
    continuation: CcsTerm


@dataclass(frozen=True, slots=True)
class Choice(CcsTerm):
    left: CcsTerm
    right: CcsTerm


@dataclass(frozen=True, slots=True)
class Parallel(CcsTerm):
    left: CcsTerm
    right: CcsTerm


@dataclass(frozen=True, slots=True)
class Restrict(CcsTerm):
    body: CcsTerm
    names: frozenset[str]


@dataclass(frozen=True, slots=True)
class Ident(CcsTerm):
    name: str


NIL = Nil()

# Printing precedence: choice < parallel < restriction < prefix/atoms.
_PREC = {Choice: 0, Parallel: 1, Restrict: 2, Prefix: 3, Nil: 4, Ident: 4}


def _act_str(action: Action) -> str:
    if action.is_tau:
        return "tau"
    if action.name.endswith(_CO_SUFFIX):
        return "'" + action.name.removesuffix(_CO_SUFFIX)
    return action.name


def _render(term: CcsTerm, context: int) -> str:
    prec = _PREC[type(term)]
    if isinstance(term, Nil):
        body = "0"
    elif isinstance(term, Ident):
        body = term.name
    elif isinstance(term, Prefix):
        body = f"{_act_str(term.action)}.{_render(term.continuation, prec)}"
    elif isinstance(term, Restrict):
        names = ", ".join(sorted(term.names))
        body = f"{_render(term.body, prec + 1)} \\ {{{names}}}"
    elif isinstance(term, Parallel):
        body = f"{_render(term.left, prec)} | {_render(term.right, prec + 1)}"
    elif isinstance(term, Choice):
        body = f"{_render(term.left, prec)} + {_render(term.right, prec + 1)}"
    else:  # pragma: no cover
        raise TypeError(f"unknown term {term!r}")
    return f"({body})" if prec < context else body


@dataclass(frozen=True)
class CcsProgram:
    """A set of named process definitions with all identifiers resolved."""

    definitions: dict[str, CcsTerm]


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<zero>0)|(?P<sym>[=.;+|\\{},()'])"
)

_RESERVED = {"tau"}


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # "name", "zero", "sym", "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        lexeme = m.group(0)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.ident_refs: list[_Token] = []

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == text:
            return self.advance()
        raise ParseError(
            f"expected {text!r} but found {tok.text or 'end of input'!r}",
            tok.line,
            tok.column,
        )

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.column)

    def at_sym(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == text

    # Program ::= Def*
    def parse_program(self) -> CcsProgram:
        definitions: dict[str, CcsTerm] = {}
        while self.peek().kind != "eof":
            name_tok = self.peek()
            if name_tok.kind != "name":
                raise self.fail("expected a definition name")
            if name_tok.text in _RESERVED:
                raise self.fail(f"{name_tok.text!r} is reserved and cannot be defined")
            if name_tok.text in definitions:
                raise ParseError(
                    f"duplicate definition of {name_tok.text!r}",
                    name_tok.line,
                    name_tok.column,
                )
            self.advance()
            self.expect("=")
            term = self.parse_proc()
            self.expect(";")
            definitions[name_tok.text] = term
        for ref in self.ident_refs:
            if ref.text not in definitions:
                raise ParseError(
                    f"unresolved identifier {ref.text!r}", ref.line, ref.column
                )
        return CcsProgram(definitions)

    # choice level (lowest precedence), left associative
    def parse_proc(self) -> CcsTerm:
        term = self.parse_parallel()
        while self.at_sym("+"):
            self.advance()
            term = Choice(term, self.parse_parallel())
        return term

    def parse_parallel(self) -> CcsTerm:
        term = self.parse_restrict()
        while self.at_sym("|"):
            self.advance()
            term = Parallel(term, self.parse_restrict())
        return term

    def parse_restrict(self) -> CcsTerm:
        term = self.parse_prefixed()
        while self.at_sym("\\"):
            self.advance()
            self.expect("{")
            names = [self.parse_plain_name()]
            while self.at_sym(","):
                self.advance()
                names.append(self.parse_plain_name())
            self.expect("}")
            term = Restrict(term, frozenset(names))
        return term

    def parse_plain_name(self) -> str:
        tok = self.peek()
        if tok.kind != "name" or tok.text in _RESERVED:
            raise self.fail("expected an action name")
        self.advance()
        return tok.text

    def parse_prefixed(self) -> CcsTerm:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "'":
            self.advance()
            name = self.parse_plain_name()
            self.expect(".")
            return Prefix(Action(co_name(name)), self.parse_prefixed())
        if tok.kind == "name" and tok.text == "tau":
            if not (self.peek(1).kind == "sym" and self.peek(1).text == "."):
                raise self.fail("'tau' must prefix a process, as in tau.P")
            self.advance()
            self.advance()
            return Prefix(TAU, self.parse_prefixed())
        if tok.kind == "name" and self.peek(1).kind == "sym" and self.peek(1).text == ".":
            self.advance()
            self.advance()
            return Prefix(Action(tok.text), self.parse_prefixed())
        return self.parse_atom()

    def parse_atom(self) -> CcsTerm:
        tok = self.peek()
        if tok.kind == "zero":
            self.advance()
            return NIL
        if tok.kind == "name":
            self.advance()
            self.ident_refs.append(tok)
            return Ident(tok.text)
        if tok.kind == "sym" and tok.text == "(":
            self.advance()
            term = self.parse_proc()
            self.expect(")")
            return term
        raise self.fail(f"expected a process but found {tok.text or 'end of input'!r}")


def parse_ccs(text: str) -> CcsProgram:
    """Parse a program in the CCS surface syntax described in the module docstring."""
    return _Parser(_tokenize(text)).parse_program()


# -- expansion ---------------------------------------------------------------


def _steps(term: CcsTerm, defs: dict[str, CcsTerm], unfolding: frozenset[str]):
    """Outgoing transitions of a term, in canonical derivation order.

    An identifier re-entered during its own unfolding contributes nothing:
    every derivable transition has a finite derivation, so this computes the
    least fixed point without looping on unguarded recursion.
    """
    if isinstance(term, Nil):
        return []
    if isinstance(term, Prefix):
        return [(term.action, term.continuation)]
    if isinstance(term, Choice):
        return _steps(term.left, defs, unfolding) + _steps(term.right, defs, unfolding)
    if isinstance(term, Parallel):
        left_steps = _steps(term.left, defs, unfolding)
        right_steps = _steps(term.right, defs, unfolding)
        out = [(a, Parallel(l2, term.right)) for a, l2 in left_steps]
        out += [(a, Parallel(term.left, r2)) for a, r2 in right_steps]
        for a, l2 in left_steps:
            if a.is_visible:
                partner = complement(a)
                for b, r2 in right_steps:
                    if b == partner:
                        out.append((TAU, Parallel(l2, r2)))
        return out
    if isinstance(term, Restrict):
        return [
            (a, Restrict(k, term.names))
            for a, k in _steps(term.body, defs, unfolding)
            if a.is_tau or base_name(a) not in term.names
        ]
    if isinstance(term, Ident):
        if term.name in unfolding:
            return []
        return _steps(defs[term.name], defs, unfolding | {term.name})
    raise TypeError(f"unknown term {term!r}")  # pragma: no cover


def expand_ccs_roots(
    program: CcsProgram, roots: list[str], max_states: int = DEFAULT_MAX_STATES
) -> tuple[Lts, list[int]]:
    """Expand several definitions into one shared LTS, one initial state per root.

    Structurally identical reachable terms are shared between the roots, so
    the result is suitable for comparing two processes of one program.
    """
    for root in roots:
        if root not in program.definitions:
            raise KeyError(f"no definition named {root!r}")

    index: dict[CcsTerm, int] = {}
    queue: deque[CcsTerm] = deque()

    def intern(term: CcsTerm) -> int:
        idx = index.get(term)
        if idx is None:
            if len(index) >= max_states:
                raise StateBudgetError(max_states)
            idx = len(index)
            index[term] = idx
            queue.append(term)
        return idx

    initials = [intern(Ident(root)) for root in roots]
    edges = []
    while queue:
        term = queue.popleft()
        src = index[term]
        emitted = set()
        for action, target in _steps(term, program.definitions, frozenset()):
            if (action, target) in emitted:
                continue
            emitted.add((action, target))
            edges.append((src, action, intern(target)))

    names = {idx: str(term) for term, idx in index.items()}
    return Lts(len(index), edges, names), initials


def expand_ccs(
    program: CcsProgram, root: str, max_states: int = DEFAULT_MAX_STATES
) -> tuple[Lts, int]:
    """Expand one definition into its reachable LTS; returns the initial state."""
    lts, initials = expand_ccs_roots(program, [root], max_states)
    return lts, initials[0]
