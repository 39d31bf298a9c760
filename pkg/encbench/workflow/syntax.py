"""Concrete syntax of source and target terms.

Source grammar, loosest binding first::

    par     := choice ( '|[' names? ']|' choice )*
    choice  := sum ( '|~|' sum )*
    sum     := hide ( '[]' hide )*
    hide    := unary ( '/' name )*
    unary   := 'rn' '{' name '->' name (',' ...)* '}' unary | prefix
    prefix  := name '->' unary | atom
    atom    := STOP | DIV | TICK | VAR | 'mu' VAR '.' par | '(' par ')'

Action names start with a lowercase letter, process variables with an
uppercase one. Variables that are not bound by `mu` are looked up in the
definitions passed to `parse_source`.

Target grammar::

    proc    := item ( '|' item )*
    item    := '(' 'new' names ')' item | name '(' names? ')' '.' item
             | '!' name '(' names? ')' '.' item | name '<' names? '>'
             | '[' name '=' name ']' item | '0' | TICK | '(' proc ')'
"""

from __future__ import annotations

import re
from typing import Mapping, NamedTuple

from encbench.calculus import ccs, csp
from encbench.calculus.errors import SourceSyntaxError
from encbench.calculus.names import Name, source_name


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


SOURCE_TOKENS = re.compile(
    r"(?P<ws>\s+)|(?P<comment>--[^\n]*)"
    r"|(?P<op>\|\[|\]\||\|~\||\[\]|->|[(){},./])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
)
TARGET_TOKENS = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<op>[()<>\[\]=!.,|])"
    r"|(?P<ident>[A-Za-z_0-9][A-Za-z0-9_'#]*)"
)
KEYWORDS = {"STOP", "DIV", "TICK", "mu", "rn"}


def tokenize(text: str, pattern: re.Pattern) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = pattern.match(text, pos)
        if match is None:
            raise SourceSyntaxError(f"Unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == "op" or kind == "ident":
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        for offset, char in enumerate(match.group()):
            if char == "\n":
                line, line_start = line + 1, pos + offset + 1
        pos = match.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, pattern: re.Pattern):
        self.tokens = tokenize(text, pattern)
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def at(self, *texts: str) -> bool:
        return self.peek.kind != "end" and self.peek.text in texts

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, message: str, token: Token | None = None) -> SourceSyntaxError:
        token = token or self.peek
        found = repr(token.text) if token.kind != "end" else "end of input"
        return SourceSyntaxError(f"{message}, found {found}", token.line, token.column)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"Expected {text!r}")
        return self.advance()

    def ident(self, what: str = "a name") -> Token:
        if self.peek.kind != "ident":
            raise self.error(f"Expected {what}")
        return self.advance()

    def finish(self) -> None:
        if self.peek.kind != "end":
            raise self.error("Unexpected trailing input")


# ---------------------------------------------------------------------------
# Source terms


def _is_action(token: Token) -> bool:
    return token.kind == "ident" and token.text[0].islower() and token.text not in KEYWORDS


def _is_variable(token: Token) -> bool:
    return token.kind == "ident" and token.text[0].isupper() and token.text not in KEYWORDS


class SourceParser(_Parser):
    def __init__(self, text: str, definitions: Mapping[str, csp.SourceProcess]):
        super().__init__(text, SOURCE_TOKENS)
        self.definitions = definitions
        self.bound: list[str] = []

    def action(self) -> Name:
        token = self.peek
        if not _is_action(token):
            raise self.error("Expected an action name (lowercase identifier)")
        self.advance()
        return source_name(token.text)

    def names(self, closing: str) -> list[Name]:
        names: list[Name] = []
        while not self.at(closing):
            if names:
                self.expect(",")
            names.append(self.action())
        self.advance()
        return names

    def parse(self) -> csp.SourceProcess:
        p = self.par()
        self.finish()
        return p

    def par(self) -> csp.SourceProcess:
        p = self.choice()
        while self.at("|["):
            self.advance()
            sync = frozenset(self.names("]|"))
            p = csp.Par(p, self.choice(), sync)
        return p

    def choice(self) -> csp.SourceProcess:
        p = self.sum()
        while self.at("|~|"):
            self.advance()
            p = csp.IntChoice(p, self.sum())
        return p

    def sum(self) -> csp.SourceProcess:
        start = self.peek
        p = self.hide()
        if not self.at("[]"):
            return p
        branches = list(self._branches(p, start))
        while self.at("[]"):
            self.advance()
            start = self.peek
            branches.extend(self._branches(self.hide(), start))
        return csp.ExtSum(tuple(branches))

    def _branches(self, p: csp.SourceProcess, start: Token) -> tuple:
        if not isinstance(p, csp.ExtSum):
            raise self.error("External choice takes prefixes on both sides", start)
        return p.branches

    def hide(self) -> csp.SourceProcess:
        p = self.unary()
        while self.at("/"):
            self.advance()
            p = csp.Conceal(p, self.action())
        return p

    def unary(self) -> csp.SourceProcess:
        if not self.at("rn"):
            return self.prefix()
        self.advance()
        self.expect("{")
        mapping = []
        while not self.at("}"):
            if mapping:
                self.expect(",")
            x = self.action()
            self.expect("->")
            mapping.append((x, self.action()))
        self.advance()
        return csp.Rename(self.unary(), tuple(mapping))

    def prefix(self) -> csp.SourceProcess:
        if _is_action(self.peek):
            action = self.action()
            self.expect("->")
            return csp.prefix(action, self.unary())
        return self.atom()

    def atom(self) -> csp.SourceProcess:
        token = self.peek
        if token.text == "STOP":
            self.advance()
            return csp.Stop()
        if token.text == "DIV":
            self.advance()
            return csp.Div()
        if token.text == "TICK":
            self.advance()
            return csp.Success()
        if token.text == "mu":
            self.advance()
            var = self.ident("a process variable")
            if not _is_variable(var):
                raise self.error("Expected a process variable (uppercase identifier)", var)
            self.expect(".")
            self.bound.append(var.text)
            try:
                body = self.par()
            finally:
                self.bound.pop()
            return csp.Mu(var.text, body)
        if token.text == "(" and token.kind == "op":
            self.advance()
            p = self.par()
            self.expect(")")
            return p
        if _is_variable(token):
            self.advance()
            if token.text in self.bound:
                return csp.Var(token.text)
            if token.text in self.definitions:
                return self.definitions[token.text]
            raise SourceSyntaxError(
                f"Unbound process variable {token.text}", token.line, token.column
            )
        raise self.error("Expected a process")


def parse_source(
    text: str, definitions: Mapping[str, str | csp.SourceProcess] | None = None
) -> csp.SourceProcess:
    """Parse a source term; `definitions` maps uppercase names to terms or their text.

    A definition may use the ones listed before it.
    """
    resolved: dict[str, csp.SourceProcess] = {}
    for name, body in (definitions or {}).items():
        if not name[:1].isupper():
            raise ValueError(f"Definition name {name!r} must start with an uppercase letter")
        resolved[name] = parse_source(body, resolved) if isinstance(body, str) else body
    p = SourceParser(text, resolved).parse()
    csp.check_well_formed(p)
    return p


# Binding strength of the printed forms; a child printed below its slot is parenthesized.
PAR, CHOICE, SUM, HIDE, UNARY, PREFIX, ATOM = range(7)


def _wrap(text: str, level: int, slot: int) -> str:
    return f"({text})" if level < slot else text


def _source(p: csp.SourceProcess, slot: int = PAR) -> str:
    match p:
        case csp.Stop():
            return "STOP"
        case csp.Div():
            return "DIV"
        case csp.Success():
            return "TICK"
        case csp.Var(var):
            return var
        case csp.Mu(var, body):
            return _wrap(f"mu {var} . {_source(body)}", PAR, slot)
        case csp.Par(left, right, sync):
            names = ", ".join(sorted(n.ident for n in sync))
            return _wrap(f"{_source(left, PAR)} |[{names}]| {_source(right, CHOICE)}", PAR, slot)
        case csp.IntChoice(left, right):
            return _wrap(f"{_source(left, CHOICE)} |~| {_source(right, SUM)}", CHOICE, slot)
        case csp.ExtSum(branches) if len(branches) == 1:
            (a, q), = branches
            return _wrap(f"{a} -> {_source(q, UNARY)}", PREFIX, slot)
        case csp.ExtSum(branches):
            text = " [] ".join(f"{a} -> {_source(q, UNARY)}" for a, q in branches)
            return _wrap(text, SUM, slot)
        case csp.Conceal(body, hidden):
            return _wrap(f"{_source(body, HIDE)} / {hidden}", HIDE, slot)
        case csp.Rename(body, mapping):
            pairs = ", ".join(f"{x} -> {y}" for x, y in mapping)
            return _wrap(f"rn {{{pairs}}} {_source(body, UNARY)}", UNARY, slot)
    raise TypeError(f"Not a source process: {p!r}")


def print_source(p: csp.SourceProcess) -> str:
    return _source(p)


# ---------------------------------------------------------------------------
# Target terms


class TargetParser(_Parser):
    def __init__(self, text: str):
        super().__init__(text, TARGET_TOKENS)

    def name(self) -> Name:
        token = self.peek
        if token.kind != "ident" or token.text in ("new", "TICK", "0"):
            raise self.error("Expected a channel name")
        self.advance()
        return source_name(token.text)

    def names(self, closing: str) -> tuple[Name, ...]:
        names: list[Name] = []
        while not self.at(closing):
            if names:
                self.expect(",")
            names.append(self.name())
        self.advance()
        return tuple(names)

    def parse(self) -> ccs.TargetProcess:
        t = self.proc()
        self.finish()
        return t

    def proc(self) -> ccs.TargetProcess:
        item = self.item()
        if not self.at("|"):
            return item
        self.advance()
        return ccs.Par(item, self.proc())

    def item(self) -> ccs.TargetProcess:
        token = self.peek
        if token.text == "(":
            self.advance()
            if self.at("new"):
                self.advance()
                names = self.names(")")
                if not names:
                    raise self.error("Restriction needs at least one name", token)
                return ccs.Res(names, self.item())
            t = self.proc()
            self.expect(")")
            return t
        if token.text == "!":
            self.advance()
            chan = self.name()
            self.expect("(")
            params = self.names(")")
            self.expect(".")
            return ccs.RepInput(chan, params, self.item())
        if token.text == "[":
            self.advance()
            x = self.name()
            self.expect("=")
            y = self.name()
            self.expect("]")
            return ccs.Match(x, y, self.item())
        if token.text == "0":
            self.advance()
            return ccs.Nil()
        if token.text == "TICK":
            self.advance()
            return ccs.Success()
        chan = self.name()
        if self.at("<"):
            self.advance()
            return ccs.Output(chan, self.names(">"))
        self.expect("(")
        params = self.names(")")
        self.expect(".")
        return ccs.Input(chan, params, self.item())


def parse_target(text: str) -> ccs.TargetProcess:
    t = TargetParser(text).parse()
    ccs.check_params(t)
    return t


def _names(names: tuple[Name, ...]) -> str:
    return ",".join(n.ident for n in names)


def _target(t: ccs.TargetProcess, top: bool = True) -> str:
    match t:
        case ccs.Nil():
            return "0"
        case ccs.Success():
            return "TICK"
        case ccs.Output(chan, args):
            return f"{chan}<{_names(args)}>"
        case ccs.Input(chan, params, body):
            return f"{chan}({_names(params)}).{_target(body, False)}"
        case ccs.RepInput(chan, params, body):
            return f"!{chan}({_names(params)}).{_target(body, False)}"
        case ccs.Match(x, y, body):
            return f"[{x}={y}]{_target(body, False)}"
        case ccs.Res(names, body):
            return f"(new {_names(names)}) {_target(body, False)}"
        case ccs.Par(left, right):
            text = f"{_target(left, False)} | {_target(right, True)}"
            return text if top else f"({text})"
    raise TypeError(f"Not a target process: {t!r}")


def print_target(t: ccs.TargetProcess) -> str:
    return _target(t)
