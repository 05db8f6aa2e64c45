"""Minimal s-expression reader with source positions.

Shared by the PDDL parser and the ethical-rules dialect parser. Comments
run from ';' to end of line. Double-quoted strings are single atoms and
may contain whitespace and escaped quotes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    column: int
    is_string: bool = False

    def lower(self) -> str:
        return self.text.lower()


@dataclass(frozen=True)
class SList:
    items: tuple = ()
    line: int = 0
    column: int = 0

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]


Node = Atom | SList

_DELIMS = "()\";"


def tokenize(text: str) -> list[Atom]:
    """Split text into atoms and parenthesis markers, tracking positions."""
    tokens: list[Atom] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append(Atom(ch, line, col))
            col += 1
            i += 1
        elif ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf = []
            while i < n and text[i] != '"':
                c = text[i]
                if c == "\\" and i + 1 < n:
                    i += 1
                    col += 1
                    c = text[i]
                if c == "\n":
                    line += 1
                    col = 0
                buf.append(c)
                i += 1
                col += 1
            if i >= n:
                raise ParseError("unterminated string", start_line, start_col)
            i += 1
            col += 1
            tokens.append(Atom("".join(buf), start_line, start_col, is_string=True))
        else:
            start_line, start_col = line, col
            j = i
            while j < n and not text[j].isspace() and text[j] not in _DELIMS:
                j += 1
            tokens.append(Atom(text[i:j], start_line, start_col))
            col += j - i
            i = j
    return tokens


def read_all(text: str) -> list[Node]:
    """Parse text into a list of top-level s-expression nodes."""
    tokens = tokenize(text)
    forms: list[Node] = []
    stack: list[tuple[list[Node], int, int]] = []
    for tok in tokens:
        if tok.text == "(" and not tok.is_string:
            stack.append(([], tok.line, tok.column))
        elif tok.text == ")" and not tok.is_string:
            if not stack:
                raise ParseError("unbalanced ')'", tok.line, tok.column)
            items, ln, co = stack.pop()
            node = SList(tuple(items), ln, co)
            if stack:
                stack[-1][0].append(node)
            else:
                forms.append(node)
        else:
            if stack:
                stack[-1][0].append(tok)
            else:
                forms.append(tok)
    if stack:
        _, ln, co = stack[-1]
        raise ParseError("unbalanced '('", ln, co)
    return forms


def escape_string(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def expect_list(node: Node, what: str) -> SList:
    if not isinstance(node, SList):
        raise ParseError(f"expected {what}, got '{node.text}'", node.line, node.column)
    return node


def expect_atom(node: Node, what: str) -> Atom:
    if not isinstance(node, Atom):
        raise ParseError(f"expected {what}, got a list", node.line, node.column)
    return node
