"""Tiny s-expression reader shared by the term, state, formula and proof
surface syntaxes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

SExpr = Union[str, int, list]


class SyntaxError_(Exception):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


@dataclass
class _Token:
    text: str
    position: int


_PUNCT = "()" + "{}"


def tokenize(src: str) -> list[_Token]:
    out: list[_Token] = []
    i = 0
    while i < len(src):
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c == ";":
            while i < len(src) and src[i] != "\n":
                i += 1
            continue
        if c in _PUNCT:
            out.append(_Token(c, i))
            i += 1
            continue
        j = i
        while j < len(src) and not src[j].isspace() and src[j] not in _PUNCT and src[j] != ";":
            j += 1
        out.append(_Token(src[i:j], i))
        i = j
    return out


def parse_all(src: str) -> list[SExpr]:
    tokens = tokenize(src)
    items: list[SExpr] = []
    pos = 0
    while pos < len(tokens):
        item, pos = _parse(tokens, pos)
        items.append(item)
    return items


def parse_one(src: str) -> SExpr:
    items = parse_all(src)
    if len(items) != 1:
        raise SyntaxError_(f"expected exactly one expression, found {len(items)}", 0)
    return items[0]


def _parse(tokens: list[_Token], pos: int) -> tuple[SExpr, int]:
    if pos >= len(tokens):
        raise SyntaxError_("unexpected end of input", tokens[-1].position if tokens else 0)
    tok = tokens[pos]
    if tok.text == "(" or tok.text == "{":
        close = ")" if tok.text == "(" else "}"
        items: list[SExpr] = [] if tok.text == "(" else ["#braces"]
        pos += 1
        while True:
            if pos >= len(tokens):
                raise SyntaxError_("unclosed parenthesis", tok.position)
            if tokens[pos].text == close:
                return items, pos + 1
            if tokens[pos].text in (")", "}"):
                raise SyntaxError_("mismatched bracket", tokens[pos].position)
            item, pos = _parse(tokens, pos)
            items.append(item)
    if tok.text in (")", "}"):
        raise SyntaxError_("unexpected closing bracket", tok.position)
    if tok.text.isdigit():
        return int(tok.text), pos + 1
    return tok.text, pos + 1


def unparse(e: SExpr) -> str:
    if isinstance(e, int):
        return str(e)
    if isinstance(e, str):
        return e
    if e and e[0] == "#braces":
        return "{" + " ".join(unparse(x) for x in e[1:]) + "}"
    return "(" + " ".join(unparse(x) for x in e) + ")"
