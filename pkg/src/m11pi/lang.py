"""Bracket-notation parser/printer and the identity-file format.

Grammar (ASCII; ``·`` or ``*`` separates a coefficient)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := [coeff ('·'|'*')] bracket
    coeff   := int ['/' int]
    bracket := '[' item (',' item)+ ']'
    item    := (bracket | var) ['^' '(' int ')']
    var     := letter digits?

``[a1,...,an]`` is left-normalised and ``z^(m)`` repeats ``z`` m times.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .freelie import Bracket, LiePoly, LieTerm, Var, ZeroTermWarning, has_square, lnorm, spine
from .scalars import Field, QQ


class ParseError(ValueError):
    def __init__(self, message: str, pos: int = 0, text: str = "", line: int | None = None):
        self.message = message
        self.pos = pos
        self.text = text
        self.line = line
        where = f"line {line}, " if line is not None else ""
        super().__init__(f"{where}col {pos + 1}: {message}")

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.pos}^"


Span = Tuple[int, int]


@dataclass(frozen=True)
class SVar:
    name: str
    span: Span = (0, 0)


@dataclass(frozen=True)
class SItem:
    node: Union["SBracket", SVar]
    power: int = 1
    span: Span = (0, 0)


@dataclass(frozen=True)
class SBracket:
    items: Tuple[SItem, ...]
    span: Span = (0, 0)


@dataclass(frozen=True)
class STerm:
    coeff: Fraction
    bracket: SBracket
    span: Span = (0, 0)


@dataclass(frozen=True)
class SourceExpr:
    terms: Tuple[STerm, ...]
    text: str = ""

    def strip_spans(self):
        """Span-free copy, for structural comparison."""

        def b(x: SBracket):
            return SBracket(tuple(i_(i) for i in x.items))

        def i_(it: SItem):
            node = SVar(it.node.name) if isinstance(it.node, SVar) else b(it.node)
            return SItem(node, it.power)

        return tuple(STerm(t.coeff, b(t.bracket)) for t in self.terms)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[A-Za-z]\d*)|(?P<sym>[\[\],^()+\-/*·=]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: List[Tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while pos < n:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                ch = text[pos]
                if ch in "−–—":
                    raise ParseError("non-ASCII minus sign; use '-'", pos, text)
                raise ParseError(f"unexpected character {ch!r}", pos, text)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def at(self, sym: str) -> bool:
        t = self.peek()
        return t is not None and t[0] == "sym" and t[1] == sym

    def pos(self) -> int:
        t = self.peek()
        return t[2] if t else len(self.text)

    def expect(self, sym: str):
        if not self.at(sym):
            t = self.peek()
            got = repr(t[1]) if t else "end of input"
            raise ParseError(f"expected {sym!r}, got {got}", self.pos(), self.text)
        self.i += 1

    def error(self, msg: str):
        raise ParseError(msg, self.pos(), self.text)

    # grammar ---------------------------------------------------------------

    def expr(self) -> SourceExpr:
        terms = []
        sign = 1
        if self.at("+") or self.at("-"):
            sign = -1 if self.at("-") else 1
            self.i += 1
        terms.append(self.term(sign))
        while self.at("+") or self.at("-"):
            sign = -1 if self.at("-") else 1
            self.i += 1
            terms.append(self.term(sign))
        return SourceExpr(tuple(terms), self.text)

    def term(self, sign: int) -> STerm:
        start = self.pos()
        coeff = Fraction(1)
        t = self.peek()
        if t and t[0] == "num":
            self.i += 1
            num = int(t[1])
            den = 1
            if self.at("/"):
                self.i += 1
                t2 = self.peek()
                if not t2 or t2[0] != "num":
                    self.error("expected denominator")
                self.i += 1
                den = int(t2[1])
                if den == 0:
                    raise ParseError("zero denominator", t2[2], self.text)
            coeff = Fraction(num, den)
            if self.at("·") or self.at("*"):
                self.i += 1
            else:
                self.error("expected '·' or '*' after coefficient")
        b = self.bracket()
        return STerm(sign * coeff, b, (start, b.span[1]))

    def bracket(self) -> SBracket:
        start = self.pos()
        self.expect("[")
        items = [self.item()]
        while self.at(","):
            self.i += 1
            items.append(self.item())
        end = self.pos() + 1
        self.expect("]")
        if len(items) == 1 and items[0].power == 1:
            raise ParseError("a bracket needs at least two items", start, self.text)
        return SBracket(tuple(items), (start, end))

    def item(self) -> SItem:
        start = self.pos()
        t = self.peek()
        if t is None:
            self.error("unexpected end of input")
        if t[0] == "var":
            self.i += 1
            node: Union[SBracket, SVar] = SVar(t[1], (t[2], t[2] + len(t[1])))
        elif self.at("["):
            node = self.bracket()
        else:
            self.error(f"expected a variable or '[', got {t[1]!r}")
        power = 1
        if self.at("^"):
            self.i += 1
            self.expect("(")
            t = self.peek()
            if not t or t[0] != "num":
                self.error("expected a power")
            self.i += 1
            power = int(t[1])
            if power < 1:
                raise ParseError("power must be >= 1", t[2], self.text)
            self.expect(")")
        return SItem(node, power, (start, self.pos()))


def parse_source(text: str) -> SourceExpr:
    p = _Parser(text)
    if p.peek() is None:
        raise ParseError("empty expression", 0, text)
    e = p.expr()
    if p.peek() is not None:
        p.error(f"unexpected {p.peek()[1]!r}")
    return e


def _to_term(b: SBracket) -> LieTerm:
    items: List[LieTerm] = []
    for it in b.items:
        node = Var(it.node.name) if isinstance(it.node, SVar) else _to_term(it.node)
        items.extend([node] * it.power)
    return lnorm(*items)


def source_to_poly(src: SourceExpr, field: Field = QQ) -> LiePoly:
    pairs = []
    for t in src.terms:
        term = _to_term(t.bracket)
        if has_square(term):
            warnings.warn(f"term {src.text[t.span[0]:t.span[1]]!r} contains [s,s] and is zero", ZeroTermWarning, stacklevel=3)
        pairs.append((t.coeff, term))
    return LiePoly(field, pairs)


def parse(text: str, field: Field = QQ) -> LiePoly:
    if text.strip() == "0":
        return LiePoly.zero(field)
    return source_to_poly(parse_source(text), field)


def parse_term(text: str) -> LieTerm:
    src = parse_source(text)
    if len(src.terms) != 1 or src.terms[0].coeff != 1:
        raise ParseError("expected a single bracket monomial", 0, text)
    return _to_term(src.terms[0].bracket)


# ---------------------------------------------------------------------------
# printing


def _runs(items: List[str]) -> str:
    out = [items[0]]
    i = 1
    while i < len(items):
        j = i
        while j + 1 < len(items) and items[j + 1] == items[i]:
            j += 1
        m = j - i + 1
        out.append(items[i] if m == 1 else f"{items[i]}^({m})")
        i = j + 1
    return "[" + ",".join(out) + "]"


def format_term(t: LieTerm) -> str:
    """Left-normalised display with ``^(m)`` for repeated items after the
    first position."""
    if isinstance(t, Var):
        return t.name
    return _runs([format_term(i) for i in spine(t)])


def _format_source_bracket(b: SBracket) -> str:
    parts = []
    for it in b.items:
        s = it.node.name if isinstance(it.node, SVar) else _format_source_bracket(it.node)
        parts.append(s if it.power == 1 else f"{s}^({it.power})")
    return "[" + ",".join(parts) + "]"


def format_source(src: SourceExpr) -> str:
    chunks = []
    for k, t in enumerate(src.terms):
        c = t.coeff
        neg = c < 0
        mag = -c if neg else c
        body = _format_source_bracket(t.bracket)
        if mag != 1:
            body = f"{mag}·{body}"
        if k == 0:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


def format_poly(f: LiePoly) -> str:
    if not f.terms:
        return "0"
    F = f.field
    chunks = []
    for k, (t, c) in enumerate(f.terms.items()):
        neg = F.p is None and c < 0
        mag = -c if neg else c
        cs = F.fmt_short(mag)
        body = format_term(t)
        if cs != "1":
            body = f"{cs}·{body}"
        if k == 0:
            chunks.append(("-" if neg else "") + body)
        else:
            chunks.append((" - " if neg else " + ") + body)
    return "".join(chunks)


# ---------------------------------------------------------------------------
# identity files

_NAME = re.compile(r"^\s*([A-Za-z_][\w\-\.]*)\s*:\s*(.*)$")


class IdentityFileError(ValueError):
    pass


def parse_identity_text(text: str, field: Field = QQ, source: str = "<text>") -> Dict[str, LiePoly]:
    out: Dict[str, LiePoly] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _NAME.match(line)
        if not m:
            raise IdentityFileError(f"{source}:{lineno}: expected 'name: expr = 0'")
        name, body = m.groups()
        body = body.strip()
        if body.endswith("= 0") or body.endswith("=0"):
            body = body[: body.rindex("=")].rstrip()
        if name in out:
            raise IdentityFileError(f"{source}:{lineno}: duplicate identity name {name!r}")
        try:
            out[name] = parse(body, field)
        except ParseError as e:
            raise IdentityFileError(f"{source}:{lineno}: {e}") from e
    return out


def parse_identity_file(path, field: Field = QQ) -> Dict[str, LiePoly]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_identity_text(text, field, str(path))
