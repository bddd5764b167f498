"""Reading and writing ``.facts`` files.

The accepted grammar is a ground subset of ASP fact syntax::

    file    := { fact | comment }
    fact    := atom "."
    atom    := ident "(" argList ")" | ident
    argList := arg { "," arg }
    arg     := int | int ".." int | atom
    comment := "%" ... end-of-line

Intervals expand to one atom per integer, so ``person(1..2).`` yields
``person(1)`` and ``person(2)``.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Union

log = logging.getLogger(__name__)

Term = Union[int, "Atom"]


class Atom(NamedTuple):
    predicate: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"

    def depth(self) -> int:
        return 1 + max((a.depth() for a in self.args if isinstance(a, Atom)), default=0)


def atom(predicate: str, *args: Term) -> Atom:
    return Atom(predicate, tuple(args))


# Wrappers take one nested atom; everything else takes integers only.
WRAPPERS = frozenset({"legacyConfig", "reuse", "delete", "create"})

SCHEMA = {
    "person": 1,
    "thing": 1,
    "personTOthing": 2,
    "thingLong": 1,
    "thingShort": 1,
    "cabinet": 1,
    "room": 1,
    "cabinetTOthing": 2,
    "roomTOcabinet": 2,
    "personTOroom": 2,
    "cabinetHigh": 1,
    "cabinetSmall": 1,
}

CONTROL = {
    "cabinetDomain": 1,
    "cabinetDomainNew": 1,
    "roomDomain": 1,
    "roomDomainNew": 1,
    "cabinetLower": 1,
    "cabinetUpper": 1,
    "roomLower": 1,
    "roomUpper": 1,
    "noCabinetAlteration": 0,
    "totalCost": 1,
}

COST_PREDICATES = frozenset(
    {
        "cabinetCost",
        "cabinetSmallCost",
        "cabinetHighCost",
        "roomCost",
        "cabinetTOthingCost",
        "roomTOcabinetCost",
        "personTOroomCost",
        "reuseCabinetCost",
        "reuseCabinetAsSmallCost",
        "reuseCabinetAsHighCost",
        "reuseRoomCost",
        "reuseCabinetTOthingCost",
        "reuseRoomTOcabinetCost",
        "reusePersonTOroomCost",
        "reusePersonCost",
        "reuseThingCost",
        "reusePersonTOthingCost",
        "reuseDefaultCost",
        "deleteCabinetCost",
        "deleteRoomCost",
        "deleteCabinetTOthingCost",
        "deleteRoomTOcabinetCost",
        "deletePersonTOroomCost",
        "deletePersonCost",
        "deleteThingCost",
        "deletePersonTOthingCost",
        "deleteDefaultCost",
    }
)

ARITY: dict[str, int] = {
    **SCHEMA,
    **CONTROL,
    **{w: 1 for w in WRAPPERS},
    **{c: 1 for c in COST_PREDICATES},
}


class FactsError(ValueError):
    """Raised for malformed fact text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


@dataclass
class FactFile:
    facts: list[Atom] = field(default_factory=list)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.facts)

    def __len__(self) -> int:
        return len(self.facts)

    def of(self, predicate: str) -> list[Atom]:
        return [a for a in self.facts if a.predicate == predicate]


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<int>-?\d+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<range>\.\.)
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


class _Tok(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FactsError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            got = tok.text or "end of input"
            raise FactsError(f"expected {want!r}, got {got!r}", tok.line, tok.col)
        self.i += 1
        return tok

    def facts(self) -> Iterator[Atom]:
        while self.peek().kind != "eof":
            for a in self.atom(top=True):
                yield a
            self.take("punct", ".")

    def atom(self, top: bool = False) -> list[Atom]:
        """Parse one atom; returns every expansion of its intervals."""
        name = self.take("ident")
        choices: list[list[Term]] = []
        if self.peek().text == "(":
            self.take("punct", "(")
            choices.append(self.arg())
            while self.peek().text == ",":
                self.take("punct", ",")
                choices.append(self.arg())
            self.take("punct", ")")
        pred = name.text
        if pred not in ARITY:
            raise FactsError(f"unknown predicate {pred!r}", name.line, name.col)
        if ARITY[pred] != len(choices):
            raise FactsError(
                f"{pred} expects {ARITY[pred]} argument(s), got {len(choices)}", name.line, name.col
            )
        nested = [isinstance(c[0], Atom) for c in choices]
        if pred in WRAPPERS:
            if not nested[0]:
                raise FactsError(f"{pred} wraps an atom, not an integer", name.line, name.col)
            if not top:
                raise FactsError(f"{pred} cannot be nested", name.line, name.col)
        elif any(nested):
            raise FactsError(f"{pred} takes integer arguments only", name.line, name.col)
        return [Atom(pred, tuple(combo)) for combo in itertools.product(*choices)]

    def arg(self) -> list[Term]:
        tok = self.peek()
        if tok.kind == "int":
            self.i += 1
            lo = int(tok.text)
            if self.peek().kind == "range":
                self.i += 1
                hi = int(self.take("int").text)
                if hi < lo:
                    raise FactsError(f"empty interval {lo}..{hi}", tok.line, tok.col)
                return list(range(lo, hi + 1))
            return [lo]
        if tok.kind == "ident":
            return list(self.atom())
        if tok.kind == "var":
            raise FactsError(f"non-ground term {tok.text!r}", tok.line, tok.col)
        if tok.kind == "eof":
            raise FactsError("unexpected end of input", tok.line, tok.col)
        raise FactsError(f"unexpected {tok.text!r}", tok.line, tok.col)


def parse(text: str) -> FactFile:
    """Parse fact text. Duplicate facts are dropped with a warning."""
    seen: set[Atom] = set()
    out = []
    for a in _Parser(text).facts():
        if a in seen:
            log.warning("duplicate fact %s dropped", a)
            continue
        seen.add(a)
        out.append(a)
    return FactFile(out)


def serialize(facts: FactFile | Iterable[Atom]) -> str:
    return "".join(f"{a}.\n" for a in facts)


def read(path) -> FactFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write(path, facts: FactFile | Iterable[Atom]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(facts))
