"""Line-oriented knowledge-base format.

One sentence per line, so diagnostics point at single statements:

    # comment; blank lines are ignored
    point <name>
    cda <p> <REL> <q>                relation of p to q
    roa <parent> <reference> <primary> <REL>

``REL`` is an atom name, ``?``, or ``{a,b,...}`` in the calculus of the
statement.  ``cda p r q`` asserts r(p, q); ``roa a b c t`` asserts
t(a, b, c) with the parent / reference / primary convention, so
``roa A B C lr`` reads "viewed from A, C is to the left of B".
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import format_cda, format_roa, parse_cda, parse_roa
from .csp import CcoaCsp, assert_cda, assert_roa, new_csp


class KbParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class CdaFact:
    subject: str
    relation: int
    obj: str
    line: int = 0


@dataclass(frozen=True)
class RoaFact:
    parent: str
    reference: str
    primary: str
    relation: int
    line: int = 0


@dataclass(frozen=True)
class KnowledgeBase:
    points: tuple
    cda_facts: tuple
    roa_facts: tuple

    def __eq__(self, other):
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        strip = lambda facts: tuple(
            (f.subject, f.relation, f.obj) if isinstance(f, CdaFact)
            else (f.parent, f.reference, f.primary, f.relation)
            for f in facts
        )
        return (
            self.points == other.points
            and strip(self.cda_facts) == strip(other.cda_facts)
            and strip(self.roa_facts) == strip(other.roa_facts)
        )

    __hash__ = None


def _tokenize(line: str) -> list:
    """Tokens with their 1-based column positions."""
    tokens = []
    col = 0
    for raw in line.split():
        col = line.index(raw, col)
        tokens.append((raw, col + 1))
        col += len(raw)
    return tokens


def parse_kb(text: str) -> KnowledgeBase:
    """Parse KB text; raises :class:`KbParseError` with line and column."""
    points: list = []
    declared = set()
    cda_facts = []
    roa_facts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = _tokenize(line)
        if not tokens:
            continue
        keyword, kcol = tokens[0]

        def need(count):
            if len(tokens) != count:
                raise KbParseError(
                    f"{keyword!r} takes {count - 1} arguments, got {len(tokens) - 1}",
                    lineno,
                    kcol,
                )

        def known_point(pos):
            name, col = tokens[pos]
            if name not in declared:
                raise KbParseError(f"unknown point {name!r}", lineno, col)
            return name

        if keyword == "point":
            need(2)
            name, col = tokens[1]
            if name in declared:
                raise KbParseError(f"duplicate point {name!r}", lineno, col)
            declared.add(name)
            points.append(name)
        elif keyword == "cda":
            need(4)
            subject = known_point(1)
            obj = known_point(3)
            rel_token, rel_col = tokens[2]
            try:
                relation = parse_cda(rel_token)
            except ValueError as err:
                raise KbParseError(str(err), lineno, rel_col) from None
            cda_facts.append(CdaFact(subject, relation, obj, lineno))
        elif keyword == "roa":
            need(5)
            parent = known_point(1)
            reference = known_point(2)
            primary = known_point(3)
            rel_token, rel_col = tokens[4]
            try:
                relation = parse_roa(rel_token)
            except ValueError as err:
                raise KbParseError(str(err), lineno, rel_col) from None
            roa_facts.append(RoaFact(parent, reference, primary, relation, lineno))
        else:
            raise KbParseError(f"unknown statement {keyword!r}", lineno, kcol)
    return KnowledgeBase(tuple(points), tuple(cda_facts), tuple(roa_facts))


def serialize_kb(kb: KnowledgeBase) -> str:
    lines = [f"point {name}" for name in kb.points]
    lines += [
        f"cda {f.subject} {format_cda(f.relation, bare_atoms=True)} {f.obj}"
        for f in kb.cda_facts
    ]
    lines += [
        f"roa {f.parent} {f.reference} {f.primary} {format_roa(f.relation, bare_atoms=True)}"
        for f in kb.roa_facts
    ]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EmptyCellFinding:
    """A cell emptied while asserting facts, before any propagation."""

    kind: str
    variables: tuple
    line: int

    def render(self) -> str:
        return (
            f"constraint at line {self.line} empties the "
            f"{self.kind} ({', '.join(self.variables)})"
        )


def build_csp(kb: KnowledgeBase) -> tuple:
    """Assert every fact into a fresh CSP.

    Returns ``(csp, findings)``: conflicting facts surface as empty-cell
    findings on the pre-propagation CSP, not as parse errors.
    """
    csp = new_csp(kb.points)
    index = {name: i for i, name in enumerate(kb.points)}
    findings = []
    for f in kb.cda_facts:
        if not assert_cda(csp, index[f.subject], index[f.obj], f.relation):
            findings.append(EmptyCellFinding("pair", (f.subject, f.obj), f.line))
    for f in kb.roa_facts:
        if not assert_roa(csp, index[f.parent], index[f.reference], index[f.primary], f.relation):
            findings.append(
                EmptyCellFinding("triple", (f.parent, f.reference, f.primary), f.line)
            )
    return csp, findings


def kb_from_csp(csp: CcoaCsp) -> KnowledgeBase:
    """Read a KB off a CSP: every informative canonical cell becomes a fact.

    Binary facts cover pairs i < j whose cell is not universal; ternary
    facts cover strictly increasing triples.  Degenerate tensor cells are
    implied by the binary matrix and are skipped.
    """
    from .algebra import UNIVERSAL
    from .csp import tensor_index

    n = csp.n
    names = csp.variables
    cda_facts = []
    roa_facts = []
    for i in range(n):
        for j in range(i + 1, n):
            cell = csp.b.cells[i * n + j]
            if cell != UNIVERSAL:
                cda_facts.append(CdaFact(names[i], cell, names[j]))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                cell = csp.t.cells[tensor_index(n, i, j, k)]
                if cell != UNIVERSAL:
                    roa_facts.append(RoaFact(names[i], names[j], names[k], cell))
    return KnowledgeBase(tuple(names), tuple(cda_facts), tuple(roa_facts))
