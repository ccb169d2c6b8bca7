"""The KO7 term algebra.

Terms are finite trees over seven constructors:

    void | delta T | integrate T | merge T T | app T T | rec T T T | eqw T T

This module defines the tree type, the S-expression interchange syntax,
positions (paths of child indices), functional subterm access/replacement,
and exhaustive enumeration of all terms up to a size bound.  Everything is
immutable and pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

# Constructor order is fixed: it determines enumeration order and is part of
# the reproducibility contract of every sweep report.
KINDS = ("void", "delta", "integrate", "merge", "app", "rec", "eqw")
ARITY = {"void": 0, "delta": 1, "integrate": 1, "merge": 2, "app": 2, "rec": 3, "eqw": 2}
KIND_INDEX = {k: i for i, k in enumerate(KINDS)}

Position = tuple[int, ...]


class TermError(ValueError):
    pass


class ParseError(TermError):
    """Malformed surface syntax; `offset` is the byte offset of the error."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ArityError(ParseError):
    """A constructor application with the wrong number of arguments."""

    def __init__(self, constructor: str, expected: int, got: int, offset: int):
        super().__init__(
            f"'{constructor}' takes {expected} argument(s), got {got}", offset
        )
        self.constructor = constructor


class InvalidPositionError(TermError):
    def __init__(self, index: int, term: "Term"):
        super().__init__(f"no child {index} at {term!r}")
        self.index = index


@dataclass(frozen=True)
class Term:
    """One node of the object language; equality is structural."""

    kind: str
    children: tuple["Term", ...] = ()

    def __post_init__(self):
        if self.kind not in ARITY:
            raise TermError(f"unknown constructor {self.kind!r}")
        if len(self.children) != ARITY[self.kind]:
            raise TermError(
                f"{self.kind} takes {ARITY[self.kind]} children, got {len(self.children)}"
            )

    def __repr__(self):
        return f"<{render(self)}>"


VOID = Term("void")


def void() -> Term:
    return VOID


def delta(child: Term) -> Term:
    return Term("delta", (child,))


def integrate(child: Term) -> Term:
    return Term("integrate", (child,))


def merge(left: Term, right: Term) -> Term:
    return Term("merge", (left, right))


def app(left: Term, right: Term) -> Term:
    return Term("app", (left, right))


def rec(base: Term, step: Term, arg: Term) -> Term:
    return Term("rec", (base, step, arg))


def eqw(left: Term, right: Term) -> Term:
    return Term("eqw", (left, right))


def size(t: Term) -> int:
    """Number of constructor nodes."""
    return 1 + sum(size(c) for c in t.children)


def render(t: Term) -> str:
    """Canonical lowercase S-expression; inverse of parse."""
    if not t.children:
        return t.kind
    return "(" + t.kind + " " + " ".join(render(c) for c in t.children) + ")"


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in "()":
                i += 1
            tokens.append((text[start:i], start))
    return tokens


def parse(text: str) -> Term:
    """Parse one term from the grammar `void | (delta T) | ... | (eqw T T)`.

    Raises ParseError (with byte offset) on malformed input and ArityError
    when a constructor is applied to the wrong number of subterms.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 0)
    term, pos = _parse_at(tokens, 0)
    if pos != len(tokens):
        raise ParseError(f"trailing input {tokens[pos][0]!r}", tokens[pos][1])
    return term


def _parse_at(tokens: list[tuple[str, int]], pos: int) -> tuple[Term, int]:
    tok, off = tokens[pos]
    if tok == "void":
        return VOID, pos + 1
    if tok == "(":
        if pos + 1 >= len(tokens):
            raise ParseError("unexpected end of input after '('", off)
        head, head_off = tokens[pos + 1]
        if head in "()":
            raise ParseError("expected a constructor after '('", head_off)
        if head == "void":
            raise ParseError("'void' is written bare, without parentheses", head_off)
        if head not in ARITY:
            raise ParseError(f"unknown constructor {head!r}", head_off)
        pos += 2
        children = []
        while True:
            if pos >= len(tokens):
                raise ParseError("missing ')'", tokens[-1][1])
            if tokens[pos][0] == ")":
                pos += 1
                break
            child, pos = _parse_at(tokens, pos)
            children.append(child)
        if len(children) != ARITY[head]:
            raise ArityError(head, ARITY[head], len(children), head_off)
        return Term(head, tuple(children)), pos
    if tok == ")":
        raise ParseError("unexpected ')'", off)
    if tok in ARITY:
        # a non-nullary constructor used bare, e.g. "delta"
        raise ParseError(f"constructor {tok!r} requires parentheses", off)
    raise ParseError(f"unexpected token {tok!r}", off)


def subterm_at(t: Term, position: Sequence[int]) -> Term:
    for index in position:
        if not 0 <= index < len(t.children):
            raise InvalidPositionError(index, t)
        t = t.children[index]
    return t


def replace_at(t: Term, position: Sequence[int], replacement: Term) -> Term:
    """Functional replacement of the subterm at `position`."""
    if not position:
        return replacement
    index = position[0]
    if not 0 <= index < len(t.children):
        raise InvalidPositionError(index, t)
    kids = list(t.children)
    kids[index] = replace_at(kids[index], position[1:], replacement)
    return Term(t.kind, tuple(kids))


def positions(t: Term) -> Iterator[Position]:
    """All positions of t in lexicographic (prefix) order, root first."""
    yield ()
    for i, c in enumerate(t.children):
        for p in positions(c):
            yield (i,) + p


def subterms(t: Term) -> Iterator[Term]:
    """All subterm occurrences, root first."""
    yield t
    for c in t.children:
        yield from subterms(c)


def term_key(t: Term):
    """Sort key realising the canonical term order: by size, then
    constructor order, then recursively by children."""
    return (size(t), KIND_INDEX[t.kind], tuple(term_key(c) for c in t.children))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def terms_of_size(n: int) -> tuple[Term, ...]:
    """All terms with exactly n nodes, in canonical order."""
    out: list[Term] = []
    for kind in KINDS:
        arity = ARITY[kind]
        if arity == 0:
            if n == 1:
                out.append(VOID)
            continue
        if n < arity + 1:
            continue
        for sizes in _compositions(n - 1, arity):
            pools = [terms_of_size(s) for s in sizes]
            for kids in itertools.product(*pools):
                out.append(Term(kind, kids))
    # product order over size compositions is not the recursive child order,
    # so sort the bucket explicitly
    out.sort(key=term_key)
    return tuple(out)


def enumerate_terms(max_size: int) -> list[Term]:
    """Every term with size <= max_size, exactly once, in canonical order."""
    if max_size < 1:
        raise TermError("max_size must be >= 1")
    out: list[Term] = []
    for n in range(1, max_size + 1):
        out.extend(terms_of_size(n))
    return out


def count_terms(max_size: int) -> int:
    return sum(len(terms_of_size(n)) for n in range(1, max_size + 1))


def term_to_json(t: Term) -> dict:
    return {"k": t.kind, "c": [term_to_json(c) for c in t.children]}


def term_from_json(obj: dict) -> Term:
    return Term(obj["k"], tuple(term_from_json(c) for c in obj.get("c", ())))
