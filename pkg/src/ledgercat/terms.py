"""Object words and morphism terms of a free symmetric strict monoidal category.

Objects are words: tuples of atom names, with ``()`` as the monoidal unit.
Because the category is strict, concatenation is the tensor on objects and
there are no associators or unitors to represent.

Composition is written in diagrammatic order: ``Seq(f, g)`` means "f, then g".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from itertools import groupby
from typing import ClassVar, Iterable, Tuple, Union

Word = Tuple[str, ...]

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

# Names with a fixed meaning in the term syntax.
RESERVED = frozenset({"I", "id", "sym", "phi", "psi", "phiI", "psiI", "gamma", "lift"})


def is_identifier(name: str) -> bool:
    return bool(IDENT_RE.match(name))


def format_word(word: Word) -> str:
    """Render a word in the textual syntax; runs of one atom use ``a^n``."""
    if not word:
        return "I"
    parts = []
    for atom, run in groupby(word):
        n = len(list(run))
        parts.append(atom if n == 1 else f"{atom}^{n}")
    return " * ".join(parts)


@dataclass(frozen=True)
class Gen:
    name: str

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Id:
    word: Word

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Sym:
    """The braiding ``left * right -> right * left``."""

    left: Word
    right: Word

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Seq:
    first: "MorphismTerm"
    second: "MorphismTerm"
    _PREC: ClassVar[int] = 1

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Par:
    left: "MorphismTerm"
    right: "MorphismTerm"
    _PREC: ClassVar[int] = 2

    def __str__(self) -> str:
        return format_term(self)


MorphismTerm = Union[Gen, Id, Sym, Seq, Par]


def seq(*terms: MorphismTerm) -> MorphismTerm:
    """Left-nested composite of one or more terms."""
    return reduce(Seq, terms)


def par(*terms: MorphismTerm) -> MorphismTerm:
    return reduce(Par, terms)


def _prec(t) -> int:
    return getattr(t, "_PREC", 3)


def format_term(t) -> str:
    """Print a base term so that parsing the result gives back ``t`` exactly."""
    if isinstance(t, Gen):
        return t.name
    if isinstance(t, Id):
        return f"id({format_word(t.word)})"
    if isinstance(t, Sym):
        return f"sym({format_word(t.left)}, {format_word(t.right)})"
    if isinstance(t, Seq):
        return format_binary(t.first, t.second, " ; ", 1, format_term)
    if isinstance(t, Par):
        return format_binary(t.left, t.right, " * ", 2, format_term)
    raise TypeError(f"not a morphism term: {t!r}")


def format_binary(left, right, op: str, prec: int, fmt) -> str:
    # left-associative: only the right operand needs parentheses at equal precedence
    ls = fmt(left)
    rs = fmt(right)
    if _prec(left) < prec:
        ls = f"({ls})"
    if _prec(right) <= prec:
        rs = f"({rs})"
    return ls + op + rs


def generator_names(t: MorphismTerm) -> Iterable[str]:
    """Generator occurrences in left-to-right order (with repetition)."""
    if isinstance(t, Gen):
        yield t.name
    elif isinstance(t, (Seq, Par)):
        a, b = (t.first, t.second) if isinstance(t, Seq) else (t.left, t.right)
        yield from generator_names(a)
        yield from generator_names(b)


def term_size(t: MorphismTerm) -> int:
    if isinstance(t, Seq):
        return 1 + term_size(t.first) + term_size(t.second)
    if isinstance(t, Par):
        return 1 + term_size(t.left) + term_size(t.right)
    return 1
