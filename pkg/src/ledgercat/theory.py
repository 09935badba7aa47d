"""Signatures (resource theories) and typechecking of base terms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

from .errors import TheoryError, TypingError
from .terms import (
    RESERVED,
    Gen,
    Id,
    MorphismTerm,
    Par,
    Seq,
    Sym,
    Word,
    format_word,
    is_identifier,
)


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    dom: Word
    cod: Word


@dataclass(frozen=True)
class Equation:
    lhs: MorphismTerm
    rhs: MorphismTerm


@dataclass(frozen=True)
class Theory:
    """A finite signature: atoms, typed generators and optional equations.

    Construction validates everything, so a ``Theory`` value in hand is
    always well formed.
    """

    atoms: Tuple[str, ...] = ()
    generators: Tuple[GeneratorDecl, ...] = ()
    equations: Tuple[Equation, ...] = ()
    _by_name: Dict[str, GeneratorDecl] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        seen = set()
        for a in self.atoms:
            if not is_identifier(a) or a in RESERVED:
                raise TheoryError(f"invalid atom name {a!r}")
            if a in seen:
                raise TheoryError(f"duplicate atom {a!r}")
            seen.add(a)
        by_name = {}
        for g in self.generators:
            if not is_identifier(g.name) or g.name in RESERVED:
                raise TheoryError(f"invalid generator name {g.name!r}")
            if g.name in by_name or g.name in seen:
                raise TheoryError(f"duplicate name {g.name!r}")
            for a in g.dom + g.cod:
                if a not in seen:
                    raise TheoryError(f"unknown atom {a!r} in type of generator {g.name!r}")
            by_name[g.name] = g
        object.__setattr__(self, "_by_name", by_name)
        for eq in self.equations:
            left = typecheck(eq.lhs, self)
            right = typecheck(eq.rhs, self)
            if left != right:
                raise TheoryError(
                    f"equation sides are not parallel: {_fmt_type(left)} vs {_fmt_type(right)}"
                )

    def generator(self, name: str) -> GeneratorDecl:
        try:
            return self._by_name[name]
        except KeyError:
            raise TypingError(f"unknown generator {name!r}") from None

    def has_generator(self, name: str) -> bool:
        return name in self._by_name

    def check_word(self, word: Iterable[str]) -> Word:
        word = tuple(word)
        atoms = set(self.atoms)
        for a in word:
            if a not in atoms:
                raise TypingError(f"unknown atom {a!r}")
        return word

    def with_equations(self, equations: Iterable[Equation]) -> "Theory":
        return Theory(self.atoms, self.generators, tuple(self.equations) + tuple(equations))

    def summary(self) -> str:
        def count(n: int, noun: str) -> str:
            return f"{n} {noun}" + ("" if n == 1 else "s")

        return ", ".join([
            count(len(self.atoms), "atom"),
            count(len(self.generators), "generator"),
            count(len(self.equations), "equation"),
        ])


def _fmt_type(t: Tuple[Word, Word]) -> str:
    return f"{format_word(t[0])} -> {format_word(t[1])}"


def typecheck(term: MorphismTerm, theory: Theory) -> Tuple[Word, Word]:
    """Return ``(dom, cod)`` of ``term``.

    Errors are reported for the first offending node in leftmost-innermost
    order, so messages are deterministic.
    """
    if isinstance(term, Gen):
        g = theory.generator(term.name)
        return g.dom, g.cod
    if isinstance(term, Id):
        w = theory.check_word(term.word)
        return w, w
    if isinstance(term, Sym):
        left = theory.check_word(term.left)
        right = theory.check_word(term.right)
        return left + right, right + left
    if isinstance(term, Seq):
        d1, c1 = typecheck(term.first, theory)
        d2, c2 = typecheck(term.second, theory)
        if c1 != d2:
            raise TypingError(
                f"composition mismatch: {term.first} has codomain {format_word(c1)} "
                f"but {term.second} has domain {format_word(d2)}"
            )
        return d1, c2
    if isinstance(term, Par):
        d1, c1 = typecheck(term.left, theory)
        d2, c2 = typecheck(term.right, theory)
        return d1 + d2, c1 + c2
    raise TypingError(f"not a base morphism term: {term!r}")
