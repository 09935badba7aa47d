"""Text formats: theory definitions, base terms and owned terms.

Theory files hold one declaration per line::

    # the bread example
    atoms bread dough water flour oven
    gen mix : water * flour -> dough
    gen bake : dough * oven -> bread * oven
    eq knead ; knead = knead
    owner Alice colour #e41a1c

Term syntax: generators by name, ``id(W)``, ``sym(W, V)``, ``;`` for
diagrammatic composition, ``*`` for tensor (binds tighter than ``;``), ``I``
for the empty word and ``a^n`` for ``n`` copies of atom ``a``.  Owned terms
add ``f@A``, ``lift@A(term)``, ``phi@A(X, Y)``, ``psi@A(X, Y)``, ``phiI@A``,
``psiI@A`` and ``gamma(X, A->B)``; owned words are written ``dough@Alice *
(water * flour)@Bob``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from .errors import ParseError, TheoryError, TypingError
from .ownership import (
    Gamma,
    Lifted,
    OId,
    OPar,
    OSeq,
    OSym,
    OwnedAtom,
    OwnedTheory,
    OwnedWord,
    Owner,
    PhiPair,
    PhiUnit,
    PsiPair,
    PsiUnit,
    build_ownership_theory,
)
from .terms import RESERVED, Gen, Id, Par, Seq, Sym, Word
from .theory import Equation, GeneratorDecl, Theory, typecheck


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<arrow>->)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<punct>[();,*@^=:])
    """,
    re.VERBOSE,
)


def tokenize(text: str, line: int = 1, col: int = 1) -> List[Token]:
    tokens = []
    pos = 0
    ln, start = line, -col + 1
    while pos < len(text):
        if text[pos] == "\n":
            ln += 1
            pos += 1
            start = pos
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", ln, pos - start + 1)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            tokens.append(Token(value if kind in ("punct", "arrow") else kind, value, ln, pos - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", ln, pos - start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], theory: Theory, owned: Optional[OwnedTheory] = None):
        self.toks = tokens
        self.i = 0
        self.theory = theory
        self.owned = owned

    # -- token helpers ---------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[Token] = None, cls=ParseError):
        tok = tok or self.tok
        raise cls(message, tok.line, tok.col)

    def accept(self, kind: str, value: Optional[str] = None) -> Optional[Token]:
        t = self.tok
        if t.kind == kind and (value is None or t.value == value):
            self.i += 1
            return t
        return None

    def expect(self, kind: str, value: Optional[str] = None) -> Token:
        t = self.accept(kind, value)
        if t is None:
            want = value or kind
            got = self.tok.value or self.tok.kind
            self.error(f"expected {want!r}, found {got!r}")
        return t

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.value == word

    def finish(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.value!r}")

    # -- words -----------------------------------------------------------
    def atom_run(self) -> Word:
        t = self.expect("ident")
        if t.value in RESERVED:
            self.error(f"{t.value!r} is not an atom", t)
        if t.value not in self.theory.atoms:
            self.error(f"unknown atom {t.value!r}", t, TheoryError)
        if self.accept("^"):
            n = int(self.expect("int").value)
            return (t.value,) * n
        return (t.value,)

    def word(self) -> Word:
        if self.accept("ident", "I"):
            return ()
        w = self.atom_run()
        while self.accept("*"):
            w += self.atom_run()
        return w

    def owner(self) -> str:
        t = self.expect("ident")
        if self.owned is not None and not self.owned.has_owner(t.value):
            self.error(f"unknown owner {t.value!r}", t, TheoryError)
        return t.value

    def owned_atom(self) -> OwnedAtom:
        if self.accept("("):
            payload = self.word()
            self.expect(")")
        elif self.accept("ident", "I"):
            payload = ()
        else:
            payload = self.atom_run()
        self.expect("@")
        return OwnedAtom(payload, self.owner())

    def owned_word(self) -> OwnedWord:
        if self.at_keyword("I") and self.toks[self.i + 1].kind != "@":
            self.i += 1
            return ()
        w = (self.owned_atom(),)
        while self.accept("*"):
            w += (self.owned_atom(),)
        return w

    # -- base terms ------------------------------------------------------
    def term(self):
        t = self.par()
        while self.accept(";"):
            t = Seq(t, self.par())
        return t

    def par(self):
        t = self.prim()
        while self.accept("*"):
            t = Par(t, self.prim())
        return t

    def prim(self):
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        tok = self.expect("ident")
        if tok.value == "id":
            self.expect("(")
            w = self.word()
            self.expect(")")
            return Id(w)
        if tok.value == "sym":
            self.expect("(")
            left = self.word()
            self.expect(",")
            right = self.word()
            self.expect(")")
            return Sym(left, right)
        if tok.value in RESERVED:
            self.error(f"{tok.value!r} is not allowed in a base term", tok)
        if not self.theory.has_generator(tok.value):
            self.error(f"unknown generator {tok.value!r}", tok, TheoryError)
        return Gen(tok.value)

    # -- owned terms -----------------------------------------------------
    def oterm(self):
        t = self.opar()
        while self.accept(";"):
            t = OSeq(t, self.opar())
        return t

    def opar(self):
        t = self.oprim()
        while self.accept("*"):
            t = OPar(t, self.oprim())
        return t

    def oprim(self):
        if self.accept("("):
            t = self.oterm()
            self.expect(")")
            return t
        tok = self.expect("ident")
        v = tok.value
        if v == "id":
            self.expect("(")
            w = self.owned_word()
            self.expect(")")
            return OId(w)
        if v == "sym":
            self.expect("(")
            left = self.owned_word()
            self.expect(",")
            right = self.owned_word()
            self.expect(")")
            return OSym(left, right)
        if v in ("phi", "psi"):
            self.expect("@")
            a = self.owner()
            self.expect("(")
            x = self.word()
            self.expect(",")
            y = self.word()
            self.expect(")")
            return (PhiPair if v == "phi" else PsiPair)(a, x, y)
        if v in ("phiI", "psiI"):
            self.expect("@")
            return (PhiUnit if v == "phiI" else PsiUnit)(self.owner())
        if v == "gamma":
            self.expect("(")
            x = self.word()
            self.expect(",")
            a = self.owner()
            self.expect("->")
            b = self.owner()
            self.expect(")")
            return Gamma(x, a, b)
        if v == "lift":
            self.expect("@")
            a = self.owner()
            self.expect("(")
            base = self.term()
            self.expect(")")
            return Lifted(a, base)
        if v in RESERVED:
            self.error(f"{v!r} is not allowed here", tok)
        if not self.theory.has_generator(v):
            self.error(f"unknown generator {v!r}", tok, TheoryError)
        if not self.accept("@"):
            self.error(f"generator {v!r} needs an owner, as in {v}@Alice")
        return Lifted(self.owner(), Gen(v))


def parse_word(text: str, theory: Theory) -> Word:
    p = _Parser(tokenize(text), theory)
    w = p.word()
    p.finish()
    return w


def parse_owned_word(text: str, th: OwnedTheory) -> OwnedWord:
    p = _Parser(tokenize(text), th.base, th)
    w = p.owned_word()
    p.finish()
    return w


def parse_term(text: str, theory: Theory):
    """Parse and typecheck a base term."""
    p = _Parser(tokenize(text), theory)
    t = p.term()
    p.finish()
    typecheck(t, theory)
    return t


def parse_owned_term(text: str, th: OwnedTheory):
    """Parse and typecheck an owned term."""
    from .ownership import owned_typecheck

    p = _Parser(tokenize(text), th.base, th)
    t = p.oterm()
    p.finish()
    owned_typecheck(t, th)
    return t


@dataclass(frozen=True)
class TheorySource:
    """Everything a theory file declares: the signature plus owner lines."""

    theory: Theory
    owners: Tuple[Owner, ...] = ()

    def owned(self) -> OwnedTheory:
        return build_ownership_theory(self.theory, self.owners)


_OWNER_RE = re.compile(
    r"owner\s+(?P<name>\S+)(?:\s+colou?r\s+(?P<colour>#[0-9A-Fa-f]{6}|#[0-9A-Fa-f]{3}|[A-Za-z]+))?\s*(?:#.*)?\Z"
)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_source(text: str) -> TheorySource:
    atoms: List[str] = []
    gens: List[GeneratorDecl] = []
    gen_lines = {}
    pending_eqs = []
    owners: List[Owner] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("owner") and (len(stripped) == 5 or stripped[5].isspace()):
            m = _OWNER_RE.match(stripped)
            if m is None:
                raise ParseError("malformed owner declaration", ln, raw.find("owner") + 1)
            name = m.group("name")
            if any(o.name == name for o in owners):
                raise TheoryError(f"duplicate owner {name!r}", ln, raw.find(name) + 1)
            try:
                owners.append(Owner(name, m.group("colour") or "#888888"))
            except ValueError as exc:
                raise TheoryError(str(exc), ln, raw.find(name) + 1) from None
            continue
        body = _strip_comment(raw)
        toks = tokenize(body, ln)
        if toks[0].kind == "eof":
            continue
        head = toks[0]
        if head.kind != "ident":
            raise ParseError(f"expected a declaration keyword, found {head.value!r}", head.line, head.col)
        if head.value == "atoms":
            for t in toks[1:-1]:
                if t.kind != "ident" or t.value in RESERVED:
                    raise ParseError(f"invalid atom name {t.value!r}", t.line, t.col)
                if t.value in atoms:
                    raise TheoryError(f"duplicate atom {t.value!r}", t.line, t.col)
                atoms.append(t.value)
        elif head.value == "gen":
            p = _Parser(toks[1:], Theory(tuple(atoms)))
            name = p.expect("ident")
            if name.value in RESERVED:
                p.error(f"{name.value!r} is reserved", name)
            if name.value in gen_lines or name.value in atoms:
                p.error(f"duplicate name {name.value!r}", name, TheoryError)
            p.expect(":")
            dom = p.word()
            p.expect("->")
            cod = p.word()
            p.finish()
            gens.append(GeneratorDecl(name.value, dom, cod))
            gen_lines[name.value] = ln
        elif head.value == "eq":
            pending_eqs.append((ln, toks[1:]))
        else:
            raise ParseError(f"unknown declaration {head.value!r}", head.line, head.col)
    try:
        theory = Theory(tuple(atoms), tuple(gens))
    except TheoryError as exc:
        raise TheoryError(exc.message) from None
    eqs = []
    for ln, toks in pending_eqs:
        p = _Parser(toks, theory)
        lhs = p.term()
        p.expect("=")
        rhs = p.term()
        p.finish()
        try:
            left, right = typecheck(lhs, theory), typecheck(rhs, theory)
        except TypingError as exc:
            raise TheoryError(f"ill-typed equation: {exc}", ln) from None
        if left != right:
            raise TheoryError("ill-typed equation: sides are not parallel", ln)
        eqs.append(Equation(lhs, rhs))
    return TheorySource(theory.with_equations(eqs), tuple(owners))


def parse_theory(text: str) -> Theory:
    """Parse a theory definition; owner lines are accepted and ignored."""
    return parse_source(text).theory


def parse_owned_theory(text: str) -> OwnedTheory:
    return parse_source(text).owned()
