"""The ownership construction C(X) over a base theory X.

Objects of C(X) are words of owned atoms ``X^A`` where the payload ``X`` is
itself a base word (possibly empty: ``I^A`` is an atom, distinct from the
empty owned word).  Morphisms are built from lifted base terms ``f^A``, the
regrouping maps ``phi``/``psi`` (and their unit forms), change of ownership
``gamma``, and the symmetric monoidal structure.

Equality is decided through the forgetful functor U: every term ``h : P ->
Q`` equals the staged composite

    gamma-in ; regroup ; lift(pivot, canonical(U h)) ; split ; gamma-out

where the pivot owner and the regrouping combs depend only on ``P`` and
``Q``.  ``normalize_owned`` returns that composite, so two parallel terms
are equal exactly when their normal forms coincide syntactically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Dict, Iterable, List, Optional, Tuple, Union

from .diagram import Diagram, Node, box, compose, diagram_to_term, identity, symmetry, tensor, to_diagram
from .errors import NotParallelError, TheoryError, TypingError
from .rewrite import EqResult, rules_of, search_equal
from .terms import Gen, Id, MorphismTerm, Par, Seq, Sym, Word, format_binary, format_term, format_word, is_identifier
from .theory import Theory, typecheck


@dataclass(frozen=True)
class Owner:
    name: str
    colour: str = "#888888"

    def __post_init__(self):
        if not is_identifier(self.name):
            raise ValueError(f"invalid owner name {self.name!r}")


@dataclass(frozen=True, order=True)
class OwnedAtom:
    payload: Word
    owner: str

    def __str__(self) -> str:
        return format_owned_atom(self)


OwnedWord = Tuple[OwnedAtom, ...]


def owned(payload: Iterable[str], owner: str) -> OwnedAtom:
    return OwnedAtom(tuple(payload), owner)


def format_owned_atom(a: OwnedAtom) -> str:
    w = format_word(a.payload)
    if len(set(a.payload)) > 1:
        w = f"({w})"
    return f"{w}@{a.owner}"


def format_owned_word(w: OwnedWord) -> str:
    return " * ".join(format_owned_atom(a) for a in w) if w else "I"


# -- terms -------------------------------------------------------------------


class _OTerm:
    def __str__(self) -> str:
        return format_owned_term(self)


@dataclass(frozen=True)
class Lifted(_OTerm):
    owner: str
    base: MorphismTerm


@dataclass(frozen=True)
class PhiPair(_OTerm):
    owner: str
    x: Word
    y: Word


@dataclass(frozen=True)
class PhiUnit(_OTerm):
    owner: str


@dataclass(frozen=True)
class PsiPair(_OTerm):
    owner: str
    x: Word
    y: Word


@dataclass(frozen=True)
class PsiUnit(_OTerm):
    owner: str


@dataclass(frozen=True)
class Gamma(_OTerm):
    x: Word
    source: str
    target: str


@dataclass(frozen=True)
class OId(_OTerm):
    word: OwnedWord


@dataclass(frozen=True)
class OSym(_OTerm):
    left: OwnedWord
    right: OwnedWord


@dataclass(frozen=True)
class OSeq(_OTerm):
    first: "OwnedTerm"
    second: "OwnedTerm"
    _PREC: ClassVar[int] = 1


@dataclass(frozen=True)
class OPar(_OTerm):
    left: "OwnedTerm"
    right: "OwnedTerm"
    _PREC: ClassVar[int] = 2


OwnedTerm = Union[Lifted, PhiPair, PhiUnit, PsiPair, PsiUnit, Gamma, OId, OSym, OSeq, OPar]


def format_owned_term(t) -> str:
    """Owned-term syntax; ``parse_owned_term`` inverts it exactly."""
    if isinstance(t, Lifted):
        if isinstance(t.base, Gen):
            return f"{t.base.name}@{t.owner}"
        return f"lift@{t.owner}({format_term(t.base)})"
    if isinstance(t, (PhiPair, PsiPair)):
        name = "phi" if isinstance(t, PhiPair) else "psi"
        return f"{name}@{t.owner}({format_word(t.x)}, {format_word(t.y)})"
    if isinstance(t, PhiUnit):
        return f"phiI@{t.owner}"
    if isinstance(t, PsiUnit):
        return f"psiI@{t.owner}"
    if isinstance(t, Gamma):
        return f"gamma({format_word(t.x)}, {t.source}->{t.target})"
    if isinstance(t, OId):
        return f"id({format_owned_word(t.word)})"
    if isinstance(t, OSym):
        return f"sym({format_owned_word(t.left)}, {format_owned_word(t.right)})"
    if isinstance(t, OSeq):
        return format_binary(t.first, t.second, " ; ", 1, format_owned_term)
    if isinstance(t, OPar):
        return format_binary(t.left, t.right, " * ", 2, format_owned_term)
    raise TypeError(f"not an owned term: {t!r}")


def oseq(*terms: OwnedTerm) -> Optional[OwnedTerm]:
    """Left-nested composite skipping identities; ``None`` if nothing is left."""
    kept = [t for t in terms if t is not None and not isinstance(t, OId)]
    if not kept:
        return None
    out = kept[0]
    for t in kept[1:]:
        out = OSeq(out, t)
    return out


def opar(*terms: OwnedTerm) -> OwnedTerm:
    kept = [t for t in terms if not (isinstance(t, OId) and not t.word)]
    if not kept:
        return OId(())
    out = kept[0]
    for t in kept[1:]:
        out = OPar(out, t)
    return out


# -- theory ------------------------------------------------------------------


@dataclass(frozen=True)
class OwnedTheory:
    base: Theory
    owners: Tuple[Owner, ...]
    _names: Dict[str, Owner] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.owners:
            raise TheoryError("an ownership theory needs at least one owner")
        names: Dict[str, Owner] = {}
        for o in self.owners:
            if o.name in names:
                raise TheoryError(f"duplicate owner {o.name!r}")
            names[o.name] = o
        object.__setattr__(self, "_names", names)

    def has_owner(self, name: str) -> bool:
        return name in self._names

    def owner(self, name: str) -> Owner:
        try:
            return self._names[name]
        except KeyError:
            raise TypingError(f"unknown owner {name!r}") from None

    @property
    def owner_names(self) -> Tuple[str, ...]:
        return tuple(o.name for o in self.owners)

    def colours(self) -> Dict[str, str]:
        return {o.name: o.colour for o in self.owners}

    def check_atom(self, a: OwnedAtom) -> OwnedAtom:
        self.owner(a.owner)
        self.base.check_word(a.payload)
        return a

    def check_word(self, w: Iterable[OwnedAtom]) -> OwnedWord:
        return tuple(self.check_atom(a) for a in w)


def build_ownership_theory(base: Theory, owners: Iterable[Union[Owner, str]]) -> OwnedTheory:
    return OwnedTheory(base, tuple(o if isinstance(o, Owner) else Owner(o) for o in owners))


# -- typing ------------------------------------------------------------------


def owned_typecheck(t: OwnedTerm, th: OwnedTheory) -> Tuple[OwnedWord, OwnedWord]:
    if isinstance(t, Lifted):
        th.owner(t.owner)
        x, y = typecheck(t.base, th.base)
        return (OwnedAtom(x, t.owner),), (OwnedAtom(y, t.owner),)
    if isinstance(t, (PhiPair, PsiPair)):
        th.owner(t.owner)
        x, y = th.base.check_word(t.x), th.base.check_word(t.y)
        split = (OwnedAtom(x, t.owner), OwnedAtom(y, t.owner))
        joined = (OwnedAtom(x + y, t.owner),)
        return (split, joined) if isinstance(t, PhiPair) else (joined, split)
    if isinstance(t, PhiUnit):
        th.owner(t.owner)
        return (), (OwnedAtom((), t.owner),)
    if isinstance(t, PsiUnit):
        th.owner(t.owner)
        return (OwnedAtom((), t.owner),), ()
    if isinstance(t, Gamma):
        th.owner(t.source)
        th.owner(t.target)
        x = th.base.check_word(t.x)
        return (OwnedAtom(x, t.source),), (OwnedAtom(x, t.target),)
    if isinstance(t, OId):
        w = th.check_word(t.word)
        return w, w
    if isinstance(t, OSym):
        left, right = th.check_word(t.left), th.check_word(t.right)
        return left + right, right + left
    if isinstance(t, OSeq):
        d1, c1 = owned_typecheck(t.first, th)
        d2, c2 = owned_typecheck(t.second, th)
        if c1 != d2:
            raise TypingError(
                f"composition mismatch: {t.first} has codomain {format_owned_word(c1)} "
                f"but {t.second} has domain {format_owned_word(d2)}"
            )
        return d1, c2
    if isinstance(t, OPar):
        d1, c1 = owned_typecheck(t.left, th)
        d2, c2 = owned_typecheck(t.right, th)
        return d1 + d2, c1 + c2
    raise TypingError(f"not an owned term: {t!r}")


# -- functors ------------------------------------------------------------------


def lift(owner: str, f: MorphismTerm, th: Optional[OwnedTheory] = None) -> Lifted:
    """The image of ``f`` under the functor tagging everything with ``owner``."""
    if th is not None:
        th.owner(owner)
        typecheck(f, th.base)
    return Lifted(owner, f)


def payload(w: OwnedWord) -> Word:
    return tuple(a for atom in w for a in atom.payload)


def forget(t: OwnedTerm, th: Optional[OwnedTheory] = None) -> MorphismTerm:
    """Strip ownership: structural maps become identities on their payloads."""
    if th is not None:
        owned_typecheck(t, th)
    return _forget(t)


def _forget(t: OwnedTerm) -> MorphismTerm:
    if isinstance(t, Lifted):
        return t.base
    if isinstance(t, (PhiPair, PsiPair)):
        return Id(t.x + t.y)
    if isinstance(t, (PhiUnit, PsiUnit)):
        return Id(())
    if isinstance(t, Gamma):
        return Id(t.x)
    if isinstance(t, OId):
        return Id(payload(t.word))
    if isinstance(t, OSym):
        return Sym(payload(t.left), payload(t.right))
    if isinstance(t, OSeq):
        return Seq(_forget(t.first), _forget(t.second))
    if isinstance(t, OPar):
        return Par(_forget(t.left), _forget(t.right))
    raise TypingError(f"not an owned term: {t!r}")


# -- regrouping ------------------------------------------------------------------


def _single_owner(p: OwnedWord, owner: str) -> None:
    for a in p:
        if a.owner != owner:
            raise TypingError(f"{format_owned_word(p)} is not wholly owned by {owner}")


def _comb(p: OwnedWord, owner: str, cls) -> List[OwnedTerm]:
    steps: List[OwnedTerm] = []
    acc = p[0].payload
    for i in range(1, len(p)):
        step: OwnedTerm = cls(owner, acc, p[i].payload)
        if i + 1 < len(p):
            step = OPar(step, OId(p[i + 1:]))
        steps.append(step)
        acc = acc + p[i].payload
    return steps


def canonical_regroup(p: OwnedWord, owner: str) -> OwnedTerm:
    """Left-nested ``phi`` comb ``p -> (payload p)^owner``."""
    p = tuple(p)
    _single_owner(p, owner)
    if not p:
        return PhiUnit(owner)
    if len(p) == 1:
        return OId(p)
    return oseq(*_comb(p, owner, PhiPair))


def canonical_split(p: OwnedWord, owner: str) -> OwnedTerm:
    """The mirrored ``psi`` comb ``(payload p)^owner -> p``, inverse of ``canonical_regroup``."""
    p = tuple(p)
    _single_owner(p, owner)
    if not p:
        return PsiUnit(owner)
    if len(p) == 1:
        return OId(p)
    return oseq(*reversed(_comb(p, owner, PsiPair)))


# -- normal forms ------------------------------------------------------------------


def pivot_owner(dom: OwnedWord, cod: OwnedWord, th: OwnedTheory) -> str:
    if dom:
        return dom[0].owner
    if cod:
        return cod[0].owner
    return th.owners[0].name


def staged_form(dom: OwnedWord, cod: OwnedWord, core: MorphismTerm, th: OwnedTheory) -> OwnedTerm:
    """Assemble the staged composite around a base ``core : payload dom -> payload cod``."""
    pivot = pivot_owner(dom, cod, th)
    gamma_in = [Gamma(a.payload, a.owner, pivot) if a.owner != pivot else OId((a,)) for a in dom]
    gamma_out = [Gamma(b.payload, pivot, b.owner) if b.owner != pivot else OId((b,)) for b in cod]
    moved_in = tuple(OwnedAtom(a.payload, pivot) for a in dom)
    moved_out = tuple(OwnedAtom(b.payload, pivot) for b in cod)
    stages = [
        opar(*gamma_in) if any(isinstance(g, Gamma) for g in gamma_in) else None,
        canonical_regroup(moved_in, pivot),
        None if isinstance(core, Id) else Lifted(pivot, core),
        canonical_split(moved_out, pivot),
        opar(*gamma_out) if any(isinstance(g, Gamma) for g in gamma_out) else None,
    ]
    return oseq(*stages) or OId(dom)


def normalize_owned(t: OwnedTerm, th: OwnedTheory) -> OwnedTerm:
    dom, cod = owned_typecheck(t, th)
    core = diagram_to_term(to_diagram(_forget(t), th.base))
    return staged_form(dom, cod, core, th)


def owned_equal(t1: OwnedTerm, t2: OwnedTerm, th: OwnedTheory, budget: int = 1000) -> EqResult:
    ty1, ty2 = owned_typecheck(t1, th), owned_typecheck(t2, th)
    if ty1 != ty2:
        raise NotParallelError(
            f"not parallel: {format_owned_word(ty1[0])} -> {format_owned_word(ty1[1])} vs "
            f"{format_owned_word(ty2[0])} -> {format_owned_word(ty2[1])}"
        )
    if not th.base.equations:
        same = normalize_owned(t1, th) == normalize_owned(t2, th)
        return EqResult.EQUAL if same else EqResult.NOT_EQUAL
    # gamma and regrouping stages depend only on the shared type
    d1 = to_diagram(_forget(t1), th.base)
    d2 = to_diagram(_forget(t2), th.base)
    return search_equal(d1, d2, rules_of(th.base), budget)


# -- elaboration for drawing ---------------------------------------------------------


def expand_lifts(t: OwnedTerm, th: OwnedTheory) -> OwnedTerm:
    """Rewrite every ``Lifted`` so its base is a single generator.

    Uses functoriality for composites, regrouping naturality for tensors and
    the symmetry coherence axiom for lifted braidings.  The result is equal
    to ``t``.
    """
    if isinstance(t, Lifted):
        return _expand(t.owner, t.base, th)
    if isinstance(t, OSeq):
        return OSeq(expand_lifts(t.first, th), expand_lifts(t.second, th))
    if isinstance(t, OPar):
        return OPar(expand_lifts(t.left, th), expand_lifts(t.right, th))
    return t


def _expand(a: str, f: MorphismTerm, th: OwnedTheory) -> OwnedTerm:
    if isinstance(f, Gen):
        return Lifted(a, f)
    if isinstance(f, Id):
        return OId((OwnedAtom(f.word, a),))
    if isinstance(f, Seq):
        return OSeq(_expand(a, f.first, th), _expand(a, f.second, th))
    if isinstance(f, Par):
        x, x2 = typecheck(f.left, th.base)
        y, y2 = typecheck(f.right, th.base)
        mid = OPar(_expand(a, f.left, th), _expand(a, f.right, th))
        return OSeq(OSeq(PsiPair(a, x, y), mid), PhiPair(a, x2, y2))
    if isinstance(f, Sym):
        cross = OSym((OwnedAtom(f.left, a),), (OwnedAtom(f.right, a),))
        return OSeq(OSeq(PsiPair(a, f.left, f.right), cross), PhiPair(a, f.right, f.left))
    raise TypingError(f"not a base term: {f!r}")


def atom_label(a: OwnedAtom) -> str:
    return format_owned_atom(a)


def to_owned_diagram(t: OwnedTerm, th: OwnedTheory, expand: bool = True) -> Diagram:
    """Diagram whose wires are owned atoms and whose boxes include the structural maps."""
    owned_typecheck(t, th)
    return _odiagram(expand_lifts(t, th) if expand else t, th)


def _labels(w: OwnedWord) -> Tuple[str, ...]:
    return tuple(atom_label(a) for a in w)


def _odiagram(t: OwnedTerm, th: OwnedTheory) -> Diagram:
    if isinstance(t, OSeq):
        return compose(_odiagram(t.first, th), _odiagram(t.second, th))
    if isinstance(t, OPar):
        return tensor(_odiagram(t.left, th), _odiagram(t.right, th))
    if isinstance(t, OId):
        return identity(_labels(t.word))
    if isinstance(t, OSym):
        return symmetry(_labels(t.left), _labels(t.right))
    dom, cod = owned_typecheck(t, th)
    if isinstance(t, Lifted):
        label = t.base.name if isinstance(t.base, Gen) else format_term(t.base)
        kind = "gen"
    elif isinstance(t, Gamma):
        label, kind = f"gamma {t.source}->{t.target}", "gamma"
    else:
        kind = type(t).__name__
        kind = {"PhiPair": "phi", "PsiPair": "psi", "PhiUnit": "phiI", "PsiUnit": "psiI"}[kind]
        label = kind
    return box(Node(label, _labels(dom), _labels(cod), kind))


def owner_of_label(label: str) -> Optional[str]:
    """Owner encoded in a wire label of an owned diagram."""
    if "@" not in label:
        return None
    return label.rsplit("@", 1)[1]

