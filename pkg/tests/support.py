"""Shared fixtures: the bread theory, random term generators and the token-routing oracle."""

from __future__ import annotations

import random
from typing import List, Sequence, Tuple

from ledgercat.ledger import COIN, coin_theory_for
from ledgercat.ownership import (
    Gamma,
    Lifted,
    OId,
    OPar,
    OSeq,
    OSym,
    OwnedAtom,
    PhiPair,
    PhiUnit,
    PsiPair,
    PsiUnit,
    build_ownership_theory,
    canonical_regroup,
    opar,
    oseq,
    owned_typecheck,
)
from ledgercat.parsing import parse_theory
from ledgercat.terms import Gen, Id, Par, Seq, Sym, par
from ledgercat.theory import typecheck

BREAD = """\
# a theory of baking
atoms bread dough water flour oven
gen mix : water * flour -> dough
gen knead : dough -> dough
gen bake : dough * oven -> bread * oven
"""

BREAD_IDEMPOTENT = BREAD + "eq knead ; knead = knead\n"

BREAD_OWNED = BREAD + """\
owner Alice colour #e41a1c
owner Bob colour #377eb8
owner Carol colour #4daf4a
"""

# baking two loaves one after the other in a single oven
TWO_BAKES = "bake * id(dough) ; id(bread) * (sym(oven, dough) ; bake)"

# two batches prepared side by side, then baked in sequence
BATCHES_TOGETHER = (
    "mix * mix * id(oven) ; knead * knead * id(oven) ; "
    "id(dough) * sym(dough, oven) ; bake * id(dough) ; "
    "id(bread) * sym(oven, dough) ; id(bread) * bake"
)
# first batch prepared and baked, then the second
BATCHES_IN_TURN = (
    "mix * id(water * flour * oven) ; knead * id(water * flour * oven) ; "
    "id(dough) * sym(water * flour, oven) ; bake * id(water * flour) ; "
    "id(bread) * sym(oven, water * flour) ; id(bread) * mix * id(oven) ; "
    "id(bread) * knead * id(oven) ; id(bread) * bake"
)

OWNERS = ("Alice", "Bob", "Carol")


def bread():
    return parse_theory(BREAD)


def bread_owned():
    return build_ownership_theory(bread(), OWNERS)


def random_word(rng: random.Random, theory, max_len: int = 4, min_len: int = 0) -> Tuple[str, ...]:
    return tuple(rng.choice(theory.atoms) for _ in range(rng.randint(min_len, max_len)))


def _layer(rng: random.Random, theory, word):
    """One padded step on ``word``: a generator, a crossing or a tensor with a closed-off term."""
    options = []
    for g in theory.generators:
        k = len(g.dom)
        for i in range(len(word) - k + 1):
            if word[i:i + k] == g.dom:
                options.append(("gen", i, k, g))
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            for m in range(j + 1, len(word) + 1):
                options.append(("sym", i, j, m))
    if not options:
        return None
    kind, *rest = rng.choice(options)
    if kind == "gen":
        i, k, g = rest
        mid = Gen(g.name)
        pre, post = word[:i], word[i + k:]
    else:
        i, j, m = rest
        mid = Sym(word[i:j], word[j:m])
        pre, post = word[:i], word[m:]
    return par(*(t for t in (Id(pre) if pre else None, mid, Id(post) if post else None) if t is not None))


def random_term(rng: random.Random, theory, dom, steps: int = 4):
    """A random well-typed base term with domain ``dom``."""
    dom = tuple(dom)
    if rng.random() < 0.2 and len(dom) >= 2:
        cut = rng.randint(1, len(dom) - 1)
        left = random_term(rng, theory, dom[:cut], steps // 2)
        right = random_term(rng, theory, dom[cut:], steps // 2)
        return Par(left, right)
    term = Id(dom)
    word = dom
    for _ in range(rng.randint(0, steps)):
        step = _layer(rng, theory, word)
        if step is None:
            break
        term = step if isinstance(term, Id) and rng.random() < 0.5 else Seq(term, step)
        word = typecheck(term, theory)[1]
    return term


def random_owned_term(rng: random.Random, th, dom, steps: int = 5):
    """A random owned term built from single structural or lifted steps."""
    dom = tuple(dom)
    word = dom
    term = OId(dom)
    owners = th.owner_names
    for _ in range(rng.randint(0, steps)):
        n = len(word)
        choice = rng.randrange(8)
        i = rng.randrange(n) if n else 0
        pre, post = word[:i], word[i + 1:]
        step = None
        if choice == 0 and n:
            a = word[i]
            step = opar(OId(pre), Lifted(a.owner, random_term(rng, th.base, a.payload, 3)), OId(post))
        elif choice == 1 and n:
            a = word[i]
            cut = rng.randint(0, len(a.payload))
            step = opar(OId(pre), PsiPair(a.owner, a.payload[:cut], a.payload[cut:]), OId(post))
        elif choice == 2 and n >= 2 and i + 1 < n and word[i].owner == word[i + 1].owner:
            a, b = word[i], word[i + 1]
            step = opar(OId(pre), PhiPair(a.owner, a.payload, b.payload), OId(word[i + 2:]))
        elif choice == 3 and n:
            a = word[i]
            step = opar(OId(pre), Gamma(a.payload, a.owner, rng.choice(owners)), OId(post))
        elif choice == 4 and n >= 2 and i + 1 < n:
            step = opar(OId(pre), OSym((word[i],), (word[i + 1],)), OId(word[i + 2:]))
        elif choice == 5:
            j = rng.randint(0, n)
            step = opar(OId(word[:j]), PhiUnit(rng.choice(owners)), OId(word[j:]))
        elif choice == 6 and n and not word[i].payload:
            step = opar(OId(pre), PsiUnit(word[i].owner), OId(post))
        elif choice == 7 and n:
            a = word[i]
            step = opar(OId(pre), Gamma(a.payload, a.owner, a.owner), OId(post))
        if step is None:
            continue
        term = step if isinstance(term, OId) else OSeq(term, step)
        word = owned_typecheck(term, th)[1]
    return term


def gather(rng: random.Random, th, term, owner: str):
    """Extend ``term`` so it ends in a single atom owned by ``owner``."""
    _, cod = owned_typecheck(term, th)
    moves = [Gamma(a.payload, a.owner, owner) if a.owner != owner else OId((a,)) for a in cod]
    moved = tuple(OwnedAtom(a.payload, owner) for a in cod)
    tail = oseq(opar(*moves) if cod else None, canonical_regroup(moved, owner))
    return term if tail is None else OSeq(term, tail)


# -- coins -----------------------------------------------------------------------


def coin_theory(owners: Sequence[str] = OWNERS):
    return coin_theory_for(owners)


def coin_atom(n: int, owner: str) -> OwnedAtom:
    return OwnedAtom((COIN,) * n, owner)


def route_tokens(t, word_tokens: List[Tuple[str, Tuple]]) -> List[Tuple[str, Tuple]]:
    """Push labelled unit tokens through a coin term.

    Each atom is ``(owner, tokens)``; ``nu`` emits the anonymous token
    ``"nu"``.  This simulates the morphism directly and shares no code with
    the equality engine.
    """
    if isinstance(t, OSeq):
        return route_tokens(t.second, route_tokens(t.first, word_tokens))
    if isinstance(t, OPar):
        k = _arity(t.left)
        return route_tokens(t.left, word_tokens[:k]) + route_tokens(t.right, word_tokens[k:])
    if isinstance(t, OId):
        return list(word_tokens)
    if isinstance(t, OSym):
        k = len(t.left)
        return word_tokens[k:] + word_tokens[:k]
    if isinstance(t, PhiPair):
        (o, x), (_, y) = word_tokens
        return [(o, x + y)]
    if isinstance(t, PsiPair):
        ((o, x),) = word_tokens
        return [(o, x[:len(t.x)]), (o, x[len(t.x):])]
    if isinstance(t, PhiUnit):
        return [(t.owner, ())]
    if isinstance(t, PsiUnit):
        return []
    if isinstance(t, Gamma):
        ((_, x),) = word_tokens
        return [(t.target, x)]
    if isinstance(t, Lifted):
        ((o, x),) = word_tokens
        return [(o, _route_base(t.base, x))]
    raise TypeError(t)


def _route_base(f, tokens: Tuple) -> Tuple:
    if isinstance(f, Gen):
        return ("nu",)
    if isinstance(f, Id):
        return tokens
    if isinstance(f, Seq):
        return _route_base(f.second, _route_base(f.first, tokens))
    if isinstance(f, Sym):
        k = len(f.left)
        return tokens[k:] + tokens[:k]
    if isinstance(f, Par):
        k = _base_arity(f.left)
        return _route_base(f.left, tokens[:k]) + _route_base(f.right, tokens[k:])
    raise TypeError(f)


def _base_arity(f) -> int:
    if isinstance(f, Gen):
        return 0
    if isinstance(f, Id):
        return len(f.word)
    if isinstance(f, Seq):
        return _base_arity(f.first)
    if isinstance(f, Sym):
        return len(f.left) + len(f.right)
    if isinstance(f, Par):
        return _base_arity(f.left) + _base_arity(f.right)
    raise TypeError(f)


def _arity(t) -> int:
    if isinstance(t, OSeq):
        return _arity(t.first)
    if isinstance(t, OPar):
        return _arity(t.left) + _arity(t.right)
    if isinstance(t, OId):
        return len(t.word)
    if isinstance(t, OSym):
        return len(t.left) + len(t.right)
    if isinstance(t, (PhiPair,)):
        return 2
    if isinstance(t, (PhiUnit,)):
        return 0
    return 1


def input_tokens(word) -> List[Tuple[str, Tuple]]:
    out, k = [], 0
    for a in word:
        n = len(a.payload)
        out.append((a.owner, tuple(("in", k + i) for i in range(n))))
        k += n
    return out


def routing(t, dom) -> Tuple:
    """Flattened output tokens: what the forgetful image of ``t`` does to the unit wires."""
    return tuple(tok for _, toks in route_tokens(t, input_tokens(dom)) for tok in toks)



# -- exhaustive coin terms ------------------------------------------------------------


def coin_factors(word, owners: Sequence[str], max_value: int = 4, max_atoms: int = 4):
    """Every single structural or mint step out of ``word``, padded with identities.

    Yields ``(term, cod)``.  Steps whose codomain exceeds ``max_value`` total
    coins or ``max_atoms`` atoms are skipped.
    """
    w = tuple(word)
    total = sum(len(a.payload) for a in w)

    def pad(i, j, f, mid):
        t = opar(OId(w[:i]), f, OId(w[j:])) if (i or j < len(w)) else f
        return t, w[:i] + mid + w[j:]

    out = []
    for i, a in enumerate(w):
        n, o = len(a.payload), a.owner
        for k in range(n + 1):
            x, y = (COIN,) * k, (COIN,) * (n - k)
            out.append(pad(i, i + 1, PsiPair(o, x, y), (OwnedAtom(x, o), OwnedAtom(y, o))))
        if n == 0:
            out.append(pad(i, i + 1, PsiUnit(o), ()))
            if total < max_value:
                out.append(pad(i, i + 1, Lifted(o, Gen("nu")), (OwnedAtom((COIN,), o),)))
        for k in range(n - 1):
            f = par(*([Id((COIN,) * k)] if k else []), Sym((COIN,), (COIN,)),
                    *([Id((COIN,) * (n - k - 2))] if n - k - 2 else []))
            out.append(pad(i, i + 1, Lifted(o, f), (a,)))
        for b in owners:
            if b != o:
                out.append(pad(i, i + 1, Gamma(a.payload, o, b), (OwnedAtom(a.payload, b),)))
        if i + 1 < len(w):
            c = w[i + 1]
            out.append(pad(i, i + 2, OSym((a,), (c,)), (c, a)))
            if c.owner == o:
                out.append(pad(i, i + 2, PhiPair(o, a.payload, c.payload), (OwnedAtom(a.payload + c.payload, o),)))
    for i in range(len(w) + 1):
        for o in owners:
            out.append(pad(i, i, PhiUnit(o), (OwnedAtom((), o),)))
    for t, cod in out:
        if len(cod) <= max_atoms:
            yield t, cod


def coin_words(owners: Sequence[str], max_value: int, max_atoms: int):
    """All owned coin words with at most ``max_atoms`` atoms and total value ``<= max_value``."""
    words = [()]
    frontier = [()]
    for _ in range(max_atoms):
        nxt = []
        for w in frontier:
            used = sum(len(a.payload) for a in w)
            for n in range(max_value - used + 1):
                for o in owners:
                    nxt.append(w + (OwnedAtom((COIN,) * n, o),))
        words.extend(nxt)
        frontier = nxt
    return words


def coin_terms(dom, owners: Sequence[str], max_factors: int = 4, max_value: int = 4, max_atoms: int = 4):
    """All composites of at most ``max_factors`` steps out of ``dom``, as ``(term, cod)``."""
    layer = [(OId(tuple(dom)), tuple(dom))]
    found = list(layer)
    for _ in range(max_factors):
        nxt = []
        for t, w in layer:
            for f, cod in coin_factors(w, owners, max_value, max_atoms):
                nxt.append((f if isinstance(t, OId) else OSeq(t, f), cod))
        found.extend(nxt)
        layer = nxt
    return found
