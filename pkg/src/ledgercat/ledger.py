"""A coin ledger as a morphism ``I -> A`` of the ownership construction over coins.

The base theory has one atom ``coin`` (the object 1) and one generator
``nu : I -> coin``.  A coin of value ``n`` owned by ``A`` is the owned atom
``coin^n@A``.  A ledger is an append-only list of transactions; each one
wraps a local body ``f`` as ``crossings ; (id * f * id)`` acting on the whole
current frontier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .diagram import swap_steps
from .errors import LedgerError, LedgercatError, TypingError
from .ownership import (
    Gamma,
    Lifted,
    OId,
    OSeq,
    OSym,
    OwnedAtom,
    OwnedTerm,
    OwnedTheory,
    OwnedWord,
    Owner,
    PhiPair,
    PhiUnit,
    PsiPair,
    build_ownership_theory,
    canonical_regroup,
    format_owned_term,
    format_owned_word,
    opar,
    oseq,
    owned_equal,
    owned_typecheck,
)
from .rewrite import EqResult
from .terms import Gen, Id, MorphismTerm, par
from .theory import GeneratorDecl, Theory

COIN = "coin"
NU = "nu"
FORMAT = "ledgercat-ledger"
VERSION = 1

DEFAULT_OWNERS = (
    Owner("Alice", "#e41a1c"),
    Owner("Bob", "#377eb8"),
    Owner("Carol", "#4daf4a"),
)


def coin_theory() -> Theory:
    return Theory((COIN,), (GeneratorDecl(NU, (), (COIN,)),))


def nu(n: int) -> MorphismTerm:
    """``n``-fold tensor of the mint generator; ``id(I)`` for ``n = 0``."""
    if n < 0:
        raise ValueError("coin values are nonnegative")
    return Id(()) if n == 0 else par(*[Gen(NU)] * n)


def coin(n: int, owner: str) -> OwnedAtom:
    return OwnedAtom((COIN,) * n, owner)


def coin_value(a: OwnedAtom) -> int:
    return len(a.payload)


def coin_theory_for(owners: Iterable[Owner] = DEFAULT_OWNERS) -> OwnedTheory:
    return build_ownership_theory(coin_theory(), owners)


# -- transaction bodies --------------------------------------------------------


def mint(owner: str, n: int) -> OwnedTerm:
    """``I -> n^owner``: ``n`` unit coins minted and regrouped into one."""
    if n < 1:
        raise LedgerError(f"cannot mint a coin of value {n}")
    unit = OSeq(PhiUnit(owner), Lifted(owner, Gen(NU)))
    if n == 1:
        return unit
    return OSeq(opar(*[unit] * n), canonical_regroup((coin(1, owner),) * n, owner))


def _at(frontier: Sequence[OwnedAtom], pos: int) -> OwnedAtom:
    if not 0 <= pos < len(frontier):
        raise LedgerError(f"position {pos} out of range for a frontier of {len(frontier)} coins")
    return frontier[pos]


def split(frontier: Sequence[OwnedAtom], position: int, k: int) -> OwnedTerm:
    c = _at(frontier, position)
    n = coin_value(c)
    if not 1 <= k <= n - 1:
        raise LedgerError(f"cannot split a coin of value {n} at {k}")
    return PsiPair(c.owner, (COIN,) * k, (COIN,) * (n - k))


def merge(frontier: Sequence[OwnedAtom], i: int, j: int) -> OwnedTerm:
    a, b = _at(frontier, i), _at(frontier, j)
    if i == j:
        raise LedgerError("cannot merge a coin with itself")
    if a.owner != b.owner:
        raise LedgerError(f"cannot merge coins of {a.owner} and {b.owner}")
    return PhiPair(a.owner, a.payload, b.payload)


def transfer(frontier: Sequence[OwnedAtom], position: int, to: str) -> OwnedTerm:
    c = _at(frontier, position)
    return Gamma(c.payload, c.owner, to)


# -- packaging -----------------------------------------------------------------


@dataclass(frozen=True)
class Transaction:
    kind: str
    inputs: Tuple[int, ...]
    body: OwnedTerm
    before: OwnedWord
    after: OwnedWord
    crossings: Tuple[OwnedTerm, ...]
    anchor: int

    @property
    def morphism(self) -> OwnedTerm:
        """The packaged map ``before -> after``."""
        rest = self.after[: self.anchor], self.after[len(self.after) - self._tail :]
        padded = opar(OId(rest[0]), self.body, OId(rest[1]))
        return oseq(*self.crossings, padded) or OId(self.before)

    @property
    def _tail(self) -> int:
        return len(self.before) - self.anchor - len(self.inputs)


def _crossing(word: List[OwnedAtom], i: int) -> OwnedTerm:
    return opar(OId(tuple(word[:i])), OSym((word[i],), (word[i + 1],)), OId(tuple(word[i + 2:])))


def package(ledger: "Ledger", inputs: Sequence[int], body: OwnedTerm, kind: str = "custom") -> Transaction:
    """Embed ``body`` into the ledger's frontier.

    The selected coins are crossed (minimally, by adjacent transpositions)
    into one block at the leftmost selected position, in selection order;
    untouched coins keep their relative order.  With no inputs the body's
    outputs are appended on the right.
    """
    frontier = ledger.frontier
    inputs = tuple(inputs)
    for i in inputs:
        _at(frontier, i)
    if len(set(inputs)) != len(inputs):
        raise LedgerError(f"overlapping input positions {list(inputs)}")
    try:
        dom, cod = owned_typecheck(body, ledger.theory)
    except LedgercatError as exc:
        raise LedgerError(f"ill-typed transaction body: {exc}") from None
    selected = tuple(frontier[i] for i in inputs)
    if dom != selected:
        raise LedgerError(
            f"body domain {format_owned_word(dom)} does not match selected coins {format_owned_word(selected)}"
        )
    for a in cod:
        if coin_value(a) < 1:
            raise LedgerError("transactions may not produce empty coins")

    anchor = min(inputs) if inputs else len(frontier)
    chosen = set(inputs)
    order = list(range(anchor)) + list(inputs) + [i for i in range(anchor, len(frontier)) if i not in chosen]
    word = list(frontier)
    crossings = []
    for i in swap_steps(list(range(len(frontier))), order):
        crossings.append(_crossing(word, i))
        word[i], word[i + 1] = word[i + 1], word[i]
    after = tuple(word[:anchor]) + cod + tuple(word[anchor + len(inputs):])
    tx = Transaction(kind, inputs, body, frontier, after, tuple(crossings), anchor)
    try:
        ty = owned_typecheck(tx.morphism, ledger.theory)
    except TypingError as exc:  # pragma: no cover - guarded by the checks above
        raise LedgerError(f"packaged transaction does not typecheck: {exc}") from None
    assert ty == (frontier, after)
    return tx


# -- ledgers -------------------------------------------------------------------


@dataclass(frozen=True)
class Ledger:
    theory: OwnedTheory
    transactions: Tuple[Transaction, ...] = ()
    frontier: OwnedWord = ()

    @classmethod
    def empty(cls, owners: Iterable[Owner] = DEFAULT_OWNERS) -> "Ledger":
        return cls(coin_theory_for(owners))

    def append(self, tx: Transaction) -> "Ledger":
        if tx.before != self.frontier:
            raise LedgerError("stale transaction: it was packaged against a different frontier")
        return Ledger(self.theory, self.transactions + (tx,), tx.after)

    def apply(self, inputs: Sequence[int], body: OwnedTerm, kind: str = "custom") -> "Ledger":
        return self.append(package(self, inputs, body, kind))

    def mint(self, owner: str, n: int) -> "Ledger":
        self.theory.owner(owner)
        return self.apply((), mint(owner, n), "mint")

    def split(self, position: int, k: int) -> "Ledger":
        return self.apply((position,), split(self.frontier, position, k), "split")

    def merge(self, i: int, j: int) -> "Ledger":
        return self.apply((i, j), merge(self.frontier, i, j), "merge")

    def transfer(self, position: int, to: str) -> "Ledger":
        if not self.theory.has_owner(to):
            raise LedgerError(f"unknown owner {to!r}")
        return self.apply((position,), transfer(self.frontier, position, to), "transfer")

    @property
    def morphism(self) -> OwnedTerm:
        """The ledger as one composite ``I -> frontier``."""
        return oseq(*(tx.morphism for tx in self.transactions)) or OId(())

    def coins(self) -> List[Tuple[int, str]]:
        return [(coin_value(a), a.owner) for a in self.frontier]

    def total_minted(self) -> int:
        return sum(coin_value(a) for tx in self.transactions if tx.kind == "mint" for a in tx.after[tx.anchor:tx.anchor + 1])

    def __len__(self) -> int:
        return len(self.transactions)


def balances(ledger: Ledger) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for a in ledger.frontier:
        out[a.owner] = out.get(a.owner, 0) + coin_value(a)
    return out


def ledger_equivalent(l1: Ledger, l2: Ledger, budget: int = 1000) -> EqResult:
    """Compare two ledgers as morphisms.  Different frontiers are never equal."""
    if l1.frontier != l2.frontier:
        return EqResult.NOT_EQUAL
    return owned_equal(l1.morphism, l2.morphism, l1.theory, budget)


# -- persistence -----------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _frontier_record(word: OwnedWord) -> List[Dict]:
    return [{"owner": a.owner, "value": coin_value(a)} for a in word]


def dumps(ledger: Ledger) -> str:
    lines = [
        _dump({
            "format": FORMAT,
            "version": VERSION,
            "owners": [{"name": o.name, "colour": o.colour} for o in ledger.theory.owners],
        })
    ]
    for seq, tx in enumerate(ledger.transactions, start=1):
        lines.append(_dump({
            "seq": seq,
            "kind": tx.kind,
            "inputs": list(tx.inputs),
            "body": format_owned_term(tx.body),
            "resulting_frontier": _frontier_record(tx.after),
        }))
    return "\n".join(lines) + "\n"


def save(ledger: Ledger, sink) -> None:
    """Write to a path or a text stream."""
    text = dumps(ledger)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)


def loads(text: str) -> Ledger:
    """Parse and fully replay a ledger file."""
    from .parsing import parse_owned_term

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise LedgerError("missing header", 1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise LedgerError(f"malformed header: {exc.msg}", 1) from None
    if not isinstance(header, dict) or header.get("format") != FORMAT:
        raise LedgerError("not a ledger file", 1)
    if header.get("version") != VERSION:
        raise LedgerError(f"unsupported version {header.get('version')!r}", 1)
    try:
        owners = [Owner(o["name"], o["colour"]) for o in header["owners"]]
        ledger = Ledger.empty(owners)
    except (KeyError, TypeError, ValueError, LedgercatError) as exc:
        raise LedgerError(f"bad owner declarations: {exc}", 1) from None

    for ln, raw in enumerate(lines[1:], start=2):
        try:
            rec = json.loads(raw)
            seq, kind, inputs = rec["seq"], rec["kind"], tuple(rec["inputs"])
            body_text, recorded = rec["body"], rec["resulting_frontier"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise LedgerError(f"malformed record: {exc}", ln) from None
        if seq != ln - 1:
            raise LedgerError(f"expected seq {ln - 1}, found {seq}", ln)
        try:
            body = parse_owned_term(body_text, ledger.theory)
            ledger = ledger.apply(inputs, body, kind)
        except LedgercatError as exc:
            raise LedgerError(f"replay failed: {exc}", ln) from None
        if _frontier_record(ledger.frontier) != recorded:
            raise LedgerError("replay mismatch: recorded frontier differs from recomputed", ln)
    return ledger


def load(source) -> Ledger:
    if hasattr(source, "read"):
        return loads(source.read())
    with open(source, encoding="utf-8") as fh:
        return loads(fh.read())


def verify(ledger: Ledger) -> Optional[str]:
    """Re-typecheck the composite; return an error message or ``None``."""
    try:
        dom, cod = owned_typecheck(ledger.morphism, ledger.theory)
    except LedgercatError as exc:
        return str(exc)
    if dom != ():
        return "ledger does not start from the empty collection"
    if cod != ledger.frontier:
        return "cached frontier differs from the composite's codomain"
    return None
