"""Brute-force enumeration of diagrams between two words.

Used as an oracle: every morphism with at most ``max_nodes`` generator
boxes is produced by adding boxes one at a time in some topological order
and finally routing the remaining wires onto the codomain.
"""

from __future__ import annotations

from collections import Counter
from itertools import permutations, product
from typing import Dict, Hashable, Iterator, List, Sequence, Tuple

from .diagram import Diagram, Node, identity
from .errors import ResourceLimitError
from .terms import Word
from .theory import Theory

DEFAULT_CAP = 20000


def _add_box(d: Diagram, node: Node, picks: Sequence[int]) -> Diagram:
    """Feed outputs ``picks`` of ``d`` into a new box; its outputs go first."""
    k = len(d.nodes)
    chosen = set(picks)
    rest = tuple(s for j, s in enumerate(d.outputs) if j not in chosen)
    return Diagram(
        d.dom,
        node.cod + tuple(d.cod[j] for j in range(len(d.cod)) if j not in chosen),
        d.nodes + (node,),
        d.node_inputs + (tuple(d.outputs[j] for j in picks),),
        tuple((k, q) for q in range(len(node.cod))) + rest,
    )


def _selections(word: Word, want: Word) -> Iterator[Tuple[int, ...]]:
    for picks in permutations(range(len(word)), len(want)):
        if all(word[j] == a for j, a in zip(picks, want)):
            yield picks


def _routings(have: Word, want: Word) -> Iterator[Tuple[int, ...]]:
    """Bijections ``j -> position in have`` with matching labels."""
    if Counter(have) != Counter(want):
        return
    slots: Dict[str, List[int]] = {}
    for j, a in enumerate(have):
        slots.setdefault(a, []).append(j)
    atoms = sorted(slots)
    per_atom = [list(permutations(slots[a])) for a in atoms]
    for choice in product(*per_atom):
        fill = {a: list(c) for a, c in zip(atoms, choice)}
        yield tuple(fill[a].pop(0) for a in want)


def enumerate_morphisms(
    theory: Theory, dom: Word, cod: Word, max_nodes: int, cap: int = DEFAULT_CAP
) -> List[Diagram]:
    """One representative per equality class of diagrams ``dom -> cod`` with at most ``max_nodes`` boxes."""
    dom, cod = theory.check_word(dom), theory.check_word(cod)
    boxes = [Node(g.name, g.dom, g.cod) for g in theory.generators]
    layer: Dict[Hashable, Diagram] = {identity(dom).canonical_key: identity(dom)}
    open_states: List[Diagram] = list(layer.values())
    for _ in range(max_nodes):
        nxt: Dict[Hashable, Diagram] = {}
        for d in layer.values():
            for node in boxes:
                for picks in _selections(d.cod, node.dom):
                    nd = _add_box(d, node, picks)
                    nxt.setdefault(nd.canonical_key, nd)
                    if len(nxt) > cap:
                        raise ResourceLimitError(f"more than {cap} partial diagrams")
        layer = nxt
        open_states.extend(layer.values())

    found: Dict[Hashable, Diagram] = {}
    for d in open_states:
        for route in _routings(d.cod, cod):
            fin = Diagram(d.dom, cod, d.nodes, d.node_inputs, tuple(d.outputs[j] for j in route))
            found.setdefault(fin.canonical_key, fin)
            if len(found) > cap:
                raise ResourceLimitError(f"more than {cap} morphism classes")
    return sorted(found.values(), key=lambda d: (len(d.nodes), repr(d.canonical_key)))

