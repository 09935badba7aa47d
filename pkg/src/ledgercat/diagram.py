"""String diagrams as port graphs with ordered boundaries.

A diagram stores, for every *sink* (a node input port or a boundary output),
the *source* that feeds it (a node output port or a boundary input).  Ports
are ``(node, index)`` pairs; ``node == BOUNDARY`` (-1) addresses the diagram
boundary.  Because every port carries exactly one wire the sink-to-source
map determines the whole wiring.

Equality in the free symmetric strict monoidal category is isomorphism of
these graphs with both boundaries fixed pointwise.  Ports are ordered, so
once any node is matched its whole connected component is forced; the only
freedom is in components that never touch the boundary.  ``canonical_key``
exploits that to produce a complete invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from ._backend import canonical_order
from .errors import TypingError
from .terms import Gen, Id, MorphismTerm, Par, Seq, Sym, Word
from .theory import Theory, typecheck

BOUNDARY = -1

Port = Tuple[int, int]


@dataclass(frozen=True)
class Node:
    """A box.  ``kind`` is a rendering hint (gen, phi, psi, phiI, psiI, gamma)."""

    label: str
    dom: Tuple[str, ...]
    cod: Tuple[str, ...]
    kind: str = "gen"

    @property
    def key(self) -> Tuple:
        return (self.label, self.dom, self.cod)


@dataclass(frozen=True)
class Diagram:
    dom: Tuple[str, ...]
    cod: Tuple[str, ...]
    nodes: Tuple[Node, ...] = ()
    node_inputs: Tuple[Tuple[Port, ...], ...] = ()
    outputs: Tuple[Port, ...] = ()

    # -- structure -------------------------------------------------------
    def source_label(self, src: Port) -> str:
        k, p = src
        return self.dom[p] if k == BOUNDARY else self.nodes[k].cod[p]

    @cached_property
    def sinks(self) -> Dict[Port, Port]:
        """Map each source port to the sink port it feeds."""
        out: Dict[Port, Port] = {}
        for k, srcs in enumerate(self.node_inputs):
            for p, s in enumerate(srcs):
                out[s] = (k, p)
        for j, s in enumerate(self.outputs):
            out[s] = (BOUNDARY, j)
        return out

    def wires(self) -> List[Tuple[Port, Port]]:
        """All ``(source, sink)`` links, sinks in node order then boundary order."""
        ws = [(s, (k, p)) for k, srcs in enumerate(self.node_inputs) for p, s in enumerate(srcs)]
        ws += [(s, (BOUNDARY, j)) for j, s in enumerate(self.outputs)]
        return ws

    def wire_label(self, src: Port) -> str:
        return self.source_label(src)

    def successors(self, k: int) -> List[int]:
        sinks = self.sinks
        return sorted({sinks[(k, q)][0] for q in range(len(self.nodes[k].cod))} - {BOUNDARY})

    def predecessors(self, k: int) -> List[int]:
        return sorted({s[0] for s in self.node_inputs[k]} - {BOUNDARY})

    def validate(self) -> None:
        """Check port attachment, label agreement and acyclicity."""
        n = len(self.nodes)
        if len(self.node_inputs) != n:
            raise TypingError("node_inputs length differs from node count")
        if len(self.outputs) != len(self.cod):
            raise TypingError("output boundary length differs from codomain")
        used = set()
        expected = {(BOUNDARY, i) for i in range(len(self.dom))}
        expected |= {(k, q) for k in range(n) for q in range(len(self.nodes[k].cod))}
        sinks = [(s, self.nodes[k].dom[p]) for k, srcs in enumerate(self.node_inputs) for p, s in enumerate(srcs)]
        for k, srcs in enumerate(self.node_inputs):
            if len(srcs) != len(self.nodes[k].dom):
                raise TypingError(f"node {k} has {len(srcs)} inputs, expected {len(self.nodes[k].dom)}")
        sinks += [(s, self.cod[j]) for j, s in enumerate(self.outputs)]
        for s, label in sinks:
            if s not in expected:
                raise TypingError(f"dangling source {s}")
            if s in used:
                raise TypingError(f"source {s} feeds two sinks")
            used.add(s)
            if self.source_label(s) != label:
                raise TypingError(f"wire from {s} joins {self.source_label(s)} to {label}")
        if used != expected:
            raise TypingError(f"unattached sources {sorted(expected - used)}")
        if topological_order(self) is None:
            raise TypingError("diagram has a cycle")

    # -- equality --------------------------------------------------------
    @cached_property
    def canonical_key(self) -> Hashable:
        """A complete isomorphism invariant: equal keys iff ``diagram_equal``."""
        order = canonical_node_order(self)
        pos = {k: i for i, k in enumerate(order)}

        def enc(src: Port) -> Port:
            return src if src[0] == BOUNDARY else (pos[src[0]], src[1])

        body = tuple((self.nodes[k].key, tuple(enc(s) for s in self.node_inputs[k])) for k in order)
        return (self.dom, self.cod, body, tuple(enc(s) for s in self.outputs))

    def __len__(self) -> int:
        return len(self.nodes)

    def node_count(self, label: Optional[str] = None) -> int:
        if label is None:
            return len(self.nodes)
        return sum(1 for nd in self.nodes if nd.label == label)


# -- kernel interface ----------------------------------------------------


def flatten(d: Diagram, label_rank: Optional[Dict[Tuple, int]] = None):
    """Integer arrays consumed by the canonical-labelling kernel."""
    if label_rank is None:
        keys = sorted({nd.key for nd in d.nodes})
        label_rank = {k: i for i, k in enumerate(keys)}
    labels = [label_rank[nd.key] for nd in d.nodes]
    in_off = [0]
    src_node: List[int] = []
    src_port: List[int] = []
    for srcs in d.node_inputs:
        for k, p in srcs:
            src_node.append(k)
            src_port.append(p)
        in_off.append(len(src_node))
    sinks = d.sinks
    out_off = [0]
    snk_node: List[int] = []
    snk_port: List[int] = []
    for k, nd in enumerate(d.nodes):
        for q in range(len(nd.cod)):
            t = sinks[(k, q)]
            snk_node.append(t[0])
            snk_port.append(t[1])
        out_off.append(len(snk_node))
    bout = [s[0] for s in d.outputs]
    bin_ = [sinks[(BOUNDARY, i)][0] for i in range(len(d.dom))]
    return labels, in_off, src_node, src_port, out_off, snk_node, snk_port, bout, bin_


def canonical_node_order(d: Diagram) -> List[int]:
    if not d.nodes:
        return []
    return list(canonical_order(*flatten(d)))


# -- construction ----------------------------------------------------------


def identity(word: Word) -> Diagram:
    word = tuple(word)
    return Diagram(word, word, outputs=tuple((BOUNDARY, i) for i in range(len(word))))


def symmetry(left: Word, right: Word) -> Diagram:
    left, right = tuple(left), tuple(right)
    n = len(left)
    outs = tuple((BOUNDARY, n + j) for j in range(len(right))) + tuple((BOUNDARY, i) for i in range(n))
    return Diagram(left + right, right + left, outputs=outs)


def permutation(word: Word, perm: Sequence[int]) -> Diagram:
    """Wiring whose output ``j`` is input ``perm[j]``."""
    word = tuple(word)
    if sorted(perm) != list(range(len(word))):
        raise ValueError(f"not a permutation of {len(word)} wires: {perm}")
    return Diagram(word, tuple(word[i] for i in perm), outputs=tuple((BOUNDARY, i) for i in perm))


def box(node: Node) -> Diagram:
    return Diagram(
        node.dom,
        node.cod,
        (node,),
        (tuple((BOUNDARY, i) for i in range(len(node.dom))),),
        tuple((0, q) for q in range(len(node.cod))),
    )


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """``d1`` then ``d2``."""
    if d1.cod != d2.dom:
        raise TypingError(f"cannot compose: {d1.cod} vs {d2.dom}")
    off = len(d1.nodes)

    def shift(s: Port) -> Port:
        return d1.outputs[s[1]] if s[0] == BOUNDARY else (s[0] + off, s[1])

    return Diagram(
        d1.dom,
        d2.cod,
        d1.nodes + d2.nodes,
        d1.node_inputs + tuple(tuple(shift(s) for s in srcs) for srcs in d2.node_inputs),
        tuple(shift(s) for s in d2.outputs),
    )


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    off = len(d1.nodes)
    width = len(d1.dom)

    def shift(s: Port) -> Port:
        return (BOUNDARY, s[1] + width) if s[0] == BOUNDARY else (s[0] + off, s[1])

    return Diagram(
        d1.dom + d2.dom,
        d1.cod + d2.cod,
        d1.nodes + d2.nodes,
        d1.node_inputs + tuple(tuple(shift(s) for s in srcs) for srcs in d2.node_inputs),
        d1.outputs + tuple(shift(s) for s in d2.outputs),
    )


def to_diagram(term: MorphismTerm, theory: Theory) -> Diagram:
    typecheck(term, theory)
    return _build(term, theory)


def _build(term: MorphismTerm, theory: Theory) -> Diagram:
    if isinstance(term, Gen):
        g = theory.generator(term.name)
        return box(Node(g.name, g.dom, g.cod))
    if isinstance(term, Id):
        return identity(term.word)
    if isinstance(term, Sym):
        return symmetry(term.left, term.right)
    if isinstance(term, Seq):
        return compose(_build(term.first, theory), _build(term.second, theory))
    if isinstance(term, Par):
        return tensor(_build(term.left, theory), _build(term.right, theory))
    raise TypingError(f"not a base term: {term!r}")


def topological_order(d: Diagram) -> Optional[List[int]]:
    """Kahn's algorithm, smallest index first; ``None`` on a cycle."""
    import heapq

    n = len(d.nodes)
    indeg = [len(set(d.predecessors(k))) for k in range(n)]
    heap = [k for k in range(n) if indeg[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        k = heapq.heappop(heap)
        order.append(k)
        for s in d.successors(k):
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(heap, s)
    return order if len(order) == n else None


def canonical_form(d: Diagram) -> Diagram:
    """The same diagram with nodes renumbered into canonical order."""
    order = canonical_node_order(d)
    pos = {k: i for i, k in enumerate(order)}

    def enc(s: Port) -> Port:
        return s if s[0] == BOUNDARY else (pos[s[0]], s[1])

    return Diagram(
        d.dom,
        d.cod,
        tuple(d.nodes[k] for k in order),
        tuple(tuple(enc(s) for s in d.node_inputs[k]) for k in order),
        tuple(enc(s) for s in d.outputs),
    )


def swap_steps(items: List, target: Sequence) -> List[int]:
    """Adjacent transpositions (by left position) sorting ``items`` into ``target``.

    Bubble sort, so the number of swaps is the inversion count: minimal.
    ``items`` is left in target order.
    """
    rank = {x: i for i, x in enumerate(target)}
    steps = []
    changed = True
    while changed:
        changed = False
        for i in range(len(items) - 1):
            if rank[items[i]] > rank[items[i + 1]]:
                items[i], items[i + 1] = items[i + 1], items[i]
                steps.append(i)
                changed = True
    return steps


def _swap_term(labels: List[str], i: int) -> MorphismTerm:
    t: MorphismTerm = Sym((labels[i],), (labels[i + 1],))
    if i > 0:
        t = Par(Id(tuple(labels[:i])), t)
    if i + 2 < len(labels):
        t = Par(t, Id(tuple(labels[i + 2:])))
    return t


def permutation_terms(labels: List[str], items: List, target: Sequence) -> List[MorphismTerm]:
    """Terms of adjacent crossings bringing ``items`` (labelled ``labels``) into ``target`` order."""
    labels = list(labels)
    out = []
    for i in swap_steps(list(items), target):
        out.append(_swap_term(labels, i))
        labels[i], labels[i + 1] = labels[i + 1], labels[i]
    return out


def diagram_to_term(d: Diagram) -> MorphismTerm:
    """A term denoting ``d``, identical for all diagrams equal to ``d``.

    Nodes are applied one per layer in canonical topological order; before
    each node its input wires are crossed to the front.
    """
    c = canonical_form(d)
    wires: List[Port] = [(BOUNDARY, i) for i in range(len(c.dom))]
    steps: List[MorphismTerm] = []
    for k in topological_order(c) or []:
        ins = list(c.node_inputs[k])
        need = set(ins)
        target = ins + [w for w in wires if w not in need]
        steps += permutation_terms([c.source_label(w) for w in wires], wires, target)
        rest = target[len(ins):]
        layer: MorphismTerm = Gen(c.nodes[k].label)
        if rest:
            layer = Par(layer, Id(tuple(c.source_label(w) for w in rest)))
        steps.append(layer)
        wires = [(k, q) for q in range(len(c.nodes[k].cod))] + rest
    steps += permutation_terms([c.source_label(w) for w in wires], wires, list(c.outputs))
    if not steps:
        return Id(c.dom)
    t = steps[0]
    for s in steps[1:]:
        t = Seq(t, s)
    return t
