"""Boundary-respecting isomorphism of diagrams by direct matching.

This is deliberately independent of ``Diagram.canonical_key``: it builds an
explicit node bijection, propagating forced correspondences along ordered
ports and backtracking only over components that do not touch the
boundary.  The test suite checks that the two agree.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from .diagram import BOUNDARY, Diagram


def diagram_equal(d1: Diagram, d2: Diagram) -> bool:
    return find_isomorphism(d1, d2) is not None


def find_isomorphism(d1: Diagram, d2: Diagram) -> Optional[Dict[int, int]]:
    """Return a node bijection ``d1 -> d2`` fixing both boundaries, or ``None``."""
    if d1.dom != d2.dom or d1.cod != d2.cod or len(d1.nodes) != len(d2.nodes):
        return None
    if sorted(n.key for n in d1.nodes) != sorted(n.key for n in d2.nodes):
        return None
    fwd: Dict[int, int] = {}
    bwd: Dict[int, int] = {}
    pending: List = []

    # boundary outputs: sources must agree
    for s1, s2 in zip(d1.outputs, d2.outputs):
        if not _pair_ports(s1, s2, fwd, bwd, pending, d1, d2):
            return None
    # boundary inputs: sinks must agree
    for i in range(len(d1.dom)):
        t1, t2 = d1.sinks[(BOUNDARY, i)], d2.sinks[(BOUNDARY, i)]
        if not _pair_ports(t1, t2, fwd, bwd, pending, d1, d2):
            return None
    if not _propagate(fwd, bwd, pending, d1, d2):
        return None
    return _extend(fwd, bwd, d1, d2)


def _pair_ports(p1, p2, fwd, bwd, pending, d1, d2) -> bool:
    if p1[1] != p2[1]:
        return False
    a, b = p1[0], p2[0]
    if (a == BOUNDARY) != (b == BOUNDARY):
        return False
    if a == BOUNDARY:
        return True
    return _pair_nodes(a, b, fwd, bwd, pending, d1, d2)


def _pair_nodes(a, b, fwd, bwd, pending, d1, d2) -> bool:
    if a in fwd or b in bwd:
        return fwd.get(a) == b and bwd.get(b) == a
    if d1.nodes[a].key != d2.nodes[b].key:
        return False
    fwd[a] = b
    bwd[b] = a
    pending.append(a)
    return True


def _propagate(fwd, bwd, pending, d1, d2) -> bool:
    while pending:
        a = pending.pop()
        b = fwd[a]
        for s1, s2 in zip(d1.node_inputs[a], d2.node_inputs[b]):
            if not _pair_ports(s1, s2, fwd, bwd, pending, d1, d2):
                return False
        for q in range(len(d1.nodes[a].cod)):
            if not _pair_ports(d1.sinks[(a, q)], d2.sinks[(b, q)], fwd, bwd, pending, d1, d2):
                return False
    return True


def _extend(fwd, bwd, d1, d2) -> Optional[Dict[int, int]]:
    free1 = [k for k in range(len(d1.nodes)) if k not in fwd]
    if not free1:
        return dict(fwd)
    a = free1[0]
    for b in range(len(d2.nodes)):
        if b in bwd or d2.nodes[b].key != d1.nodes[a].key:
            continue
        f, g = dict(fwd), dict(bwd)
        pending: List = []
        if _pair_nodes(a, b, f, g, pending, d1, d2) and _propagate(f, g, pending, d1, d2):
            found = _extend(f, g, d1, d2)
            if found is not None:
                return found
    return None
