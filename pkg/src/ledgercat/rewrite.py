"""Equality modulo user equations by bounded bidirectional rewriting.

Rules are matched anywhere in a host diagram as *convex* sub-port-graphs:
the matched nodes, together with any host wires standing in for
pass-through wires of the pattern, must be replaceable without creating a
cycle.  Search states are identified up to ``canonical_key`` so the search
is closed under structural equality.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .diagram import BOUNDARY, Diagram, Port, to_diagram
from .errors import NotParallelError
from .terms import MorphismTerm
from .theory import Theory, typecheck


class EqResult(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Rule:
    lhs: Diagram
    rhs: Diagram


@dataclass
class Match:
    nodes: Dict[int, int]                    # pattern node -> host node
    in_sources: Tuple[Port, ...]              # host source feeding pattern input i
    out_sinks: Tuple[Port, ...]               # host sink fed by pattern output j
    cut_wires: Tuple[Port, ...] = ()          # host sources of wires cut for pass-throughs


def rules_of(theory: Theory) -> List[Rule]:
    """Both orientations of every equation."""
    rules = []
    for eq in theory.equations:
        left = to_diagram(eq.lhs, theory)
        right = to_diagram(eq.rhs, theory)
        rules.append(Rule(left, right))
        rules.append(Rule(right, left))
    return rules


# -- matching ---------------------------------------------------------------


def _pattern_order(pat: Diagram) -> List[int]:
    """Pattern nodes in an order where each node after a component's first is adjacent to an earlier one."""
    order: List[int] = []
    seen: Set[int] = set()
    for start in range(len(pat.nodes)):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            k = queue.popleft()
            order.append(k)
            for j in pat.predecessors(k) + pat.successors(k):
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
    return order


def find_matches(pat: Diagram, host: Diagram) -> Iterator[Match]:
    """All convex occurrences of ``pat`` in ``host``."""
    order = _pattern_order(pat)
    by_key: Dict[Tuple, List[int]] = {}
    for h, nd in enumerate(host.nodes):
        by_key.setdefault(nd.key, []).append(h)
    for nodes in _assign(pat, host, order, 0, {}, set(), by_key):
        yield from _complete(pat, host, nodes)


def _candidates(pat: Diagram, host: Diagram, k: int, m: Dict[int, int], by_key) -> List[int]:
    # a wire to an already-matched neighbour forces the candidate
    for p, (sk, sq) in enumerate(pat.node_inputs[k]):
        if sk != BOUNDARY and sk in m:
            t = host.sinks.get((m[sk], sq))
            return [t[0]] if t is not None and t[0] != BOUNDARY and t[1] == p else []
    for q in range(len(pat.nodes[k].cod)):
        tk, tp = pat.sinks[(k, q)]
        if tk != BOUNDARY and tk in m:
            s = host.node_inputs[m[tk]][tp]
            return [s[0]] if s[0] != BOUNDARY and s[1] == q else []
    return by_key.get(pat.nodes[k].key, [])


def _consistent(pat: Diagram, host: Diagram, k: int, h: int, m: Dict[int, int]) -> bool:
    for p, (sk, sq) in enumerate(pat.node_inputs[k]):
        if sk != BOUNDARY and sk in m and host.node_inputs[h][p] != (m[sk], sq):
            return False
    for q in range(len(pat.nodes[k].cod)):
        tk, tp = pat.sinks[(k, q)]
        if tk != BOUNDARY and tk in m and host.sinks[(h, q)] != (m[tk], tp):
            return False
    return True


def _assign(pat, host, order, i, m, used, by_key) -> Iterator[Dict[int, int]]:
    if i == len(order):
        yield dict(m)
        return
    k = order[i]
    for h in _candidates(pat, host, k, m, by_key):
        if h in used or host.nodes[h].key != pat.nodes[k].key:
            continue
        if not _consistent(pat, host, k, h, m):
            continue
        m[k] = h
        used.add(h)
        yield from _assign(pat, host, order, i + 1, m, used, by_key)
        del m[k]
        used.discard(h)


def _complete(pat: Diagram, host: Diagram, nodes: Dict[int, int]) -> Iterator[Match]:
    matched = set(nodes.values())
    n_in = len(pat.dom)
    in_src: List[Optional[Port]] = [None] * n_in
    out_snk: List[Optional[Port]] = [None] * len(pat.cod)
    for k, srcs in enumerate(pat.node_inputs):
        for p, (sk, sq) in enumerate(srcs):
            if sk == BOUNDARY:
                in_src[sq] = host.node_inputs[nodes[k]][p]
    through: List[Tuple[int, int]] = []
    for j, (sk, sq) in enumerate(pat.outputs):
        if sk == BOUNDARY:
            through.append((sq, j))
        else:
            out_snk[j] = host.sinks[(nodes[sk], sq)]
    # an interface wire may not lead straight back into the match
    for s in in_src:
        if s is not None and s[0] in matched:
            return
    for t in out_snk:
        if t is not None and t[0] in matched:
            return
    taken = {s for s in in_src if s is not None}
    spare = [
        s for s, t in host.wires()
        if s not in taken and s[0] not in matched and t[0] not in matched
    ]
    for chosen in _pick_wires(pat, host, through, spare):
        ins = list(in_src)
        outs = list(out_snk)
        for (i, j), s in zip(through, chosen):
            ins[i] = s
            outs[j] = host.sinks[s]
        match = Match(dict(nodes), tuple(ins), tuple(outs), tuple(chosen))
        if _convex(host, match):
            yield match


def _pick_wires(pat, host, through, spare) -> Iterator[Tuple[Port, ...]]:
    if not through:
        yield ()
        return
    for combo in permutations(spare, len(through)):
        if all(host.source_label(s) == pat.dom[i] for (i, _), s in zip(through, combo)):
            yield combo


def _convex(host: Diagram, match: Match) -> bool:
    """No path in the context from a hole output back to a hole input."""
    matched = set(match.nodes.values())
    cut = set(match.cut_wires)
    targets = {s[0] for s in match.in_sources if s[0] != BOUNDARY}
    if not targets:
        return True
    start = {t[0] for t in match.out_sinks if t[0] != BOUNDARY}
    stack = list(start)
    seen = set(stack)
    while stack:
        k = stack.pop()
        if k in targets:
            return False
        for q in range(len(host.nodes[k].cod)):
            if (k, q) in cut:
                continue
            j = host.sinks[(k, q)][0]
            if j != BOUNDARY and j not in matched and j not in seen:
                seen.add(j)
                stack.append(j)
    return True


# -- rewriting ----------------------------------------------------------------


def apply_rule(host: Diagram, rule: Rule, match: Match) -> Diagram:
    """Replace the matched occurrence of ``rule.lhs`` by ``rule.rhs``."""
    rhs = rule.rhs
    matched = set(match.nodes.values())
    keep = [k for k in range(len(host.nodes)) if k not in matched]
    renum = {k: i for i, k in enumerate(keep)}
    off = len(keep)
    hole_out = {t: j for j, t in enumerate(match.out_sinks)}

    def host_src(s: Port) -> Port:
        return s if s[0] == BOUNDARY else (renum[s[0]], s[1])

    def rhs_src(s: Port) -> Port:
        return host_src(match.in_sources[s[1]]) if s[0] == BOUNDARY else (s[0] + off, s[1])

    def feed(sink: Port, s: Port) -> Port:
        j = hole_out.get(sink)
        return rhs_src(rhs.outputs[j]) if j is not None else host_src(s)

    node_inputs = [tuple(feed((k, p), s) for p, s in enumerate(host.node_inputs[k])) for k in keep]
    node_inputs += [tuple(rhs_src(s) for s in srcs) for srcs in rhs.node_inputs]
    outputs = tuple(feed((BOUNDARY, j), s) for j, s in enumerate(host.outputs))
    return Diagram(
        host.dom,
        host.cod,
        tuple(host.nodes[k] for k in keep) + rhs.nodes,
        tuple(node_inputs),
        outputs,
    )


def rewrites(d: Diagram, rules: Sequence[Rule]) -> Iterator[Diagram]:
    for rule in rules:
        for m in find_matches(rule.lhs, d):
            yield apply_rule(d, rule, m)


def search_equal(d1: Diagram, d2: Diagram, rules: Sequence[Rule], budget: int) -> EqResult:
    """Bidirectional breadth-first search; ``budget`` caps the number of expanded states."""
    if d1.dom != d2.dom or d1.cod != d2.cod:
        raise NotParallelError(f"{d1.dom}->{d1.cod} vs {d2.dom}->{d2.cod}")
    k1, k2 = d1.canonical_key, d2.canonical_key
    if k1 == k2:
        return EqResult.EQUAL
    if not rules:
        return EqResult.NOT_EQUAL
    seen = ({k1}, {k2})
    frontier = (deque([d1]), deque([d2]))
    expanded = [0, 0]
    while True:
        if not frontier[0] or not frontier[1]:
            return EqResult.NOT_EQUAL
        if expanded[0] + expanded[1] >= budget:
            return EqResult.UNKNOWN
        # smaller frontier first; ties alternate so an exhausted side is noticed
        side = min((0, 1), key=lambda i: (len(frontier[i]), expanded[i]))
        d = frontier[side].popleft()
        expanded[side] += 1
        for nd in rewrites(d, rules):
            key = nd.canonical_key
            if key in seen[1 - side]:
                return EqResult.EQUAL
            if key not in seen[side]:
                seen[side].add(key)
                frontier[side].append(nd)


def equal_modulo(t1: MorphismTerm, t2: MorphismTerm, theory: Theory, budget: int = 1000) -> EqResult:
    """Decide ``t1 = t2`` in the theory, giving up with ``UNKNOWN`` after ``budget`` expansions."""
    ty1, ty2 = typecheck(t1, theory), typecheck(t2, theory)
    if ty1 != ty2:
        raise NotParallelError(f"terms are not parallel: {t1} and {t2}")
    return search_equal(to_diagram(t1, theory), to_diagram(t2, theory), rules_of(theory), budget)
