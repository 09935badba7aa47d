"""Pure-Python canonical node ordering (reference twin of ``_canon.pyx``).

Inputs are flat integer arrays describing a port graph:

* ``labels[k]``: rank of node ``k``'s label (order preserving)
* ``src_node[p]``, ``src_port[p]`` for input port ``p`` of node ``k`` with
  ``in_off[k] <= p < in_off[k + 1]``; node ``-1`` is the boundary
* ``snk_node[q]``, ``snk_port[q]`` likewise for output ports via ``out_off``
* ``bout[j]``: node feeding boundary output ``j`` (-1 for a pass-through)
* ``bin_[i]``: node fed by boundary input ``i`` (-1 for a pass-through)

Nodes reachable from the boundary are numbered by breadth-first discovery,
which is forced because ports are ordered.  Each remaining connected
component is rooted at the label-minimal node giving the lexicographically
least encoding, and components are emitted in encoding order.
"""


def _discover(start, labels, in_off, src_node, src_port, out_off, snk_node, snk_port, idx, order):
    for k in start:
        if k >= 0 and idx[k] < 0:
            idx[k] = len(order)
            order.append(k)
    h = 0
    while h < len(order):
        k = order[h]
        h += 1
        for p in range(in_off[k], in_off[k + 1]):
            j = src_node[p]
            if j >= 0 and idx[j] < 0:
                idx[j] = len(order)
                order.append(j)
        for q in range(out_off[k], out_off[k + 1]):
            j = snk_node[q]
            if j >= 0 and idx[j] < 0:
                idx[j] = len(order)
                order.append(j)


def _encode(order, idx, labels, in_off, src_node, src_port, out_off, snk_node, snk_port):
    code = []
    for k in order:
        code.append(labels[k])
        for p in range(in_off[k], in_off[k + 1]):
            j = src_node[p]
            code.append(idx[j] if j >= 0 else -1)
            code.append(src_port[p])
        for q in range(out_off[k], out_off[k + 1]):
            j = snk_node[q]
            code.append(idx[j] if j >= 0 else -1)
            code.append(snk_port[q])
    return code


def canonical_order(labels, in_off, src_node, src_port, out_off, snk_node, snk_port, bout, bin_):
    n = len(labels)
    idx = [-1] * n
    order = []
    arrays = (labels, in_off, src_node, src_port, out_off, snk_node, snk_port)
    _discover(list(bout) + list(bin_), *arrays, idx, order)
    if len(order) == n:
        return order

    comps = []
    seen = [i >= 0 for i in idx]
    for k in range(n):
        if seen[k]:
            continue
        # collect the component of k
        local_idx = [-1] * n
        comp = []
        _discover([k], *arrays, local_idx, comp)
        for j in comp:
            seen[j] = True
        best_code = None
        best_order = None
        lo = min(labels[j] for j in comp)
        for root in comp:
            if labels[root] != lo:
                continue
            r_idx = [-1] * n
            r_order = []
            _discover([root], *arrays, r_idx, r_order)
            code = _encode(r_order, r_idx, *arrays)
            if best_code is None or code < best_code:
                best_code, best_order = code, r_order
        comps.append((best_code, best_order))
    comps.sort(key=lambda c: c[0])
    for _, comp_order in comps:
        order.extend(comp_order)
    return order
