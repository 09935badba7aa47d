# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled canonical node ordering; same contract as ``_canon_py``."""

from libc.stdlib cimport malloc, free


cdef int _discover(int n_start, int *start, int *in_off, int *src_node,
                   int *out_off, int *snk_node, int *idx, int *order, int count):
    cdef int s, k, j, p, q, h
    for s in range(n_start):
        k = start[s]
        if k >= 0 and idx[k] < 0:
            idx[k] = count
            order[count] = k
            count += 1
    h = 0
    while h < count:
        k = order[h]
        h += 1
        for p in range(in_off[k], in_off[k + 1]):
            j = src_node[p]
            if j >= 0 and idx[j] < 0:
                idx[j] = count
                order[count] = j
                count += 1
        for q in range(out_off[k], out_off[k + 1]):
            j = snk_node[q]
            if j >= 0 and idx[j] < 0:
                idx[j] = count
                order[count] = j
                count += 1
    return count


cdef int _encode(int count, int *order, int *idx, int *labels, int *in_off,
                 int *src_node, int *src_port, int *out_off, int *snk_node,
                 int *snk_port, int *code):
    cdef int c = 0, i, k, p, q, j
    for i in range(count):
        k = order[i]
        code[c] = labels[k]
        c += 1
        for p in range(in_off[k], in_off[k + 1]):
            j = src_node[p]
            code[c] = idx[j] if j >= 0 else -1
            code[c + 1] = src_port[p]
            c += 2
        for q in range(out_off[k], out_off[k + 1]):
            j = snk_node[q]
            code[c] = idx[j] if j >= 0 else -1
            code[c + 1] = snk_port[q]
            c += 2
    return c


cdef int *_carray(object xs) except NULL:
    cdef Py_ssize_t m = len(xs), i
    cdef int *a = <int *> malloc((m + 1) * sizeof(int))
    if a == NULL:
        raise MemoryError()
    for i in range(m):
        a[i] = xs[i]
    return a


cdef int _cmp(int *a, int na, int *b, int nb):
    cdef int i, m = na if na < nb else nb
    for i in range(m):
        if a[i] != b[i]:
            return -1 if a[i] < b[i] else 1
    if na == nb:
        return 0
    return -1 if na < nb else 1


def canonical_order(labels, in_off, src_node, src_port, out_off, snk_node,
                    snk_port, bout, bin_):
    cdef int n = len(labels)
    cdef int n_ports = len(src_node) + len(snk_node)
    cdef int code_len = n + 2 * n_ports + 1
    cdef int *c_labels = _carray(labels)
    cdef int *c_in_off = _carray(in_off)
    cdef int *c_src_node = _carray(src_node)
    cdef int *c_src_port = _carray(src_port)
    cdef int *c_out_off = _carray(out_off)
    cdef int *c_snk_node = _carray(snk_node)
    cdef int *c_snk_port = _carray(snk_port)
    cdef int *c_start = _carray(list(bout) + list(bin_))
    cdef int *idx = <int *> malloc((n + 1) * sizeof(int))
    cdef int *order = <int *> malloc((n + 1) * sizeof(int))
    cdef int *r_idx = <int *> malloc((n + 1) * sizeof(int))
    cdef int *r_order = <int *> malloc((n + 1) * sizeof(int))
    cdef int *code = <int *> malloc(code_len * sizeof(int))
    cdef int *best = <int *> malloc(code_len * sizeof(int))
    cdef int i, k, count, comp_count, root, lo, r_count, c_len, best_len
    cdef bint have_best
    result = []
    try:
        for i in range(n):
            idx[i] = -1
        count = _discover(len(bout) + len(bin_), c_start, c_in_off, c_src_node,
                          c_out_off, c_snk_node, idx, order, 0)
        result = [order[i] for i in range(count)]
        if count == n:
            return result
        comps = []
        # idx doubles as the "already placed" marker for closed components
        for k in range(n):
            if idx[k] >= 0:
                continue
            for i in range(n):
                r_idx[i] = -1
            comp_count = _discover(1, &k, c_in_off, c_src_node, c_out_off,
                                   c_snk_node, r_idx, r_order, 0)
            comp = [r_order[i] for i in range(comp_count)]
            lo = c_labels[comp[0]]
            for root in comp:
                idx[root] = n
                if c_labels[root] < lo:
                    lo = c_labels[root]
            have_best = False
            best_len = 0
            best_order = None
            for root in comp:
                if c_labels[root] != lo:
                    continue
                for i in range(n):
                    r_idx[i] = -1
                r_count = _discover(1, &root, c_in_off, c_src_node, c_out_off,
                                    c_snk_node, r_idx, r_order, 0)
                c_len = _encode(r_count, r_order, r_idx, c_labels, c_in_off,
                                c_src_node, c_src_port, c_out_off, c_snk_node,
                                c_snk_port, code)
                if not have_best or _cmp(code, c_len, best, best_len) < 0:
                    for i in range(c_len):
                        best[i] = code[i]
                    best_len = c_len
                    best_order = [r_order[i] for i in range(r_count)]
                    have_best = True
            comps.append(([best[i] for i in range(best_len)], best_order))
        comps.sort(key=lambda c: c[0])
        for _, comp_order in comps:
            result.extend(comp_order)
        return result
    finally:
        free(c_labels); free(c_in_off); free(c_src_node); free(c_src_port)
        free(c_out_off); free(c_snk_node); free(c_snk_port); free(c_start)
        free(idx); free(order); free(r_idx); free(r_order); free(code); free(best)
