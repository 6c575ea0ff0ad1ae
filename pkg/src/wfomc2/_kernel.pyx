# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled DP kernel; semantics identical to ``_kernel_py``."""


cdef list _admissible(dict follow, list choices, list r_tilde, tuple tail, Py_ssize_t depth):
    cdef object opts = follow.get(tail[:depth])
    if opts is not None:
        return <list>opts
    cdef list cur = choices, nxt, r
    cdef Py_ssize_t d, t
    cdef tuple pre, c
    for d in range(1, depth + 1):
        pre = tail[:d]
        opts = follow.get(pre)
        if opts is None:
            r = <list>r_tilde[d - 1]
            t = <Py_ssize_t>tail[d - 1]
            nxt = [c for c in cur if (<list>r[<Py_ssize_t>c[1]])[t]]
            follow[pre] = nxt
        else:
            nxt = <list>opts
        cur = nxt
    return cur


def step(dict prev, Py_ssize_t h, list choices, tuple sizes, Py_ssize_t ncls,
         Py_ssize_t window, bint has_anchor, list w_hat, list powtab, list r_tilde,
         list col_class, list row_class, object one):
    cdef Py_ssize_t G = len(sizes)
    cdef Py_ssize_t kc0 = G
    cdef Py_ssize_t tl0 = G + ncls
    cdef Py_ssize_t an0 = tl0 + window
    cdef Py_ssize_t depth = h if h < window else window
    cdef Py_ssize_t s, c, e, t, g, l
    cdef dict out = {}
    cdef dict cache = {}
    cdef dict follow = {}
    cdef list K, base_counts, nk, row, options
    cdef tuple key, tail, ck
    cdef object val, W, prod, cur, choice
    for key, val in prev.items():
        base_counts = list(key[kc0:tl0])
        tail = key[tl0:an0]
        options = _admissible(follow, choices, r_tilde, tail, depth) if depth else choices
        for choice in options:
            g = (<tuple>choice)[0]
            l = (<tuple>choice)[1]
            if G and <Py_ssize_t>key[g] >= <Py_ssize_t>sizes[g]:
                continue
            W = val
            K = base_counts[:]
            for s in range(depth):
                t = <Py_ssize_t>tail[s]
                W = W * (<list>(<list>r_tilde[s])[l])[t]
                if not W:
                    break
                c = <Py_ssize_t>col_class[t]
                K[c] = <Py_ssize_t>K[c] - 1
            if not W:
                continue
            ck = (l,) + tuple(K)
            prod = cache.get(ck)
            if prod is None:
                prod = w_hat[l]
                row = <list>powtab[<Py_ssize_t>row_class[l]]
                for c in range(ncls):
                    e = <Py_ssize_t>K[c]
                    if e:
                        prod = prod * (<list>row[c])[e]
                        if not prod:
                            break
                cache[ck] = prod
            if not prod:
                continue
            W = W * prod
            nk = list(key)
            if G:
                nk[g] = <Py_ssize_t>nk[g] + 1
            c = kc0 + <Py_ssize_t>col_class[l]
            nk[c] = <Py_ssize_t>nk[c] + 1
            if window:
                nk[tl0 + 1:an0] = tail[:window - 1]
                nk[tl0] = l
            if has_anchor and h == 0:
                nk[an0] = l
            key2 = tuple(nk)
            cur = out.get(key2)
            out[key2] = W if cur is None else cur + W
    return {k: v for k, v in out.items() if v}


def close_cyclic(dict prev, list choices, tuple sizes, Py_ssize_t ncls, list w_hat,
                 list powtab, list r_cyc, list r_end, list col_class, list row_class,
                 object one, object zero, bint same):
    cdef Py_ssize_t G = len(sizes)
    cdef Py_ssize_t kc0 = G
    cdef Py_ssize_t tl0 = G + ncls
    cdef Py_ssize_t an0 = tl0 + 1
    cdef Py_ssize_t t, t0, g, l, c, e
    cdef list K, row, options
    cdef list link = r_end if same else r_cyc
    cdef dict follow = {}
    cdef tuple key
    cdef object val, W, prod, total = zero, choice
    for key, val in prev.items():
        t = <Py_ssize_t>key[tl0]
        t0 = <Py_ssize_t>key[an0]
        options = follow.get(t)
        if options is None:
            options = [ch for ch in choices if (<list>link[(<tuple>ch)[1]])[t]]
            follow[t] = options
        for choice in options:
            g = (<tuple>choice)[0]
            l = (<tuple>choice)[1]
            if G and <Py_ssize_t>key[g] >= <Py_ssize_t>sizes[g]:
                continue
            K = list(key[kc0:tl0])
            if same:
                W = val * (<list>r_end[l])[t0]
                c = <Py_ssize_t>col_class[t0]
                K[c] = <Py_ssize_t>K[c] - 1
            else:
                W = val * (<list>r_cyc[l])[t]
                if W:
                    W = W * (<list>r_end[l])[t0]
                c = <Py_ssize_t>col_class[t]
                K[c] = <Py_ssize_t>K[c] - 1
                c = <Py_ssize_t>col_class[t0]
                K[c] = <Py_ssize_t>K[c] - 1
            if not W:
                continue
            row = <list>powtab[<Py_ssize_t>row_class[l]]
            prod = one
            for c in range(ncls):
                e = <Py_ssize_t>K[c]
                if e:
                    prod = prod * (<list>row[c])[e]
            total = total + W * w_hat[l] * prod
    return total
