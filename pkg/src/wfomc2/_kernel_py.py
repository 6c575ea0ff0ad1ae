"""Pure-Python DP kernel.  ``_kernel.pyx`` is a line-for-line compiled twin.

State keys are flat int tuples laid out as::

    [group counts (only when there are several groups)]
    [per column-class element counts]
    [tail: cells of the last `window` elements, newest first, -1 = absent]
    [anchor: cell of the first element (cyclic runs only)]
"""


def _admissible(follow, choices, r_tilde, tail, depth):
    """Choices linking with nonzero weight to every element of the tail.

    Filtered lists are cached per tail prefix so a miss only rescans the
    (short) list of the next shorter prefix.
    """
    opts = follow.get(tail[:depth])
    if opts is not None:
        return opts
    opts = choices
    for d in range(1, depth + 1):
        pre = tail[:d]
        nxt = follow.get(pre)
        if nxt is None:
            r = r_tilde[d - 1]
            t = tail[d - 1]
            nxt = follow[pre] = [c for c in opts if r[c[1]][t]]
        opts = nxt
    return opts


def step(prev, h, choices, sizes, ncls, window, has_anchor,
         w_hat, powtab, r_tilde, col_class, row_class, one):
    """Append element ``h + 1`` to every state of ``prev``."""
    G = len(sizes)
    kc0 = G
    tl0 = G + ncls
    an0 = tl0 + window
    depth = h if h < window else window
    out = {}
    cache = {}
    follow = {}
    for key, val in prev.items():
        base_counts = list(key[kc0:tl0])
        tail = key[tl0:an0]
        options = _admissible(follow, choices, r_tilde, tail, depth) if depth else choices
        for g, l in options:
            if G and key[g] >= sizes[g]:
                continue
            W = val
            K = base_counts[:]
            for s in range(depth):
                t = tail[s]
                W = W * r_tilde[s][l][t]
                if not W:
                    break
                K[col_class[t]] -= 1
            if not W:
                continue
            ck = (l, *K)
            prod = cache.get(ck)
            if prod is None:
                prod = w_hat[l]
                row = powtab[row_class[l]]
                for c in range(ncls):
                    e = K[c]
                    if e:
                        prod = prod * row[c][e]
                        if not prod:
                            break
                cache[ck] = prod
            if not prod:
                continue
            W = W * prod
            nk = list(key)
            if G:
                nk[g] += 1
            nk[kc0 + col_class[l]] += 1
            if window:
                nk[tl0 + 1:an0] = tail[:window - 1]
                nk[tl0] = l
            if has_anchor and h == 0:
                nk[an0] = l
            nk = tuple(nk)
            cur = out.get(nk)
            out[nk] = W if cur is None else cur + W
    return {k: v for k, v in out.items() if v}


def close_cyclic(prev, choices, sizes, ncls, w_hat, powtab, r_cyc, r_end,
                 col_class, row_class, one, zero, same):
    """Append the last element of a cycle and return the total weight.

    ``r_end`` links the new element to the first one; with ``same`` (two
    elements) the first element is also the predecessor and ``r_end`` covers both.
    """
    G = len(sizes)
    kc0 = G
    tl0 = G + ncls
    an0 = tl0 + 1
    total = zero
    follow = {}
    link = r_end if same else r_cyc
    for key, val in prev.items():
        t = key[tl0]
        t0 = key[an0]
        options = follow.get(t)
        if options is None:
            options = follow[t] = [c for c in choices if link[c[1]][t]]
        for g, l in options:
            if G and key[g] >= sizes[g]:
                continue
            K = list(key[kc0:tl0])
            if same:
                W = val * r_end[l][t0]
                K[col_class[t0]] -= 1
            else:
                W = val * r_cyc[l][t]
                if W:
                    W = W * r_end[l][t0]
                K[col_class[t]] -= 1
                K[col_class[t0]] -= 1
            if not W:
                continue
            row = powtab[row_class[l]]
            prod = one
            for c in range(ncls):
                e = K[c]
                if e:
                    prod = prod * row[c][e]
            total = total + W * w_hat[l] * prod
    return total
