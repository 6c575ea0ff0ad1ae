"""Dense, uncompressed transcriptions of each recurrence.

These keep full per-cell configuration vectors and recompute every product
from scratch.  They are slow and exist to cross-check the optimised engine in
:mod:`wfomc2.dp`; evidence is not supported.
"""
from __future__ import annotations

import math

from .syntax import SpecError
from .tables import WeightTables


def _bump(k: tuple, l: int, d: int = 1) -> tuple:
    return k[:l] + (k[l] + d,) + k[l + 1:]


def _add(table: dict, key, v):
    cur = table.get(key)
    table[key] = v if cur is None else cur + v


def _finish(tables: WeightTables, total, n: int, fixed_order: bool):
    return total if fixed_order else total * math.factorial(n)


def _total(tables: WeightTables, table: dict):
    s = tables.ring.zero
    for v in table.values():
        s = s + v
    return s


def _config_sum(tables: WeightTables, n: int):
    p, one = tables.p, tables.ring.one
    w, r = tables.w, tables.r
    T = {(0,) * p: one}
    for _ in range(n):
        nxt = {}
        for k, v in T.items():
            for l in range(p):
                term = v * w[l]
                for i in range(p):
                    if k[i]:
                        term = term * r[l][i] ** k[i]
                _add(nxt, _bump(k, l), term)
        T = nxt
    return _total(tables, T)


def ref_plain(tables: WeightTables, n: int):
    """Sum over configurations of cell weights and pair weights, no order."""
    return _config_sum(tables, n)


def ref_linear(tables: WeightTables, n: int, fixed_order: bool = False):
    return _finish(tables, _config_sum(tables, n), n, fixed_order)


def ref_pred1(tables: WeightTables, n: int, fixed_order: bool = False):
    """State (k, t): configuration and the cell of the newest element."""
    p, one = tables.p, tables.ring.one
    w, r, rt = tables.w, tables.r, tables.r_tilde[0]
    if n == 0:
        return one
    T = {(_bump((0,) * p, l), l): w[l] for l in range(p)}
    for _ in range(n - 1):
        nxt = {}
        for (k, t), v in T.items():
            assert k[t] >= 1
            for l in range(p):
                term = v * w[l] * rt[l][t] * r[l][t] ** (k[t] - 1)
                for i in range(p):
                    if i != t and k[i]:
                        term = term * r[l][i] ** k[i]
                _add(nxt, (_bump(k, l), l), term)
        T = nxt
    return _finish(tables, _total(tables, T), n, fixed_order)


def ref_cyclic(tables: WeightTables, n: int, fixed_order: bool = False):
    """State (k, t0, t): configuration, first element's cell, newest cell."""
    p, one = tables.p, tables.ring.one
    w, r, rt = tables.w, tables.r, tables.r_tilde[0]
    if n < 2:
        raise SpecError("a cyclic order needs at least two elements")
    T = {(_bump((0,) * p, l), l, l): w[l] for l in range(p)}
    for _ in range(n - 2):
        nxt = {}
        for (k, t0, t), v in T.items():
            for l in range(p):
                term = v * w[l] * rt[l][t] * r[l][t] ** (k[t] - 1)
                for i in range(p):
                    if i != t and k[i]:
                        term = term * r[l][i] ** k[i]
                _add(nxt, (_bump(k, l), t0, l), term)
        T = nxt
    total = tables.ring.zero
    for (k, t0, t), v in T.items():
        for l in range(p):
            if n == 2:
                term = v * w[l] * tables.r_both[l][t0]
                skip = {t0: 1}
            elif t0 == t:
                term = v * w[l] * rt[l][t] * tables.r_wrap[l][t0]
                skip = {t: 2}
            else:
                term = v * w[l] * rt[l][t] * tables.r_wrap[l][t0]
                skip = {t: 1, t0: 1}
            for i in range(p):
                e = k[i] - skip.get(i, 0)
                assert e >= 0
                if e:
                    term = term * r[l][i] ** e
            total = total + term
    return _finish(tables, total, n, fixed_order)


def ref_general(tables: WeightTables, n: int, fixed_order: bool = False):
    """Window of the last k cells, seeded with copies of the first cell."""
    p, one, k = tables.p, tables.ring.one, tables.k
    w, r = tables.w, tables.r
    if n == 0:
        return one
    T = {(_bump((0,) * p, l), (l,) * k): w[l] for l in range(p)}
    for i in range(2, n + 1):
        nxt = {}
        for (kv, tail), v in T.items():
            for l in range(p):
                W = v
                kk = list(kv)
                for s in range(1, min(i - 1, k) + 1):
                    t = tail[s - 1]
                    W = W * tables.r_tilde[s - 1][l][t]
                    kk[t] -= 1
                W = W * w[l]
                for j in range(p):
                    if kk[j]:
                        W = W * r[l][j] ** kk[j]
                _add(nxt, (_bump(kv, l), ((l,) + tail)[:k]), W)
        T = nxt
    return _finish(tables, _total(tables, T), n, fixed_order)
