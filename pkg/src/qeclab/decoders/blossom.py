"""Exact weighted matching in general graphs (Edmonds' blossom algorithm).

This is the classic O(n^3) primal-dual maximum-weight matching with blossom
shrinking and expansion, written over flat integer arrays so numba can compile
it.  Per-blossom child lists live in padded 2D arrays, and the recursive leaf
walk is an explicit stack.  Weights are integers internally, which keeps every
dual update exact; float weights are quantized by :func:`min_weight_perfect_matching`.

Ties are resolved by edge order, so a fixed input gives a fixed matching.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["max_weight_matching", "min_weight_perfect_matching", "MatchingError"]


class MatchingError(ValueError):
    """No perfect matching exists (for example an odd number of nodes)."""


# State tuple layout (built in _solve):
#  0 endpoint   1 nbstart   2 nblist    3 mate      4 label     5 labelend
#  6 inblossom  7 bparent   8 childs    9 nchilds  10 endps    11 bbase
# 12 bestedge  13 bbe      14 nbbe     15 unused   16 cnt      17 dual
# 18 allow     19 queue    20 leafbuf  21 stackbuf 22 eu       23 ev
# 24 wt        25 tmp
# cnt[0] = queue length, cnt[1] = unused-blossom count, cnt[2] = nvertex.


@njit(cache=True)
def _leaves(st, b):
    childs, nchilds, leafbuf, stackbuf, cnt = st[8], st[9], st[20], st[21], st[16]
    nv = cnt[2]
    if b < nv:
        leafbuf[0] = b
        return 1
    top = 0
    stackbuf[0] = b
    top = 1
    count = 0
    while top > 0:
        top -= 1
        t = stackbuf[top]
        if t < nv:
            leafbuf[count] = t
            count += 1
        else:
            # Push children in reverse so they pop in order.
            for i in range(nchilds[t] - 1, -1, -1):
                stackbuf[top] = childs[t, i]
                top += 1
    return count


@njit(cache=True)
def _slack(st, k):
    dual, eu, ev, wt = st[17], st[22], st[23], st[24]
    return dual[eu[k]] + dual[ev[k]] - 2 * wt[k]


@njit(cache=True)
def _assign_label(st, w, t, p):
    endpoint, mate, label, labelend, inblossom = st[0], st[3], st[4], st[5], st[6]
    bbase, bestedge, cnt, queue, leafbuf = st[11], st[12], st[16], st[19], st[20]
    while True:
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labelend[w] = p
        labelend[b] = p
        bestedge[w] = -1
        bestedge[b] = -1
        if t == 1:
            nl = _leaves(st, b)
            for i in range(nl):
                queue[cnt[0]] = leafbuf[i]
                cnt[0] += 1
            return
        base = bbase[b]
        w = endpoint[mate[base]]
        t = 1
        p = mate[base] ^ 1


@njit(cache=True)
def _scan_blossom(st, v, w):
    endpoint, mate, label, labelend, inblossom, bbase, tmp = st[0], st[3], st[4], st[5], st[6], st[11], st[25]
    npath = 0
    base = -1
    while v != -1 or w != -1:
        b = inblossom[v]
        if label[b] & 4:
            base = bbase[b]
            break
        tmp[npath] = b
        npath += 1
        label[b] = 5
        if labelend[b] == -1:
            v = -1
        else:
            v = endpoint[labelend[b]]
            b = inblossom[v]
            v = endpoint[labelend[b]]
        if w != -1:
            v, w = w, v
    for i in range(npath):
        label[tmp[i]] = 1
    return base


@njit(cache=True)
def _add_blossom(st, base, k):
    endpoint, nbstart, nblist, label, labelend = st[0], st[1], st[2], st[4], st[5]
    inblossom, bparent, childs, nchilds, endps = st[6], st[7], st[8], st[9], st[10]
    bbase, bestedge, bbe, nbbe, unused, cnt = st[11], st[12], st[13], st[14], st[15], st[16]
    dual, queue, leafbuf, eu, ev = st[17], st[19], st[20], st[22], st[23]
    nv = cnt[2]
    v = eu[k]
    w = ev[k]
    bb = inblossom[base]
    bv = inblossom[v]
    bw = inblossom[w]
    cnt[1] -= 1
    b = unused[cnt[1]]
    bbase[b] = base
    bparent[b] = -1
    bparent[bb] = b
    # Walk from v's side down to the base, then reverse.
    npath = 0
    while bv != bb:
        bparent[bv] = b
        childs[b, npath] = bv
        endps[b, npath] = labelend[bv]
        npath += 1
        v = endpoint[labelend[bv]]
        bv = inblossom[v]
    childs[b, npath] = bb
    npath += 1
    # reverse childs[b, :npath] and endps[b, :npath-1]
    i, j = 0, npath - 1
    while i < j:
        t = childs[b, i]
        childs[b, i] = childs[b, j]
        childs[b, j] = t
        i += 1
        j -= 1
    i, j = 0, npath - 2
    while i < j:
        t = endps[b, i]
        endps[b, i] = endps[b, j]
        endps[b, j] = t
        i += 1
        j -= 1
    nend = npath - 1
    endps[b, nend] = 2 * k
    nend += 1
    while bw != bb:
        bparent[bw] = b
        childs[b, npath] = bw
        npath += 1
        endps[b, nend] = labelend[bw] ^ 1
        nend += 1
        w = endpoint[labelend[bw]]
        bw = inblossom[w]
    nchilds[b] = npath
    label[b] = 1
    labelend[b] = labelend[bb]
    dual[b] = 0
    nl = _leaves(st, b)
    for i in range(nl):
        lv = leafbuf[i]
        if label[inblossom[lv]] == 2:
            queue[cnt[0]] = lv
            cnt[0] += 1
        inblossom[lv] = b
    bestedgeto = np.full(2 * nv, -1, dtype=np.int64)
    for ci in range(npath):
        cb = childs[b, ci]
        if nbbe[cb] == -1:
            nl = _leaves(st, cb)
            for li in range(nl):
                lv = leafbuf[li]
                for pi in range(nbstart[lv], nbstart[lv + 1]):
                    kk = nblist[pi] // 2
                    ii = eu[kk]
                    jj = ev[kk]
                    if inblossom[jj] == b:
                        ii, jj = jj, ii
                    bj = inblossom[jj]
                    if bj != b and label[bj] == 1 and (
                            bestedgeto[bj] == -1 or _slack(st, kk) < _slack(st, bestedgeto[bj])):
                        bestedgeto[bj] = kk
        else:
            for li in range(nbbe[cb]):
                kk = bbe[cb, li]
                ii = eu[kk]
                jj = ev[kk]
                if inblossom[jj] == b:
                    ii, jj = jj, ii
                bj = inblossom[jj]
                if bj != b and label[bj] == 1 and (
                        bestedgeto[bj] == -1 or _slack(st, kk) < _slack(st, bestedgeto[bj])):
                    bestedgeto[bj] = kk
        nbbe[cb] = -1
        bestedge[cb] = -1
    m = 0
    for i in range(2 * nv):
        if bestedgeto[i] != -1:
            bbe[b, m] = bestedgeto[i]
            m += 1
    nbbe[b] = m
    bestedge[b] = -1
    for i in range(m):
        kk = bbe[b, i]
        if bestedge[b] == -1 or _slack(st, kk) < _slack(st, bestedge[b]):
            bestedge[b] = kk


@njit(cache=True)
def _expand_blossom(st, b, endstage):
    endpoint, mate, label, labelend = st[0], st[3], st[4], st[5]
    inblossom, bparent, childs, nchilds, endps = st[6], st[7], st[8], st[9], st[10]
    bbase, bestedge, nbbe, unused, cnt = st[11], st[12], st[14], st[15], st[16]
    dual, allow, leafbuf = st[17], st[18], st[20]
    nv = cnt[2]
    nc = nchilds[b]
    for ci in range(nc):
        s = childs[b, ci]
        bparent[s] = -1
        if s < nv:
            inblossom[s] = s
        elif endstage and dual[s] == 0:
            _expand_blossom(st, s, endstage)
        else:
            nl = _leaves(st, s)
            for i in range(nl):
                inblossom[leafbuf[i]] = s
    if (not endstage) and label[b] == 2:
        entrychild = inblossom[endpoint[labelend[b] ^ 1]]
        j = 0
        for i in range(nc):
            if childs[b, i] == entrychild:
                j = i
                break
        if j & 1:
            j -= nc
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        p = labelend[b]
        while j != 0:
            label[endpoint[p ^ 1]] = 0
            label[endpoint[endps[b, (j - endptrick) % nc] ^ endptrick ^ 1]] = 0
            _assign_label(st, endpoint[p ^ 1], 2, p)
            allow[endps[b, (j - endptrick) % nc] // 2] = True
            j += jstep
            p = endps[b, (j - endptrick) % nc] ^ endptrick
            allow[p // 2] = True
            j += jstep
        bv = childs[b, j % nc]
        label[endpoint[p ^ 1]] = 2
        label[bv] = 2
        labelend[endpoint[p ^ 1]] = p
        labelend[bv] = p
        bestedge[bv] = -1
        j += jstep
        while childs[b, j % nc] != entrychild:
            bv = childs[b, j % nc]
            if label[bv] == 1:
                j += jstep
                continue
            nl = _leaves(st, bv)
            v = -1
            found = False
            for i in range(nl):
                v = leafbuf[i]
                if label[v] != 0:
                    found = True
                    break
            if found:
                label[v] = 0
                label[endpoint[mate[bbase[bv]]]] = 0
                _assign_label(st, v, 2, labelend[v])
            j += jstep
    label[b] = -1
    labelend[b] = -1
    nchilds[b] = 0
    bbase[b] = -1
    nbbe[b] = -1
    bestedge[b] = -1
    unused[cnt[1]] = b
    cnt[1] += 1


@njit(cache=True)
def _augment_blossom(st, b, v):
    endpoint, mate, bparent, childs, nchilds, endps, bbase, cnt = (
        st[0], st[3], st[7], st[8], st[9], st[10], st[11], st[16])
    nv = cnt[2]
    t = v
    while bparent[t] != b:
        t = bparent[t]
    if t >= nv:
        _augment_blossom(st, t, v)
    nc = nchilds[b]
    i = 0
    for ci in range(nc):
        if childs[b, ci] == t:
            i = ci
            break
    j = i
    if i & 1:
        j -= nc
        jstep = 1
        endptrick = 0
    else:
        jstep = -1
        endptrick = 1
    while j != 0:
        j += jstep
        t = childs[b, j % nc]
        p = endps[b, (j - endptrick) % nc] ^ endptrick
        if t >= nv:
            _augment_blossom(st, t, endpoint[p])
        j += jstep
        t = childs[b, j % nc]
        if t >= nv:
            _augment_blossom(st, t, endpoint[p ^ 1])
        mate[endpoint[p]] = p ^ 1
        mate[endpoint[p ^ 1]] = p
    # Rotate so the new base child comes first.
    if i:
        c_copy = childs[b, :nc].copy()
        e_copy = endps[b, :nc].copy()
        for ci in range(nc):
            childs[b, ci] = c_copy[(ci + i) % nc]
            endps[b, ci] = e_copy[(ci + i) % nc]
    bbase[b] = bbase[childs[b, 0]]


@njit(cache=True)
def _augment_matching(st, k):
    endpoint, mate, labelend, inblossom, bbase, cnt, eu, ev = (
        st[0], st[3], st[5], st[6], st[11], st[16], st[22], st[23])
    nv = cnt[2]
    for side in range(2):
        if side == 0:
            s = eu[k]
            p = 2 * k + 1
        else:
            s = ev[k]
            p = 2 * k
        while True:
            bs = inblossom[s]
            if bs >= nv:
                _augment_blossom(st, bs, s)
            mate[s] = p
            if labelend[bs] == -1:
                break
            t = endpoint[labelend[bs]]
            bt = inblossom[t]
            s = endpoint[labelend[bt]]
            j = endpoint[labelend[bt] ^ 1]
            if bt >= nv:
                _augment_blossom(st, bt, j)
            mate[j] = labelend[bt]
            p = labelend[bt] ^ 1


@njit(cache=True)
def _solve(nv, eu, ev, wt, maxcard):
    ne = eu.shape[0]
    endpoint = np.empty(2 * ne, dtype=np.int64)
    deg = np.zeros(nv + 1, dtype=np.int64)
    for k in range(ne):
        endpoint[2 * k] = eu[k]
        endpoint[2 * k + 1] = ev[k]
        deg[eu[k] + 1] += 1
        deg[ev[k] + 1] += 1
    nbstart = np.cumsum(deg)
    fill = nbstart[:-1].copy()
    nblist = np.empty(2 * ne, dtype=np.int64)
    for k in range(ne):
        nblist[fill[eu[k]]] = 2 * k + 1
        fill[eu[k]] += 1
        nblist[fill[ev[k]]] = 2 * k
        fill[ev[k]] += 1
    maxweight = 0
    for k in range(ne):
        if wt[k] > maxweight:
            maxweight = wt[k]
    mate = np.full(nv, -1, dtype=np.int64)
    label = np.zeros(2 * nv, dtype=np.int64)
    labelend = np.full(2 * nv, -1, dtype=np.int64)
    inblossom = np.arange(nv, dtype=np.int64)
    bparent = np.full(2 * nv, -1, dtype=np.int64)
    cap = nv + 1
    childs = np.zeros((2 * nv, cap), dtype=np.int64)
    nchilds = np.zeros(2 * nv, dtype=np.int64)
    endps = np.zeros((2 * nv, cap), dtype=np.int64)
    bbase = np.full(2 * nv, -1, dtype=np.int64)
    bbase[:nv] = np.arange(nv)
    bestedge = np.full(2 * nv, -1, dtype=np.int64)
    bbe = np.zeros((2 * nv, 2 * nv), dtype=np.int64)
    nbbe = np.full(2 * nv, -1, dtype=np.int64)
    unused = np.arange(nv, 2 * nv, dtype=np.int64)
    cnt = np.zeros(3, dtype=np.int64)
    cnt[1] = nv
    cnt[2] = nv
    dual = np.zeros(2 * nv, dtype=np.int64)
    dual[:nv] = maxweight
    allow = np.zeros(ne, dtype=np.bool_)
    queue = np.zeros(4 * nv + 4, dtype=np.int64)
    leafbuf = np.zeros(nv + 1, dtype=np.int64)
    stackbuf = np.zeros(2 * nv + 1, dtype=np.int64)
    tmp = np.zeros(2 * nv + 1, dtype=np.int64)
    st = (endpoint, nbstart, nblist, mate, label, labelend, inblossom, bparent, childs, nchilds, endps,
          bbase, bestedge, bbe, nbbe, unused, cnt, dual, allow, queue, leafbuf, stackbuf, eu, ev, wt, tmp)

    for _stage in range(nv):
        label[:] = 0
        bestedge[:] = -1
        nbbe[nv:] = -1
        allow[:] = False
        cnt[0] = 0
        for v in range(nv):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                _assign_label(st, v, 1, -1)
        augmented = False
        while True:
            while cnt[0] > 0 and not augmented:
                cnt[0] -= 1
                v = queue[cnt[0]]
                for pi in range(nbstart[v], nbstart[v + 1]):
                    p = nblist[pi]
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0
                    if not allow[k]:
                        kslack = _slack(st, k)
                        if kslack <= 0:
                            allow[k] = True
                    if allow[k]:
                        if label[inblossom[w]] == 0:
                            _assign_label(st, w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = _scan_blossom(st, v, w)
                            if base >= 0:
                                _add_blossom(st, base, k)
                            else:
                                _augment_matching(st, k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < _slack(st, bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < _slack(st, bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break
            deltatype = -1
            delta = 0
            deltaedge = -1
            deltablossom = -1
            if not maxcard:
                deltatype = 1
                delta = dual[0]
                for v in range(nv):
                    if dual[v] < delta:
                        delta = dual[v]
            for v in range(nv):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = _slack(st, bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(2 * nv):
                if bparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = _slack(st, bestedge[b]) // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nv, 2 * nv):
                if bbase[b] >= 0 and bparent[b] == -1 and label[b] == 2 and (deltatype == -1 or dual[b] < delta):
                    delta = dual[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                deltatype = 1
                delta = dual[0]
                for v in range(nv):
                    if dual[v] < delta:
                        delta = dual[v]
                if delta < 0:
                    delta = 0
            for v in range(nv):
                lb = label[inblossom[v]]
                if lb == 1:
                    dual[v] -= delta
                elif lb == 2:
                    dual[v] += delta
            for b in range(nv, 2 * nv):
                if bbase[b] >= 0 and bparent[b] == -1:
                    if label[b] == 1:
                        dual[b] += delta
                    elif label[b] == 2:
                        dual[b] -= delta
            if deltatype == 1:
                break
            elif deltatype == 2:
                allow[deltaedge] = True
                i = eu[deltaedge]
                if label[inblossom[i]] == 0:
                    i = ev[deltaedge]
                queue[cnt[0]] = i
                cnt[0] += 1
            elif deltatype == 3:
                allow[deltaedge] = True
                queue[cnt[0]] = eu[deltaedge]
                cnt[0] += 1
            else:
                _expand_blossom(st, deltablossom, False)
        if not augmented:
            break
        for b in range(nv, 2 * nv):
            if bparent[b] == -1 and bbase[b] >= 0 and label[b] == 1 and dual[b] == 0:
                _expand_blossom(st, b, True)
    out = np.full(nv, -1, dtype=np.int64)
    for v in range(nv):
        if mate[v] >= 0:
            out[v] = endpoint[mate[v]]
    return out


def max_weight_matching(n_nodes: int, edges, weights, maxcardinality: bool = False) -> np.ndarray:
    """Maximum-weight matching with integer weights.

    Args:
        n_nodes: number of vertices.
        edges: ``(E, 2)`` integer array of endpoints (no self loops or repeats).
        weights: ``E`` integer weights.
        maxcardinality: only consider matchings of maximum cardinality.

    Returns:
        ``mate`` array: ``mate[v]`` is the partner of ``v`` or ``-1``.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    weights = np.asarray(weights, dtype=np.int64)
    if n_nodes == 0 or len(edges) == 0:
        return np.full(n_nodes, -1, dtype=np.int64)
    if np.any(edges[:, 0] == edges[:, 1]):
        raise ValueError("self loops are not allowed")
    if edges.min() < 0 or edges.max() >= n_nodes:
        raise ValueError("edge endpoint out of range")
    return _solve(int(n_nodes), np.ascontiguousarray(edges[:, 0]), np.ascontiguousarray(edges[:, 1]),
                  weights, bool(maxcardinality))


def _quantize(weights: np.ndarray) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if np.any(~np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be finite and non-negative")
    top = float(w.max()) if w.size else 0.0
    # Keep |duals| far below 2**63 even after n/2 augmentations.
    scale = 2.0 ** 40 / max(top, 1e-300) if top > 0 else 1.0
    scale = min(scale, 2.0 ** 40)
    return np.rint(w * scale).astype(np.int64)


def min_weight_perfect_matching(n_nodes: int, edges, weights) -> np.ndarray:
    """Minimum-weight perfect matching.

    Float weights are quantized to 40-bit integers relative to the largest weight,
    so totals that differ by less than about ``1e-12 * max(weight)`` may tie.

    Raises:
        MatchingError: if the graph has no perfect matching.
    """
    if n_nodes % 2:
        raise MatchingError(f"odd number of nodes ({n_nodes}) cannot be perfectly matched")
    if n_nodes == 0:
        return np.zeros(0, dtype=np.int64)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    wq = _quantize(weights)
    big = int(wq.max()) + 1 if wq.size else 1
    mate = max_weight_matching(n_nodes, edges, big - wq, maxcardinality=True)
    if np.any(mate < 0):
        raise MatchingError("graph has no perfect matching")
    return mate
