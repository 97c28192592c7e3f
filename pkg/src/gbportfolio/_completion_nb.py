"""Compiled Buchberger completion for lattice vectors (int64 fast path).

The kernel mirrors ``testset._Completion`` but keeps every data structure in
flat arrays so that numba can compile it.  New elements are installed with
the Gebauer-Moeller criteria: candidate pairs are filtered by lcm
divisibility and the coprime-lead criterion (plus, once the ideal is
saturated, the overlapping-trail criterion), and pending pairs by the chain
criterion.  Pairs are processed in order of lcm total degree.

Entries are bounded by ``limit`` (chosen so that every dot product with the
cost vector fits in int64).  When a vector would leave that range the kernel
stops with ``STATUS_OVERFLOW`` and the caller falls back to the
arbitrary-precision implementation.
"""

import heapq

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_OVERFLOW = 1
STATUS_PAIR_LIMIT = 2


@njit(cache=True)
def _sign(r, cost, rperm, graded, use_cost):
    N = r.shape[0]
    if use_cost:
        c = 0
        for i in range(N):
            c += cost[i] * r[i]
        if c != 0:
            return 1 if c < 0 else -1
    if graded:
        d = 0
        for i in range(N):
            d += r[i]
        if d != 0:
            return 1 if d > 0 else -1
    for t in range(N):
        v = r[rperm[t]]
        if v != 0:
            return 1 if v < 0 else -1
    return 0


@njit(cache=True)
def _find_reducer(P, live, nlive, r):
    N = r.shape[0]
    for t in range(nlive):
        k = live[t]
        ok = True
        for i in range(N):
            pk = P[k, i]
            if pk > 0 and (r[i] <= 0 or pk > r[i]):
                ok = False
                break
        if ok:
            return k
    return -1


@njit(cache=True)
def _reduce_live(r, V, P, live, nlive, cost, rperm, graded, use_cost, limit, counters):
    """Reduce r in place; returns 0 (zero), 1 (irreducible) or -1 (overflow)."""
    N = r.shape[0]
    if _sign(r, cost, rperm, graded, use_cost) < 0:
        for i in range(N):
            r[i] = -r[i]
    while True:
        nz = False
        for i in range(N):
            if r[i] != 0:
                nz = True
                break
        if not nz:
            return 0
        k = _find_reducer(P, live, nlive, r)
        if k < 0:
            return 1
        t = -1
        for i in range(N):
            pk = P[k, i]
            if pk > 0:
                q = r[i] // pk
                if t < 0 or q < t:
                    t = q
        for i in range(N):
            v = r[i] - t * V[k, i]
            if v >= limit or v <= -limit:
                return -1
            r[i] = v
        counters[2] += 1
        if _sign(r, cost, rperm, graded, use_cost) < 0:
            for i in range(N):
                r[i] = -r[i]


@njit(cache=True)
def _too_high(T, tv, v):
    """Whether the positive part of v exceeds the truncation degree.

    Float arithmetic with a margin: borderline cases are kept, which is
    always safe.
    """
    for k in range(T.shape[0]):
        d = 0.0
        for c in range(v.shape[0]):
            if v[c] > 0:
                d += float(T[k, c]) * float(v[c])
        if d > float(tv[k]) * (1.0 + 1e-12) + 1.0:
            return True
    return False


@njit(cache=True)
def _divides(P, a, L):
    for c in range(L.shape[0]):
        if P[a, c] > L[c]:
            return False
    return True


@njit(cache=True)
def _complete_gm(gens, cost, rperm, graded, use_cost, saturated, max_pairs, limit, T, tv):
    """Completion with the Gebauer-Moeller installation of new elements.

    Rows of ``T`` are non-negative gradings of the lattice; a pair whose lcm
    has degree above ``tv`` in any of them is never formed (truncation).
    """
    N = gens.shape[1]
    cap = 64
    while cap < 2 * gens.shape[0]:
        cap *= 2
    V = np.zeros((cap, N), dtype=np.int64)
    P = np.zeros((cap, N), dtype=np.int64)
    live = np.zeros(cap, dtype=np.int64)
    nlive = 0
    count = 0
    pcap = 1024
    pi = np.zeros(pcap, dtype=np.int64)
    pj = np.zeros(pcap, dtype=np.int64)
    plcm = np.zeros((pcap, N), dtype=np.int64)
    palive = np.zeros(pcap, dtype=np.bool_)
    npairs = 0
    nalive_pairs = 0
    heap = [(np.int64(0), np.int64(0))]
    heap.pop()
    # counters: pairs created, pairs reduced, reductions, pairs removed by criteria
    counters = np.zeros(4, dtype=np.int64)
    r = np.zeros(N, dtype=np.int64)
    cl = np.zeros((cap, N), dtype=np.int64)
    cdeg = np.zeros(cap, dtype=np.int64)
    cflag = np.zeros(cap, dtype=np.bool_)
    cidx = np.zeros(cap, dtype=np.int64)

    ng = gens.shape[0]
    gi = 0
    while True:
        have = False
        if gi < ng:
            for c in range(N):
                r[c] = gens[gi, c]
            gi += 1
            if _too_high(T, tv, r):
                continue
            have = True
        else:
            while len(heap) > 0:
                _, p = heapq.heappop(heap)
                if not palive[p]:
                    continue
                palive[p] = False
                nalive_pairs -= 1
                counters[1] += 1
                i = pi[p]
                j = pj[p]
                for c in range(N):
                    r[c] = V[j, c] - V[i, c]
                have = True
                break
        if not have:
            break
        res = _reduce_live(r, V, P, live, nlive, cost, rperm, graded, use_cost, limit, counters)
        if res < 0:
            return V[:count].copy(), live[:nlive].copy(), counters, STATUS_OVERFLOW
        if res == 0:
            continue
        # ---- install r as element h
        if count == cap:
            ncap = cap * 2
            V2 = np.zeros((ncap, N), dtype=np.int64)
            P2 = np.zeros((ncap, N), dtype=np.int64)
            l2 = np.zeros(ncap, dtype=np.int64)
            V2[:cap] = V
            P2[:cap] = P
            l2[:cap] = live
            V, P, live = V2, P2, l2
            cl = np.zeros((ncap, N), dtype=np.int64)
            cdeg = np.zeros(ncap, dtype=np.int64)
            cflag = np.zeros(ncap, dtype=np.bool_)
            cidx = np.zeros(ncap, dtype=np.int64)
            cap = ncap
        h = count
        for c in range(N):
            V[h, c] = r[c]
            P[h, c] = r[c] if r[c] > 0 else 0
        count += 1
        # candidate pairs with the active elements
        for t in range(nlive):
            g = live[t]
            d = 0
            disjoint = True
            for c in range(N):
                v = max(P[g, c], P[h, c])
                cl[t, c] = v
                d += v
                if P[g, c] > 0 and P[h, c] > 0:
                    disjoint = False
            if saturated and not disjoint:
                for c in range(N):
                    if V[g, c] < 0 and V[h, c] < 0:
                        disjoint = True  # trails overlap: reduces to zero
                        break
            cdeg[t] = d
            cflag[t] = disjoint or _too_high(T, tv, cl[t])
        order = np.argsort(cdeg[:nlive], kind="mergesort")
        # criteria M and F: keep only candidates whose lcm is not a multiple of
        # an already kept lcm (pairs that reduce to zero still act as witnesses)
        nkept = 0
        for s in range(nlive):
            t = order[s]
            drop = False
            for q in range(nkept):
                u = cidx[q]
                ok = True
                for c in range(N):
                    if cl[u, c] > cl[t, c]:
                        ok = False
                        break
                if ok:
                    drop = True
                    break
            if not drop:
                cidx[nkept] = t
                nkept += 1
        # criterion B on the pending pairs
        for p in range(npairs):
            if not palive[p]:
                continue
            if not _divides(P, h, plcm[p]):
                continue
            eq_i = True
            eq_j = True
            for c in range(N):
                L = plcm[p, c]
                if max(P[pi[p], c], P[h, c]) != L:
                    eq_i = False
                if max(P[pj[p], c], P[h, c]) != L:
                    eq_j = False
            if not eq_i and not eq_j:
                palive[p] = False
                nalive_pairs -= 1
                counters[3] += 1
        # compact the pair store when most entries are dead
        if npairs > 4096 and nalive_pairs * 2 < npairs:
            keep = 0
            for p in range(npairs):
                if palive[p]:
                    pi[keep] = pi[p]
                    pj[keep] = pj[p]
                    plcm[keep] = plcm[p]
                    palive[keep] = True
                    keep += 1
            npairs = keep
            heap = [(np.int64(0), np.int64(0))]
            heap.pop()
            for p in range(npairs):
                d = 0
                for c in range(N):
                    d += plcm[p, c]
                heap.append((d, np.int64(p)))
            heapq.heapify(heap)
        # new pairs
        for q in range(nkept):
            t = cidx[q]
            if cflag[t]:
                counters[3] += 1
                continue
            if npairs == pcap:
                ncap = pcap * 2
                pi2 = np.zeros(ncap, dtype=np.int64)
                pj2 = np.zeros(ncap, dtype=np.int64)
                pl2 = np.zeros((ncap, N), dtype=np.int64)
                pa2 = np.zeros(ncap, dtype=np.bool_)
                pi2[:pcap] = pi
                pj2[:pcap] = pj
                pl2[:pcap] = plcm
                pa2[:pcap] = palive
                pi, pj, plcm, palive, pcap = pi2, pj2, pl2, pa2, ncap
            pi[npairs] = live[t]
            pj[npairs] = h
            for c in range(N):
                plcm[npairs, c] = cl[t, c]
            palive[npairs] = True
            heapq.heappush(heap, (cdeg[t], np.int64(npairs)))
            npairs += 1
            nalive_pairs += 1
            counters[0] += 1
            if counters[0] > max_pairs:
                return V[:count].copy(), live[:nlive].copy(), counters, STATUS_PAIR_LIMIT
        # active elements whose lead is a multiple of the new lead retire
        keep = 0
        for t in range(nlive):
            g = live[t]
            div = True
            for c in range(N):
                if P[g, c] < P[h, c]:
                    div = False
                    break
            if not div:
                live[keep] = g
                keep += 1
        live[keep] = h
        nlive = keep + 1
    return V[:count].copy(), live[:nlive].copy(), counters, STATUS_OK


def complete(gens, order, saturated, max_pairs, truncation=None):
    """Run the compiled completion; returns (basis, stats, status).

    ``truncation`` is an optional pair ``(T, t)``: rows of non-negative
    gradings of the lattice and the degree bound for each.
    """
    gens = np.asarray(gens, dtype=np.int64)
    N = gens.shape[1]
    if truncation is None:
        T = np.zeros((0, N), dtype=np.int64)
        tv = np.zeros(0, dtype=np.int64)
    else:
        T = np.asarray(truncation[0], dtype=np.int64).reshape(-1, N)
        tv = np.asarray(truncation[1], dtype=np.int64).reshape(-1)
    cost = np.array(order.cost, dtype=np.int64)
    rperm = np.array(order.perm[::-1], dtype=np.int64)
    limit = (1 << 62) // (int(np.abs(cost).sum()) + N + 1)
    V, live, counters, status = _complete_gm(
        gens, cost, rperm, bool(order.graded), bool(np.any(cost)), bool(saturated),
        int(max_pairs), int(limit), T, tv)
    stats = {
        "elements": int(live.size),
        "generated": int(V.shape[0]),
        "pairs_created": int(counters[0]),
        "pairs_reduced": int(counters[1]),
        "reductions": int(counters[2]),
        "pairs_discarded": int(counters[3]),
    }
    return V[np.sort(live)], stats, status
