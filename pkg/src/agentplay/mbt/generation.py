"""Offline test-suite generation over an EFSM: Random, Mu+Lambda and MOSA.

All three search loops run as numba kernels over a packed array form of the
model (:class:`PackedModel`). A fitness evaluation is one simulation of one
test case on the model; budgets count evaluations. Every loop evaluates a
whole batch of candidates before the archive is updated, in candidate order,
so the outcome for a seed does not depend on evaluation order.

Door vectors are bit sets split into 62-bit words.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

import numba as nb
import numpy as np

from agentplay.mbt.efsm import EFSM, feasible_prefix

DEFAULT_BUDGET = 50_000
HARD_LENGTH_CAP = 200
BITS = 62
UNREACHABLE = 1 << 20

STRATEGIES = ("random", "mulambda", "mosa")


@dataclass
class TestSuite:
    tests: list[list[int]]
    strategy: str
    seed: int
    evaluations: int
    budget: int
    max_length: int
    params: dict[str, Any] = field(default_factory=dict)

    __test__ = False

    def to_dict(self, efsm: EFSM | None = None) -> dict[str, Any]:
        d: dict[str, Any] = {
            "strategy": self.strategy,
            "seed": self.seed,
            "budget": self.budget,
            "evaluations": self.evaluations,
            "maxTestLength": self.max_length,
            "params": dict(self.params),
            "tests": [list(t) for t in self.tests],
        }
        if efsm is not None:
            from agentplay.mbt.efsm import coverage

            d["coverage"] = round(coverage(efsm, self.tests), 6)
            d["nTransitions"] = len(efsm.transitions)
        return d

    def to_json(self, efsm: EFSM | None = None) -> str:
        return json.dumps(self.to_dict(efsm), indent=1)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TestSuite":
        return cls(
            tests=[list(map(int, t)) for t in d["tests"]],
            strategy=d["strategy"],
            seed=int(d["seed"]),
            evaluations=int(d["evaluations"]),
            budget=int(d["budget"]),
            max_length=int(d["maxTestLength"]),
            params=dict(d.get("params", {})),
        )


@dataclass(frozen=True)
class PackedModel:
    """Array form of an EFSM for the search kernels.

    Door ``g`` lives in word ``g // 62`` at bit ``g % 62``. Guards and updates
    are stored as (word, mask) pairs so the kernels never divide.
    """

    src: np.ndarray
    dst: np.ndarray
    gword: np.ndarray
    gmask: np.ndarray  # 0 when unguarded
    upd_ptr: np.ndarray
    uword: np.ndarray
    umask: np.ndarray
    out_ptr: np.ndarray
    out_idx: np.ndarray
    succ_ptr: np.ndarray  # distinct successor states, guards ignored
    succ_idx: np.ndarray
    colkey: np.ndarray  # equal for transitions with the same source and guard
    gout: np.ndarray  # per state: slot in out_idx of its only guarded exit, -1 none, -2 several
    initial: int
    words: int

    @property
    def arrays(self) -> tuple:
        return (
            self.src, self.dst, self.gword, self.gmask, self.upd_ptr, self.uword,
            self.umask, self.out_ptr, self.out_idx, self.succ_ptr, self.succ_idx, self.gout,
        )


def _csr(rows: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(rows) + 1, dtype=np.int32)
    ptr[1:] = np.cumsum([len(r) for r in rows])
    return ptr, np.array([v for r in rows for v in r], dtype=np.int32)


def pack(efsm: EFSM) -> PackedModel:
    sidx = {s: i for i, s in enumerate(efsm.states)}
    trans = efsm.transitions
    src = np.array([sidx[t.src] for t in trans], dtype=np.int32)
    dst = np.array([sidx[t.dst] for t in trans], dtype=np.int32)
    gword = np.zeros(len(trans), dtype=np.int32)
    gmask = np.zeros(len(trans), dtype=np.int64)
    uw: list[list[int]] = []
    um: list[int] = []
    for i, t in enumerate(trans):
        if t.guard is not None:
            g = efsm.door_index[t.guard]
            gword[i], gmask[i] = g // BITS, 1 << (g % BITS)
        masks: dict[int, int] = {}
        for d in t.update:
            g = efsm.door_index[d]
            masks[g // BITS] = masks.get(g // BITS, 0) ^ (1 << (g % BITS))
        uw.append(sorted(masks))
        um.extend(masks[w] for w in sorted(masks))
    upd_ptr, uword = _csr(uw)
    umask = np.array(um, dtype=np.int64)
    outs = [efsm.outgoing[s] for s in efsm.states]
    out_ptr, out_idx = _csr(outs)
    succ = [sorted({sidx[trans[i].dst] for i in o} - {sidx[s]}) for s, o in zip(efsm.states, outs)]
    succ_ptr, succ_idx = _csr(succ)
    words = max(1, -(-len(efsm.variables) // BITS))
    keys: dict[tuple[int, str | None], int] = {}
    colkey = np.array([keys.setdefault((sidx[t.src], t.guard), len(keys)) for t in trans], dtype=np.int32)
    gout = np.full(len(efsm.states), -1, dtype=np.int32)
    for si, o in enumerate(outs):
        slots = [out_ptr[si] + k for k, i in enumerate(o) if trans[i].guard is not None]
        if slots:
            gout[si] = slots[0] if len(slots) == 1 else -2
    return PackedModel(
        src, dst, gword, gmask, upd_ptr, uword, umask, out_ptr, out_idx,
        succ_ptr, succ_idx, colkey, gout, sidx[efsm.initial_state], words,
    )


def default_max_length(efsm: EFSM) -> int:
    """Twice a lower bound on one walk covering everything (every transition
    fired once), capped at :data:`HARD_LENGTH_CAP`."""
    return max(1, min(HARD_LENGTH_CAP, 2 * len(efsm.transitions)))


# -- kernels ------------------------------------------------------------------

_jit = nb.njit(cache=True)


@_jit
def _enabled(m, doors, t):
    return doors[m[2][t]] & m[3][t] == m[3][t]


@_jit
def _fire(m, doors, t):
    upd_ptr, uword, umask = m[4], m[5], m[6]
    for k in range(upd_ptr[t], upd_ptr[t + 1]):
        doors[uword[k]] ^= umask[k]


@_jit
def _repair(m, initial, test, n, doors):
    """Length of the feasible prefix of ``test[:n]``; leaves ``doors`` at its end."""
    src, dst = m[0], m[1]
    doors[:] = 0
    state = initial
    for k in range(n):
        t = test[k]
        if src[t] != state or not _enabled(m, doors, t):
            return k, state
        _fire(m, doors, t)
        state = dst[t]
    return n, state


@_jit
def _walk(m, test, n, state, doors, target, buf):
    """Extend ``test[:n]`` with uniformly chosen enabled transitions up to ``target``."""
    dst, out_ptr, out_idx, gout = m[1], m[7], m[8], m[11]
    while n < target:
        base = out_ptr[state]
        deg = out_ptr[state + 1] - base
        g = gout[state]
        if g == -1 or (g >= 0 and _enabled(m, doors, out_idx[g])):
            if deg == 0:
                break
            t = out_idx[base + np.random.randint(deg)]
        elif g >= 0:
            # the state's one guarded exit is closed: pick among the others
            if deg == 1:
                break
            k = base + np.random.randint(deg - 1)
            if k >= g:
                k += 1
            t = out_idx[k]
        else:
            c = 0
            for k in range(base, base + deg):
                if _enabled(m, doors, out_idx[k]):
                    buf[c] = out_idx[k]
                    c += 1
            if c == 0:
                break
            t = buf[np.random.randint(c)]
        _fire(m, doors, t)
        test[n] = t
        n += 1
        state = dst[t]
    return n


@_jit
def _mutate(m, initial, parent, n, child, maxlen, doors, buf, states):
    """Point mutations at rate 1/length (at least one), repair by truncation,
    then regrow the test with a random walk to a random length."""
    dst = m[1]
    states[0] = initial
    for k in range(n):
        states[k + 1] = dst[parent[k]]
        child[k] = parent[k]
    length = n
    applied = False
    for i in range(n - 1, -1, -1):
        if np.random.random() < 1.0 / n:
            applied = True
            length = _point_mutation(m, child, length, i, states[i], maxlen)
    if not applied and n > 0:
        i = np.random.randint(n)
        length = _point_mutation(m, child, length, i, states[i], maxlen)
    length, state = _repair(m, initial, child, length, doors)
    if length < maxlen and (length == 0 or np.random.random() < 0.5):
        target = length + 1 + np.random.randint(maxlen - length)
        length = _walk(m, child, length, state, doors, target, buf)
    return length


@_jit
def _point_mutation(m, cur, length, i, state, maxlen):
    """Delete, replace or insert at position ``i``; ``state`` is where the
    test stands before step ``i``. Replacements and insertions draw from the
    transitions leaving that state."""
    out_ptr, out_idx = m[7], m[8]
    op = np.random.randint(3)
    deg = out_ptr[state + 1] - out_ptr[state]
    if op == 0:
        for k in range(i, length - 1):
            cur[k] = cur[k + 1]
        return length - 1
    if deg == 0:
        return length
    t = out_idx[out_ptr[state] + np.random.randint(deg)]
    if op == 1:
        cur[i] = t
        return length
    last = min(length, maxlen - 1)  # a full test drops its last step
    for k in range(last, i, -1):
        cur[k] = cur[k - 1]
    cur[i] = t
    return last + 1


@_jit
def _first_hits(test, n, first, touched):
    """Record the first index each transition fires at; returns how many
    distinct transitions were written to ``touched``."""
    c = 0
    for k in range(n):
        t = test[k]
        if first[t] < 0:
            first[t] = k
            touched[c] = t
            c += 1
    return c


@_jit
def _bank_batch(pop, plen, lo, hi, first, touched, arc, arc_len):
    """Keep the shortest covering prefix of every transition fired by
    candidates ``lo..hi``, in candidate order. Returns newly covered count."""
    gained = 0
    for j in range(lo, hi):
        c = _first_hits(pop[j], plen[j], first, touched)
        for q in range(c):
            t = touched[q]
            need = first[t] + 1
            if arc_len[t] == 0:
                gained += 1
            if arc_len[t] == 0 or need < arc_len[t]:
                arc[t, :need] = pop[j, :need]
                arc_len[t] = need
            first[t] = -1
    return gained


@_jit
def random_kernel(m, initial, words, budget, maxlen, seed):
    np.random.seed(seed)
    T = m[0].shape[0]
    hit = np.zeros(T, dtype=np.bool_)
    kept = np.zeros((T, maxlen), dtype=np.int32)
    kept_len = np.zeros(T, dtype=np.int32)
    nk = 0
    covered = 0
    test = np.zeros(maxlen, dtype=np.int32)
    first = np.full(T, -1, dtype=np.int32)
    touched = np.zeros(maxlen, dtype=np.int32)
    doors = np.zeros(words, dtype=np.int64)
    buf = np.zeros(T, dtype=np.int32)
    evals = 0
    while evals < budget and covered < T:
        doors[:] = 0
        n = _walk(m, test, 0, initial, doors, 1 + np.random.randint(maxlen), buf)
        evals += 1
        c = _first_hits(test, n, first, touched)
        last = -1
        for q in range(c):
            t = touched[q]
            if not hit[t]:
                hit[t] = True
                covered += 1
                last = max(last, first[t])
            first[t] = -1
        if last >= 0:
            kept[nk, : last + 1] = test[: last + 1]
            kept_len[nk] = last + 1
            nk += 1
    return kept[:nk], kept_len[:nk], evals


@_jit
def mulambda_kernel(m, initial, words, mu, lam, budget, maxlen, seed):
    np.random.seed(seed)
    T = m[0].shape[0]
    size = mu + lam
    pop = np.zeros((size, maxlen), dtype=np.int32)
    plen = np.zeros(size, dtype=np.int32)
    fit = np.zeros(size, dtype=np.int32)
    arc = np.zeros((T, maxlen), dtype=np.int32)
    arc_len = np.zeros(T, dtype=np.int32)
    first = np.full(T, -1, dtype=np.int32)
    touched = np.zeros(maxlen, dtype=np.int32)
    doors = np.zeros(words, dtype=np.int64)
    buf = np.zeros(T, dtype=np.int32)
    states = np.zeros(maxlen + 1, dtype=np.int32)
    n0 = min(mu, budget)
    for j in range(n0):
        doors[:] = 0
        plen[j] = _walk(m, pop[j], 0, initial, doors, 1 + np.random.randint(maxlen), buf)
    evals = n0
    _novelty(pop, plen, fit, 0, n0, first, touched, arc_len)
    covered = _bank_batch(pop, plen, 0, n0, first, touched, arc, arc_len)
    alive = n0
    key = np.empty(size, dtype=np.int64)
    while evals < budget and covered < T:
        nb_ = min(lam, budget - evals)
        for j in range(nb_):
            p = np.random.randint(alive)
            plen[alive + j] = _mutate(m, initial, pop[p], plen[p], pop[alive + j], maxlen, doors, buf, states)
        evals += nb_
        _novelty(pop, plen, fit, alive, alive + nb_, first, touched, arc_len)
        covered += _bank_batch(pop, plen, alive, alive + nb_, first, touched, arc, arc_len)
        total = alive + nb_
        for j in range(total):
            key[j] = -np.int64(fit[j]) * (maxlen + 1) + plen[j]
        order = np.argsort(key[:total], kind="mergesort")
        keep = min(mu, total)
        sel = order[:keep]
        pop[:keep] = pop[sel]
        plen[:keep] = plen[sel]
        fit[:keep] = fit[sel]
        alive = keep
    return arc, arc_len, evals


@_jit
def _novelty(pop, plen, fit, lo, hi, first, touched, arc_len):
    """Fitness of candidates ``lo..hi``: transitions they fire that the archive
    did not cover before this batch."""
    for j in range(lo, hi):
        c = _first_hits(pop[j], plen[j], first, touched)
        f = 0
        for q in range(c):
            t = touched[q]
            if arc_len[t] == 0:
                f += 1
            first[t] = -1
        fit[j] = f


@_jit
def objectives(m, initial, words, test, n, out, arc_len, seen, open_at, fired, best, bits, queue, visited):
    """Fill ``out[t]`` for every not-yet-covered ``t`` with the MOSA distance of
    ``test[:n]`` to ``t``. The remaining arguments are scratch space.

    ``f_t = 0`` when ``t`` fires. Otherwise it is the approach level plus
    ``nu(bd)``. The approach level is the hop distance from the closest
    visited state to ``t.src``, plus 1 if that state is ``t.src`` itself.
    ``bd`` is 1 when ``t`` is a door crossing whose door was closed at every
    closest visit, else 0.
    """
    src, dst, gword, gmask = m[0], m[1], m[2], m[3]
    succ_ptr, succ_idx = m[9], m[10]
    T = src.shape[0]
    doors = np.zeros(words, dtype=np.int64)
    state = initial
    seen[state] = True
    visited[0] = state
    nv = 1
    for k in range(n):
        t = test[k]
        fired[t] = True
        _fire(m, doors, t)
        state = dst[t]
        if not seen[state]:
            seen[state] = True
            visited[nv] = state
            nv += 1
        for w in range(words):
            open_at[state, w] |= doors[w]
    # multi-source BFS from the visited states; a state's bits are the doors
    # seen open at any of its closest visited states
    best[:] = UNREACHABLE
    for i in range(nv):
        x = visited[i]
        best[x] = 0
        for w in range(words):
            bits[x, w] = open_at[x, w]
        queue[i] = x
    head, tail = 0, nv
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(succ_ptr[u], succ_ptr[u + 1]):
            v = succ_idx[k]
            if best[v] == UNREACHABLE:
                best[v] = best[u] + 1
                for w in range(words):
                    bits[v, w] = bits[u, w]
                queue[tail] = v
                tail += 1
            elif best[v] == best[u] + 1:
                for w in range(words):
                    bits[v, w] |= bits[u, w]
    for t in range(T):
        if arc_len[t] != 0:
            continue
        if fired[t]:
            out[t] = 0.0
            continue
        s = src[t]
        a = best[s] + (1 if best[s] == 0 else 0)
        if bits[s, gword[t]] & gmask[t] != gmask[t]:
            out[t] = a + 0.5  # nu(1)
        else:
            out[t] = a
    # restore scratch
    for i in range(nv):
        seen[visited[i]] = False
        for w in range(words):
            open_at[visited[i], w] = 0
    for k in range(n):
        fired[test[k]] = False


@_jit
def _compare(fa, fb):
    """1 if ``fa`` dominates ``fb``, -1 if the reverse, else 0."""
    a_better = False
    b_better = False
    for k in range(fa.shape[0]):
        if fa[k] < fb[k]:
            if b_better:
                return 0
            a_better = True
        elif fa[k] > fb[k]:
            if a_better:
                return 0
            b_better = True
    if a_better:
        return 1
    if b_better:
        return -1
    return 0


@_jit
def _crowding(sub, members):
    """Crowding distance of rows ``members`` of ``sub`` over all its columns."""
    n = members.shape[0]
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    vals = np.empty(n)
    for t in range(sub.shape[1]):
        lo = np.inf
        hi = -np.inf
        for i in range(n):
            v = sub[members[i], t]
            vals[i] = v
            lo = min(lo, v)
            hi = max(hi, v)
        if hi == lo:  # no spread on this objective
            continue
        order = np.argsort(vals, kind="mergesort")
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        for k in range(1, n - 1):
            dist[order[k]] += (vals[order[k + 1]] - vals[order[k - 1]]) / (hi - lo)
    return dist


@_jit
def _mosa_select(F, plen, total, keep, arc_len, colkey, nkeys):
    """Rank ``total`` individuals on the uncovered objectives.

    Every individual in the population has been banked, so none fires an
    uncovered transition and its objective only depends on the transition's
    source state and guard (``colkey``). Objectives sharing a key are
    identical columns and are considered once.

    Rank 0 is the preference front: the best individual (shortest on ties)
    for each objective. The others are ranked 1, 2, ... by non-dominated
    sorting, which is skipped when rank 0 alone fills the population. The
    last admitted front is cut by crowding distance. Returns the chosen
    indices and their ranks.
    """
    T = F.shape[1]
    taken = np.zeros(nkeys, dtype=np.bool_)
    cols = np.empty(T, dtype=np.int32)
    cnt = 0
    for t in range(T):
        if arc_len[t] == 0 and not taken[colkey[t]]:
            taken[colkey[t]] = True
            cols[cnt] = t
            cnt += 1
    sub = np.empty((total, cnt))
    for c in range(cnt):
        for i in range(total):
            sub[i, c] = F[i, cols[c]]
    rank = np.full(total, -1, dtype=np.int32)
    for k in range(cnt):
        b = 0
        for i in range(1, total):
            if sub[i, k] < sub[b, k] or (sub[i, k] == sub[b, k] and plen[i] < plen[b]):
                b = i
        rank[b] = 0
    rest = np.empty(total, dtype=np.int32)
    nr = 0
    for i in range(total):
        if rank[i] < 0:
            rest[nr] = i
            nr += 1
    if total - nr >= keep:
        nr = 0
    dom_count = np.zeros(total, dtype=np.int32)
    dominated = np.zeros((total, total), dtype=np.bool_)
    for a in range(nr):
        for b in range(a + 1, nr):
            i, j = rest[a], rest[b]
            r = _compare(sub[i], sub[j])
            if r == 1:
                dominated[i, j] = True
                dom_count[j] += 1
            elif r == -1:
                dominated[j, i] = True
                dom_count[i] += 1
    level = 1
    remaining = nr
    current = np.empty(total, dtype=np.int32)
    while remaining > 0:
        nc = 0
        for a in range(nr):
            i = rest[a]
            if rank[i] < 0 and dom_count[i] == 0:
                current[nc] = i
                nc += 1
        for k in range(nc):
            rank[current[k]] = level
        for k in range(nc):
            i = current[k]
            for a in range(nr):
                if dominated[i, rest[a]]:
                    dom_count[rest[a]] -= 1
        remaining -= nc
        level += 1
    chosen = np.empty(keep, dtype=np.int32)
    nchosen = 0
    lvl = 0
    members = np.empty(total, dtype=np.int32)
    while nchosen < keep:
        nm = 0
        for i in range(total):
            if rank[i] == lvl:
                members[nm] = i
                nm += 1
        if nchosen + nm <= keep:
            chosen[nchosen : nchosen + nm] = members[:nm]
            nchosen += nm
        else:
            cd = _crowding(sub, members[:nm])
            order = np.argsort(-cd, kind="mergesort")
            chosen[nchosen:] = members[order[: keep - nchosen]]
            nchosen = keep
        lvl += 1
    return chosen, rank[chosen]


@_jit
def mosa_kernel(m, initial, words, colkey, popsize, budget, maxlen, seed):
    np.random.seed(seed)
    T = m[0].shape[0]
    S = m[7].shape[0] - 1
    size = 2 * popsize
    pop = np.zeros((size, maxlen), dtype=np.int32)
    plen = np.zeros(size, dtype=np.int32)
    F = np.zeros((size, T))
    rank = np.zeros(size, dtype=np.int32)
    arc = np.zeros((T, maxlen), dtype=np.int32)
    arc_len = np.zeros(T, dtype=np.int32)
    first = np.full(T, -1, dtype=np.int32)
    touched = np.zeros(maxlen, dtype=np.int32)
    doors = np.zeros(words, dtype=np.int64)
    buf = np.zeros(T, dtype=np.int32)
    states = np.zeros(maxlen + 1, dtype=np.int32)
    # scratch for objectives()
    seen = np.zeros(S, dtype=np.bool_)
    open_at = np.zeros((S, words), dtype=np.int64)
    fired = np.zeros(T, dtype=np.bool_)
    best = np.zeros(S, dtype=np.int32)
    bits = np.zeros((S, words), dtype=np.int64)
    queue = np.zeros(S, dtype=np.int32)
    visited = np.zeros(maxlen + 1, dtype=np.int32)

    n0 = min(popsize, budget)
    for j in range(n0):
        doors[:] = 0
        plen[j] = _walk(m, pop[j], 0, initial, doors, 1 + np.random.randint(maxlen), buf)
        objectives(m, initial, words, pop[j], plen[j], F[j], arc_len,
                   seen, open_at, fired, best, bits, queue, visited)
    evals = n0
    covered = _bank_batch(pop, plen, 0, n0, first, touched, arc, arc_len)
    alive = n0
    while evals < budget and covered < T:
        if alive > 1:
            chosen, ranks = _mosa_select(F, plen, alive, min(popsize, alive), arc_len, colkey, colkey.max() + 1)
            alive = chosen.shape[0]
            pop[:alive] = pop[chosen]
            plen[:alive] = plen[chosen]
            F[:alive] = F[chosen]
            rank[:alive] = ranks
        nb_ = min(popsize, budget - evals)
        for j in range(nb_):
            a = np.random.randint(alive)
            b = np.random.randint(alive)
            p = a if rank[a] < rank[b] or (rank[a] == rank[b] and plen[a] <= plen[b]) else b
            c = alive + j
            plen[c] = _mutate(m, initial, pop[p], plen[p], pop[c], maxlen, doors, buf, states)
            objectives(m, initial, words, pop[c], plen[c], F[c], arc_len,
                       seen, open_at, fired, best, bits, queue, visited)
        evals += nb_
        covered += _bank_batch(pop, plen, alive, alive + nb_, first, touched, arc, arc_len)
        alive += nb_
    return arc, arc_len, evals


# -- public API ---------------------------------------------------------------

def _check_common(budget: int, max_length: int | None, efsm: EFSM) -> int:
    if budget < 1:
        raise ValueError("budget must be at least 1 evaluation")
    if max_length is None:
        max_length = default_max_length(efsm)
    if max_length < 1:
        raise ValueError("max test length must be at least 1")
    return max_length


def _rows(tests: np.ndarray, lengths: np.ndarray) -> list[list[int]]:
    return [tests[i, : lengths[i]].tolist() for i in range(len(lengths)) if lengths[i] > 0]


def _minimise(tests: list[list[int]]) -> list[list[int]]:
    """Drop duplicates and tests that are a prefix of another kept test."""
    uniq = sorted(set(map(tuple, tests)), key=lambda t: (-len(t), t))
    kept: list[tuple[int, ...]] = []
    prefixes: set[tuple[int, ...]] = set()
    for t in uniq:
        if t in prefixes:
            continue
        kept.append(t)
        prefixes.update(t[:k] for k in range(1, len(t) + 1))
    return [list(t) for t in sorted(kept)]


def generate_random(
    efsm: EFSM, budget: int = DEFAULT_BUDGET, max_length: int | None = None, seed: int = 0
) -> TestSuite:
    """Random feasible walks; a walk is kept (cut after its last new
    transition) when it covers something not covered before."""
    max_length = _check_common(budget, max_length, efsm)
    pm = pack(efsm)
    if not efsm.transitions:
        return TestSuite([], "random", seed, 0, budget, max_length)
    kept, lens, evals = random_kernel(pm.arrays, pm.initial, pm.words, budget, max_length, seed)
    return TestSuite(_rows(kept, lens), "random", seed, int(evals), budget, max_length)


def generate_mu_plus_lambda(
    efsm: EFSM,
    mu: int = 10,
    lam: int = 20,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    max_length: int | None = None,
) -> TestSuite:
    if mu < 1 or lam < 1:
        raise ValueError("mu and lambda must be at least 1")
    max_length = _check_common(budget, max_length, efsm)
    params = {"mu": mu, "lambda": lam}
    if not efsm.transitions:
        return TestSuite([], "mulambda", seed, 0, budget, max_length, params)
    pm = pack(efsm)
    arc, arc_len, evals = mulambda_kernel(pm.arrays, pm.initial, pm.words, mu, lam, budget, max_length, seed)
    return TestSuite(_minimise(_rows(arc, arc_len)), "mulambda", seed, int(evals), budget, max_length, params)


def generate_mosa(
    efsm: EFSM,
    population_size: int = 20,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    max_length: int | None = None,
) -> TestSuite:
    if population_size < 2:
        raise ValueError("population size must be at least 2")
    max_length = _check_common(budget, max_length, efsm)
    params = {"populationSize": population_size}
    if not efsm.transitions:
        return TestSuite([], "mosa", seed, 0, budget, max_length, params)
    pm = pack(efsm)
    arc, arc_len, evals = mosa_kernel(pm.arrays, pm.initial, pm.words, pm.colkey, population_size, budget, max_length, seed)
    return TestSuite(_minimise(_rows(arc, arc_len)), "mosa", seed, int(evals), budget, max_length, params)


def generate(efsm: EFSM, strategy: str, budget: int = DEFAULT_BUDGET, seed: int = 0, **kw: Any) -> TestSuite:
    if strategy == "random":
        return generate_random(efsm, budget, seed=seed, **kw)
    if strategy == "mulambda":
        return generate_mu_plus_lambda(efsm, budget=budget, seed=seed, **kw)
    if strategy == "mosa":
        return generate_mosa(efsm, budget=budget, seed=seed, **kw)
    raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


def generate_timed(
    efsm: EFSM, strategy: str, seconds: float, seed: int = 0, start_budget: int = 1000, **kw: Any
) -> TestSuite:
    """Wall-clock variant: rerun with a doubling evaluation budget while the
    next run is expected to fit in ``seconds``; return the last finished suite.

    Results depend on machine speed, so this is only for timing comparisons.
    """
    if seconds <= 0:
        raise ValueError("seconds must be positive")
    deadline = time.perf_counter() + seconds
    budget = max(1, start_budget)
    began = time.perf_counter()
    suite = generate(efsm, strategy, budget, seed, **kw)
    took = time.perf_counter() - began
    # a doubled budget costs about twice as long
    while time.perf_counter() + 2 * took <= deadline and suite.evaluations >= budget:
        budget *= 2
        began = time.perf_counter()
        suite = generate(efsm, strategy, budget, seed, **kw)
        took = time.perf_counter() - began
    return suite


def mosa_fitness(efsm: EFSM, test: list[int]) -> np.ndarray:
    """MOSA objective vector of one test (on its feasible prefix)."""
    pm = pack(efsm)
    S, T = len(efsm.states), len(efsm.transitions)
    arr = np.array(test, dtype=np.int32)
    n = feasible_prefix(efsm, test)
    out = np.zeros(T)
    objectives(
        pm.arrays, pm.initial, pm.words, arr, n, out, np.zeros(T, dtype=np.int32),
        np.zeros(S, dtype=np.bool_), np.zeros((S, pm.words), dtype=np.int64), np.zeros(T, dtype=np.bool_),
        np.zeros(S, dtype=np.int32), np.zeros((S, pm.words), dtype=np.int64), np.zeros(S, dtype=np.int32),
        np.zeros(n + 1, dtype=np.int32),
    )
    return out
