"""Backtracking kernels for Hamilton paths with fixed endpoints.

The search state lives in flat arrays so that a call can stop after a step
budget and be resumed by the caller, which is how wall-clock timeouts are
enforced around compiled code.
"""

from __future__ import annotations

import numpy as np

from ._accel import kernel

FOUND = 0
EXHAUSTED = 1
BUDGET = 2

PRUNE_DEGREE = 1
PRUNE_CLASSES = 2
PRUNE_CONNECTED = 4
PRUNE_ALTERNATE = 8
PRUNE_ALL = 15


@kernel
def _adjacent(indptr, indices, u, v):
    for e in range(indptr[u], indptr[u + 1]):
        if indices[e] == v:
            return True
    return False


@kernel
def _connected(indptr, indices, visited, target, need, queue, mark, stamp):
    # BFS over unvisited vertices from the target; mark[] holds visit stamps.
    head = 0
    tail = 0
    queue[tail] = target
    tail += 1
    mark[target] = stamp
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            if not visited[w] and mark[w] != stamp:
                mark[w] = stamp
                queue[tail] = w
                tail += 1
    return tail == need


@kernel
def _fill_candidates(indptr, indices, cls, visited, deg_rem, d, head, target, total, alt_class, flags, cand, ncand,
                     order_key):
    cnt = 0
    for e in range(indptr[head], indptr[head + 1]):
        w = indices[e]
        if visited[w]:
            continue
        if w == target and d + 2 != total - 1:
            continue
        if (flags & 8) != 0 and cls[head] != alt_class and cls[w] != alt_class:
            continue
        # insertion by (remaining degree, tie-break key)
        j = cnt
        while j > 0:
            p = cand[d + 1, j - 1]
            if deg_rem[p] > deg_rem[w] or (deg_rem[p] == deg_rem[w] and order_key[p] > order_key[w]):
                cand[d + 1, j] = p
                j -= 1
            else:
                break
        cand[d + 1, j] = w
        cnt += 1
    ncand[d + 1] = cnt


@kernel
def _push(indptr, indices, cls, visited, deg_rem, rem_class, v):
    visited[v] = True
    rem_class[cls[v]] -= 1
    for e in range(indptr[v], indptr[v + 1]):
        deg_rem[indices[e]] -= 1


@kernel
def _pop(indptr, indices, cls, visited, deg_rem, rem_class, v):
    visited[v] = False
    rem_class[cls[v]] += 1
    for e in range(indptr[v], indptr[v + 1]):
        deg_rem[indices[e]] += 1


@kernel
def _feasible(indptr, indices, cls, nclass, visited, deg_rem, rem_class, old_head, head, target,
              remaining, flags, queue, mark, stamp):
    if remaining == 0:
        return True
    if (flags & 1) != 0:
        for e in range(indptr[old_head], indptr[old_head + 1]):
            w = indices[e]
            if visited[w]:
                continue
            avail = deg_rem[w]
            if _adjacent(indptr, indices, w, head):
                avail += 1
            if w == target:
                if avail < 1:
                    return False
            elif avail < 2:
                return False
        if deg_rem[target] == 0 and not _adjacent(indptr, indices, target, head):
            return False
    if (flags & 2) != 0:
        ch = cls[head]
        ct = cls[target]
        for c in range(nclass):
            r = rem_class[c]
            bound = remaining - r + 1
            if c == ch:
                bound -= 1
            if c != ct:
                bound -= 1
            if r > bound:
                return False
    if (flags & 4) != 0:
        if not _connected(indptr, indices, visited, target, remaining, queue, mark, stamp):
            return False
    return True


@kernel
def path_search(indptr, indices, cls, nclass, start, target, flags, alt_class, conn_every, order_key, budget,
                path, ptr, cand, ncand, visited, deg_rem, rem_class, state, queue, mark):
    """Resumable DFS for a Hamilton path from start to target.

    ``state`` holds [depth, steps, initialized, stamp]. Returns FOUND,
    EXHAUSTED or BUDGET.
    """
    total = indptr.shape[0] - 1
    if state[2] == 0:
        state[2] = 1
        state[0] = 0
        path[0] = start
        _push(indptr, indices, cls, visited, deg_rem, rem_class, start)
        if total == 1:
            return 0
        ok = True
        if (flags & 2) != 0:
            # class counts for the remaining sequence after the start vertex
            remaining = total - 1
            for c in range(nclass):
                r = rem_class[c]
                bound = remaining - r + 1
                if c == cls[start]:
                    bound -= 1
                if c != cls[target]:
                    bound -= 1
                if r > bound:
                    ok = False
        if not ok:
            ncand[0] = 0
            ptr[0] = 0
            return 1
        _fill_candidates(indptr, indices, cls, visited, deg_rem, -1, start, target, total, alt_class, flags, cand, ncand, order_key)
        ptr[0] = 0
    steps = 0
    while True:
        d = state[0]
        if d == total - 1:
            state[1] += steps
            return 0
        if steps >= budget:
            state[1] += steps
            return 2
        steps += 1
        if ptr[d] < ncand[d]:
            v = cand[d, ptr[d]]
            ptr[d] += 1
            head = path[d]
            _push(indptr, indices, cls, visited, deg_rem, rem_class, v)
            state[3] += 1
            remaining = total - d - 2
            fl = flags
            if (fl & 4) != 0 and state[3] % conn_every != 0:
                fl -= 4
            if _feasible(indptr, indices, cls, nclass, visited, deg_rem, rem_class, head, v, target,
                         remaining, fl, queue, mark, state[3]):
                path[d + 1] = v
                state[0] = d + 1
                if d + 1 < total - 1:
                    _fill_candidates(indptr, indices, cls, visited, deg_rem, d, v, target, total,
                                     alt_class, flags, cand, ncand, order_key)
                    ptr[d + 1] = 0
            else:
                _pop(indptr, indices, cls, visited, deg_rem, rem_class, v)
        else:
            if d == 0:
                state[0] = -1
                state[1] += steps
                return 1
            _pop(indptr, indices, cls, visited, deg_rem, rem_class, path[d])
            state[0] = d - 1


class PathSearch:
    """Holds the arrays of one resumable search."""

    def __init__(self, indptr, indices, cls, nclass, start, target, flags, alt_class=0, conn_every=1,
                 order_key=None):
        total = indptr.shape[0] - 1
        maxdeg = int(np.max(np.diff(indptr))) if total else 1
        if order_key is None:
            order_key = np.arange(total, dtype=np.int64)
        self.args = (indptr, indices, cls, np.int64(nclass), np.int64(start), np.int64(target),
                     np.int64(flags), np.int64(alt_class), np.int64(conn_every), order_key.astype(np.int64))
        self.path = np.zeros(total, dtype=np.int32)
        self.ptr = np.zeros(total, dtype=np.int32)
        self.cand = np.zeros((total + 1, max(maxdeg, 1)), dtype=np.int32)
        self.ncand = np.zeros(total + 1, dtype=np.int32)
        self.visited = np.zeros(total, dtype=np.bool_)
        self.deg_rem = np.diff(indptr).astype(np.int32)
        self.rem_class = np.bincount(cls, minlength=nclass).astype(np.int64)
        self.state = np.zeros(4, dtype=np.int64)
        self.queue = np.zeros(total, dtype=np.int32)
        self.mark = np.zeros(total, dtype=np.int64)

    def run(self, budget: int) -> int:
        return int(path_search(*self.args, np.int64(budget), self.path, self.ptr, self.cand, self.ncand,
                               self.visited, self.deg_rem, self.rem_class, self.state, self.queue, self.mark))

    @property
    def steps(self) -> int:
        return int(self.state[1])


@kernel
def _xorshift(state):
    x = state[0]
    x ^= (x << np.uint64(13))
    x ^= (x >> np.uint64(7))
    x ^= (x << np.uint64(17))
    state[0] = x
    return x


@kernel
def _rand_below(state, m):
    return np.int64(_xorshift(state) % np.uint64(m))


@kernel
def _has_free_neighbor(indptr, indices, pos, v, target):
    for e in range(indptr[v], indptr[v + 1]):
        w = indices[e]
        if pos[w] < 0 and w != target:
            return True
    return False


@kernel
def _reverse_tail(path, pos, i, length):
    # reverse path[i:length] in place and refresh positions
    lo = i
    hi = length - 1
    while lo < hi:
        a = path[lo]
        b = path[hi]
        path[lo] = b
        path[hi] = a
        pos[b] = lo
        pos[a] = hi
        lo += 1
        hi -= 1


@kernel
def rotation_search(indptr, indices, start, target, seed, max_iters, path, pos):
    """Randomized rotation-extension search for a Hamilton path start..target.

    Builds a path from ``start`` over every vertex except ``target`` whose
    last vertex is adjacent to ``target``. Returns the number of iterations
    used, or -1 when ``max_iters`` ran out. Finding is a certificate; failure
    proves nothing.
    """
    total = indptr.shape[0] - 1
    rng = np.zeros(1, dtype=np.uint64)
    rng[0] = np.uint64(seed) * np.uint64(0x9E3779B97F4A7C15) + np.uint64(0x632BE59BD9B4E019)
    if rng[0] == 0:
        rng[0] = np.uint64(1)
    for v in range(total):
        pos[v] = -1
    path[0] = start
    pos[start] = 0
    length = 1
    goal = total - 1
    rot_cand = np.zeros(64, dtype=np.int64)
    for it in range(max_iters):
        end = path[length - 1]
        if length == goal:
            for e in range(indptr[end], indptr[end + 1]):
                if indices[e] == target:
                    path[length] = target
                    pos[target] = length
                    return it
        else:
            best = -1
            best_deg = 1 << 30
            ties = 0
            for e in range(indptr[end], indptr[end + 1]):
                w = indices[e]
                if pos[w] >= 0 or w == target:
                    continue
                dg = 0
                for f in range(indptr[w], indptr[w + 1]):
                    u = indices[f]
                    if pos[u] < 0 and u != target:
                        dg += 1
                if dg < best_deg:
                    best_deg = dg
                    best = w
                    ties = 1
                elif dg == best_deg:
                    ties += 1
                    if _rand_below(rng, ties) == 0:
                        best = w
            if best >= 0:
                path[length] = best
                pos[best] = length
                length += 1
                continue
        # rotate: pick a path neighbor w of end, reverse the segment after w
        nc = 0
        ngood = 0
        for e in range(indptr[end], indptr[end + 1]):
            w = indices[e]
            p = pos[w]
            if p < 0 or p >= length - 2:
                continue
            new_end = path[p + 1]
            good = False
            if length == goal:
                good = _adjacent(indptr, indices, new_end, target)
            else:
                good = _has_free_neighbor(indptr, indices, pos, new_end, target)
            if nc < 64:
                if good:
                    # keep good rotations at the front
                    rot_cand[nc] = rot_cand[ngood]
                    rot_cand[ngood] = p
                    ngood += 1
                else:
                    rot_cand[nc] = p
                nc += 1
        if nc == 0:
            return -1
        if ngood > 0:
            p = rot_cand[_rand_below(rng, ngood)]
        else:
            p = rot_cand[_rand_below(rng, nc)]
        _reverse_tail(path, pos, p + 1, length)
    return -1
