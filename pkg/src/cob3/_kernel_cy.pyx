# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled diagram kernel: slide-sorting, matching, surgery.

Same contract as cob3._kernel_py (states and rule sides share the flat
(dom, off, gen, lab, ...) encoding; `nf` canonicalizes within the slide
class; matching is optimistic-scan-then-verify). The slide-class search
works on flat int tuples, which order and hash the same way as the nested
form but avoid per-layer tuple allocation in the hot loop.
"""

GEN_DOM = (2, 0, 1, 1, 2, 1, 0)
GEN_COD = (1, 1, 2, 0, 2, 1, 1)

cdef int[7] _DOM = [2, 0, 1, 1, 2, 1, 0]
cdef int[7] _COD = [1, 1, 2, 0, 2, 1, 1]

NF_SLIDE_CAP = 4096
cdef int _CAP = 4096
_NF_CACHE = {}
cdef int _NF_CACHE_MAX = 1 << 18

__all__ = [
    "nf",
    "find_matches",
    "apply_match",
    "find_insertions",
    "apply_insertion",
    "successors",
]


cdef list _nbrs(tuple seq, Py_ssize_t n):
    # Adjacent layers (o1,g1,l1) then (o2,g2,l2) commute when the later one
    # lies entirely left (o2 + dom(g2) <= o1) or entirely right
    # (o2 >= o1 + cod(g1)); both can hold at once for a 0-input box meeting
    # a 0-output box, so both orientations are emitted.
    cdef list out = []
    cdef Py_ssize_t i, p
    cdef int o1, g1, o2, g2
    for i in range(n - 1):
        p = 3 * i
        o1 = seq[p]
        g1 = seq[p + 1]
        o2 = seq[p + 3]
        g2 = seq[p + 4]
        if o2 + _DOM[g2] <= o1:
            out.append(
                seq[:p]
                + (o2, g2, seq[p + 5], o1 + _COD[g2] - _DOM[g2], g1, seq[p + 2])
                + seq[p + 6:]
            )
        if o2 >= o1 + _COD[g1]:
            out.append(
                seq[:p]
                + (o2 - _COD[g1] + _DOM[g1], g2, seq[p + 5], o1, g1, seq[p + 2])
                + seq[p + 6:]
            )
    return out


cdef tuple _greedy_min(tuple start, Py_ssize_t n):
    """Frontier-greedy lexicographic extraction (fallback above the cap)."""
    cdef set frontier = {start}
    cdef list out = []
    cdef Py_ssize_t _round, i, t
    cdef int o, g, l, dg, delta, ot, bo, bg, bl
    cdef bint have_best, ok
    cdef tuple rem
    cdef list cands, lst
    for _round in range(n):
        have_best = False
        bo = bg = bl = 0
        cands = []
        for rem in frontier:
            for i in range(len(rem) // 3):
                o = rem[3 * i]
                g = rem[3 * i + 1]
                l = rem[3 * i + 2]
                dg = _DOM[g]
                ok = True
                for t in range(i - 1, -1, -1):
                    ot = rem[3 * t]
                    if o + dg <= ot:
                        continue
                    if o >= ot + _COD[<int> rem[3 * t + 1]]:
                        o -= _COD[<int> rem[3 * t + 1]] - _DOM[<int> rem[3 * t + 1]]
                    else:
                        ok = False
                        break
                if not ok:
                    continue
                if (not have_best) or (o, g, l) < (bo, bg, bl):
                    have_best = True
                    bo, bg, bl = o, g, l
                    cands = [(rem, i)]
                elif (o, g, l) == (bo, bg, bl):
                    cands.append((rem, i))
        out.extend((bo, bg, bl))
        newf = set()
        for rem, pi in cands:
            i = pi
            o = rem[3 * i]
            g = rem[3 * i + 1]
            dg = _DOM[g]
            delta = _COD[g] - dg
            lst = list(rem)
            for t in range(i - 1, -1, -1):
                ot = lst[3 * t]
                if o + dg <= ot:
                    lst[3 * t] = ot + delta
                else:
                    o -= _COD[<int> lst[3 * t + 1]] - _DOM[<int> lst[3 * t + 1]]
            del lst[3 * i: 3 * i + 3]
            newf.add(tuple(lst))
        frontier = newf
    return tuple(out)


cdef tuple _class_min(tuple start, Py_ssize_t n):
    cdef set seen = {start}
    cdef list queue = [start]
    cdef Py_ssize_t qi = 0
    cdef tuple best = start
    cdef tuple seq, cur, nxt
    while qi < len(queue):
        seq = queue[qi]
        qi += 1
        for nb in _nbrs(seq, n):
            if nb not in seen:
                seen.add(nb)
                if len(seen) > _CAP:
                    cur = start
                    while True:
                        nxt = _greedy_min(cur, n)
                        if not nxt < cur:
                            return cur
                        cur = nxt
                if nb < best:
                    best = nb
                queue.append(nb)
    return best


def nf(state):
    """Canonical-within-budget representative of the slide class.

    Exact lexicographic minimum whenever the class fits under NF_SLIDE_CAP
    explored orders; beyond the cap, a deterministic idempotent greedy
    fixpoint. Callers must not treat nf inequality as semantic inequality;
    the cospan invariant decides that.
    """
    cdef Py_ssize_t n = (len(state) - 1) // 3
    if n < 2:
        return tuple(state)
    cached = _NF_CACHE.get(state)
    if cached is not None:
        return cached
    cdef tuple st = tuple(state)
    cdef tuple best = _class_min(st[1:], n)
    cdef tuple result = st[:1] + best
    if len(_NF_CACHE) >= _NF_CACHE_MAX:
        _NF_CACHE.clear()
    _NF_CACHE[st] = result
    _NF_CACHE[result] = result
    return result


cdef list _widths(tuple state):
    cdef int w = state[0]
    cdef list out = [w]
    cdef Py_ssize_t p
    cdef int g
    for p in range(1, len(state), 3):
        g = state[p + 1]
        w += _COD[g] - _DOM[g]
        out.append(w)
    return out


def _side_widths(side):
    w = side[0]
    out = [w]
    for p in range(1, len(side), 3):
        g = side[p + 1]
        w += GEN_COD[g] - GEN_DOM[g]
        out.append(w)
    return out


cdef bint _bind(int pl, int l, list bindings):
    if pl >= -1:
        return pl == l
    cdef int slot = -pl - 2
    if bindings[slot] == -1:
        bindings[slot] = l
        return True
    return bindings[slot] == l


def instantiate(side, bindings, col):
    """Ground a rule side's layers at column `col` (flat layer list)."""
    out = []
    for p in range(1, len(side), 3):
        lab = side[p + 2]
        if lab <= -2:
            lab = bindings[-lab - 2]
        out.extend((side[p] + col, side[p + 1], lab))
    return out


def find_matches(state, pat, n_meta):
    """All verified windows where `pat` occurs in `state` (state in NF).

    Match tuples are (bottom, delta, matched_indices, skipped_flat,
    skipped_after, bindings), sorted.
    """
    cdef Py_ssize_t k = (len(pat) - 1) // 3
    if k == 0:
        raise ValueError("zero-layer sides are located by find_insertions")
    cdef Py_ssize_t n = (len(state) - 1) // 3
    if k > n:
        return []
    cdef tuple st = tuple(state)
    cdef tuple pt = tuple(pat)
    pw = _side_widths(pt)
    cdef list widths = _widths(st)
    seen = {}
    for cand in _scan_down(st, pt, pw, widths, n, k, n_meta):
        key = (cand[0], cand[1], cand[2])
        if key not in seen and _verify(st, pt, cand):
            seen[key] = cand
    for cand in _scan_up(st, pt, pw, widths, n, k, n_meta):
        key = (cand[0], cand[1], cand[2])
        if key not in seen and _verify(st, pt, cand):
            seen[key] = cand
    return sorted(seen.values())


cdef list _scan_down(tuple state, tuple pat, list pw, list widths,
                     Py_ssize_t n, Py_ssize_t k, int n_meta):
    cdef int top_off = pat[1 + 3 * (k - 1)]
    cdef int top_gen = pat[2 + 3 * (k - 1)]
    cdef int top_lab = pat[3 + 3 * (k - 1)]
    cdef list out = []
    cdef Py_ssize_t it, p, q, i, j
    cdef int shift, leftdelta, o2, g2, l2, ext, d2, adj, delta
    cdef bint ok
    cdef list bindings, matched, skipped, below
    for it in range(n):
        p = 1 + 3 * it
        if state[p + 1] != top_gen:
            continue
        shift = <int> state[p] - top_off
        if shift < 0 or shift + <int> pw[k] > <int> widths[it + 1]:
            continue
        bindings = [-1] * n_meta
        if not _bind(top_lab, state[p + 2], bindings):
            continue
        matched = [it]
        skipped = []
        leftdelta = 0
        j = k - 2
        i = it - 1
        ok = True
        while j >= 0:
            if i < 0:
                ok = False
                break
            q = 1 + 3 * i
            o2 = state[q]
            g2 = state[q + 1]
            l2 = state[q + 2]
            if (
                g2 == <int> pat[2 + 3 * j]
                and o2 == <int> pat[1 + 3 * j] + shift
                and _bind(pat[3 + 3 * j], l2, bindings)
            ):
                matched.append(i)
                j -= 1
                i -= 1
                continue
            ext = _DOM[g2] if _DOM[g2] > _COD[g2] else _COD[g2]
            if o2 + ext <= shift:
                skipped.append((i, o2, g2, l2))
                d2 = _COD[g2] - _DOM[g2]
                shift -= d2
                leftdelta += d2
            else:
                adj = o2 - (<int> pw[j + 1] - <int> pw[0])
                if adj < 0:
                    ok = False
                    break
                skipped.append((i, adj, g2, l2))
            i -= 1
        if not ok or j >= 0 or shift < 0:
            continue
        delta = shift + leftdelta
        if delta < 0:
            continue
        matched.reverse()
        skipped.reverse()
        below = []
        for _idx, o, g, l in skipped:
            below.extend((o, g, l))
        out.append(
            (
                matched[0],
                delta,
                tuple(matched),
                tuple(below),
                (),
                tuple(bindings),
            )
        )
    return out


cdef list _scan_up(tuple state, tuple pat, list pw, list widths,
                   Py_ssize_t n, Py_ssize_t k, int n_meta):
    cdef int bot_off = pat[1]
    cdef int bot_gen = pat[2]
    cdef int bot_lab = pat[3]
    cdef int block_delta = <int> pw[k] - <int> pw[0]
    cdef list out = []
    cdef Py_ssize_t ib, p, q, i, j
    cdef int delta, shift, o2, g2, l2, ext, adj
    cdef bint ok
    cdef list bindings, matched, skipped, above
    for ib in range(n):
        p = 1 + 3 * ib
        if state[p + 1] != bot_gen:
            continue
        delta = <int> state[p] - bot_off
        if delta < 0 or delta + <int> pw[0] > <int> widths[ib]:
            continue
        bindings = [-1] * n_meta
        if not _bind(bot_lab, state[p + 2], bindings):
            continue
        matched = [ib]
        skipped = []
        shift = delta
        j = 1
        i = ib + 1
        ok = True
        while j < k:
            if i >= n:
                ok = False
                break
            q = 1 + 3 * i
            o2 = state[q]
            g2 = state[q + 1]
            l2 = state[q + 2]
            if (
                g2 == <int> pat[2 + 3 * j]
                and o2 == <int> pat[1 + 3 * j] + shift
                and _bind(pat[3 + 3 * j], l2, bindings)
            ):
                matched.append(i)
                j += 1
                i += 1
                continue
            ext = _DOM[g2] if _DOM[g2] > _COD[g2] else _COD[g2]
            if o2 + ext <= shift:
                skipped.append((i, o2, g2, l2))
                shift += _COD[g2] - _DOM[g2]
            else:
                adj = o2 + block_delta - (<int> pw[j] - <int> pw[0])
                if adj < 0:
                    ok = False
                    break
                skipped.append((i, adj, g2, l2))
            i += 1
        if not ok or j < k:
            continue
        above = []
        for _idx, o, g, l in skipped:
            above.extend((o, g, l))
        out.append(
            (
                ib,
                delta,
                tuple(matched),
                (),
                tuple(above),
                tuple(bindings),
            )
        )
    return out


cdef tuple _rebuild(tuple state, tuple match, list block_layers):
    bottom = match[0]
    matched = match[2]
    below = match[3]
    above = match[4]
    top = matched[len(matched) - 1]
    out = list(state[: 1 + 3 * bottom])
    out.extend(below)
    out.extend(block_layers)
    out.extend(above)
    out.extend(state[1 + 3 * (top + 1):])
    return tuple(out)


cdef bint _verify(tuple state, tuple pat, tuple match):
    block = instantiate(pat, match[5], match[1])
    return nf(_rebuild(state, match, block)) == state


def apply_match(state, match, rep):
    """Replace a verified match window by rule side `rep` (normalized)."""
    block = instantiate(rep, match[5], match[1])
    return nf(_rebuild(tuple(state), tuple(match), block))


def find_insertions(state, width, hull):
    """Placements (level, col) for a zero-layer side's replacement block.

    Only the lowest representative of each slide class of placements is
    kept: positions independent of the layer directly below are pruned.
    """
    cdef tuple st = tuple(state)
    cdef list widths = _widths(st)
    cdef Py_ssize_t n = (len(st) - 1) // 3
    cdef list out = []
    cdef Py_ssize_t lvl, p
    cdef int wmax, col, o, g, ext, w = width, h = hull
    for lvl in range(n + 1):
        wmax = <int> widths[lvl] - w
        for col in range(wmax + 1):
            if lvl > 0:
                p = 1 + 3 * (lvl - 1)
                o = st[p]
                g = st[p + 1]
                ext = _DOM[g] if _DOM[g] > _COD[g] else _COD[g]
                if o + ext <= col or o >= col + h:
                    continue
            out.append((lvl, col))
    return out


def apply_insertion(state, lvl, col, rep):
    """Insert rule side `rep` at a level/column of an identity window."""
    out = list(state[: 1 + 3 * lvl])
    out.extend(instantiate(rep, (), col))
    out.extend(state[1 + 3 * lvl:])
    return nf(tuple(out))


def side_hull(side):
    """Max wire count across a side's levels: the block's column span."""
    return max(_side_widths(side))


def successors(state, entries):
    """All one-step rewrites of a normal-form state.

    Yields (entry_index, pos_bottom, pos_col, pos_layers, new_state) in
    deterministic order; `entries` are (pattern, replacement, n_meta).
    """
    out = []
    cdef Py_ssize_t e, k
    for e, (pat, rep, n_meta) in enumerate(entries):
        k = (len(pat) - 1) // 3
        if k == 0:
            hull = side_hull(rep)
            for lvl, col in find_insertions(state, pat[0], hull):
                out.append((e, lvl, col, 0, apply_insertion(state, lvl, col, rep)))
        else:
            for match in find_matches(state, pat, n_meta):
                out.append(
                    (e, match[0], match[1], k, apply_match(state, match, rep))
                )
    return out
