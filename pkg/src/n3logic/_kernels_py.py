"""Pure-Python join kernel. Mirrors ``_kernels.pyx`` line for line.

Patterns are ``(s, p, o)`` int triples: non-negative values are interned
term ids, negative values ``-k-1`` name binding slot ``k``. ``lo[i]`` and
``hi[i]`` bound the triple ids pattern ``i`` may match, which is how the
engine restricts one pattern to the newest triples (semi-naive rounds).
"""

SHIFT = 32


def join(patterns, nslots, seed, S, P, O, idx_s, idx_p, idx_o, idx_sp, idx_po, idx_so, spo, lo, hi):
    n = len(patterns)
    binding = list(seed)
    used = [False] * n
    out = []
    n_triples = len(S)

    def candidates(i):
        ps, pp, po = patterns[i]
        s = ps if ps >= 0 else binding[-ps - 1]
        p = pp if pp >= 0 else binding[-pp - 1]
        o = po if po >= 0 else binding[-po - 1]
        if s >= 0:
            if p >= 0:
                if o >= 0:
                    t = spo.get((((s << SHIFT) | p) << SHIFT) | o)
                    return () if t is None else (t,)
                return idx_sp.get((s << SHIFT) | p, ())
            if o >= 0:
                return idx_so.get((s << SHIFT) | o, ())
            return idx_s.get(s, ())
        if p >= 0:
            if o >= 0:
                return idx_po.get((p << SHIFT) | o, ())
            return idx_p.get(p, ())
        if o >= 0:
            return idx_o.get(o, ())
        return None

    def rec(depth):
        if depth == n:
            out.append(tuple(binding))
            return
        best = -1
        best_c = None
        best_len = 0
        for i in range(n):
            if used[i]:
                continue
            c = candidates(i)
            ln = n_triples if c is None else len(c)
            if best < 0 or ln < best_len:
                best, best_c, best_len = i, c, ln
                if ln == 0:
                    break
        if best_len == 0:
            return
        used[best] = True
        ps, pp, po = patterns[best]
        low = lo[best]
        high = hi[best]
        source = range(low, min(high, n_triples)) if best_c is None else best_c
        for t in source:
            if t < low or t >= high:
                continue
            changed = []
            ok = True
            for x, val in ((ps, S[t]), (pp, P[t]), (po, O[t])):
                if x >= 0:
                    if x != val:
                        ok = False
                        break
                else:
                    k = -x - 1
                    cur = binding[k]
                    if cur < 0:
                        binding[k] = val
                        changed.append(k)
                    elif cur != val:
                        ok = False
                        break
            if ok:
                rec(depth + 1)
            for k in changed:
                binding[k] = -1
        used[best] = False

    if n == 0:
        return [tuple(binding)]
    rec(0)
    return out
