# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled join kernel. Same contract as ``_kernels_py.join``."""

cdef long long SHIFT = 32


cdef class _Join:
    cdef long long[:] S
    cdef long long[:] P
    cdef long long[:] O
    cdef long long[:] pat
    cdef long long[:] binding
    cdef long long[:] lo
    cdef long long[:] hi
    cdef unsigned char[:] used
    cdef int n
    cdef Py_ssize_t n_triples
    cdef dict idx_s, idx_p, idx_o, idx_sp, idx_po, idx_so, spo
    cdef list out
    cdef object binding_arr

    cdef inline long long _val(self, long long x):
        return x if x >= 0 else self.binding[-x - 1]

    cdef object _candidates(self, int i):
        cdef long long s = self._val(self.pat[3 * i])
        cdef long long p = self._val(self.pat[3 * i + 1])
        cdef long long o = self._val(self.pat[3 * i + 2])
        cdef object t
        if s >= 0:
            if p >= 0:
                if o >= 0:
                    # The three-id key needs more than 64 bits: build it as a Python int.
                    t = self.spo.get((((<object>s << SHIFT) | p) << SHIFT) | o)
                    return () if t is None else (t,)
                return self.idx_sp.get((s << SHIFT) | p, ())
            if o >= 0:
                return self.idx_so.get((s << SHIFT) | o, ())
            return self.idx_s.get(s, ())
        if p >= 0:
            if o >= 0:
                return self.idx_po.get((p << SHIFT) | o, ())
            return self.idx_p.get(p, ())
        if o >= 0:
            return self.idx_o.get(o, ())
        return None

    cdef bint _try(self, Py_ssize_t t, int best, long long* changed, int* nchanged):
        cdef int j
        cdef long long x, val, cur
        cdef long long k
        nchanged[0] = 0
        for j in range(3):
            x = self.pat[3 * best + j]
            if j == 0:
                val = self.S[t]
            elif j == 1:
                val = self.P[t]
            else:
                val = self.O[t]
            if x >= 0:
                if x != val:
                    return False
            else:
                k = -x - 1
                cur = self.binding[k]
                if cur < 0:
                    self.binding[k] = val
                    changed[nchanged[0]] = k
                    nchanged[0] += 1
                elif cur != val:
                    return False
        return True

    cdef void _rec(self, int depth):
        cdef int i, best = -1, nchanged = 0, c
        cdef Py_ssize_t ln, best_len = 0, t, idx, nc
        cdef object cands, best_c = None
        cdef long long changed[3]
        cdef long long low, high
        if depth == self.n:
            self.out.append(tuple(self.binding_arr))
            return
        for i in range(self.n):
            if self.used[i]:
                continue
            cands = self._candidates(i)
            ln = self.n_triples if cands is None else len(cands)
            if best < 0 or ln < best_len:
                best = i
                best_c = cands
                best_len = ln
                if ln == 0:
                    break
        if best_len == 0:
            return
        self.used[best] = 1
        low = self.lo[best]
        high = self.hi[best]
        if best_c is None:
            if high > self.n_triples:
                high = self.n_triples
            for t in range(low, high):
                if self._try(t, best, changed, &nchanged):
                    self._rec(depth + 1)
                for c in range(nchanged):
                    self.binding[changed[c]] = -1
        else:
            nc = len(best_c)
            for idx in range(nc):
                t = best_c[idx]
                if t < low or t >= high:
                    continue
                if self._try(t, best, changed, &nchanged):
                    self._rec(depth + 1)
                for c in range(nchanged):
                    self.binding[changed[c]] = -1
        self.used[best] = 0


def join(patterns, int nslots, seed, S, P, O, dict idx_s, dict idx_p, dict idx_o,
         dict idx_sp, dict idx_po, dict idx_so, dict spo, lo, hi):
    cdef _Join j = _Join()
    cdef int n = len(patterns)
    cdef int i
    flat = []
    for triple in patterns:
        flat.extend(triple)
    if n == 0:
        return [tuple(seed)]
    j.n = n
    j.n_triples = len(S)
    if j.n_triples == 0:
        return []
    j.S = S
    j.P = P
    j.O = O
    from array import array
    j.pat = array("q", flat)
    j.binding_arr = array("q", seed) if nslots else array("q", [0])
    j.binding = j.binding_arr
    j.lo = array("q", lo)
    j.hi = array("q", hi)
    j.used = bytearray(n)
    j.idx_s = idx_s
    j.idx_p = idx_p
    j.idx_o = idx_o
    j.idx_sp = idx_sp
    j.idx_po = idx_po
    j.idx_so = idx_so
    j.spo = spo
    j.out = []
    j._rec(0)
    if nslots == 0:
        return [()] * len(j.out)
    return j.out
