# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the lattice bracket sweep.

Mirrors ``_pykernel``. Coefficients are ``int64``; every step checks the
largest magnitude against a guard that keeps the next step overflow-free,
and a tripped guard is reported to the caller (``None`` key or
``OverflowError``) so it can redo that resolution with Python integers.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, int32_t, int8_t, uint8_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map
from libcpp.utility cimport pair
from cython.operator cimport dereference as deref, preincrement as inc

cnp.import_array()

NAME = "cython"

cdef extern from *:
    """
    static inline int lk_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    """
    int lk_popcount(unsigned long long x) nogil


cdef struct Sched:
    int c
    int width
    int offset
    int max_states
    const int32_t* counts
    const int32_t* base
    const int32_t* outs
    const int8_t* loops
    int64_t guard


cdef struct Entry:
    int64_t count
    uint64_t min_code


cdef class _Plan:
    """Keeps the schedule arrays alive and exposes them as a C struct."""
    cdef Sched s
    cdef object _keep
    cdef public object plus_signs

    def __init__(self, sched):
        counts = np.ascontiguousarray(sched.state_counts, dtype=np.int32)
        base = np.ascontiguousarray(sched.trans_base, dtype=np.int32)
        outs = np.ascontiguousarray(sched.trans_out, dtype=np.int32)
        loops = np.ascontiguousarray(sched.trans_loops, dtype=np.int8)
        self._keep = (counts, base, outs, loops)
        cdef const int32_t[::1] cv = counts
        cdef const int32_t[::1] bv = base
        cdef const int32_t[::1] ov = outs
        cdef const int8_t[::1] lv = loops
        self.s.c = sched.crossing_count
        self.s.width = sched.width // 4 + 4
        self.s.offset = sched.offset
        self.s.max_states = sched.max_states
        self.s.counts = &cv[0]
        self.s.base = &bv[0]
        self.s.outs = &ov[0]
        self.s.loops = &lv[0]
        if sched.offset % 4:
            raise ValueError("schedule offset must be a multiple of 4")
        self.s.guard = (1 << 62) // (4 * max(sched.max_states, 1))
        if sched.guard is not None:
            self.s.guard = min(self.s.guard, sched.guard)
        self.plus_signs = np.ascontiguousarray(sched.plus_signs, dtype=np.int8)


_plans = {}


cdef _Plan _plan(sched):
    p = _plans.get(id(sched))
    if p is None or p[0] is not sched:
        p = (sched, _Plan(sched))
        _plans[id(sched)] = p
    return p[1]


cdef inline int _step(const Sched* s, int x, int bit,
                      const int64_t* vin, const int* lo_in, const int* hi_in, const int* res_in,
                      int64_t* vout, int* lo_out, int* hi_out, int* res_out) noexcept nogil:
    """Absorb crossing ``x``.

    Each state stores only the exponents of its residue class mod 4: slot
    ``j`` of a state with residue ``r`` holds the coefficient of
    ``A^(4j + r - offset)``. Returns 1 if the overflow guard tripped, 2 on a
    residue clash.
    """
    cdef int m_in = s.counts[x]
    cdef int m_out = s.counts[x + 1]
    cdef int W = s.width
    cdef int base = s.base[x]
    cdef int last = x == s.c - 1
    cdef int st, g, t, L, sh, lo, hi, k, e, r, rr, delta
    cdef int64_t v, big
    cdef const int64_t* src
    cdef int64_t* dst
    for t in range(m_out):
        lo_out[t] = W
        hi_out[t] = -1
        res_out[t] = -1
    for st in range(m_in):
        if hi_in[st] < lo_in[st]:
            continue
        for g in range(2):
            k = base + 2 * st + g
            t = s.outs[k]
            L = s.loops[k] - last
            sh = 1 if g == bit else -1
            rr = res_in[st] + sh + (2 if L == 1 else 0)
            r = rr & 3
            if res_out[t] < 0:
                res_out[t] = r
            elif res_out[t] != r:
                return 2
            delta = (rr - r) // 4
            lo = lo_in[st] + delta - (1 if L > 0 else 0)
            hi = hi_in[st] + delta + (1 if L == 2 else 0)
            if lo < lo_out[t]:
                lo_out[t] = lo
            if hi > hi_out[t]:
                hi_out[t] = hi
    for t in range(m_out):
        if hi_out[t] >= lo_out[t]:
            memset(vout + <Py_ssize_t>t * W + lo_out[t], 0,
                   (hi_out[t] - lo_out[t] + 1) * sizeof(int64_t))
    for st in range(m_in):
        lo = lo_in[st]
        hi = hi_in[st]
        if hi < lo:
            continue
        src = vin + <Py_ssize_t>st * W
        for g in range(2):
            k = base + 2 * st + g
            L = s.loops[k] - last
            sh = 1 if g == bit else -1
            rr = res_in[st] + sh + (2 if L == 1 else 0)
            delta = (rr - (rr & 3)) // 4
            dst = vout + <Py_ssize_t>s.outs[k] * W + delta
            if L == 0:
                for e in range(lo, hi + 1):
                    dst[e] += src[e]
            elif L == 1:
                for e in range(lo, hi + 1):
                    v = src[e]
                    dst[e] -= v
                    dst[e - 1] -= v
            else:
                for e in range(lo, hi + 1):
                    v = src[e]
                    dst[e + 1] += v
                    dst[e] += 2 * v
                    dst[e - 1] += v
    big = 0
    for t in range(m_out):
        lo = lo_out[t]
        hi = hi_out[t]
        dst = vout + <Py_ssize_t>t * W
        while lo <= hi and dst[lo] == 0:
            lo += 1
        while hi >= lo and dst[hi] == 0:
            hi -= 1
        lo_out[t] = lo
        hi_out[t] = hi
        for e in range(lo, hi + 1):
            v = dst[e]
            if v > big:
                big = v
            elif -v > big:
                big = -v
    return 1 if big >= s.guard else 0


cdef inline void _init_vec(const Sched* s, int64_t* v, int* lo, int* hi, int* res) noexcept nogil:
    v[s.offset // 4] = 1
    lo[0] = s.offset // 4
    hi[0] = s.offset // 4
    res[0] = 0


cdef int _jones_pack(const Sched* s, const int64_t* v, int lo, int hi, int res,
                     int writhe, int64_t* out) noexcept nogil:
    """Write ``[min_q, c0, c1, ...]`` into ``out``; returns word count or -1."""
    cdef int lo_a, hi_a, j, n
    cdef int64_t sign = -1 if (writhe & 1) else 1
    if hi < lo:
        return -1
    lo_a = 4 * lo + res - s.offset - 3 * writhe
    hi_a = 4 * hi + res - s.offset - 3 * writhe
    if (lo_a % 4) != 0:
        return -1
    # A^e -> q^(-e/2): consecutive slots are two q-powers apart
    out[0] = -(hi_a // 2)
    n = 1
    j = hi
    while j >= lo:
        out[n] = sign * v[j]
        n += 1
        if j > lo:
            out[n] = 0
            n += 1
        j -= 1
    return n


cdef class _Work:
    cdef int64_t* buf
    cdef int* lo
    cdef int* hi
    cdef int* res
    cdef int levels
    cdef int span

    def __cinit__(self, int levels, int max_states, int width):
        self.levels = levels
        self.span = max_states * width
        self.buf = <int64_t*> malloc(<size_t>levels * self.span * sizeof(int64_t))
        self.lo = <int*> malloc(<size_t>levels * max_states * sizeof(int))
        self.hi = <int*> malloc(<size_t>levels * max_states * sizeof(int))
        self.res = <int*> malloc(<size_t>levels * max_states * sizeof(int))
        if self.buf == NULL or self.lo == NULL or self.hi == NULL or self.res == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.buf)
        free(self.lo)
        free(self.hi)
        free(self.res)


cdef inline int _step_level(const Sched* s, int x, int bit, _Work w, int a, int b) noexcept nogil:
    cdef int M = s.max_states
    return _step(s, x, bit,
                 w.buf + <Py_ssize_t>a * w.span, w.lo + a * M, w.hi + a * M, w.res + a * M,
                 w.buf + <Py_ssize_t>b * w.span, w.lo + b * M, w.hi + b * M, w.res + b * M)


cdef int _run(const Sched* s, const uint8_t* bits, _Work w, int* status) noexcept nogil:
    """Full sweep over two alternating levels of ``w``; returns the final level."""
    cdef int x, cur = 0, nxt, rc
    _init_vec(s, w.buf, w.lo, w.hi, w.res)
    for x in range(s.c):
        nxt = 1 - cur
        rc = _step_level(s, x, bits[x], w, cur, nxt)
        if rc:
            status[0] = rc
            return -1
        cur = nxt
    status[0] = 0
    return cur


cdef _raise(int status):
    if status == 1:
        raise OverflowError("int64 guard tripped")
    raise ArithmeticError("inconsistent exponent residues in sweep state")


def sweep_bracket(sched, bits):
    """Kauffman bracket ``(min_exp, coeffs)``; raises OverflowError on guard trip."""
    cdef _Plan p = _plan(sched)
    cdef const Sched* s = &p.s
    b = np.ascontiguousarray(np.asarray(bits, dtype=np.uint8))
    if b.shape[0] != s.c:
        raise ValueError("wrong number of bits")
    cdef const uint8_t[::1] bv = b
    cdef _Work w = _Work(2, s.max_states, s.width)
    cdef int status, cur, M = s.max_states, j, lo, hi, r
    cur = _run(s, &bv[0], w, &status)
    if cur < 0:
        _raise(status)
    lo = w.lo[cur * M]
    hi = w.hi[cur * M]
    r = w.res[cur * M]
    if hi < lo:
        return 0, []
    cdef int64_t* v = w.buf + <Py_ssize_t>cur * w.span
    coeffs = []
    for j in range(lo, hi + 1):
        if j > lo:
            coeffs.extend((0, 0, 0))
        coeffs.append(v[j])
    return 4 * lo + r - s.offset, coeffs


def jones_keys(sched, bits):
    """Packed Jones key per row of ``bits`` (uint8 [B, c]); ``None`` on overflow."""
    cdef _Plan p = _plan(sched)
    cdef const Sched* s = &p.s
    arr = np.ascontiguousarray(bits, dtype=np.uint8)
    if arr.ndim != 2 or arr.shape[1] != s.c:
        raise ValueError("bits must have shape [B, crossings]")
    cdef const uint8_t[:, ::1] bv = arr
    cdef const int8_t[::1] signs = p.plus_signs
    cdef Py_ssize_t B = arr.shape[0], r
    cdef _Work w = _Work(2, s.max_states, s.width)
    cdef int64_t* packed = <int64_t*> malloc((2 * s.width + 4) * sizeof(int64_t))
    cdef int cur, wr, i, nw, status, M = s.max_states
    out = []
    try:
        for r in range(B):
            wr = 0
            for i in range(s.c):
                wr += -signs[i] if bv[r, i] else signs[i]
            with nogil:
                cur = _run(s, &bv[r, 0], w, &status)
                nw = -1
                if cur >= 0:
                    nw = _jones_pack(s, w.buf + <Py_ssize_t>cur * w.span, w.lo[cur * M],
                                     w.hi[cur * M], w.res[cur * M], wr, packed)
            if cur < 0:
                if status != 1:
                    _raise(status)
                out.append(None)
            elif nw < 0:
                raise ArithmeticError("bracket exponents are not aligned to A^4")
            else:
                out.append((<char*>packed)[:nw * 8])
    finally:
        free(packed)
    return out


cdef struct DFS:
    const Sched* s
    const int8_t* signs
    int64_t* packed
    unordered_map[string, Entry]* table
    int status


cdef void _dfs(DFS* d, _Work w, int x, uint64_t code, int writhe) noexcept nogil:
    cdef const Sched* s = d.s
    cdef int M = s.max_states
    cdef int bit, nw, sg, rc
    cdef string key
    cdef unordered_map[string, Entry].iterator it
    cdef Entry ent
    cdef Entry* ep
    if d.status:
        return
    if x == s.c:
        nw = _jones_pack(s, w.buf + <Py_ssize_t>x * w.span, w.lo[x * M], w.hi[x * M],
                         w.res[x * M], writhe, d.packed)
        if nw < 0:
            d.status = 3
            return
        key = string(<char*>d.packed, nw * 8)
        it = d.table.find(key)
        if it == d.table.end():
            ent.count = 1
            ent.min_code = code
            d.table[0][key] = ent
        else:
            ep = &deref(it).second
            ep.count += 1
            if code < ep.min_code:
                ep.min_code = code
        return
    sg = d.signs[x]
    for bit in range(2):
        rc = _step_level(s, x, bit, w, x, x + 1)
        if rc:
            d.status = rc
            return
        _dfs(d, w, x + 1, code | ((<uint64_t>bit) << x), writhe + (-sg if bit else sg))


def census(sched, int prefix_len, prefix_code):
    """Count Jones keys over all resolutions whose low ``prefix_len`` bits
    equal ``prefix_code``. Returns ``{key: [count, min_code]}``."""
    cdef _Plan p = _plan(sched)
    cdef const Sched* s = &p.s
    if s.c > 63:
        raise ValueError("census needs at most 63 crossings")
    if not 0 <= prefix_len <= s.c:
        raise ValueError("bad prefix length")
    cdef const int8_t[::1] signs = p.plus_signs
    cdef _Work w = _Work(s.c + 1, s.max_states, s.width)
    cdef unordered_map[string, Entry] table
    cdef DFS d
    cdef uint64_t pc = <uint64_t>prefix_code
    cdef int x, wr = 0, bit, rc
    d.s = s
    d.signs = &signs[0]
    d.table = &table
    d.status = 0
    d.packed = <int64_t*> malloc((2 * s.width + 4) * sizeof(int64_t))
    try:
        with nogil:
            _init_vec(s, w.buf, w.lo, w.hi, w.res)
            for x in range(prefix_len):
                bit = (pc >> x) & 1
                rc = _step_level(s, x, bit, w, x, x + 1)
                if rc:
                    d.status = rc
                    break
                wr += -signs[x] if bit else signs[x]
            if not d.status:
                _dfs(&d, w, prefix_len, pc, wr)
    finally:
        free(d.packed)
    if d.status == 3:
        raise ArithmeticError("bracket exponents are not aligned to A^4")
    if d.status:
        _raise(d.status)
    out = {}
    cdef unordered_map[string, Entry].iterator it = table.begin()
    while it != table.end():
        out[bytes(deref(it).first)] = [deref(it).second.count, deref(it).second.min_code]
        inc(it)
    return out


def smoothing_cube(port_edge, edge_ports, int c):
    """Loop count of every geometric smoothing by walking the loops."""
    if c > 30:
        raise ValueError("smoothing cube limited to 30 crossings")
    cdef Py_ssize_t total = (<Py_ssize_t>1) << c
    cube = np.empty(total, dtype=np.uint8)
    cdef uint8_t[::1] cv = cube
    ep = np.ascontiguousarray(edge_ports, dtype=np.int32)
    cdef const int32_t[:, ::1] epv = ep
    cdef int nports = 4 * c
    cdef int* along = <int*> malloc(nports * sizeof(int))
    cdef uint8_t* seen = <uint8_t*> malloc(nports)
    cdef int inside0[4]
    cdef int inside1[4]
    inside0[:] = [3, 2, 1, 0]
    inside1[:] = [1, 0, 3, 2]
    cdef Py_ssize_t sig
    cdef int e, p, q, start, loops, cr
    try:
        for e in range(epv.shape[0]):
            along[epv[e, 0]] = epv[e, 1]
            along[epv[e, 1]] = epv[e, 0]
        with nogil:
            for sig in range(total):
                memset(seen, 0, nports)
                loops = 0
                for start in range(nports):
                    if seen[start]:
                        continue
                    loops += 1
                    p = start
                    while not seen[p]:
                        seen[p] = 1
                        q = along[p]
                        seen[q] = 1
                        cr = q >> 2
                        if (sig >> cr) & 1:
                            p = (cr << 2) + inside1[q & 3]
                        else:
                            p = (cr << 2) + inside0[q & 3]
                cv[sig] = loops
    finally:
        free(along)
        free(seen)
    return cube


def statesum_hist(cube, code, int c):
    """``h[j, k]``: smoothings with ``j`` B-choices and ``k`` loops."""
    cdef const uint8_t[::1] cv = np.ascontiguousarray(cube, dtype=np.uint8)
    h = np.zeros((c + 1, c + 2), dtype=np.int64)
    cdef int64_t[:, ::1] hv = h
    cdef uint64_t rho = <uint64_t>code
    cdef Py_ssize_t sig, total = cv.shape[0], cols = c + 2, lane = (c + 1) * (c + 2)
    cdef Py_ssize_t j, k
    # four interleaved copies avoid back-to-back increments of one counter
    cdef int64_t *acc = <int64_t *>malloc(4 * lane * sizeof(int64_t))
    if acc == NULL:
        raise MemoryError()
    memset(acc, 0, 4 * lane * sizeof(int64_t))
    with nogil:
        for sig in range(total):
            acc[(sig & 3) * lane + lk_popcount(<uint64_t>sig ^ rho) * cols + cv[sig]] += 1
        for j in range(c + 1):
            for k in range(cols):
                hv[j, k] = (acc[j * cols + k] + acc[lane + j * cols + k]
                            + acc[2 * lane + j * cols + k] + acc[3 * lane + j * cols + k])
    free(acc)
    return h
