# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for bit-packed portrait arithmetic at depth <= 6.

Portraits of depth d occupy 2^d - 1 bits, so everything up to d = 6 fits a
single 64-bit word.  Mirrors _pykernel bit for bit; the dispatcher in
kernel.py falls back to the pure implementation for deeper trees.
"""

from libc.stdlib cimport malloc, free, realloc
from libc.stdint cimport uint64_t

from .errors import EnumerationCapExceeded

MAX_DEPTH = 6

cdef uint64_t EMPTY = <uint64_t>0xFFFFFFFFFFFFFFFFULL


cdef inline void _vertex_perm(uint64_t g, int d, int *perm) noexcept:
    cdef int i, base, b
    cdef int half = (1 << (d - 1)) - 1
    perm[0] = 0
    for i in range(half):
        b = <int>((g >> i) & 1ULL)
        base = 2 * perm[i] + 1
        perm[2 * i + 1] = base + b
        perm[2 * i + 2] = base + 1 - b


cdef inline uint64_t _compose(uint64_t h, uint64_t g, int d, int *perm) noexcept:
    cdef int n = (1 << d) - 1
    cdef int u
    cdef uint64_t r = g
    _vertex_perm(g, d, perm)
    for u in range(n):
        r ^= ((h >> perm[u]) & 1ULL) << u
    return r


cdef inline uint64_t _invert(uint64_t g, int d, int *perm) noexcept:
    cdef int n = (1 << d) - 1
    cdef int v
    cdef uint64_t r = 0
    _vertex_perm(g, d, perm)
    for v in range(n):
        r |= ((g >> v) & 1ULL) << perm[v]
    return r


def compose(h, g, int d):
    cdef int perm[63]
    return _compose(<uint64_t>h, <uint64_t>g, d, perm)


def invert(g, int d):
    cdef int perm[63]
    return _invert(<uint64_t>g, d, perm)


def conjugate(x, s, int d):
    cdef int perm[63]
    cdef uint64_t sb = <uint64_t>s
    cdef uint64_t r = _compose(_invert(sb, d, perm), <uint64_t>x, d, perm)
    return _compose(r, sb, d, perm)


def commutator(x, y, int d):
    cdef int perm[63]
    cdef uint64_t xb = <uint64_t>x, yb = <uint64_t>y
    cdef uint64_t r = _compose(_invert(xb, d, perm), _invert(yb, d, perm), d, perm)
    return _compose(_compose(r, xb, d, perm), yb, d, perm)


# --- open-addressing uint64 set (EMPTY sentinel is not a valid portrait) ---

cdef struct U64Set:
    uint64_t *slots
    size_t mask
    size_t size


cdef int _set_init(U64Set *s, size_t capacity) except -1:
    cdef size_t cap = 64
    cdef size_t i
    while cap < capacity * 2:
        cap <<= 1
    s.slots = <uint64_t *>malloc(cap * sizeof(uint64_t))
    if s.slots == NULL:
        raise MemoryError()
    for i in range(cap):
        s.slots[i] = EMPTY
    s.mask = cap - 1
    s.size = 0
    return 0


cdef inline size_t _slot_for(U64Set *s, uint64_t v) noexcept:
    cdef size_t i = <size_t>((v * 0x9E3779B97F4A7C15ULL) >> 13) & s.mask
    while s.slots[i] != EMPTY and s.slots[i] != v:
        i = (i + 1) & s.mask
    return i


cdef int _set_grow(U64Set *s) except -1:
    cdef uint64_t *old = s.slots
    cdef size_t old_cap = s.mask + 1
    cdef size_t i, j
    cdef uint64_t v
    _set_init(s, old_cap)
    for i in range(old_cap):
        v = old[i]
        if v != EMPTY:
            j = _slot_for(s, v)
            s.slots[j] = v
            s.size += 1
    free(old)
    return 0


cdef inline int _set_add(U64Set *s, uint64_t v) except -1:
    """Insert v; returns 1 if new, 0 if already present."""
    cdef size_t i = _slot_for(s, v)
    if s.slots[i] == v:
        return 0
    s.slots[i] = v
    s.size += 1
    if s.size * 10 >= (s.mask + 1) * 7:
        _set_grow(s)
    return 1


def close(int d, gens, cap):
    """Subgroup generated by gens; same incremental algorithm as _pykernel."""
    cdef int perm[63]
    cdef U64Set els
    cdef uint64_t *frontier = NULL
    cdef uint64_t *nxt = NULL
    cdef uint64_t *accepted = NULL
    cdef size_t fr_len, fr_cap, nxt_len, nxt_cap, n_acc, i, j, scan
    cdef uint64_t gb, x, y
    cdef size_t capv = <size_t>cap
    cdef list gen_list = [int(g) for g in gens]
    cdef object result

    _set_init(&els, 1024)
    _set_add(&els, 0)
    n_acc = 0
    accepted = <uint64_t *>malloc(max(len(gen_list), 1) * sizeof(uint64_t))
    fr_cap = 1024
    frontier = <uint64_t *>malloc(fr_cap * sizeof(uint64_t))
    nxt_cap = 1024
    nxt = <uint64_t *>malloc(nxt_cap * sizeof(uint64_t))
    if accepted == NULL or frontier == NULL or nxt == NULL:
        free(els.slots); free(accepted); free(frontier); free(nxt)
        raise MemoryError()

    try:
        for g in gen_list:
            gb = <uint64_t>g
            i = _slot_for(&els, gb)
            if els.slots[i] == gb:
                continue
            accepted[n_acc] = gb
            n_acc += 1
            # Seed: every current element times the new generator.
            fr_len = 0
            scan = 0
            # Snapshot the current slot table, then insert products.
            snapshot = []
            for scan in range(els.mask + 1):
                if els.slots[scan] != EMPTY:
                    snapshot.append(els.slots[scan])
            for x in snapshot:
                y = _compose(x, gb, d, perm)
                if _set_add(&els, y):
                    if fr_len == fr_cap:
                        fr_cap *= 2
                        frontier = <uint64_t *>realloc(frontier, fr_cap * sizeof(uint64_t))
                        if frontier == NULL:
                            raise MemoryError()
                    frontier[fr_len] = y
                    fr_len += 1
            while fr_len:
                if els.size > capv:
                    raise EnumerationCapExceeded(cap, els.size)
                nxt_len = 0
                for i in range(fr_len):
                    x = frontier[i]
                    for j in range(n_acc):
                        y = _compose(x, accepted[j], d, perm)
                        if _set_add(&els, y):
                            if nxt_len == nxt_cap:
                                nxt_cap *= 2
                                nxt = <uint64_t *>realloc(nxt, nxt_cap * sizeof(uint64_t))
                                if nxt == NULL:
                                    raise MemoryError()
                            nxt[nxt_len] = y
                            nxt_len += 1
                frontier, nxt = nxt, frontier
                fr_cap, nxt_cap = nxt_cap, fr_cap
                fr_len = nxt_len
            if els.size > capv:
                raise EnumerationCapExceeded(cap, els.size)

        result = set()
        for scan in range(els.mask + 1):
            if els.slots[scan] != EMPTY:
                result.add(els.slots[scan])
        return result
    finally:
        free(els.slots)
        free(accepted)
        free(frontier)
        free(nxt)
