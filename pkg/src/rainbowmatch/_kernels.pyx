# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; a line-for-line port of ``_kernels_py``.

Every function here must agree with its pure-Python twin on every input,
including node counts and the order of random draws.
"""
import numpy as np

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free

BACKEND = "compiled"

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MUL1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MUL2 = 0x94D049BB133111EBULL

cdef enum:
    C_MODE_FIND = 1
    C_MODEL_URM = 0

MODE_COUNT = 0
MODE_FIND = 1
MODEL_URM = 0
MODEL_RRM = 1


# --- SplitMix64 --------------------------------------------------------------

cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * MUL1
    z = (z ^ (z >> 27)) * MUL2
    return z ^ (z >> 31)


cdef inline uint64_t derive(uint64_t key, uint64_t index) nogil:
    return mix64(key ^ mix64((index + 1) * GAMMA))


cdef inline uint64_t next64(uint64_t* state) nogil:
    state[0] += GAMMA
    return mix64(state[0])


cdef inline uint64_t below(uint64_t* state, uint64_t bound) nogil:
    cdef uint64_t threshold = (0 - bound) % bound
    cdef uint64_t r
    while True:
        r = next64(state)
        if r >= threshold:
            return r % bound


cdef inline void shuffle(uint64_t* state, int64_t* a, Py_ssize_t length) nogil:
    cdef Py_ssize_t i, j
    cdef int64_t tmp
    i = length - 1
    while i > 0:
        j = <Py_ssize_t>below(state, <uint64_t>(i + 1))
        tmp = a[i]; a[i] = a[j]; a[j] = tmp
        i -= 1


cdef inline void urm_fill(uint64_t* state, int64_t* cells, Py_ssize_t n, int64_t s) nogil:
    cdef Py_ssize_t idx
    for idx in range(n * n):
        cells[idx] = <int64_t>below(state, <uint64_t>s)


cdef inline void rrm_fill(uint64_t* state, int64_t* cells, Py_ssize_t n, int64_t s) nogil:
    cdef Py_ssize_t idx
    cdef int64_t m = (n * n) // s
    for idx in range(n * n):
        cells[idx] = idx // m
    shuffle(state, cells, n * n)


cdef inline void identity_shuffle(uint64_t* state, int64_t* perm, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    for i in range(n):
        perm[i] = i
    shuffle(state, perm, n)


def urm_cells(uint64_t key, Py_ssize_t n, int64_t s):
    out = np.empty(n * n, dtype=np.int64)
    cdef int64_t[::1] v = out
    cdef uint64_t state = key
    urm_fill(&state, &v[0], n, s)
    return out


def rrm_cells(uint64_t key, Py_ssize_t n, int64_t s):
    out = np.empty(n * n, dtype=np.int64)
    cdef int64_t[::1] v = out
    cdef uint64_t state = key
    rrm_fill(&state, &v[0], n, s)
    return out


def capped_cells(uint64_t key, Py_ssize_t n, int64_t cap):
    out = np.empty(n * n, dtype=np.int64)
    cdef int64_t[::1] v = out
    cdef uint64_t state = key
    cdef Py_ssize_t idx
    for idx in range(n * n):
        v[idx] = idx // cap
    shuffle(&state, &v[0], n * n)
    return out


def permutation(uint64_t key, Py_ssize_t n):
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] v = out
    cdef uint64_t state = key
    if n:
        identity_shuffle(&state, &v[0], n)
    return out


# --- Monte Carlo loops -----------------------------------------------------------

cdef inline bint distinct_on(const int64_t* cells, Py_ssize_t n, const int64_t* sigma,
                             int64_t* stamp, int64_t tag) nogil:
    cdef Py_ssize_t i
    cdef int64_t c
    for i in range(n):
        c = cells[i * n + sigma[i]]
        if stamp[c] == tag:
            return False
        stamp[c] = tag
    return True


def mc_fixed(flat, Py_ssize_t n, int64_t s, uint64_t base_key, int64_t t0, int64_t t1):
    cdef const int64_t[::1] cells = np.ascontiguousarray(flat, dtype=np.int64)
    stamp_arr = np.full(s, -1, dtype=np.int64)
    sigma_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] stamp = stamp_arr
    cdef int64_t[::1] sigma = sigma_arr
    cdef int64_t t, hits = 0
    cdef uint64_t state
    with nogil:
        for t in range(t0, t1):
            state = derive(base_key, <uint64_t>t)
            identity_shuffle(&state, &sigma[0], n)
            if distinct_on(&cells[0], n, &sigma[0], &stamp[0], t):
                hits += 1
    return hits


def mc_model(int model, Py_ssize_t n, int64_t s, uint64_t base_key, int64_t t0, int64_t t1):
    cells_arr = np.empty(n * n, dtype=np.int64)
    stamp_arr = np.full(s, -1, dtype=np.int64)
    sigma_arr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] cells = cells_arr
    cdef int64_t[::1] stamp = stamp_arr
    cdef int64_t[::1] sigma = sigma_arr
    cdef int64_t t, hits = 0
    cdef uint64_t state
    with nogil:
        for t in range(t0, t1):
            state = derive(base_key, <uint64_t>t)
            if model == C_MODEL_URM:
                urm_fill(&state, &cells[0], n, s)
            else:
                rrm_fill(&state, &cells[0], n, s)
            identity_shuffle(&state, &sigma[0], n)
            if distinct_on(&cells[0], n, &sigma[0], &stamp[0], t):
                hits += 1
    return hits


# --- exact search ----------------------------------------------------------------

cdef struct Search:
    Py_ssize_t n
    Py_ssize_t s
    int mode
    int64_t max_nodes
    const int64_t* C
    int64_t* cstart      # CSR offsets into ccells, length s + 1
    int64_t* ccells
    char* rowfree
    char* colfree
    char* colorfree
    int64_t* rowcnt
    int64_t* colcnt
    int64_t* colorcnt
    int64_t* sol
    int64_t* optbuf      # n + 1 slots of option cells per depth
    Py_ssize_t live
    Py_ssize_t remaining
    int64_t nodes
    uint64_t count
    bint found
    bint exhausted


cdef inline void touch(Search* S, Py_ssize_t i, Py_ssize_t j, int d) nogil:
    cdef int64_t c = S.C[i * S.n + j]
    S.rowcnt[i] += d
    S.colcnt[j] += d
    if d < 0:
        S.colorcnt[c] -= 1
        if S.colorcnt[c] == 0:
            S.live -= 1
    else:
        if S.colorcnt[c] == 0:
            S.live += 1
        S.colorcnt[c] += 1


cdef void sweep(Search* S, Py_ssize_t i, Py_ssize_t j, int64_t c, int d) nogil:
    cdef Py_ssize_t n = S.n
    cdef Py_ssize_t i2, j2, base = i * n
    cdef int64_t k, idx
    for j2 in range(n):
        if S.colfree[j2] and S.colorfree[S.C[base + j2]]:
            touch(S, i, j2, d)
    for i2 in range(n):
        if i2 != i and S.rowfree[i2] and S.colorfree[S.C[i2 * n + j]]:
            touch(S, i2, j, d)
    for k in range(S.cstart[c], S.cstart[c + 1]):
        idx = S.ccells[k]
        i2 = idx // n
        j2 = idx - i2 * n
        if i2 != i and j2 != j and S.rowfree[i2] and S.colfree[j2]:
            touch(S, i2, j2, d)


cdef inline bint place(Search* S, Py_ssize_t i, Py_ssize_t j) nogil:
    if S.max_nodes >= 0 and S.nodes >= S.max_nodes:
        S.exhausted = True
        return False
    S.nodes += 1
    cdef int64_t c = S.C[i * S.n + j]
    sweep(S, i, j, c, -1)
    S.rowfree[i] = 0
    S.colfree[j] = 0
    S.colorfree[c] = 0
    S.remaining -= 1
    S.sol[i] = j
    return True


cdef inline void unplace(Search* S, Py_ssize_t i, Py_ssize_t j) nogil:
    cdef int64_t c = S.C[i * S.n + j]
    S.rowfree[i] = 1
    S.colfree[j] = 1
    S.colorfree[c] = 1
    S.remaining += 1
    S.sol[i] = -1
    sweep(S, i, j, c, 1)


cdef void run(Search* S, Py_ssize_t depth) nogil:
    cdef Py_ssize_t n = S.n
    cdef Py_ssize_t i, j, c, k, nopt = 0
    cdef int kind = -1
    cdef Py_ssize_t best_idx = -1
    cdef int64_t cnt, best = n + 1, cell
    cdef int64_t* opts = S.optbuf + depth * n
    if S.remaining == 0:
        S.count += 1
        if S.mode == C_MODE_FIND:
            S.found = True
        return
    if S.live < S.remaining:
        return
    for i in range(n):
        if S.rowfree[i]:
            cnt = S.rowcnt[i]
            if cnt < best:
                if cnt == 0:
                    return
                kind = 0; best_idx = i; best = cnt
    for j in range(n):
        if S.colfree[j]:
            cnt = S.colcnt[j]
            if cnt < best:
                if cnt == 0:
                    return
                kind = 1; best_idx = j; best = cnt
    if S.live == S.remaining and best > 1:
        for c in range(S.s):
            cnt = S.colorcnt[c]
            if cnt and cnt < best:
                kind = 2; best_idx = c; best = cnt
    # options are snapshotted before any placement mutates the flags
    if kind == 0:
        for j in range(n):
            if S.colfree[j] and S.colorfree[S.C[best_idx * n + j]]:
                opts[nopt] = best_idx * n + j; nopt += 1
    elif kind == 1:
        for i in range(n):
            if S.rowfree[i] and S.colorfree[S.C[i * n + best_idx]]:
                opts[nopt] = i * n + best_idx; nopt += 1
    else:
        for k in range(S.cstart[best_idx], S.cstart[best_idx + 1]):
            cell = S.ccells[k]
            i = cell // n
            j = cell - i * n
            if S.rowfree[i] and S.colfree[j]:
                opts[nopt] = cell; nopt += 1
    for k in range(nopt):
        i = opts[k] // n
        j = opts[k] - i * n
        if not place(S, i, j):
            return
        run(S, depth + 1)
        if S.found or S.exhausted:
            return
        unplace(S, i, j)


def search(flat, Py_ssize_t n, Py_ssize_t s, int mode, int64_t max_nodes=-1):
    """See ``_kernels_py.search``."""
    cdef const int64_t[::1] C = np.ascontiguousarray(flat, dtype=np.int64)
    cdef Search S
    cdef Py_ssize_t idx, c
    cdef int64_t pos
    S.n = n; S.s = s; S.mode = mode; S.max_nodes = max_nodes
    S.C = &C[0]
    S.cstart = <int64_t*>calloc(s + 1, sizeof(int64_t))
    S.ccells = <int64_t*>malloc(n * n * sizeof(int64_t))
    S.rowfree = <char*>malloc(n)
    S.colfree = <char*>malloc(n)
    S.colorfree = <char*>malloc(s)
    S.rowcnt = <int64_t*>malloc(n * sizeof(int64_t))
    S.colcnt = <int64_t*>malloc(n * sizeof(int64_t))
    S.colorcnt = <int64_t*>calloc(s, sizeof(int64_t))
    S.sol = <int64_t*>malloc(n * sizeof(int64_t))
    S.optbuf = <int64_t*>malloc((n + 1) * n * sizeof(int64_t))
    cdef int64_t* fill = <int64_t*>calloc(s, sizeof(int64_t))
    try:
        if (not S.cstart or not S.ccells or not S.rowfree or not S.colfree or not S.colorfree
                or not S.rowcnt or not S.colcnt or not S.colorcnt or not S.sol or not S.optbuf
                or not fill):
            raise MemoryError()
        with nogil:
            for idx in range(n * n):
                S.colorcnt[S.C[idx]] += 1
            pos = 0
            S.live = 0
            for c in range(s):
                S.cstart[c] = pos
                pos += S.colorcnt[c]
                S.colorfree[c] = 1
                if S.colorcnt[c]:
                    S.live += 1
            S.cstart[s] = pos
            for idx in range(n * n):
                c = S.C[idx]
                S.ccells[S.cstart[c] + fill[c]] = idx
                fill[c] += 1
            for idx in range(n):
                S.rowfree[idx] = 1
                S.colfree[idx] = 1
                S.rowcnt[idx] = n
                S.colcnt[idx] = n
                S.sol[idx] = -1
            S.remaining = n
            S.nodes = 0
            S.count = 0
            S.found = False
            S.exhausted = False
            run(&S, 0)
        if S.exhausted:
            return 0, S.nodes, None, True
        witness = [S.sol[idx] for idx in range(n)] if S.found else None
        return S.count, S.nodes, witness, False
    finally:
        free(S.cstart); free(S.ccells); free(S.rowfree); free(S.colfree); free(S.colorfree)
        free(S.rowcnt); free(S.colcnt); free(S.colorcnt); free(S.sol); free(S.optbuf); free(fill)


cdef struct Partial:
    Py_ssize_t n
    const int64_t* C
    char* colfree
    char* colorfree
    Py_ssize_t best
    int64_t nodes
    int64_t max_nodes
    bint exhausted


cdef void partial_rec(Partial* P, Py_ssize_t idx, Py_ssize_t size) nogil:
    cdef Py_ssize_t n = P.n, j
    cdef int64_t c
    if size + (n - idx) <= P.best:
        return
    if P.max_nodes >= 0 and P.nodes >= P.max_nodes:
        P.exhausted = True
        return
    P.nodes += 1
    if idx == n:
        P.best = size
        return
    for j in range(n):
        c = P.C[idx * n + j]
        if P.colfree[j] and P.colorfree[c]:
            P.colfree[j] = 0
            P.colorfree[c] = 0
            partial_rec(P, idx + 1, size + 1)
            P.colfree[j] = 1
            P.colorfree[c] = 1
            if P.exhausted or P.best == n:
                return
    partial_rec(P, idx + 1, size)


def max_partial(flat, Py_ssize_t n, Py_ssize_t s, int64_t max_nodes=-1):
    """See ``_kernels_py.max_partial``."""
    cdef const int64_t[::1] C = np.ascontiguousarray(flat, dtype=np.int64)
    cdef Partial P
    cdef Py_ssize_t i
    P.n = n; P.C = &C[0]; P.best = 0; P.nodes = 0; P.max_nodes = max_nodes; P.exhausted = False
    P.colfree = <char*>malloc(n)
    P.colorfree = <char*>malloc(s)
    try:
        if not P.colfree or not P.colorfree:
            raise MemoryError()
        for i in range(n):
            P.colfree[i] = 1
        for i in range(s):
            P.colorfree[i] = 1
        with nogil:
            partial_rec(&P, 0, 0)
        if P.exhausted:
            return 0, P.nodes, True
        return P.best, P.nodes, False
    finally:
        free(P.colfree); free(P.colorfree)
