# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_kernels_py`` for ``p > 0``."""

from cpython cimport array
import array

NAME = "cython"


cdef inline long long _mod(long long x, long long p) nogil:
    x %= p
    if x < 0:
        x += p
    return x


cdef long long _inv(long long a, long long p) nogil:
    cdef long long t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    return _mod(t, p)


cdef array.array _buf(object flat):
    return array.array('q', flat)


def rank_mod_p(object flat, Py_ssize_t nrows, Py_ssize_t ncols, long long p):
    if p <= 0:
        raise ValueError("compiled kernels need p > 0")
    cdef array.array buf = _buf(flat)
    cdef long long[::1] a = buf
    cdef Py_ssize_t rank = 0, col, r, c, piv
    cdef long long inv, f, tmp
    with nogil:
        for col in range(ncols):
            if rank == nrows:
                break
            piv = -1
            for r in range(rank, nrows):
                if a[r * ncols + col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for c in range(ncols):
                    tmp = a[piv * ncols + c]
                    a[piv * ncols + c] = a[rank * ncols + c]
                    a[rank * ncols + c] = tmp
            inv = _inv(a[rank * ncols + col], p)
            for c in range(col, ncols):
                a[rank * ncols + c] = a[rank * ncols + c] * inv % p
            for r in range(rank + 1, nrows):
                f = a[r * ncols + col]
                if f != 0:
                    for c in range(col, ncols):
                        a[r * ncols + c] = _mod(a[r * ncols + c] - f * a[rank * ncols + c], p)
            rank += 1
    return rank


def zero_sum_masks(object flat, Py_ssize_t n, Py_ssize_t length, long long p):
    if p <= 0:
        raise ValueError("compiled kernels need p > 0")
    if n > 62:
        raise ValueError("too many vectors for a 64-bit mask")
    cdef array.array vbuf = _buf(flat)
    cdef long long[::1] v = vbuf
    cdef array.array accbuf = array.array('q', [0] * max(length, 1))
    cdef long long[::1] acc = accbuf
    cdef unsigned long long step, mask = 0, last = (<unsigned long long>1) << n
    cdef Py_ssize_t bit, c, nonzero = 0
    cdef long long x, old, new
    cdef int sign
    found = []
    for step in range(1, last):
        bit = 0
        while not (step >> bit) & 1:
            bit += 1
        mask ^= (<unsigned long long>1) << bit
        sign = 1 if (mask >> bit) & 1 else -1
        for c in range(length):
            x = v[bit * length + c]
            if x == 0:
                continue
            old = acc[c]
            new = _mod(old + sign * x, p)
            acc[c] = new
            nonzero += (new != 0) - (old != 0)
        if nonzero == 0:
            found.append(mask)
    found.sort()
    return found


cdef Py_ssize_t _bsearch(long long[::1] codes, long long key, Py_ssize_t size) nogil:
    cdef Py_ssize_t lo = 0, hi = size - 1, mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if codes[mid] == key:
            return mid
        if codes[mid] < key:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


def find_multisets(object flat, Py_ssize_t count, Py_ssize_t length, object target,
                   Py_ssize_t r, long long p, object firsts=None, Py_ssize_t max_hits=-1):
    if p <= 0:
        raise ValueError("compiled kernels need p > 0")
    target = tuple(target)
    if r == 0:
        return [()] if not any(target) else []
    cdef array.array cbuf = _buf(flat)
    cdef long long[::1] cand = cbuf

    # encode every vector as a base-p integer when that fits in 62 bits
    cdef bint use_codes = True
    cdef long long pw_top = 1
    cdef Py_ssize_t c, i, k
    for c in range(length):
        if pw_top > (1LL << 62) // p:
            use_codes = False
            break
        pw_top *= p
    pw_list = [0] * length
    if use_codes:
        pw_list[0] = 1
        for c in range(1, length):
            pw_list[c] = pw_list[c - 1] * p
    cdef array.array pwbuf = array.array('q', pw_list or [0])
    cdef long long[::1] pw = pwbuf
    codes = []
    if use_codes:
        for i in range(count):
            codes.append(sum(flat[i * length + c] * pw_list[c] for c in range(length)))
    order = sorted(range(count), key=lambda j: codes[j]) if use_codes else list(range(count))
    cdef array.array scbuf = array.array('q', [codes[j] for j in order] if use_codes else [0])
    cdef long long[::1] sorted_codes = scbuf
    cdef array.array sibuf = array.array('q', order or [0])
    cdef long long[::1] sorted_idx = sibuf

    first_list = list(range(count)) if firsts is None else list(firsts)
    hits = []

    if r == 1:
        for k in range(count):
            if tuple(flat[k * length:(k + 1) * length]) == target:
                if k in set(first_list):
                    hits.append((k,))
                break
        return hits

    cdef Py_ssize_t depth = r - 1
    cdef array.array idxbuf = array.array('q', [0] * depth)
    cdef long long[::1] idx = idxbuf
    cdef array.array nxtbuf = array.array('q', [0] * depth)
    cdef long long[::1] nxt = nxtbuf
    cdef array.array psbuf = array.array('q', [0] * ((depth + 1) * length))
    cdef long long[::1] ps = psbuf
    cdef array.array fbuf = array.array('q', first_list or [0])
    cdef long long[::1] fl = fbuf
    cdef Py_ssize_t nfirst = len(first_list)
    cdef Py_ssize_t level = 0, pos0 = 0, cur, pos, base, nbase
    cdef long long key_c
    cdef bint match

    for c in range(length):
        ps[c] = target[c]
    while level >= 0:
        if level == 0:
            if pos0 >= nfirst:
                break
            cur = fl[pos0]
            pos0 += 1
        else:
            if nxt[level] >= count:
                level -= 1
                continue
            cur = nxt[level]
            nxt[level] += 1
        idx[level] = cur
        base = level * length
        nbase = base + length
        for c in range(length):
            ps[nbase + c] = _mod(ps[base + c] - cand[cur * length + c], p)
        if level + 1 == depth:
            k = -1
            if use_codes:
                key_c = 0
                for c in range(length):
                    key_c += ps[nbase + c] * pw[c]
                pos = _bsearch(sorted_codes, key_c, count)
                if pos >= 0:
                    k = sorted_idx[pos]
            else:
                for i in range(cur, count):
                    match = True
                    for c in range(length):
                        if cand[i * length + c] != ps[nbase + c]:
                            match = False
                            break
                    if match:
                        k = i
                        break
            if k >= cur:
                hits.append(tuple(idx[i] for i in range(depth)) + (k,))
                if 0 < max_hits <= len(hits):
                    return hits
        else:
            level += 1
            nxt[level] = cur
    return hits
