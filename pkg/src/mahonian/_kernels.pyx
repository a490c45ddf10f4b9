# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels: Fisher-Yates shuffles and (inv, maj) of words."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline long long _inv(const cnp.int64_t* w, Py_ssize_t n, long long* tree, Py_ssize_t d) noexcept nogil:
    # Fenwick tree over letter values 1..d
    cdef Py_ssize_t k, t
    cdef long long inv = 0, le
    for k in range(d + 1):
        tree[k] = 0
    for t in range(n):
        k = w[t]
        le = 0
        while k > 0:
            le += tree[k]
            k -= k & -k
        inv += t - le
        k = w[t]
        while k <= d:
            tree[k] += 1
            k += k & -k
    return inv


cdef inline long long _maj(const cnp.int64_t* w, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t t
    cdef long long maj = 0
    for t in range(n - 1):
        if w[t] > w[t + 1]:
            maj += t + 1
    return maj


def inversion_number(cnp.int64_t[::1] word, Py_ssize_t d):
    cdef Py_ssize_t n = word.shape[0]
    if n == 0:
        return 0
    cdef long long* tree = <long long*> malloc((d + 1) * sizeof(long long))
    if tree == NULL:
        raise MemoryError()
    cdef long long out
    with nogil:
        out = _inv(&word[0], n, tree, d)
    free(tree)
    return out


def major_index(cnp.int64_t[::1] word):
    cdef Py_ssize_t n = word.shape[0]
    if n == 0:
        return 0
    return _maj(&word[0], n)


def shuffle(cnp.int64_t[::1] base, cnp.int64_t[::1] swaps):
    """Fisher-Yates: for k = n-1..1 swap positions k and swaps[n-1-k]."""
    cdef Py_ssize_t n = base.shape[0], k
    out = np.array(base, dtype=np.int64)
    cdef cnp.int64_t[::1] w = out
    cdef cnp.int64_t tmp, j
    with nogil:
        for k in range(n - 1, 0, -1):
            j = swaps[n - 1 - k]
            tmp = w[k]
            w[k] = w[j]
            w[j] = tmp
    return out


def sample_stats(cnp.int64_t[::1] base, cnp.int64_t[:, ::1] swaps, Py_ssize_t d):
    """Shuffle ``base`` once per row of ``swaps``; return (inv, maj) arrays."""
    cdef Py_ssize_t batch = swaps.shape[0], n = base.shape[0], row, k, t
    inv_out = np.zeros(batch, dtype=np.int64)
    maj_out = np.zeros(batch, dtype=np.int64)
    cdef cnp.int64_t[::1] inv_v = inv_out, maj_v = maj_out
    if n == 0:
        return inv_out, maj_out
    cdef cnp.int64_t* w = <cnp.int64_t*> malloc(n * sizeof(cnp.int64_t))
    cdef long long* tree = <long long*> malloc((d + 1) * sizeof(long long))
    cdef long long tmp, j
    if w == NULL or tree == NULL:
        free(w)
        free(tree)
        raise MemoryError()
    with nogil:
        for row in range(batch):
            for t in range(n):
                w[t] = base[t]
            for k in range(n - 1, 0, -1):
                j = swaps[row, n - 1 - k]
                tmp = w[k]
                w[k] = w[j]
                w[j] = tmp
            inv_v[row] = _inv(w, n, tree, d)
            maj_v[row] = _maj(w, n)
    free(w)
    free(tree)
    return inv_out, maj_out
