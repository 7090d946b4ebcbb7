# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Token-level edit distance over integer-coded sequences."""

from libc.stdlib cimport malloc, free


def edit_distance(const long long[::1] a, const long long[::1] b):
    """Unit-cost insert/delete/substitute distance between two id sequences."""
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0], i, j
    cdef long long *prev
    cdef long long *cur
    cdef long long *tmp
    cdef long long best, x
    if n < m:
        a, b = b, a
        n, m = m, n
    if m == 0:
        return n
    prev = <long long *> malloc((m + 1) * sizeof(long long))
    cur = <long long *> malloc((m + 1) * sizeof(long long))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    try:
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            cur[0] = i
            x = a[i - 1]
            for j in range(1, m + 1):
                best = prev[j - 1] + (0 if x == b[j - 1] else 1)
                if prev[j] + 1 < best:
                    best = prev[j] + 1
                if cur[j - 1] + 1 < best:
                    best = cur[j - 1] + 1
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        return prev[m]
    finally:
        free(prev)
        free(cur)
