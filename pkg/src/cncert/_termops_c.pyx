# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term-multiplication kernel.

Same contract as _termops_py.mul_terms: coefficient arithmetic stays in exact
Python rationals, but the pair loop, packed-exponent combination and dict
bookkeeping run in C.  Only usable when the packed exponents of the variable
space fit in 63 bits (termops.py checks before dispatching here).
"""

from libc.stdlib cimport free, malloc

KERNEL_NAME = "compiled"


def mul_terms(items_a, items_b, sig, cache):
    total_bits, nvars, shifts, masks, mods, caps, rows, degree = sig
    cdef int c_nvars = nvars
    cdef int d = degree
    if c_nvars > 64:
        raise ValueError("too many variables for the compiled kernel")
    cdef unsigned long long c_shifts[64]
    cdef unsigned long long c_masks[64]
    cdef unsigned long long c_mods[64]
    cdef unsigned long long c_caps[64]
    cdef int i, j, s, k
    for i in range(c_nvars):
        c_shifts[i] = shifts[i]
        c_masks[i] = masks[i]
        c_mods[i] = mods[i]
        c_caps[i] = caps[i]

    cdef Py_ssize_t na = len(items_a)
    cdef Py_ssize_t nb = len(items_b)
    out = {}
    if na == 0 or nb == 0:
        return out

    cdef unsigned long long* ea = <unsigned long long*> malloc(na * sizeof(unsigned long long))
    cdef unsigned long long* eb = <unsigned long long*> malloc(nb * sizeof(unsigned long long))
    if ea == NULL or eb == NULL:
        if ea != NULL:
            free(ea)
        if eb != NULL:
            free(eb)
        raise MemoryError()

    ca_list = [None] * na
    cb_list = [None] * nb
    cdef Py_ssize_t ia, ib
    cdef unsigned long long e, v, m, a_exp
    try:
        ia = 0
        for item in items_a:
            ea[ia] = item[0]
            ca_list[ia] = item[1]
            ia += 1
        ib = 0
        for item in items_b:
            eb[ib] = item[0]
            cb_list[ib] = item[1]
            ib += 1

        for ia in range(na):
            a_exp = ea[ia]
            ca = ca_list[ia]
            for ib in range(nb):
                e = a_exp + eb[ib]
                for i in range(c_nvars):
                    v = (e >> c_shifts[i]) & c_masks[i]
                    m = c_mods[i]
                    if m:
                        if v >= m:
                            e -= m << c_shifts[i]
                    elif v > c_caps[i]:
                        raise OverflowError(
                            f"exponent {v} exceeds the storable range {c_caps[i]} of variable {i}"
                        )
                cb = cb_list[ib]
                key = e
                acc = out.get(key)
                if d == 1:
                    p = ca[0] * cb[0]
                    if acc is None:
                        out[key] = [p]
                    else:
                        acc[0] = acc[0] + p
                else:
                    if acc is None:
                        acc = [0] * d
                        out[key] = acc
                    for i in range(d):
                        cai = ca[i]
                        if not cai:
                            continue
                        for j in range(d):
                            cbj = cb[j]
                            if not cbj:
                                continue
                            p = cai * cbj
                            s = i + j
                            if s < d:
                                acc[s] = acc[s] + p
                            else:
                                for pair in rows[s]:
                                    k = pair[0]
                                    c = pair[1]
                                    if c == 1:
                                        acc[k] = acc[k] + p
                                    elif c == -1:
                                        acc[k] = acc[k] - p
                                    else:
                                        acc[k] = acc[k] + c * p
    finally:
        free(ea)
        free(eb)

    return {key: vec for key, vec in out.items() if any(vec)}
