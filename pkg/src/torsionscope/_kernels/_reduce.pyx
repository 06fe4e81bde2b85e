# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled column reduction over Z/p (p < 2**31)."""

from libc.stdint cimport int64_t
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort
from libcpp.pair cimport pair

import numpy as np


cdef inline int64_t _powmod(int64_t a, int64_t e, int64_t p) nogil:
    cdef int64_t r = 1
    a %= p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


def reduce_columns(const int64_t[::1] indptr, const int64_t[::1] indices,
                   const int64_t[::1] data, Py_ssize_t n_rows, int64_t p,
                   bint return_columns=False):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef vector[vector[int64_t]] rows
    cdef vector[vector[int64_t]] vals
    cdef vector[int64_t] pivot_col
    cdef vector[pair[int64_t, int64_t]] tmp
    cdef vector[int64_t] cr, cv, nr, nv
    cdef Py_ssize_t j, k, a, b, m
    cdef int64_t l, piv, f, inv, v, r
    rows.resize(n)
    vals.resize(n)
    pivot_col.assign(n_rows, -1)
    low_arr = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] low = low_arr
    out = [] if return_columns else None

    for j in range(n):
        tmp.clear()
        for k in range(indptr[j], indptr[j + 1]):
            v = data[k] % p
            if v < 0:
                v += p
            tmp.push_back(pair[int64_t, int64_t](indices[k], v))
        sort(tmp.begin(), tmp.end())
        cr.clear()
        cv.clear()
        for k in range(<Py_ssize_t>tmp.size()):
            if cr.size() and cr.back() == tmp[k].first:
                cv[cv.size() - 1] = (cv.back() + tmp[k].second) % p
            else:
                cr.push_back(tmp[k].first)
                cv.push_back(tmp[k].second)
        m = 0
        for k in range(<Py_ssize_t>cr.size()):
            if cv[k] != 0:
                cr[m] = cr[k]
                cv[m] = cv[k]
                m += 1
        cr.resize(m)
        cv.resize(m)

        while cr.size():
            l = cr.back()
            piv = pivot_col[l]
            if piv < 0:
                inv = _powmod(cv.back(), p - 2, p)
                if inv != 1:
                    for k in range(<Py_ssize_t>cv.size()):
                        cv[k] = cv[k] * inv % p
                pivot_col[l] = j
                low[j] = l
                rows[j] = cr
                vals[j] = cv
                break
            f = cv.back()
            # col -= f * stored[piv]  (merge of two sorted sparse vectors)
            nr.clear()
            nv.clear()
            a = 0
            b = 0
            while a < <Py_ssize_t>cr.size() or b < <Py_ssize_t>rows[piv].size():
                if b >= <Py_ssize_t>rows[piv].size() or (a < <Py_ssize_t>cr.size() and cr[a] < rows[piv][b]):
                    nr.push_back(cr[a])
                    nv.push_back(cv[a])
                    a += 1
                elif a >= <Py_ssize_t>cr.size() or rows[piv][b] < cr[a]:
                    v = (p - f * vals[piv][b] % p) % p
                    if v:
                        nr.push_back(rows[piv][b])
                        nv.push_back(v)
                    b += 1
                else:
                    v = (cv[a] - f * vals[piv][b] % p) % p
                    if v < 0:
                        v += p
                    if v:
                        nr.push_back(cr[a])
                        nv.push_back(v)
                    a += 1
                    b += 1
            cr.swap(nr)
            cv.swap(nv)
        if return_columns:
            out.append({cr[k]: cv[k] for k in range(<Py_ssize_t>cr.size())})

    if return_columns:
        return low_arr.tolist(), out
    return low_arr.tolist()
