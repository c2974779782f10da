# cython: language_level=3
"""Compiled kernels: incremental enumeration, batch rank decoding, gates.

Same call signatures as ``_pykernels``; see that module for semantics.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fmod, cos, sin, M_PI
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int _next_perm(int64_t[::1] a, Py_ssize_t length) noexcept nogil:
    # returns the first changed index, or -1 after the last permutation
    cdef Py_ssize_t i = length - 2, k
    cdef int64_t t
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return -1
    k = length - 1
    while a[k] <= a[i]:
        k -= 1
    t = a[i]; a[i] = a[k]; a[k] = t
    k = length - 1
    cdef Py_ssize_t lo = i + 1
    while lo < k:
        t = a[lo]; a[lo] = a[k]; a[k] = t
        lo += 1
        k -= 1
    return <int>i


def enumerate_histogram(machines, durations, start, int64_t count, int64_t horizon):
    cdef int64_t[:, ::1] mc = np.ascontiguousarray(machines, dtype=np.int64)
    cdef int64_t[:, ::1] du = np.ascontiguousarray(durations, dtype=np.int64)
    cdef int64_t[::1] a = np.array(start, dtype=np.int64)
    cdef Py_ssize_t n = mc.shape[0], m = mc.shape[1], length = a.shape[0]
    hist_arr = np.zeros(horizon + 1, dtype=np.int64)
    cdef int64_t[::1] hist = hist_arr
    # row d holds the decoder state after placing positions 0..d-1
    cdef int64_t[:, ::1] nxt = np.zeros((length + 1, n), dtype=np.int64)
    cdef int64_t[:, ::1] jr = np.zeros((length + 1, n), dtype=np.int64)
    cdef int64_t[:, ::1] mr = np.zeros((length + 1, m), dtype=np.int64)
    cdef int64_t[::1] cmax = np.zeros(length + 1, dtype=np.int64)
    cdef Py_ssize_t d, x, j, k, machine
    cdef int64_t s, e, done = 0
    cdef int first = 0
    if count <= 0:
        return hist_arr
    with nogil:
        while True:
            for d in range(first, length):
                for x in range(n):
                    nxt[d + 1, x] = nxt[d, x]
                    jr[d + 1, x] = jr[d, x]
                for x in range(m):
                    mr[d + 1, x] = mr[d, x]
                j = a[d]
                k = nxt[d, j]
                machine = mc[j, k]
                s = jr[d, j]
                if mr[d, machine] > s:
                    s = mr[d, machine]
                e = s + du[j, k]
                jr[d + 1, j] = e
                mr[d + 1, machine] = e
                nxt[d + 1, j] = k + 1
                cmax[d + 1] = e if e > cmax[d] else cmax[d]
            hist[cmax[length]] += 1
            done += 1
            if done >= count:
                break
            first = _next_perm(a, length)
            if first < 0:
                break
    return hist_arr


def makespans_of_ranks(machines, durations, ranks, int64_t total):
    cdef int64_t[:, ::1] mc = np.ascontiguousarray(machines, dtype=np.int64)
    cdef int64_t[:, ::1] du = np.ascontiguousarray(durations, dtype=np.int64)
    cdef int64_t[::1] rk = np.ascontiguousarray(ranks, dtype=np.int64)
    cdef Py_ssize_t n = mc.shape[0], m = mc.shape[1], length = n * m
    out_arr = np.empty(rk.shape[0], dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t[::1] cnt = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] nxt = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] jr = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] mr = np.empty(m, dtype=np.int64)
    cdef Py_ssize_t idx, i, j, x, machine, k
    cdef int64_t r, block_total, block, rem, s, e, cm
    with nogil:
        for idx in range(rk.shape[0]):
            r = rk[idx]
            for x in range(n):
                cnt[x] = m
                nxt[x] = 0
                jr[x] = 0
            for x in range(m):
                mr[x] = 0
            block_total = total
            cm = 0
            for i in range(length):
                rem = length - i
                block = 0
                for j in range(n):
                    if cnt[j] == 0:
                        continue
                    block = block_total * cnt[j] // rem
                    if r < block:
                        break
                    r -= block
                block_total = block
                cnt[j] -= 1
                k = nxt[j]
                machine = mc[j, k]
                s = jr[j]
                if mr[machine] > s:
                    s = mr[machine]
                e = s + du[j, k]
                jr[j] = e
                mr[machine] = e
                nxt[j] = k + 1
                if e > cm:
                    cm = e
            out[idx] = cm
    return out_arr


def phase_layer(state, double gamma):
    # complex128 viewed as interleaved (re, im) doubles
    cdef double[::1] a = state.view(np.float64)
    cdef Py_ssize_t size = state.shape[0], stride = 1, x, base
    cdef double ang, fr, fi, re, im
    with nogil:
        while stride < size:
            ang = fmod(gamma * stride, 2.0 * M_PI)
            fr = cos(ang)
            fi = -sin(ang)
            base = 0
            while base < size:
                for x in range(2 * (base + stride), 2 * (base + 2 * stride), 2):
                    re = a[x]
                    im = a[x + 1]
                    a[x] = re * fr - im * fi
                    a[x + 1] = re * fi + im * fr
                base += 2 * stride
            stride *= 2
    return state


def cx_chain(state):
    cdef double[::1] a = state.view(np.float64)
    cdef Py_ssize_t size = state.shape[0], c = 1, base, x, y
    cdef double tr, ti
    with nogil:
        while 2 * c < size:
            # control bit c set, target bit 2c clear: x in [base + c, base + 2c)
            base = 0
            while base < size:
                for x in range(base + c, base + 2 * c):
                    y = x + 2 * c
                    tr = a[2 * x]
                    ti = a[2 * x + 1]
                    a[2 * x] = a[2 * y]
                    a[2 * x + 1] = a[2 * y + 1]
                    a[2 * y] = tr
                    a[2 * y + 1] = ti
                base += 4 * c
            c *= 2
    return state


def apply_all_qubits(state, u):
    cdef double[::1] a = state.view(np.float64)
    cdef double complex z00 = u[0][0], z01 = u[0][1], z10 = u[1][0], z11 = u[1][1]
    cdef double ar = z00.real, ai = z00.imag, br = z01.real, bi = z01.imag
    cdef double cr = z10.real, ci = z10.imag, dr = z11.real, di = z11.imag
    cdef Py_ssize_t size = state.shape[0], stride = 1, base, x, y
    cdef double xr, xi, yr, yi
    with nogil:
        while stride < size:
            base = 0
            while base < size:
                for x in range(base, base + stride):
                    y = x + stride
                    xr = a[2 * x]
                    xi = a[2 * x + 1]
                    yr = a[2 * y]
                    yi = a[2 * y + 1]
                    a[2 * x] = ar * xr - ai * xi + br * yr - bi * yi
                    a[2 * x + 1] = ar * xi + ai * xr + br * yi + bi * yr
                    a[2 * y] = cr * xr - ci * xi + dr * yr - di * yi
                    a[2 * y + 1] = cr * xi + ci * xr + dr * yi + di * yr
                base += 2 * stride
            stride *= 2
    return state
