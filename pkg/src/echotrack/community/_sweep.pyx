# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled local-moving sweep. Mirrors ``_sweep_py.sweep`` operation for operation."""
from libc.stdlib cimport calloc, free

import numpy as np


cdef inline long long _modal(const long long[:] h) noexcept nogil:
    cdef long long best = 0
    cdef Py_ssize_t l
    for l in range(h.shape[0]):
        if h[l] > best:
            best = h[l]
    return best


cdef inline long long _modal_diff(const long long[:] h, const long long[:] d) noexcept nogil:
    cdef long long best = 0, x
    cdef Py_ssize_t l
    for l in range(h.shape[0]):
        x = h[l] - d[l]
        if x > best:
            best = x
    return best


cdef inline long long _modal_sum(const long long[:] h, const long long[:] d) noexcept nogil:
    cdef long long best = 0, x
    cdef Py_ssize_t l
    for l in range(h.shape[0]):
        x = h[l] + d[l]
        if x > best:
            best = x
    return best


def sweep(const long long[:] order, const long long[:] indptr, const long long[:] indices,
          const double[:] weights, const double[:] degree, const long long[:, :] node_hist,
          const long long[:] node_size, long long[:] comm, double[:] comm_tot,
          long long[:, :] comm_hist, long long[:] comm_size, double[:] state,
          double c1, double c2, double alpha, double min_gain, long long n_total, bint weighted):
    cdef Py_ssize_t n = degree.shape[0]
    cdef Py_ssize_t n_labels = comm_hist.shape[1]
    cdef double beta = 1.0 - alpha
    cdef double psum = state[0], ncomm = state[1]
    cdef double *neigh_w = <double *> calloc(n if n > 0 else 1, sizeof(double))
    cdef char *seen = <char *> calloc(n if n > 0 else 1, sizeof(char))
    cdef long long *cand = <long long *> calloc(n if n > 0 else 1, sizeof(long long))
    if neigh_w == NULL or seen == NULL or cand == NULL:
        free(neigh_w); free(seen); free(cand)
        raise MemoryError()

    cdef Py_ssize_t oi, p, q, l, n_cand
    cdef long long i, a, b, c, best, si, sa, sa_rem, sb, mod_a, mod_a_rem, mod_b, mod_b_add
    cdef long long moves = 0
    cdef double ki, ki_a, tot_a, dq, dp, gain, best_gain, k_new, s_new, pa_old = 0.0, pa_new = 0.0

    with nogil:
        for oi in range(order.shape[0]):
            i = order[oi]
            a = comm[i]
            ki = degree[i]
            si = node_size[i]

            n_cand = 0
            for p in range(indptr[i], indptr[i + 1]):
                c = comm[indices[p]]
                if not seen[c]:
                    seen[c] = 1
                    cand[n_cand] = c
                    n_cand += 1
                neigh_w[c] += weights[p]

            ki_a = neigh_w[a]
            tot_a = comm_tot[a]
            sa = comm_size[a]
            mod_a = _modal(comm_hist[a])
            mod_a_rem = _modal_diff(comm_hist[a], node_hist[i])
            sa_rem = sa - si
            if not weighted:
                pa_old = <double> mod_a / <double> sa
                pa_new = (<double> mod_a_rem / <double> sa_rem) if sa_rem > 0 else 0.0

            best = -1
            best_gain = 0.0
            for q in range(n_cand):
                b = cand[q]
                if b == a:
                    continue
                dq = (neigh_w[b] - ki_a) * c1 - ki * (comm_tot[b] - tot_a + ki) * c2
                mod_b = _modal(comm_hist[b])
                mod_b_add = _modal_sum(comm_hist[b], node_hist[i])
                if weighted:
                    dp = <double> (mod_b_add - mod_b + mod_a_rem - mod_a) / <double> n_total
                else:
                    sb = comm_size[b]
                    k_new = ncomm - (1.0 if sa_rem == 0 else 0.0)
                    s_new = (psum - pa_old - <double> mod_b / <double> sb + pa_new
                             + <double> mod_b_add / <double> (sb + si))
                    dp = s_new / k_new - psum / ncomm
                gain = alpha * dp + beta * dq
                if best < 0 or gain > best_gain or (gain == best_gain and b < best):
                    best = b
                    best_gain = gain

            for q in range(n_cand):
                neigh_w[cand[q]] = 0.0
                seen[cand[q]] = 0

            if best >= 0 and best_gain > min_gain:
                b = best
                if not weighted:
                    sb = comm_size[b]
                    mod_b_add = _modal_sum(comm_hist[b], node_hist[i])
                    psum = (psum - pa_old - <double> _modal(comm_hist[b]) / <double> sb + pa_new
                            + <double> mod_b_add / <double> (sb + si))
                    if sa_rem == 0:
                        ncomm -= 1.0
                comm_tot[a] = tot_a - ki
                comm_tot[b] = comm_tot[b] + ki
                for l in range(n_labels):
                    comm_hist[a, l] -= node_hist[i, l]
                    comm_hist[b, l] += node_hist[i, l]
                comm_size[a] = sa_rem
                comm_size[b] += si
                comm[i] = b
                moves += 1

    free(neigh_w)
    free(seen)
    free(cand)
    state[0] = psum
    state[1] = ncomm
    return moves
