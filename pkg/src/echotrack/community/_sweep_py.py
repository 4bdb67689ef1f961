"""Pure-Python local-moving sweep; the reference the compiled kernel must match bit for bit.

All array arguments are modified in place. ``state`` holds
``[sum of community purities, number of non-empty communities]``; it is only
read and updated in unweighted-purity mode.
"""


def _modal(h):
    best = 0
    for x in h:
        if x > best:
            best = x
    return best


def sweep(order, indptr, indices, weights, degree, node_hist, node_size,
          comm, comm_tot, comm_hist, comm_size, state,
          c1, c2, alpha, min_gain, n_total, weighted):
    """Visit nodes in ``order`` once, moving each to its best neighbouring community.

    ``c1 = 1/m`` and ``c2 = 1/(2 m^2)`` with ``m`` the total edge weight. Returns the
    number of moves made.
    """
    order = order.tolist()
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    degree = degree.tolist()
    node_hist_l = node_hist.tolist()
    node_size_l = node_size.tolist()
    comm_l = comm.tolist()
    tot = comm_tot.tolist()
    chist = comm_hist.tolist()
    csize = comm_size.tolist()
    psum = float(state[0])
    ncomm = float(state[1])
    n_labels = len(chist[0]) if chist else 0
    beta = 1.0 - alpha

    n = len(degree)
    neigh_w = [0.0] * n
    seen = [False] * n
    moves = 0

    for i in order:
        a = comm_l[i]
        ki = degree[i]
        hi = node_hist_l[i]
        si = node_size_l[i]

        cand = []
        for p in range(indptr[i], indptr[i + 1]):
            c = comm_l[indices[p]]
            if not seen[c]:
                seen[c] = True
                cand.append(c)
            neigh_w[c] += weights[p]

        ki_a = neigh_w[a]
        tot_a = tot[a]
        ha = chist[a]
        sa = csize[a]
        mod_a = _modal(ha)
        ha_rem = [ha[l] - hi[l] for l in range(n_labels)]
        mod_a_rem = _modal(ha_rem)
        sa_rem = sa - si
        if not weighted:
            pa_old = mod_a / sa
            pa_new = mod_a_rem / sa_rem if sa_rem > 0 else 0.0

        best = -1
        best_gain = 0.0
        for b in cand:
            if b == a:
                continue
            dq = (neigh_w[b] - ki_a) * c1 - ki * (tot[b] - tot_a + ki) * c2
            hb = chist[b]
            mod_b = _modal(hb)
            mod_b_add = _modal([hb[l] + hi[l] for l in range(n_labels)])
            if weighted:
                dp = (mod_b_add - mod_b + mod_a_rem - mod_a) / n_total
            else:
                sb = csize[b]
                k_new = ncomm - (1.0 if sa_rem == 0 else 0.0)
                s_new = psum - pa_old - mod_b / sb + pa_new + mod_b_add / (sb + si)
                dp = s_new / k_new - psum / ncomm
            gain = alpha * dp + beta * dq
            if best < 0 or gain > best_gain or (gain == best_gain and b < best):
                best = b
                best_gain = gain

        for c in cand:
            neigh_w[c] = 0.0
            seen[c] = False

        if best >= 0 and best_gain > min_gain:
            b = best
            hb = chist[b]
            if not weighted:
                sb = csize[b]
                mod_b_add = _modal([hb[l] + hi[l] for l in range(n_labels)])
                psum = psum - pa_old - _modal(hb) / sb + pa_new + mod_b_add / (sb + si)
                if sa_rem == 0:
                    ncomm -= 1.0
            tot[a] = tot_a - ki
            tot[b] = tot[b] + ki
            for l in range(n_labels):
                ha[l] -= hi[l]
                hb[l] += hi[l]
            csize[a] = sa_rem
            csize[b] += si
            comm_l[i] = b
            moves += 1

    comm[:] = comm_l
    comm_tot[:] = tot
    comm_hist[:] = chist
    comm_size[:] = csize
    state[0] = psum
    state[1] = ncomm
    return moves
