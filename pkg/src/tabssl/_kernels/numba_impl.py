"""Numba-compiled hot loops: LCS similarity, Jacobi sweeps, DPP greedy, tree growing.

Same call signatures as :mod:`tabssl._kernels.numpy_impl`; the active backend
is picked in the package ``__init__``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def lcs_sim_matrix(codes_a, lens_a, codes_b, lens_b):
    """Pairwise 2*LCS/(|a|+|b|) similarity between two batches of code strings.

    ``codes_a`` is (na, L) int32 with row i holding the first ``lens_a[i]``
    character codes. Two empty strings score 1.0.
    """
    na = codes_a.shape[0]
    nb = codes_b.shape[0]
    max_lb = codes_b.shape[1]
    sims = np.zeros((na, nb))
    prev = np.zeros(max_lb + 1, dtype=np.int64)
    curr = np.zeros(max_lb + 1, dtype=np.int64)
    for i in range(na):
        la = lens_a[i]
        for j in range(nb):
            lb = lens_b[j]
            if la == 0 and lb == 0:
                sims[i, j] = 1.0
                continue
            if la == 0 or lb == 0:
                sims[i, j] = 0.0
                continue
            for q in range(lb + 1):
                prev[q] = 0
            for p in range(1, la + 1):
                curr[0] = 0
                cap = codes_a[i, p - 1]
                for q in range(1, lb + 1):
                    if cap == codes_b[j, q - 1]:
                        v = prev[q - 1] + 1
                    else:
                        v = prev[q]
                        if curr[q - 1] > v:
                            v = curr[q - 1]
                    curr[q] = v
                for q in range(lb + 1):
                    prev[q] = curr[q]
            sims[i, j] = 2.0 * prev[lb] / (la + lb)
    return sims


@njit(cache=True)
def jacobi_eigenvalues(a, tol, max_sweeps):
    """Cyclic Jacobi diagonalization of a symmetric matrix (in place).

    Returns (diagonal, sweeps_used); sweeps_used is -1 when the off-diagonal
    mass did not fall below ``tol`` within ``max_sweeps``.
    """
    n = a.shape[0]
    if n == 1:
        return a[0, 0:1].copy(), 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                v = abs(a[p, q])
                if v > off:
                    off = v
        if off < tol:
            return np.diag(a).copy(), sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < abs(diff) * 1e-36:
                    t = apq / diff
                else:
                    phi = diff / (2.0 * apq)
                    t = 1.0 / (abs(phi) + np.sqrt(phi * phi + 1.0))
                    if phi < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                temp = a[p, q]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] -= t * temp
                a[q, q] += t * temp
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = aip - s * (aiq + tau * aip)
                    a[i, q] = aiq + s * (aip - tau * aiq)
                    a[p, i] = a[i, p]
                    a[q, i] = a[i, q]
    off = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            v = abs(a[p, q])
            if v > off:
                off = v
    if off < tol:
        return np.diag(a).copy(), max_sweeps
    return np.diag(a).copy(), -1


@njit(cache=True)
def pairwise_sq_dists(x):
    """Full matrix of squared Euclidean distances between rows of ``x``."""
    n, d = x.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(d):
                diff = x[i, k] - x[j, k]
                acc += diff * diff
            out[i, j] = acc
            out[j, i] = acc
    return out


@njit(cache=True)
def dpp_greedy(kernel, k, eps):
    """Greedy max-determinant selection via incremental Cholesky.

    Picks the item with the largest conditional variance each round
    (ties to the smallest index). When every remaining extension is
    numerically singular (< eps) the remaining slots are filled with the
    lowest unselected indices, which keeps determinant ties deterministic.
    """
    n = kernel.shape[0]
    order = np.empty(k, dtype=np.int64)
    cis = np.zeros((k, n))
    di2 = np.empty(n)
    taken = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        di2[i] = kernel[i, i]
    for step in range(k):
        best = -1
        best_v = -1.0
        for i in range(n):
            if taken[i] == 0 and di2[i] > best_v:
                best_v = di2[i]
                best = i
        if best < 0 or best_v < eps:
            fill = step
            for i in range(n):
                if fill >= k:
                    break
                if taken[i] == 0:
                    order[fill] = i
                    taken[i] = 1
                    fill += 1
            break
        order[step] = best
        taken[best] = 1
        dj = np.sqrt(best_v)
        for i in range(n):
            acc = kernel[best, i]
            for t in range(step):
                acc -= cis[t, best] * cis[t, i]
            e = acc / dj
            cis[step, i] = e
            di2[i] -= e * e
            if di2[i] < 0.0:
                di2[i] = 0.0
    return order


@njit(cache=True)
def grow_tree(x, resid, rows, feats, max_depth, min_leaf,
              feature, threshold, left, right, value, gain_out):
    """Fit one regression tree to residuals by exact greedy splits.

    Splits scan sorted unique values of each candidate feature; gain ties
    keep the lowest threshold and then the lowest feature index. Leaf value
    is the mean residual of the rows that reach it. Per-feature split gains
    are accumulated into ``gain_out``. Returns the number of nodes written.
    """
    m = rows.shape[0]
    idx = rows.copy()
    buf = np.empty(m, dtype=np.int64)
    vals = np.empty(m)
    res = np.empty(m)
    # stack entries: node, lo, hi, depth
    stack = np.empty((2 * m + 2, 4), dtype=np.int64)
    n_nodes = 1
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = m
    stack[0, 3] = 0
    top = 1
    while top > 0:
        top -= 1
        node = stack[top, 0]
        lo = stack[top, 1]
        hi = stack[top, 2]
        depth = stack[top, 3]
        seg = hi - lo
        total = 0.0
        for i in range(lo, hi):
            total += resid[idx[i]]
        mean = total / seg
        if depth >= max_depth or seg < 2 * min_leaf:
            feature[node] = -1
            value[node] = mean
            continue
        parent_score = total * total / seg
        best_gain = 0.0
        best_feat = -1
        best_thr = 0.0
        for fi in range(feats.shape[0]):
            f = feats[fi]
            for i in range(seg):
                vals[i] = x[idx[lo + i], f]
            order = np.argsort(vals[:seg])
            for i in range(seg):
                res[i] = resid[idx[lo + order[i]]]
            sum_left = 0.0
            for i in range(seg - 1):
                sum_left += res[i]
                if vals[order[i]] == vals[order[i + 1]]:
                    continue
                nl = i + 1
                nr = seg - nl
                if nl < min_leaf or nr < min_leaf:
                    continue
                sum_right = total - sum_left
                gain = (sum_left * sum_left / nl
                        + sum_right * sum_right / nr
                        - parent_score)
                if gain > best_gain:
                    best_gain = gain
                    best_feat = f
                    best_thr = vals[order[i]]
        if best_feat < 0:
            feature[node] = -1
            value[node] = mean
            continue
        # stable partition: <= threshold first, preserving input order
        w = 0
        for i in range(lo, hi):
            if x[idx[i], best_feat] <= best_thr:
                buf[w] = idx[i]
                w += 1
        mid = lo + w
        for i in range(lo, hi):
            if x[idx[i], best_feat] > best_thr:
                buf[w] = idx[i]
                w += 1
        for i in range(seg):
            idx[lo + i] = buf[i]
        lnode = n_nodes
        rnode = n_nodes + 1
        n_nodes += 2
        feature[node] = best_feat
        threshold[node] = best_thr
        left[node] = lnode
        right[node] = rnode
        gain_out[best_feat] += best_gain
        stack[top, 0] = lnode
        stack[top, 1] = lo
        stack[top, 2] = mid
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = rnode
        stack[top, 1] = mid
        stack[top, 2] = hi
        stack[top, 3] = depth + 1
        top += 1
    return n_nodes


@njit(cache=True)
def tree_predict(feature, threshold, left, right, value, x, out):
    """Route every row of ``x`` through one tree, adding leaf values to ``out``."""
    n = x.shape[0]
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if x[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] += value[node]
