"""Pure-numpy fallback for the hot kernels.

Mirrors :mod:`tabssl._kernels.numba_impl` call for call. Selected when the
``TABSSL_NUMBA`` env var disables the JIT backend or numba is unavailable.
"""

import numpy as np


def _lcs_len(a, b):
    # vectorized row update: new[j] = max(prev[j], prev[j-1]+eq, new[j-1]),
    # where the running max over j is a cumulative maximum
    prev = np.zeros(b.shape[0] + 1, dtype=np.int64)
    for ch in a:
        cand = np.maximum(prev[1:], prev[:-1] + (b == ch))
        prev[1:] = np.maximum.accumulate(cand)
    return int(prev[-1])


def lcs_sim_matrix(codes_a, lens_a, codes_b, lens_b):
    """Pairwise 2*LCS/(|a|+|b|) similarity between two batches of code strings."""
    na = codes_a.shape[0]
    nb = codes_b.shape[0]
    sims = np.zeros((na, nb))
    for i in range(na):
        la = int(lens_a[i])
        a = codes_a[i, :la]
        for j in range(nb):
            lb = int(lens_b[j])
            if la == 0 and lb == 0:
                sims[i, j] = 1.0
            elif la == 0 or lb == 0:
                sims[i, j] = 0.0
            else:
                sims[i, j] = 2.0 * _lcs_len(a, codes_b[j, :lb]) / (la + lb)
    return sims


def jacobi_eigenvalues(a, tol, max_sweeps):
    """Cyclic Jacobi diagonalization of a symmetric matrix (in place)."""
    n = a.shape[0]
    if n == 1:
        return a[0, 0:1].copy(), 0
    iu = np.triu_indices(n, k=1)
    for sweep in range(max_sweeps):
        if np.max(np.abs(a[iu])) < tol:
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
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    if np.max(np.abs(a[iu])) < tol:
        return np.diag(a).copy(), max_sweeps
    return np.diag(a).copy(), -1


def pairwise_sq_dists(x):
    """Full matrix of squared Euclidean distances between rows of ``x``."""
    sq = np.sum(x * x, axis=1)
    out = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(out, 0.0, out=out)
    out = 0.5 * (out + out.T)
    np.fill_diagonal(out, 0.0)
    return out


def dpp_greedy(kernel, k, eps):
    """Greedy max-determinant selection via incremental Cholesky."""
    n = kernel.shape[0]
    order = np.empty(k, dtype=np.int64)
    cis = np.zeros((k, n))
    di2 = np.diag(kernel).astype(float).copy()
    taken = np.zeros(n, dtype=bool)
    step = 0
    while step < k:
        masked = np.where(taken, -np.inf, di2)
        best = int(np.argmax(masked))
        if masked[best] < eps:
            remaining = np.flatnonzero(~taken)
            fill = k - step
            order[step:] = remaining[:fill]
            taken[remaining[:fill]] = True
            break
        order[step] = best
        taken[best] = True
        dj = np.sqrt(di2[best])
        eis = (kernel[best, :] - cis[:step, best] @ cis[:step, :]) / dj
        cis[step, :] = eis
        di2 -= eis * eis
        np.maximum(di2, 0.0, out=di2)
        step += 1
    return order


def grow_tree(x, resid, rows, feats, max_depth, min_leaf,
              feature, threshold, left, right, value, gain_out):
    """Fit one regression tree to residuals by exact greedy splits."""
    idx = rows.copy()
    n_nodes = 1
    stack = [(0, 0, idx.shape[0], 0)]
    while stack:
        node, lo, hi, depth = stack.pop()
        seg_idx = idx[lo:hi]
        seg = hi - lo
        res_seg = resid[seg_idx]
        total = float(np.cumsum(res_seg)[-1])
        mean = total / seg
        if depth >= max_depth or seg < 2 * min_leaf:
            feature[node] = -1
            value[node] = mean
            continue
        parent_score = total * total / seg
        best_gain = 0.0
        best_feat = -1
        best_thr = 0.0
        nl = np.arange(1, seg)
        nr = seg - nl
        for f in feats:
            vals = x[seg_idx, f]
            order = np.argsort(vals, kind="quicksort")
            sv = vals[order]
            csum = np.cumsum(res_seg[order])[:-1]
            ok = (sv[:-1] != sv[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
            if not ok.any():
                continue
            gains = np.where(
                ok,
                csum * csum / nl + (total - csum) ** 2 / nr - parent_score,
                -np.inf,
            )
            pos = int(np.argmax(gains))
            if gains[pos] > best_gain:
                best_gain = float(gains[pos])
                best_feat = int(f)
                best_thr = float(sv[pos])
        if best_feat < 0:
            feature[node] = -1
            value[node] = mean
            continue
        go_left = x[seg_idx, best_feat] <= best_thr
        idx[lo:hi] = np.concatenate([seg_idx[go_left], seg_idx[~go_left]])
        mid = lo + int(np.count_nonzero(go_left))
        lnode = n_nodes
        rnode = n_nodes + 1
        n_nodes += 2
        feature[node] = best_feat
        threshold[node] = best_thr
        left[node] = lnode
        right[node] = rnode
        gain_out[best_feat] += best_gain
        stack.append((lnode, lo, mid, depth + 1))
        stack.append((rnode, mid, hi, depth + 1))
    return n_nodes


def tree_predict(feature, threshold, left, right, value, x, out):
    """Route every row of ``x`` through one tree, adding leaf values to ``out``."""
    n = x.shape[0]
    node = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    while active.size:
        f = feature[node[active]]
        at_leaf = f < 0
        done = active[at_leaf]
        out[done] += value[node[done]]
        active = active[~at_leaf]
        if not active.size:
            break
        cur = node[active]
        goes_left = x[active, feature[cur]] <= threshold[cur]
        node[active] = np.where(goes_left, left[cur], right[cur])
