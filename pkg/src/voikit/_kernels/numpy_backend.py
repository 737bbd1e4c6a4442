"""Pure-numpy implementations of the hot kernels.

These are the reference semantics; the Cython module `_core` implements the
same contracts with explicit loops. Results agree to floating-point noise
(summation order differs), which the kernel tests bound explicitly.
"""

import numpy as np


def train_mlp(x, y, w_hidden, b_hidden, w_out, b_out, orders, batch_size, learning_rate):
    """Mini-batch SGD on a 1-hidden-layer logistic MLP with linear output.

    Parameters are updated in place (`b_out` is a 1-element array). Loss per
    batch is mean((pred - y)^2); each batch gradient is applied immediately.
    `orders` is an (epochs, n) int64 array giving the row visiting order per
    epoch. Returns per-epoch mean squared error accumulated over the batches
    as they were visited (pre-update within each batch).
    """
    n = x.shape[0]
    epochs = orders.shape[0]
    lr = float(learning_rate)
    losses = np.empty(epochs, dtype=np.float64)
    for epoch in range(epochs):
        order = orders[epoch]
        sq_sum = 0.0
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            xb = x[idx]
            yb = y[idx]
            hidden = 1.0 / (1.0 + np.exp(-(xb @ w_hidden.T + b_hidden)))
            pred = hidden @ w_out + b_out[0]
            resid = pred - yb
            sq_sum += float(resid @ resid)

            scale = 2.0 / len(idx)
            g_out = scale * resid
            grad_w_out = hidden.T @ g_out
            grad_b_out = g_out.sum()
            d_hidden = np.outer(g_out, w_out) * hidden * (1.0 - hidden)
            grad_w_hidden = d_hidden.T @ xb
            grad_b_hidden = d_hidden.sum(axis=0)

            w_hidden -= lr * grad_w_hidden
            b_hidden -= lr * grad_b_hidden
            w_out -= lr * grad_w_out
            b_out[0] -= lr * grad_b_out
        losses[epoch] = sq_sum / n
    return losses


def lloyd(data, centroids, max_iter, rel_tol):
    """Lloyd iterations for k-means with deterministic tie-breaking.

    `centroids` is updated in place. Empty clusters are reseeded with the
    point farthest from its assigned centroid (lowest index on ties; sole
    members of a cluster are never stolen, so no cluster is emptied by the
    fix). Iterates until the mean squared distance improves by a relative
    factor below `rel_tol` or `max_iter` is hit. Returns (assignments,
    objective, n_iter) with the objective recomputed against the centroids
    actually returned.
    """
    k = centroids.shape[0]
    prev_obj = None
    n_iter = 0
    for _ in range(max_iter):
        n_iter += 1
        assign, d2 = _assign(data, centroids)
        obj = float(d2.min(axis=1).mean())
        assign = _fix_empty(assign, d2, k)
        for c in range(k):
            centroids[c] = data[assign == c].mean(axis=0)
        if prev_obj is not None and prev_obj - obj <= rel_tol * prev_obj:
            break
        prev_obj = obj
    assign, d2 = _assign(data, centroids)
    objective = float(d2.min(axis=1).mean())
    return assign, objective, n_iter


def _assign(data, centroids):
    diff = data[:, None, :] - centroids[None, :, :]
    d2 = np.einsum("nkd,nkd->nk", diff, diff)
    return d2.argmin(axis=1), d2


def _fix_empty(assign, d2, k):
    counts = np.bincount(assign, minlength=k)
    empties = np.flatnonzero(counts == 0)
    if empties.size == 0:
        return assign
    own = d2[np.arange(len(assign)), assign].copy()
    for c in empties:
        eligible = counts[assign] >= 2
        far = int(np.where(eligible, own, -1.0).argmax())
        counts[assign[far]] -= 1
        counts[c] += 1
        assign[far] = c
        own[far] = -1.0  # cannot be stolen twice
    return assign
