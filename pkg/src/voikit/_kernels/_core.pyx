# Compiled hot kernels: SGD training loop for the small MLP and Lloyd
# iterations for k-means. Contracts mirror numpy_backend exactly; see that
# module for the reference semantics.

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, INFINITY

cnp.import_array()


def train_mlp(double[:, ::1] x, double[::1] y,
              double[:, ::1] w_hidden, double[::1] b_hidden,
              double[::1] w_out, double[::1] b_out,
              long long[:, ::1] orders, int batch_size, double learning_rate):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t p = x.shape[1]
    cdef Py_ssize_t h = w_hidden.shape[0]
    cdef Py_ssize_t epochs = orders.shape[0]
    cdef Py_ssize_t epoch, start, stop, b, i, j, u, row
    cdef double lr = learning_rate
    cdef double pred, resid, g, dz, sq_sum, z, scale

    losses_arr = np.empty(epochs, dtype=np.float64)
    cdef double[::1] losses = losses_arr

    hidden_arr = np.empty((batch_size, h), dtype=np.float64)
    cdef double[:, ::1] hidden = hidden_arr
    gout_arr = np.empty(batch_size, dtype=np.float64)
    cdef double[::1] g_out = gout_arr
    gw1_arr = np.empty((h, p), dtype=np.float64)
    cdef double[:, ::1] grad_w_hidden = gw1_arr
    gb1_arr = np.empty(h, dtype=np.float64)
    cdef double[::1] grad_b_hidden = gb1_arr
    gw2_arr = np.empty(h, dtype=np.float64)
    cdef double[::1] grad_w_out = gw2_arr
    cdef double grad_b_out

    for epoch in range(epochs):
        sq_sum = 0.0
        start = 0
        while start < n:
            stop = start + batch_size
            if stop > n:
                stop = n
            scale = 2.0 / (stop - start)

            for u in range(h):
                grad_b_hidden[u] = 0.0
                grad_w_out[u] = 0.0
                for j in range(p):
                    grad_w_hidden[u, j] = 0.0
            grad_b_out = 0.0

            for b in range(stop - start):
                row = orders[epoch, start + b]
                pred = b_out[0]
                for u in range(h):
                    z = b_hidden[u]
                    for j in range(p):
                        z += w_hidden[u, j] * x[row, j]
                    z = 1.0 / (1.0 + exp(-z))
                    hidden[b, u] = z
                    pred += w_out[u] * z
                resid = pred - y[row]
                sq_sum += resid * resid
                g_out[b] = scale * resid

            for b in range(stop - start):
                row = orders[epoch, start + b]
                g = g_out[b]
                grad_b_out += g
                for u in range(h):
                    grad_w_out[u] += g * hidden[b, u]
                    dz = g * w_out[u] * hidden[b, u] * (1.0 - hidden[b, u])
                    grad_b_hidden[u] += dz
                    for j in range(p):
                        grad_w_hidden[u, j] += dz * x[row, j]

            for u in range(h):
                b_hidden[u] -= lr * grad_b_hidden[u]
                w_out[u] -= lr * grad_w_out[u]
                for j in range(p):
                    w_hidden[u, j] -= lr * grad_w_hidden[u, j]
            b_out[0] -= lr * grad_b_out

            start = stop
        losses[epoch] = sq_sum / n
    return losses_arr


def lloyd(double[:, ::1] data, double[:, ::1] centroids, int max_iter, double rel_tol):
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t d = data.shape[1]
    cdef Py_ssize_t k = centroids.shape[0]
    cdef Py_ssize_t i, j, c, it, best, far
    cdef double dist, diff, best_dist, obj, prev_obj, far_dist
    cdef int n_iter = 0
    cdef bint have_prev = False

    assign_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] assign = assign_arr
    own_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] own = own_arr
    counts_arr = np.empty(k, dtype=np.int64)
    cdef long long[::1] counts = counts_arr

    prev_obj = 0.0
    for it in range(max_iter):
        n_iter += 1
        obj = _assign_pass(data, centroids, assign, own)
        _fix_empty(assign, own, counts, k)

        for c in range(k):
            counts[c] = 0
            for j in range(d):
                centroids[c, j] = 0.0
        for i in range(n):
            c = assign[i]
            counts[c] += 1
            for j in range(d):
                centroids[c, j] += data[i, j]
        for c in range(k):
            for j in range(d):
                centroids[c, j] /= counts[c]

        if have_prev and prev_obj - obj <= rel_tol * prev_obj:
            break
        prev_obj = obj
        have_prev = True

    obj = _assign_pass(data, centroids, assign, own)
    return assign_arr, obj, n_iter


cdef double _assign_pass(double[:, ::1] data, double[:, ::1] centroids,
                         long long[::1] assign, double[::1] own):
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t d = data.shape[1]
    cdef Py_ssize_t k = centroids.shape[0]
    cdef Py_ssize_t i, j, c, best
    cdef double dist, diff, best_dist, total = 0.0
    for i in range(n):
        best = 0
        best_dist = INFINITY
        for c in range(k):
            dist = 0.0
            for j in range(d):
                diff = data[i, j] - centroids[c, j]
                dist += diff * diff
            if dist < best_dist:
                best_dist = dist
                best = c
        assign[i] = best
        own[i] = best_dist
        total += best_dist
    return total / n


cdef void _fix_empty(long long[::1] assign, double[::1] own,
                     long long[::1] counts, Py_ssize_t k):
    cdef Py_ssize_t n = assign.shape[0]
    cdef Py_ssize_t i, c, far
    cdef double far_dist
    for c in range(k):
        counts[c] = 0
    for i in range(n):
        counts[assign[i]] += 1
    for c in range(k):
        if counts[c] > 0:
            continue
        far = -1
        far_dist = -1.0
        for i in range(n):
            if counts[assign[i]] >= 2 and own[i] > far_dist:
                far_dist = own[i]
                far = i
        counts[assign[far]] -= 1
        counts[c] += 1
        assign[far] = c
        own[far] = -1.0
