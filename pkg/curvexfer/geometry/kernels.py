"""
Compiled inner loops of curve evaluation, boundary integration and element
assembly. Every kernel takes contiguous float64 arrays and releases the GIL,
so the worker threads of a transfer run them concurrently.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def de_casteljau_points(control_points, s):
    """ control points (n+1, d) evaluated at every parameter of s (m,) -> (m, d) """
    count, dimension = control_points.shape
    result = np.empty((s.shape[0], dimension))
    work = np.empty((count, dimension))
    for i in range(s.shape[0]):
        u = s[i]
        v = 1.0 - u
        work[:, :] = control_points
        for level in range(count - 1, 0, -1):
            for k in range(level):
                for axis in range(dimension):
                    work[k, axis] = v * work[k, axis] + u * work[k + 1, axis]
        result[i, :] = work[0, :]
    return result


@njit(cache=True, nogil=True)
def green_edge_sum(weights, h, v, dx, dy):
    """
    sum over the Gauss nodes g of weights[g] (h[g] dy[g] - v[g] dx[g]) for
    antiderivative values h, v of shape (g, k), one column per integrand
    """
    result = np.zeros(h.shape[1])
    for g in range(h.shape[0]):
        for column in range(h.shape[1]):
            result[column] += weights[g] * (h[g, column] * dy[g] - v[g, column] * dx[g])
    return result


@njit(cache=True, nogil=True)
def weighted_gram(values, weights):
    """ symmetric (N, N) matrix of sum_q weights[q] values[q, i] values[q, j] """
    size = values.shape[1]
    result = np.zeros((size, size))
    for i in range(size):
        for j in range(i, size):
            total = 0.0
            for q in range(values.shape[0]):
                total += weights[q] * values[q, i] * values[q, j]
            result[i, j] = total
            result[j, i] = total
    return result
