# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython backend for the mirrored singular-value Dyson Brownian motion.

Semantics are identical to _dbm_np (same drift, reflection, and collision
rules); only the O(n^2)-per-step inner loops are compiled.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

COLLISION_SPACING = 1e-12
REFLECT_FLOOR = 1e-14

cdef double _COLLISION = 1e-12
cdef double _FLOOR = 1e-14


cdef void _drift_into(double[::1] lam, double[::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s, li
    for i in range(n):
        li = lam[i]
        s = 0.0
        for j in range(n):
            if j != i:
                s += 1.0 / (li - lam[j])
            s += 1.0 / (li + lam[j])
        out[i] = s / (2.0 * n)


def drift(lam):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arr = np.ascontiguousarray(lam, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(arr)
    _drift_into(arr, out, arr.shape[0])
    return out


def em_path(lam, double dt, incr):
    """Identical contract to _dbm_np.em_path."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cur = np.array(lam, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] steps = np.ascontiguousarray(incr, dtype=np.float64)
    cdef Py_ssize_t n = cur.shape[0]
    cdef Py_ssize_t nsteps = steps.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prev = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dr = np.empty(n, dtype=np.float64)
    cdef double root = 1.0 / sqrt(2.0 * n)
    cdef Py_ssize_t k, i
    cdef long reflections = 0
    cdef bint collided
    cdef double[::1] cv = cur
    cdef double[::1] pv = prev
    cdef double[::1] dv = dr
    cdef double[:, ::1] sv = steps
    for k in range(nsteps):
        for i in range(n):
            pv[i] = cv[i]
        _drift_into(cv, dv, n)
        for i in range(n):
            cv[i] = cv[i] + dv[i] * dt + sv[k, i] * root
            if cv[i] < _FLOOR:
                cv[i] = _FLOOR
                reflections += 1
        cur.sort()
        collided = False
        if n > 1:
            for i in range(n - 1):
                if cv[i + 1] - cv[i] < _COLLISION:
                    collided = True
                    break
        else:
            collided = cv[0] < _COLLISION
        if collided:
            return prev.copy(), k, reflections
    return cur, nsteps, reflections
