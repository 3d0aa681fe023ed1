# cython: language_level=3
# cython: boundscheck=False, wraparound=False
"""Cython kernels for sparse exponent-map arithmetic.

Compiled twin of `affhecke._termops_py`; same five functions on dicts
mapping exponent tuples to int/Fraction coefficients.  Coefficients stay
Python objects (arbitrary precision is the whole point); the win comes
from C-level loops, tuple construction and dict access.
"""

BACKEND = "cython"


cdef inline tuple _tuple_add(tuple a, tuple b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    cdef list out = [None] * n
    for i in range(n):
        out[i] = a[i] + b[i]
    return tuple(out)


def tadd(dict a, dict b):
    """Return a + b as a new term map."""
    cdef dict out = dict(a)
    cdef object k, v, w
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            w = w + v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def tsub(dict a, dict b):
    """Return a - b as a new term map."""
    cdef dict out = dict(a)
    cdef object k, v, w
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = -v
        else:
            w = w - v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def tmul(dict a, dict b):
    """Return the convolution a * b as a new term map."""
    cdef dict out = {}
    cdef object ka, va, kb, vb, w
    cdef tuple k
    if len(a) > len(b):
        a, b = b, a
    for ka, va in a.items():
        for kb, vb in b.items():
            k = _tuple_add(<tuple>ka, <tuple>kb)
            w = out.get(k)
            if w is None:
                out[k] = va * vb
            else:
                w = w + va * vb
                if w:
                    out[k] = w
                else:
                    del out[k]
    return out


def tscale(dict a, coeff, shift):
    """Return coeff * x^shift * a as a new term map (coeff may be 0)."""
    cdef dict out = {}
    cdef object k, v
    if not coeff:
        return out
    if shift is None:
        for k, v in a.items():
            out[k] = coeff * v
    else:
        for k, v in a.items():
            out[_tuple_add(<tuple>k, <tuple>shift)] = coeff * v
    return out


def taxpy(dict acc, dict src, coeff, shift):
    """In-place acc += coeff * x^shift * src; src is unchanged."""
    cdef object k, v, w
    cdef tuple kk
    if not coeff:
        return
    if shift is None:
        for k, v in src.items():
            w = acc.get(k)
            if w is None:
                acc[k] = coeff * v
            else:
                w = w + coeff * v
                if w:
                    acc[k] = w
                else:
                    del acc[k]
    else:
        for k, v in src.items():
            kk = _tuple_add(<tuple>k, <tuple>shift)
            w = acc.get(kk)
            if w is None:
                acc[kk] = coeff * v
            else:
                w = w + coeff * v
                if w:
                    acc[kk] = w
                else:
                    del acc[kk]
