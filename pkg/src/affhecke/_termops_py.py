"""Pure-Python kernels for sparse exponent-map arithmetic.

A "term map" is a dict mapping exponent tuples (fixed arity, possibly
negative entries) to nonzero numeric coefficients (int or Fraction).
These five functions are the inner loop of every polynomial and algebra
operation in the package; `affhecke._termops_c` is the compiled twin
with the same signatures.
"""

BACKEND = "python"


def tadd(a, b):
    """Return a + b as a new term map."""
    out = dict(a)
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


def tsub(a, b):
    """Return a - b as a new term map."""
    out = dict(a)
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


def tmul(a, b):
    """Return the convolution a * b as a new term map."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
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


def tscale(a, coeff, shift):
    """Return coeff * x^shift * a as a new term map (coeff may be 0)."""
    if not coeff:
        return {}
    if shift is None:
        return {k: coeff * v for k, v in a.items()}
    return {
        tuple(x + y for x, y in zip(k, shift)): coeff * v
        for k, v in a.items()
    }


def taxpy(acc, src, coeff, shift):
    """In-place acc += coeff * x^shift * src; src is unchanged."""
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
            k = tuple(x + y for x, y in zip(k, shift))
            w = acc.get(k)
            if w is None:
                acc[k] = coeff * v
            else:
                w = w + coeff * v
                if w:
                    acc[k] = w
                else:
                    del acc[k]
