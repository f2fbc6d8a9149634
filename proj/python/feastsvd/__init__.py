"""Contour-integral partial SVD / GSVD of sparse matrices."""

from __future__ import annotations

import numpy as np

from . import _core
from ._core import FeastError

__all__ = ["solve", "estimate", "dense_reference", "read_matrix_market", "derivative_b", "FeastError"]

VARIANTS = ("augmented", "plus", "plus-rr", "sum")


def _coo(m):
    if m is None:
        return None
    if hasattr(m, "tocoo"):
        c = m.tocoo()
        return (c.shape[0], c.shape[1], c.row.astype(np.int32).tolist(), c.col.astype(np.int32).tolist(),
                c.data.astype(np.complex128).tolist())
    d = np.asarray(m)
    if d.ndim != 2:
        raise ValueError("matrix must be 2-D")
    r, c = np.nonzero(d)
    return d.shape[0], d.shape[1], r.tolist(), c.tolist(), d[r, c].astype(np.complex128).tolist()


def _is_real(*ms):
    for m in ms:
        if m is None:
            continue
        data = m.data if hasattr(m, "tocoo") else np.asarray(m)
        if np.iscomplexobj(data):
            return False
    return True


def _real(out, keys):
    for k in keys:
        out[k] = np.ascontiguousarray(out[k].real)


def solve(a, b=None, interval=None, *, nodes=12, aspect=5.0, subspace=None, tol=None, max_iterations=30,
          variant="augmented", soft_locking=True, samples=30, seed=0, guess=None):
    """Singular triplets of A (or of the pair (A, B)) with sigma inside `interval`.

    Returns a dict with sigma (descending), u, w, v, x, c, s, per-triplet
    residuals, converged flags, the stopping reason and per-iteration history.
    """
    if interval is None:
        raise ValueError("interval=(alpha, beta) is required")
    alpha, beta = map(float, interval)
    g = None
    if guess is not None:
        g = (np.asarray(guess[0], dtype=np.complex128), np.asarray(guess[1], dtype=np.complex128))
    out = _core.solve(_coo(a), _coo(b), alpha, beta, nodes, aspect, subspace, tol, max_iterations, variant,
                      soft_locking, samples, seed, g)
    if _is_real(a, b):
        _real(out, ("u", "w", "v", "x"))
    return out


def estimate(a, b=None, interval=None, *, nodes=12, aspect=5.0, samples=30, seed=0):
    """Stochastic estimate of the number of sigma inside `interval`."""
    if interval is None:
        raise ValueError("interval=(alpha, beta) is required")
    alpha, beta = map(float, interval)
    return _core.estimate(_coo(a), _coo(b), alpha, beta, nodes, aspect, samples, seed)


def dense_reference(a, b=None):
    """Dense GSVD of (A, B), or SVD of A; sigma ascending."""
    a = np.asarray(a.todense() if hasattr(a, "todense") else a, dtype=np.complex128)
    if b is not None:
        b = np.asarray(b.todense() if hasattr(b, "todense") else b, dtype=np.complex128)
    return _core.dense_reference(a, b)


def read_matrix_market(path):
    """Matrix Market file as a scipy.sparse csr matrix."""
    import scipy.sparse as sp

    rows, cols, r, c, v = _core.read_matrix_market(str(path))
    v = np.asarray(v, dtype=np.complex128)
    if not np.any(v.imag):
        v = v.real
    return sp.csr_matrix((v, (r, c)), shape=(rows, cols))


def derivative_b(n):
    """(n+1) x n forward-difference matrix."""
    return np.ascontiguousarray(_core.derivative_b(n).real)
