"""NumPy implementation of the Galerkin triad sum (fallback backend)."""
from __future__ import annotations

import numpy as np


def nonlinear_term(K, knorm2, U, out, i1, i2):
    """``-i P_n sum_{pairs} [(u1.n2) u2 + (u2.n1) u1]`` for every ``n`` in the truncation.

    ``(i1[t], i2[t])`` is the t-th unordered pair and ``out[t]`` the index of
    its sum. Accumulation order is fixed by the triad order.
    """
    N = U.shape[0]
    a, b = U[i1], U[i2]
    d12 = np.einsum("ij,ij->i", a, K[i2])
    d21 = np.einsum("ij,ij->i", b, K[i1])
    raw = d12[:, None] * b + d21[:, None] * a
    acc = np.empty((N, 3), complex)
    for c in range(3):
        acc[:, c] = (np.bincount(out, weights=raw[:, c].real, minlength=N)
                     + 1j * np.bincount(out, weights=raw[:, c].imag, minlength=N))
    dot = np.einsum("ij,ij->i", acc, K) / knorm2
    return -1j * (acc - dot[:, None] * K)


def apply_linear(L, U):
    """Per-mode 3x3 operator ``L[n] @ U[n]``."""
    return np.einsum("nij,nj->ni", L, U)
