"""Local-gate kernels used to grow monodromies one site at a time.

Two implementations of the same contract live here: numba ``@njit`` loops and
a pure numpy path built on ``tensordot``.  The active backend is chosen at import
time from ``OPENXXZ_KERNELS`` (``numba`` or ``numpy``); numba is the default when
it imports.  ``use_backend`` switches at runtime (tests and the benchmark use it).

Register convention: qubit 0 is the most significant bit of a row/column index.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _numpy_left(gate, mat, out, p0, p1, nq):
    ncol = mat.shape[1]
    t = mat.reshape((2,) * nq + (ncol,))
    g = gate.reshape(2, 2, 2, 2)
    r = np.tensordot(g, t, axes=([2, 3], [p0, p1]))
    r = np.moveaxis(r, [0, 1], [p0, p1])
    out += r.reshape(mat.shape)


def _numpy_right(mat, gate, out, p0, p1, nq):
    nrow = mat.shape[0]
    t = mat.reshape((nrow,) + (2,) * nq)
    g = gate.reshape(2, 2, 2, 2)
    r = np.tensordot(t, g, axes=([1 + p0, 1 + p1], [0, 1]))
    # tensordot appends the two output legs at the end
    r = np.moveaxis(r, [r.ndim - 2, r.ndim - 1], [1 + p0, 1 + p1])
    out += r.reshape(mat.shape)


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _numba_left(gate, mat, out, p0, p1, nq):
        s0 = nq - 1 - p0
        s1 = nq - 1 - p1
        n, ncol = mat.shape
        clear = ~((1 << s0) | (1 << s1))
        for r in range(n):
            b0 = (r >> s0) & 1
            b1 = (r >> s1) & 1
            base = r & clear
            ro = 2 * b0 + b1
            for c0 in range(2):
                for c1 in range(2):
                    g = gate[ro, 2 * c0 + c1]
                    if g == 0:
                        continue
                    src = base | (c0 << s0) | (c1 << s1)
                    for j in range(ncol):
                        out[r, j] += g * mat[src, j]

    @numba.njit(cache=True)
    def _numba_right(mat, gate, out, p0, p1, nq):
        s0 = nq - 1 - p0
        s1 = nq - 1 - p1
        nrow, n = mat.shape
        clear = ~((1 << s0) | (1 << s1))
        for c in range(n):
            b0 = (c >> s0) & 1
            b1 = (c >> s1) & 1
            base = c & clear
            co = 2 * b0 + b1
            for a0 in range(2):
                for a1 in range(2):
                    g = gate[2 * a0 + a1, co]
                    if g == 0:
                        continue
                    src = base | (a0 << s0) | (a1 << s1)
                    for i in range(nrow):
                        out[i, c] += mat[i, src] * g

else:  # pragma: no cover
    _numba_left = _numba_right = None


_BACKENDS = {"numpy": (_numpy_left, _numpy_right)}
if HAVE_NUMBA:
    _BACKENDS["numba"] = (_numba_left, _numba_right)

_active = os.environ.get("OPENXXZ_KERNELS", "numba" if HAVE_NUMBA else "numpy").lower()
if _active not in _BACKENDS:
    _active = "numpy"


def backend() -> str:
    return _active


def use_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; available: {sorted(_BACKENDS)}")
    _active = name


@contextmanager
def backend_ctx(name: str):
    prev = _active
    use_backend(name)
    try:
        yield
    finally:
        use_backend(prev)


def gate_left_accumulate(gate, mat, out, p0, p1, nq):
    """``out += G_{p0 p1} @ mat`` for a 4x4 gate acting on distinct qubits ``p0``, ``p1``."""
    _BACKENDS[_active][0](gate, mat, out, p0, p1, nq)


def gate_right_accumulate(mat, gate, out, p0, p1, nq):
    """``out += mat @ G_{p0 p1}``."""
    _BACKENDS[_active][1](mat, gate, out, p0, p1, nq)


def apply_gate_left(gate, mat, p0, p1, nq):
    out = np.zeros(mat.shape, dtype=np.complex128)
    gate_left_accumulate(np.ascontiguousarray(gate, dtype=np.complex128),
                         np.ascontiguousarray(mat, dtype=np.complex128), out, p0, p1, nq)
    return out


def apply_gate_right(mat, gate, p0, p1, nq):
    out = np.zeros(mat.shape, dtype=np.complex128)
    gate_right_accumulate(np.ascontiguousarray(mat, dtype=np.complex128),
                          np.ascontiguousarray(gate, dtype=np.complex128), out, p0, p1, nq)
    return out
