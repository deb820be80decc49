"""Dense linear algebra on chain operators.

A chain operator is a plain ``numpy`` complex array of shape ``(2**N, 2**N)``.
Site 1 is the leftmost Kronecker factor.
"""
from __future__ import annotations

import json
from functools import reduce
from pathlib import Path

import numpy as np

from .errors import DimensionError, NonConvergenceError

EIG_DIM_CAP = 2**10

I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)
# swap on C^2 (x) C^2
PERM = np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]]


def kron(*mats) -> np.ndarray:
    if not mats:
        return np.ones((1, 1), dtype=np.complex128)
    return reduce(np.kron, (np.asarray(m, dtype=np.complex128) for m in mats))


def n_sites(op: np.ndarray) -> int:
    d = op.shape[0]
    if op.ndim != 2 or op.shape[1] != d or d & (d - 1):
        raise DimensionError(f"not a square operator on qubits: shape {op.shape}")
    return d.bit_length() - 1


def embed(op, first_site: int, N: int) -> np.ndarray:
    """``I^(first_site-1) (x) op (x) I^(rest)`` on ``N`` sites (1-based)."""
    op = np.asarray(op, dtype=np.complex128)
    k = n_sites(op)
    if first_site < 1 or first_site + k - 1 > N:
        raise DimensionError(f"operator on {k} sites cannot start at site {first_site} of {N}")
    left = np.eye(2 ** (first_site - 1))
    right = np.eye(2 ** (N - first_site - k + 1))
    return np.kron(np.kron(left, op), right)


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def q_commutator(x: np.ndarray, y: np.ndarray, qfac: complex) -> np.ndarray:
    """``qfac*X*Y - qfac^{-1}*Y*X``."""
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    if qfac == 0:
        raise ValueError("q-commutator needs a nonzero deformation factor")
    return qfac * (x @ y) - (y @ x) / qfac


def rel_residual(lhs, rhs) -> float:
    """``||lhs - rhs||_F / max(1, ||lhs||_F, ||rhs||_F)``."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if lhs.shape != rhs.shape:
        raise DimensionError(f"shape mismatch {lhs.shape} vs {rhs.shape}")
    a = np.linalg.norm(lhs)
    b = np.linalg.norm(rhs)
    return float(np.linalg.norm(lhs - rhs) / max(1.0, a, b))


def scaled_residual(diff, *terms) -> float:
    """``||diff||_F / max(1, ||term||_F ...)``: residual of an identity whose two
    sides were assembled from ``terms`` (guards against cancellation hiding scale)."""
    scale = max([1.0] + [float(np.linalg.norm(t)) for t in terms])
    return float(np.linalg.norm(diff) / scale)


def weighted_trace_aux(big: np.ndarray, M, K_left) -> np.ndarray:
    """``sum_ij (M K_left)_ij big_ji`` for ``big`` laid out as aux (x) chain."""
    w = np.asarray(M, dtype=np.complex128) @ np.asarray(K_left, dtype=np.complex128)
    d = big.shape[0] // 2
    if big.shape[0] != 2 * d:
        raise DimensionError("auxiliary-extended operator must have even dimension")
    out = np.zeros((d, d), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            if w[i, j] != 0:
                out += w[i, j] * big[j * d : (j + 1) * d, i * d : (i + 1) * d]
    return out


def aux_blocks(big: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(A1, B, C, A2)`` blocks of an aux (x) chain operator."""
    d = big.shape[0] // 2
    return big[:d, :d], big[:d, d:], big[d:, :d], big[d:, d:]


def swap_aux(n_chain: int) -> np.ndarray:
    """Swap of the first two factors of aux1 (x) aux2 (x) chain."""
    return np.kron(PERM, np.eye(2**n_chain))


def eig_general(a: np.ndarray, vectors: bool = False, cap: int = EIG_DIM_CAP):
    """Eigenvalues of a general complex matrix sorted by (real, imag)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"eigensolver needs a square matrix, got {a.shape}")
    if a.shape[0] > cap:
        raise DimensionError(f"dimension {a.shape[0]} exceeds eigensolver cap {cap}")
    try:
        if vectors:
            w, v = np.linalg.eig(a)
        else:
            w, v = np.linalg.eigvals(a), None
    except np.linalg.LinAlgError as exc:
        budget = 30 * max(10, a.shape[0])  # LAPACK's QR sweep budget
        raise NonConvergenceError(f"eigenvalue iteration did not converge: {exc}", budget) from exc
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    if vectors:
        return w, v[:, order]
    return w


# ---------------------------------------------------------------------------
# matrix file format


def _fmt(x: float) -> str:
    # 17 significant digits round-trips IEEE doubles exactly
    return format(float(x), ".16e")


def matrix_to_text(mat: np.ndarray, metadata: dict | None = None) -> str:
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError("only square matrices can be exported")
    data = ",\n  ".join(f"[{_fmt(z.real)}, {_fmt(z.imag)}]" for z in mat.ravel())
    parts = [f'"dim": {mat.shape[0]}', f'"data": [\n  {data}\n]']
    if metadata is not None:
        parts.append(f'"metadata": {json.dumps(metadata, sort_keys=True)}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def matrix_from_text(text: str) -> tuple[np.ndarray, dict | None]:
    doc = json.loads(text)
    dim = int(doc["dim"])
    pairs = np.asarray(doc["data"], dtype=np.float64)
    if pairs.shape != (dim * dim, 2):
        raise DimensionError(f"data has shape {pairs.shape}, expected ({dim * dim}, 2)")
    mat = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
    return mat, doc.get("metadata")


def save_matrix(path, mat: np.ndarray, metadata: dict | None = None) -> None:
    Path(path).write_text(matrix_to_text(mat, metadata))


def load_matrix(path) -> tuple[np.ndarray, dict | None]:
    return matrix_from_text(Path(path).read_text())
