"""Boundary non-local charges Q_1, Q_2.

Three independent constructions: the closed form in terms of the coproduct
towers ``K_i, E_i, F_i``, the site-by-site coproduct recursion, and extraction
from the ``lambda -> +inf`` asymptotics of the doubled monodromy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ModelParams, coproduct_pair, coproduct_tower, eval_rep
from .errors import ExtractionError
from .lattice import doubled_monodromy, k_right, l_operators_fundamental
from .tensor import rel_residual

ROUTES = ("closed_form", "recursion", "unshifted_recursion")


@dataclass(frozen=True)
class ChargePair:
    Q1: np.ndarray
    Q2: np.ndarray | None
    x1: complex
    x2: complex
    N: int
    route: str


def _x(i: int, params: ModelParams) -> complex:
    if i == 1:
        return params.x1
    if i == 2:
        return params.x2
    raise ValueError(f"charge index must be 1 or 2, got {i}")


def abstract_charge(i: int, lam: complex, params: ModelParams) -> np.ndarray:
    """``rho_lambda(Q_i)`` as a 2x2 matrix (``Q_1`` does not depend on lambda)."""
    x = _x(i, params)
    mu = params.mu
    q = params.q
    k = eval_rep(f"k{i}", lam, mu)
    e = eval_rep(f"e{i}", lam, mu)
    f = eval_rep(f"f{i}", lam, mu)
    return q**-0.5 * k @ e + q**0.5 * k @ f + x * (k @ k) - x * np.eye(2)


def charge_tower(i: int, params: ModelParams, route: str = "closed_form") -> np.ndarray:
    """``Q_i^(N)`` on the N-site chain, every site in rho_0.

    ``closed_form``: ``q^-1/2 K E + q^1/2 K F + x K^2 - x``.
    ``recursion``: ``Q^(n) = I (x) Q^(n-1) + Q (x) (K^(n-1))^2``.
    ``unshifted_recursion``: recursion for the generator without the ``-x`` shift, whose
    coproduct carries an extra ``-x I (x) k^2``; the shift is removed at the end.
    """
    x = _x(i, params)
    N, q = params.N, params.q
    if route == "closed_form":
        K = coproduct_tower(f"k{i}", params)
        E = coproduct_tower(f"e{i}", params)
        F = coproduct_tower(f"f{i}", params)
        return q**-0.5 * K @ E + q**0.5 * K @ F + x * (K @ K) - x * np.eye(2**N)
    if route not in ROUTES:
        raise ValueError(f"unknown charge route {route!r}")
    local = abstract_charge(i, 0.0, params)
    k2 = eval_rep(f"k{i}", 0.0, params.mu) @ eval_rep(f"k{i}", 0.0, params.mu)
    if route == "unshifted_recursion":
        local = local + x * np.eye(2)
    out = local
    kk = k2
    for n in range(2, N + 1):
        out = np.kron(np.eye(2), out) + np.kron(local, kk)
        if route == "unshifted_recursion":
            out = out - x * np.kron(np.eye(2), kk)
        kk = np.kron(k2, kk)
    if route == "unshifted_recursion":
        out = out - x * np.eye(2**N)
    return out


def charge_pair(params: ModelParams, route: str = "closed_form") -> ChargePair:
    return ChargePair(charge_tower(1, params, route), charge_tower(2, params, route),
                      params.x1, params.x2, params.N, route)


def _proportional_to_identity(block: np.ndarray, what: str, tol: float) -> complex:
    d = block.shape[0]
    c = np.trace(block) / d
    scale = max(abs(c), np.abs(block).max(), 1e-300)
    if abs(c) < tol * scale or np.abs(block - c * np.eye(d)).max() > tol * scale:
        raise ExtractionError(f"{what}: leading block is not proportional to the identity")
    return c


def extract_charges_asymptotic(params: ModelParams, gradation: str | None = None,
                               tol: float = 1e-9) -> ChargePair:
    """Read the charges off the top Laurent coefficients of the doubled monodromy.

    Homogeneous: the degree ``2N+2`` coefficient is proportional to
    ``[[Q1 + x1, 1/(q - 1/q)], [1/(q - 1/q), 0]]``; only Q1 is available.
    Principal: degree ``2N+3`` is proportional to ``antidiag(1, 1)`` and degree
    ``2N+2`` to ``2 sinh(i mu) diag(Q1 + x1, Q2 + x2)`` with the same factor.
    The unknown overall scalar is fixed by the blocks known to be multiples of I.
    """
    gradation = gradation or params.gradation
    N, q, s = params.N, params.q, params.sinh_imu
    big = doubled_monodromy(params, gradation)
    d = 2**N
    eye = np.eye(d)
    if gradation == "homogeneous":
        top = big.coeff(2 * N + 2)
        if big.hi != 2 * N + 2:
            raise ExtractionError(f"expected top degree {2 * N + 2}, found {big.hi}")
        nu = _proportional_to_identity(top[:d, d:], "homogeneous (1,2)", tol) * (q - 1 / q)
        c21 = _proportional_to_identity(top[d:, :d], "homogeneous (2,1)", tol) * (q - 1 / q)
        if abs(c21 - nu) > tol * abs(nu):
            raise ExtractionError("homogeneous off-diagonal blocks differ")
        if np.abs(top[d:, d:]).max() > tol * abs(nu):
            raise ExtractionError("homogeneous (2,2) leading block does not vanish")
        q1 = top[:d, :d] / nu - params.x1 * eye
        return ChargePair(q1, None, params.x1, params.x2, N, "asymptotic_homogeneous")
    top = big.coeff(2 * N + 3)
    if big.hi != 2 * N + 3:
        raise ExtractionError(f"expected top degree {2 * N + 3}, found {big.hi}")
    c = _proportional_to_identity(top[:d, d:], "principal (1,2)", tol)
    c21 = _proportional_to_identity(top[d:, :d], "principal (2,1)", tol)
    if abs(c21 - c) > tol * abs(c):
        raise ExtractionError("principal antidiagonal blocks differ")
    if max(np.abs(top[:d, :d]).max(), np.abs(top[d:, d:]).max()) > tol * abs(c):
        raise ExtractionError("principal leading diagonal blocks do not vanish")
    sub = big.coeff(2 * N + 2)
    q1 = sub[:d, :d] / (2 * s * c) - params.x1 * eye
    q2 = sub[d:, d:] / (2 * s * c) - params.x2 * eye
    return ChargePair(q1, q2, params.x1, params.x2, N, "asymptotic_principal")


def asymptotic_block_matrix(params: ModelParams, q1: np.ndarray | None = None) -> np.ndarray:
    """``T^+ = [[Q1 + x1, I/(q - 1/q)], [I/(q - 1/q), 0]]`` on aux (x) chain."""
    if q1 is None:
        q1 = extract_charges_asymptotic(params, "homogeneous").Q1
    d = q1.shape[0]
    q = params.q
    eye = np.eye(d)
    z = np.zeros((d, d), dtype=np.complex128)
    return np.block([[q1 + params.x1 * eye, eye / (q - 1 / q)], [eye / (q - 1 / q), z]])


# ---------------------------------------------------------------------------
# intertwiners


def intertwiner_residual_K(i: int, lam: complex, params: ModelParams,
                           k_matrix=None) -> float:
    """``rho_l(Q_i) K(l)`` against ``K(l) rho_{-l}(Q_i)``."""
    K = k_right(params, "blob", "homogeneous").eval(lam) if k_matrix is None else k_matrix(lam)
    return rel_residual(abstract_charge(i, lam, params) @ K, K @ abstract_charge(i, -lam, params))


def flipped_charge_operator(i: int, lam: complex, params: ModelParams, q_chain: np.ndarray) -> np.ndarray:
    """``rho_l(Q_i) (x) I + rho_l(k_i^2) (x) Q_i^(N)`` on aux (x) chain."""
    k = eval_rep(f"k{i}", lam, params.mu)
    d = q_chain.shape[0]
    return np.kron(abstract_charge(i, lam, params), np.eye(d)) + np.kron(k @ k, q_chain)


def intertwiner_residual_T(i: int, lam: complex, params: ModelParams,
                           big: np.ndarray | None = None, q_chain: np.ndarray | None = None) -> float:
    """Generalized intertwining of the flipped N+1 coproduct of Q_i with the doubled monodromy."""
    from .lattice import doubled_monodromy_at

    if big is None:
        big = doubled_monodromy_at(params, lam, "homogeneous")
    if q_chain is None:
        q_chain = charge_tower(i, params)
    lhs = flipped_charge_operator(i, lam, params, q_chain) @ big
    rhs = big @ flipped_charge_operator(i, -lam, params, q_chain)
    return rel_residual(lhs, rhs)


def intertwiner_residual_L(g: str, lam: complex, params: ModelParams) -> float:
    """``(rho_l (x) rho_0) Delta'(g) L(l) = L(l) (rho_l (x) rho_0) Delta(g)``."""
    L, _ = l_operators_fundamental(params, "homogeneous")
    Lv = L.eval(lam)
    flipped = coproduct_pair(g, lam, params.mu, flipped=True)
    plain = coproduct_pair(g, lam, params.mu, flipped=False)
    return rel_residual(flipped @ Lv, Lv @ plain)


__all__ = [
    "ChargePair", "abstract_charge", "charge_tower", "charge_pair", "extract_charges_asymptotic",
    "asymptotic_block_matrix", "intertwiner_residual_K", "intertwiner_residual_T",
    "intertwiner_residual_L", "flipped_charge_operator",
]
