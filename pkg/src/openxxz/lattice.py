"""Spectral-parameter dependent lattice objects of the open XXZ chain.

Every builder returns exact Laurent data (``LaurentMatrix``) in ``u = e^lambda``.
Operators on ``aux (x) chain`` put the auxiliary space first; chain site 1 is
the next factor.  Monodromies are grown one site at a time through the local
gate kernels, so nothing larger than ``2**(N+1)`` is ever materialized.

``*_at`` variants evaluate the gates at a number first and multiply numerically;
they are the fast path for sampled identities and an independent route for the
Laurent construction.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .algebra import ModelParams, blob_generator_local, blob_generators
from .errors import ResourceLimitError, SingularNormalizationError
from .laurent import LaurentMatrix, LaurentPoly, check_degree_bounds
from .tensor import (SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Y, SIGMA_Z, embed, kron,
                     weighted_trace_aux)

MAX_LAURENT_SITES = 8
CASES = ("I", "II", "III")
K_FORMS = ("blob", "explicit", "kpr")


def _lp(k, c):
    return LaurentPoly.monomial(k, c)


def _check_sites(n: int) -> None:
    if n > MAX_LAURENT_SITES:
        raise ResourceLimitError(
            f"Laurent construction capped at N = {MAX_LAURENT_SITES} sites (asked for {n}); "
            "raise openxxz.lattice.MAX_LAURENT_SITES to override")


def gauge_aux(mat: LaurentMatrix, left: int, right: int) -> LaurentMatrix:
    """``V(left*lambda) @ mat @ V(right*lambda)`` with ``V = diag(1, e^lambda)`` on the aux factor."""
    blocks = [[mat.block(i, j).shift_degree(left * i + right * j) for j in range(2)] for i in range(2)]
    return LaurentMatrix.from_blocks(blocks)


def _gauge_numeric(mat: np.ndarray, lam: complex, left: int, right: int) -> np.ndarray:
    d = mat.shape[0] // 2
    out = mat.copy()
    out[d:, :] *= cmath.exp(left * lam)
    out[:, d:] *= cmath.exp(right * lam)
    return out


# ---------------------------------------------------------------------------
# R and L


@lru_cache(maxsize=32)
def _r_homogeneous(mu: float) -> LaurentMatrix:
    s = cmath.sinh(1j * mu)
    a = LaurentPoly.sinh(1, 1j * mu)
    b = LaurentPoly.sinh(1)
    z = LaurentPoly()
    r = LaurentMatrix.from_entries([
        [a, z, z, z],
        [z, b, _lp(1, s), z],
        [z, _lp(-1, s), b, z],
        [z, z, z, a],
    ])
    check_degree_bounds(r, -1, 1, "R matrix")
    return r


def r_matrix(params: ModelParams, gradation: str | None = None) -> LaurentMatrix:
    """4x4 XXZ R matrix; principal gradation via ``V_1(l) R V_1(-l)``."""
    gradation = gradation or params.gradation
    r = _r_homogeneous(params.mu)
    if gradation == "principal":
        r = gauge_aux(r, 1, -1)
        check_degree_bounds(r, -1, 1, "principal R matrix")
    return r


def r_matrix_from_tl(params: ModelParams) -> LaurentMatrix:
    """``P (sinh(l + i mu) I + sinh(l) h(U_1))`` assembled from the TL generator."""
    from .algebra import tl_generator_local
    from .tensor import PERM

    u = tl_generator_local(params.q)
    inner = (LaurentMatrix.constant(np.eye(4)) * LaurentPoly.sinh(1, 1j * params.mu)
             + LaurentMatrix.constant(u) * LaurentPoly.sinh(1))
    return PERM @ inner


def swap_r(r: LaurentMatrix) -> LaurentMatrix:
    """``R_21 = P R_12 P``."""
    from .tensor import PERM

    return r.conjugate_by(PERM)


@lru_cache(maxsize=32)
def _l_pair(mu: float) -> tuple[LaurentMatrix, LaurentMatrix]:
    # h1 -> sigma^z/2, e1 -> sigma^+, f1 -> sigma^- in the displayed Lax operators
    s = cmath.sinh(1j * mu)
    h_eigs = (0.5, -0.5)

    def diag_block(sign):
        polys = [LaurentPoly.sinh(1, 0.5j * mu + sign * 1j * mu * h) for h in h_eigs]
        return LaurentMatrix.from_entries([[polys[0], 0], [0, polys[1]]])

    f = LaurentMatrix.constant(SIGMA_MINUS * s)
    e = LaurentMatrix.constant(SIGMA_PLUS * s)
    d_plus, d_minus = diag_block(+1), diag_block(-1)
    L = LaurentMatrix.from_blocks([[d_plus, f.shift_degree(1)], [e.shift_degree(-1), d_minus]])
    Lhat = LaurentMatrix.from_blocks([[d_plus, f.shift_degree(-1)], [e.shift_degree(1), d_minus]])
    return L, Lhat


def l_operators_fundamental(params: ModelParams, gradation: str | None = None
                            ) -> tuple[LaurentMatrix, LaurentMatrix]:
    """``(L, Lhat)`` with the quantum space in rho_0; ``Lhat(l) ~ L^{-1}(-l)``."""
    gradation = gradation or params.gradation
    L, Lhat = _l_pair(params.mu)
    if gradation == "principal":
        L, Lhat = gauge_aux(L, 1, -1), gauge_aux(Lhat, -1, 1)
    return L, Lhat


# ---------------------------------------------------------------------------
# K matrices


@dataclass(frozen=True)
class KMatrix:
    matrix: LaurentMatrix
    side: str
    gradation: str
    case: str

    def __call__(self, lam):
        return self.matrix.eval(lam)

    def eval(self, lam):
        return self.matrix.eval(lam)


def x_poly(params: ModelParams) -> LaurentPoly:
    """``x(l) = 2 sinh(l - i m mu/2 - i mu zeta) cosh(l - i m mu/2 + i mu zeta)``."""
    a = 1j * params.m * params.mu / 2
    b = 1j * params.mu * params.zeta
    return 2 * LaurentPoly.sinh(1, -a - b) * LaurentPoly.cosh(1, -a + b)


def y_poly(params: ModelParams) -> LaurentPoly:
    return LaurentPoly.sinh(2)


@lru_cache(maxsize=64)
def _k_right_h(mu: float, m: float, zeta: float, form: str) -> LaurentMatrix:
    p = ModelParams(mu, m, zeta, 1)
    if form == "blob":
        h0 = blob_generator_local(p.Qblob)
        k = LaurentMatrix.constant(np.eye(2)) * x_poly(p) + LaurentMatrix.constant(h0) * y_poly(p)
    else:
        smu = cmath.sinh(1j * m * mu)
        sz = cmath.sinh(2j * mu * zeta)
        sh2 = LaurentPoly.sinh(2)
        k = LaurentMatrix.from_entries([
            [_lp(2, -smu) - sz, sh2],
            [sh2, _lp(-2, -smu) - sz],
        ])
    check_degree_bounds(k, -2, 2, "right K matrix")
    return k


def k_right(params: ModelParams, form: str = "blob", gradation: str | None = None) -> KMatrix:
    """Non-diagonal right boundary matrix.

    ``blob``: ``x(l) I + sinh(2l) h(U_0)``; ``explicit``: the entrywise form, equal
    to ``blob`` identically.  Principal gradation uses ``V(l) K V(l)``.  ``kpr`` is
    the principal display normalised without kappa, i.e. ``e^{-l} V K V``.
    """
    gradation = gradation or params.gradation
    if form not in K_FORMS:
        raise ValueError(f"unknown K form {form!r}")
    base = _k_right_h(params.mu, params.m, params.zeta, "explicit" if form == "kpr" else form)
    if form == "kpr":
        a = -cmath.sinh(1j * params.m * params.mu)
        b = cmath.sinh(2j * params.mu * params.zeta)
        sh2 = LaurentPoly.sinh(2)
        k = LaurentMatrix.from_entries([
            [_lp(1, a) + _lp(-1, -b), sh2],
            [sh2, _lp(-1, a) + _lp(1, -b)],
        ])
        return KMatrix(k, "right", "principal", "kpr")
    if gradation == "principal":
        base = gauge_aux(base, 1, 1)
        check_degree_bounds(base, -1, 3, "principal right K matrix")
    return KMatrix(base, "right", gradation, form)


_LEFT_SHIFTS = {
    # (degree, phase in units of i mu) for the (1,1) entry; (2,2) is the inverse
    ("I", "homogeneous"): (0, 0),
    ("II", "homogeneous"): (-2, -2),
    ("III", "homogeneous"): (-1, -1),
    ("I", "principal"): (1, 1),
    ("II", "principal"): (-1, -1),
    ("III", "principal"): (0, 0),
}


def k_left(case: str, gradation: str, mu: float) -> KMatrix:
    """Diagonal left boundaries of cases I, II, III."""
    try:
        deg, ph = _LEFT_SHIFTS[(case, gradation)]
    except KeyError:
        raise ValueError(f"unknown left boundary case {case!r} / gradation {gradation!r}") from None
    c = cmath.exp(1j * mu * ph)
    k = LaurentMatrix.from_entries([[_lp(deg, c), 0], [0, _lp(-deg, 1 / c)]])
    return KMatrix(k, "left", gradation, case)


def k_left_from_reflection(k: LaurentMatrix, mu: float) -> LaurentMatrix:
    """General rule ``K^(l)(l) = K(-l - i mu)^t``."""
    return k.substitute(shift=-1j * mu, scale=-1).transpose()


def aux_weight(gradation: str, mu: float) -> np.ndarray:
    """``M``: ``diag(e^{i mu}, e^{-i mu})`` (homogeneous) or the identity (principal)."""
    if gradation == "homogeneous":
        return np.diag([cmath.exp(1j * mu), cmath.exp(-1j * mu)])
    return np.eye(2, dtype=np.complex128)


# ---------------------------------------------------------------------------
# monodromies


def _gate_left_laurent(g: LaurentMatrix, x: LaurentMatrix, site: int, nq: int) -> LaurentMatrix:
    stack = np.zeros((g.nterms + x.nterms - 1, x.dim, x.dim), dtype=np.complex128)
    for i in range(g.nterms):
        gi = np.ascontiguousarray(g.coeffs[i])
        for k in range(x.nterms):
            _kernels.gate_left_accumulate(gi, np.ascontiguousarray(x.coeffs[k]), stack[i + k], 0, site, nq)
    return LaurentMatrix(g.lo + x.lo, stack)


def _gate_right_laurent(x: LaurentMatrix, g: LaurentMatrix, site: int, nq: int) -> LaurentMatrix:
    stack = np.zeros((g.nterms + x.nterms - 1, x.dim, x.dim), dtype=np.complex128)
    for i in range(g.nterms):
        gi = np.ascontiguousarray(g.coeffs[i])
        for k in range(x.nterms):
            _kernels.gate_right_accumulate(np.ascontiguousarray(x.coeffs[k]), gi, stack[i + k], 0, site, nq)
    return LaurentMatrix(g.lo + x.lo, stack)


def _freeze(x: LaurentMatrix) -> LaurentMatrix:
    x.coeffs.setflags(write=False)
    return x


@lru_cache(maxsize=32)
def _monodromy(mu: float, N: int, gradation: str, hat: bool) -> LaurentMatrix:
    p = ModelParams(mu, 0.0, 0.0, N, gradation)
    L, Lhat = l_operators_fundamental(p, gradation)
    nq = N + 1
    x = LaurentMatrix.identity(2**nq)
    if not hat:  # T = L_{0N} ... L_{01}
        for a in range(1, N + 1):
            x = _gate_left_laurent(L, x, a, nq)
    else:  # That = Lhat_{01} ... Lhat_{0N}
        for a in range(1, N + 1):
            x = _gate_right_laurent(x, Lhat, a, nq)
    check_degree_bounds(x, -N, N, "monodromy")
    return _freeze(x)


def monodromy(params: ModelParams, gradation: str | None = None) -> LaurentMatrix:
    _check_sites(params.N)
    return _monodromy(params.mu, params.N, gradation or params.gradation, False)


def monodromy_hat(params: ModelParams, gradation: str | None = None) -> LaurentMatrix:
    _check_sites(params.N)
    return _monodromy(params.mu, params.N, gradation or params.gradation, True)


@lru_cache(maxsize=32)
def _doubled(mu: float, m: float, zeta: float, N: int, gradation: str, form: str) -> LaurentMatrix:
    p = ModelParams(mu, m, zeta, max(N, 1), gradation)
    L, Lhat = l_operators_fundamental(p, gradation)
    kr = k_right(p, form, gradation).matrix
    nq = N + 1
    x = kr.kron(np.eye(2**N))
    for a in range(1, N + 1):  # T_N = L_{0N} T_{N-1} Lhat_{0N}
        x = _gate_right_laurent(_gate_left_laurent(L, x, a, nq), Lhat, a, nq)
    return _freeze(x)


def doubled_monodromy(params: ModelParams, gradation: str | None = None, form: str = "blob",
                      n_sites: int | None = None) -> LaurentMatrix:
    """``T(l) K^(r)(l) That(l)`` on aux (x) chain.  ``n_sites=0`` gives ``K^(r)`` itself."""
    n = params.N if n_sites is None else n_sites
    _check_sites(n)
    return _doubled(params.mu, params.m, params.zeta, n, gradation or params.gradation, form)


def doubled_monodromy_product(params: ModelParams, gradation: str | None = None) -> LaurentMatrix:
    """Same object as ``doubled_monodromy`` via full Laurent matrix products."""
    gradation = gradation or params.gradation
    kr = k_right(params, "explicit", gradation).matrix.kron(np.eye(2**params.N))
    return monodromy(params, gradation) @ kr @ monodromy_hat(params, gradation)


# numeric fast path ---------------------------------------------------------


def _lax_at(params: ModelParams, lam: complex, gradation: str):
    L, Lhat = l_operators_fundamental(params, gradation)
    return L.eval(lam), Lhat.eval(lam)


def monodromy_at(params: ModelParams, lam: complex, gradation: str | None = None,
                 hat: bool = False) -> np.ndarray:
    gradation = gradation or params.gradation
    L, Lhat = _lax_at(params, lam, gradation)
    nq = params.N + 1
    x = np.eye(2**nq, dtype=np.complex128)
    for a in range(1, params.N + 1):
        x = _kernels.apply_gate_right(x, Lhat, 0, a, nq) if hat else _kernels.apply_gate_left(L, x, 0, a, nq)
    return x


def doubled_monodromy_at(params: ModelParams, lam: complex, gradation: str | None = None,
                         k_matrix: np.ndarray | None = None) -> np.ndarray:
    """Numeric ``T K That`` at a given lambda (optionally with a replacement K)."""
    gradation = gradation or params.gradation
    L, Lhat = _lax_at(params, lam, gradation)
    kr = k_right(params, "blob", gradation).eval(lam) if k_matrix is None else k_matrix
    nq = params.N + 1
    x = np.kron(kr, np.eye(2**params.N))
    for a in range(1, params.N + 1):
        x = _kernels.apply_gate_right(_kernels.apply_gate_left(L, x, 0, a, nq), Lhat, 0, a, nq)
    return x


# ---------------------------------------------------------------------------
# transfer matrices


@dataclass(frozen=True)
class TransferMatrix:
    matrix: LaurentMatrix
    case: str
    gradation: str

    def __call__(self, lam):
        return self.matrix.eval(lam)

    def eval(self, lam):
        return self.matrix.eval(lam)


def _weights(case: str, gradation: str, mu: float) -> LaurentMatrix:
    return LaurentMatrix.constant(aux_weight(gradation, mu)) @ k_left(case, gradation, mu).matrix


def trace_aux_laurent(w: LaurentMatrix, big: LaurentMatrix) -> LaurentMatrix:
    """Laurent version of ``weighted_trace_aux``: ``sum_ij w_ij big_ji``."""
    out = LaurentMatrix.zeros(big.dim // 2)
    for i in range(2):
        for j in range(2):
            wij = w.entry(i, j)
            if not wij.is_zero():
                out = out + big.block(j, i) * wij
    return out


@lru_cache(maxsize=64)
def _transfer(mu, m, zeta, N, case, gradation) -> LaurentMatrix:
    p = ModelParams(mu, m, zeta, N, gradation)
    t = trace_aux_laurent(_weights(case, gradation, mu), doubled_monodromy(p, gradation))
    check_degree_bounds(t, -(2 * N + 4), 2 * N + 4, "transfer matrix")
    return _freeze(t)


def transfer_matrix(params: ModelParams, case: str = "I", gradation: str | None = None) -> TransferMatrix:
    """``t(l) = Tr_0 M_0 K^(l)_0(l) T_0(l)`` as Laurent data."""
    gradation = gradation or params.gradation
    if case not in CASES:
        raise ValueError(f"unknown left boundary case {case!r}")
    _check_sites(params.N)
    return TransferMatrix(_transfer(params.mu, params.m, params.zeta, params.N, case, gradation),
                          case, gradation)


def transfer_at(params: ModelParams, case: str, lam: complex, gradation: str | None = None,
                big: np.ndarray | None = None) -> np.ndarray:
    gradation = gradation or params.gradation
    if big is None:
        big = doubled_monodromy_at(params, lam, gradation)
    kl = k_left(case, gradation, params.mu).eval(lam)
    return weighted_trace_aux(big, aux_weight(gradation, params.mu), kl)


def closed_transfer(params: ModelParams) -> LaurentMatrix:
    """Periodic-chain transfer matrix ``Tr_0 T_0(l)`` (homogeneous gradation)."""
    T = monodromy(params, "homogeneous")
    return T.block(0, 0) + T.block(1, 1)


# ---------------------------------------------------------------------------
# Hamiltonian


def _hamiltonian_guard(params: ModelParams) -> None:
    if abs(params.x0) < 1e-12:
        raise SingularNormalizationError(
            f"x(0) = 0 at zeta = {params.zeta}, m = {params.m} (zeta = -m/2 mod pi/mu locus): "
            "Hamiltonian normalization is singular", parameter="zeta")
    if abs(params.q + 1 / params.q) < 1e-12:
        raise SingularNormalizationError(
            f"q + 1/q = 0 at mu = {params.mu}: constant c1 is singular", parameter="mu")


def _transfer_jet_at_zero(params: ModelParams) -> np.ndarray:
    """``dt/dl`` at 0 for case I, homogeneous, by exact product-rule propagation.

    Each factor contributes its value and its exact lambda-derivative (from the
    Laurent data); no finite differences and no cancellation between monomials.
    """
    L, Lhat = l_operators_fundamental(params, "homogeneous")
    kr = k_right(params, "blob", "homogeneous").matrix
    l0, dl0 = L.eval(0.0), L.d_lambda().eval(0.0)
    h0, dh0 = Lhat.eval(0.0), Lhat.d_lambda().eval(0.0)
    eye = np.eye(2**params.N)
    x, dx = np.kron(kr.eval(0.0), eye), np.kron(kr.d_lambda().eval(0.0), eye)
    nq = params.N + 1
    for a in range(1, params.N + 1):
        lx = _kernels.apply_gate_left(l0, x, 0, a, nq)
        dlx = _kernels.apply_gate_left(dl0, x, 0, a, nq) + _kernels.apply_gate_left(l0, dx, 0, a, nq)
        x = _kernels.apply_gate_right(lx, h0, 0, a, nq)
        dx = _kernels.apply_gate_right(dlx, h0, 0, a, nq) + _kernels.apply_gate_right(lx, dh0, 0, a, nq)
    M = aux_weight("homogeneous", params.mu)
    return weighted_trace_aux(dx, M, np.eye(2))


def hamiltonian(params: ModelParams, route: str = "blob") -> np.ndarray:
    """Open-chain Hamiltonian with left boundary case I.

    Routes: ``derivative`` (normalised dt/dl at 0, propagated through the gate
    product by the product rule), ``laurent_derivative`` (same quantity from the
    Laurent coefficients of t; loses digits to cancellation when mu is small),
    ``blob`` (blob-generator form) and ``pauli``.
    """
    _hamiltonian_guard(params)
    N, s, q = params.N, params.sinh_imu, params.q
    x0 = params.x0
    if route in ("derivative", "laurent_derivative"):
        if route == "laurent_derivative":
            t = transfer_matrix(params, "I", "homogeneous").matrix
            dt = t.d_lambda().eval(0.0)
        else:
            dt = _transfer_jet_at_zero(params)
        trM = q + 1 / q
        return -(s ** (-2 * N + 1)) / (4 * x0) / trM * dt
    if route == "blob":
        xp = x_poly(params).d_lambda()(0.0)
        yp = y_poly(params).d_lambda()(0.0)
        U = blob_generators(params)
        w = -s * xp / (4 * x0) - N / 2 * cmath.cosh(1j * params.mu) + 1 / (2 * (q + 1 / q))
        h = -0.5 * sum(U[1:], np.zeros_like(U[0])) - s * yp / (4 * x0) * U[0]
        return h + w * np.eye(2**N)
    if route == "pauli":
        return _pauli_hamiltonian(params, c1=1 / (2 * (q + 1 / q)), c2=0.0)
    raise ValueError(f"unknown Hamiltonian route {route!r}")


def _pauli_hamiltonian(params: ModelParams, c1: complex, c2: complex) -> np.ndarray:
    N, mu, m, zeta = params.N, params.mu, params.m, params.zeta
    ch = cmath.cosh(1j * mu)
    sh = cmath.sinh(1j * mu)
    den = 4 * cmath.sinh(1j * mu * (m / 2 + zeta)) * cmath.cosh(1j * mu * (m / 2 - zeta))
    h = np.zeros((2**N, 2**N), dtype=np.complex128)
    for i in range(1, N):
        bond = kron(SIGMA_X, SIGMA_X) + kron(SIGMA_Y, SIGMA_Y) + ch * kron(SIGMA_Z, SIGMA_Z)
        h += -0.25 * embed(bond, i, N)
    z1, zN = embed(SIGMA_Z, 1, N), embed(SIGMA_Z, N, N)
    h += -0.25 * sh * (zN - z1)
    h += -(N + 1) / 4 * ch * np.eye(2**N)
    h += -sh * cmath.sinh(1j * m * mu) / den * z1
    h += sh / den * embed(SIGMA_X, 1, N)
    h += c1 * np.eye(2**N) + c2 * zN
    return h


def hamiltonian_pauli(params: ModelParams, c1: complex | None = None, c2: complex = 0.0) -> np.ndarray:
    """Pauli form with explicit boundary constants (defaults: the case-I values)."""
    _hamiltonian_guard(params)
    if c1 is None:
        c1 = 1 / (2 * (params.q + 1 / params.q))
    return _pauli_hamiltonian(params, c1, c2)


__all__ = [
    "CASES", "KMatrix", "TransferMatrix", "r_matrix", "r_matrix_from_tl", "swap_r",
    "l_operators_fundamental", "k_right", "k_left", "k_left_from_reflection", "x_poly", "y_poly",
    "monodromy", "monodromy_hat", "doubled_monodromy", "doubled_monodromy_product",
    "monodromy_at", "doubled_monodromy_at", "transfer_matrix", "transfer_at", "closed_transfer",
    "hamiltonian", "hamiltonian_pauli", "gauge_aux", "aux_weight",
]
