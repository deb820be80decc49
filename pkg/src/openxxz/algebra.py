"""Model parameters, the spin-1/2 evaluation representation of U_q(sl2^),
coproduct towers of the Chevalley generators, and the blob algebra in the
XXZ representation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateAnisotropyError
from .report import Entry, VerificationReport
from .tensor import I2, SIGMA_MINUS, SIGMA_PLUS, embed, kron, rel_residual

GRADATIONS = ("homogeneous", "principal")
GENERATORS = ("k1", "k2", "e1", "e2", "f1", "f2")
# Cartan matrix of affine sl2
CARTAN = np.array([[2, -2], [-2, 2]])

_SIN_MU_MIN = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Anisotropy ``mu`` (q = e^{i mu}), boundary data ``m``, ``zeta`` and chain length ``N``."""

    mu: float
    m: float
    zeta: float
    N: int
    gradation: str = "homogeneous"

    @property
    def q(self) -> complex:
        return cmath.exp(1j * self.mu)

    @property
    def Qblob(self) -> complex:
        return cmath.exp(1j * self.m * self.mu)

    @property
    def sinh_imu(self) -> complex:
        return cmath.sinh(1j * self.mu)

    @property
    def x1(self) -> complex:
        return -cmath.sinh(1j * self.m * self.mu) / self.sinh_imu

    @property
    def x2(self) -> complex:
        return -cmath.sinh(2j * self.mu * self.zeta) / self.sinh_imu

    @property
    def x0(self) -> complex:
        """``x(0)``, the scalar part of the right K matrix at lambda = 0."""
        a = 1j * self.m * self.mu / 2
        b = 1j * self.mu * self.zeta
        return 2 * cmath.sinh(-a - b) * cmath.cosh(-a + b)

    @property
    def hamiltonian_regular(self) -> bool:
        """False on the loci where x(0) = 0 or q + 1/q = 0."""
        return abs(self.x0) > 1e-12 and abs(self.q + 1 / self.q) > 1e-12

    def with_(self, **kw) -> "ModelParams":
        d = dict(mu=self.mu, m=self.m, zeta=self.zeta, N=self.N, gradation=self.gradation)
        d.update(kw)
        return make_params(**d)

    def as_dict(self) -> dict:
        return {"mu": self.mu, "m": self.m, "zeta": self.zeta, "N": self.N}


def make_params(mu, m, zeta, N, gradation="homogeneous") -> ModelParams:
    if abs(math.sin(mu)) < _SIN_MU_MIN:
        raise DegenerateAnisotropyError(f"mu = {mu} is a multiple of pi: sinh(i mu) vanishes")
    if int(N) != N or N < 1:
        raise ValueError(f"chain length must be a positive integer, got {N}")
    if gradation not in GRADATIONS:
        raise ValueError(f"gradation must be one of {GRADATIONS}, got {gradation!r}")
    return ModelParams(float(mu), float(m), float(zeta), int(N), gradation)


# ---------------------------------------------------------------------------
# evaluation representation


def _k1(mu: float) -> np.ndarray:
    return np.diag([cmath.exp(0.5j * mu), cmath.exp(-0.5j * mu)])


def eval_rep(g: str, lam: complex, mu: float) -> np.ndarray:
    """Spin-1/2 evaluation representation rho_lambda of a Chevalley generator.

    Only the affine pair (e2, f2) carries the spectral parameter; e1, f1, k1
    are the plain U_q(sl2) matrices.
    """
    k1 = _k1(mu)
    if g == "k1":
        return k1
    if g == "k2":
        return np.linalg.inv(k1)
    if g == "e1":
        return SIGMA_PLUS.copy()
    if g == "f1":
        return SIGMA_MINUS.copy()
    if g == "e2":
        return cmath.exp(-2 * lam) * SIGMA_MINUS
    if g == "f2":
        return cmath.exp(2 * lam) * SIGMA_PLUS
    raise ValueError(f"unknown generator {g!r}")


def evaluation_homomorphism(g: str, lam: complex, mu: float, c: complex = 1.0) -> np.ndarray:
    """Spin-1/2 image of the evaluation map U_q(sl2^) -> U_q(sl2) with constant ``c``."""
    if g in ("k1", "e1", "f1"):
        return eval_rep(g, 0.0, mu)
    if g == "k2":
        return np.linalg.inv(_k1(mu))
    if g == "e2":
        return cmath.exp(-2 * lam) * c * SIGMA_MINUS
    if g == "f2":
        return cmath.exp(2 * lam) / c * SIGMA_PLUS
    raise ValueError(f"unknown generator {g!r}")


def q_number(x: float, q: complex) -> complex:
    return (q**x - q ** (-x)) / (q - 1 / q)


def uq_relation_residuals(rep, mu: float) -> dict[str, float]:
    """Residuals of the Chevalley-Serre relations for a map ``rep(g) -> matrix``."""
    q = cmath.exp(1j * mu)
    k = {1: rep("k1"), 2: rep("k2")}
    e = {1: rep("e1"), 2: rep("e2")}
    f = {1: rep("f1"), 2: rep("f2")}
    out: dict[str, float] = {}
    for i in (1, 2):
        for j in (1, 2):
            a = CARTAN[i - 1, j - 1]
            out[f"k{i}k{j}"] = rel_residual(k[i] @ k[j], k[j] @ k[i])
            out[f"k{i}e{j}"] = rel_residual(k[i] @ e[j], q ** (a / 2) * e[j] @ k[i])
            out[f"k{i}f{j}"] = rel_residual(k[i] @ f[j], q ** (-a / 2) * f[j] @ k[i])
            rhs = np.zeros_like(k[i])
            if i == j:
                kk = k[i] @ k[i]
                rhs = (kk - np.linalg.inv(kk)) / (q - 1 / q)
            out[f"[e{i},f{j}]"] = rel_residual(e[i] @ f[j] - f[j] @ e[i], rhs)
    q3 = q_number(3, q)
    for name, chi in (("e", e), ("f", f)):
        for i, j in ((1, 2), (2, 1)):
            x, y = chi[i], chi[j]
            lhs = x @ x @ x @ y + q3 * x @ y @ x @ x
            rhs = q3 * x @ x @ y @ x + y @ x @ x @ x
            out[f"serre_{name}{i}{j}"] = rel_residual(lhs, rhs)
    return out


def verify_uq_relations(lam: complex, mu: float, tolerance: float = 1e-12) -> VerificationReport:
    res = uq_relation_residuals(lambda g: eval_rep(g, lam, mu), mu)
    params = {"mu": mu, "m": None, "zeta": None, "N": 1, "case": None, "gradation": None}
    rep = VerificationReport()
    rep.extend(Entry.judge(f"uq_relation[{k}]", params, v, tolerance, [lam]) for k, v in res.items())
    return rep


# ---------------------------------------------------------------------------
# coproduct towers with every site in rho_0


def _site_rep(g: str, mu: float) -> np.ndarray:
    return eval_rep(g, 0.0, mu)


@lru_cache(maxsize=256)
def _tower_cached(g: str, N: int, mu: float, order: str) -> np.ndarray:
    i = g[1]
    k = _site_rep("k" + i, mu)
    kinv = np.linalg.inv(k)
    if g[0] == "k":
        out = kron(*([k] * N))
    elif order == "closed":
        y = _site_rep(g, mu)
        out = sum(kron(*([kinv] * a + [y] + [k] * (N - a - 1))) for a in range(N))
    else:
        y = _site_rep(g, mu)
        out = y
        for n in range(2, N + 1):
            kn = kron(*([k] * (n - 1)))
            if order == "left":  # (id (x) Delta^{(n-1)}) Delta
                out = np.kron(kinv, out) + np.kron(y, kn)
            else:  # (Delta^{(n-1)} (x) id) Delta
                out = np.kron(out, k) + np.kron(np.linalg.inv(kn), y)
    out = np.asarray(out, dtype=np.complex128)
    out.setflags(write=False)
    return out


def coproduct_tower(g: str, params: ModelParams, order: str = "closed") -> np.ndarray:
    """N-fold coproduct of generator ``g`` represented on (C^2)^N with rho_0 on every site.

    ``order`` picks the construction: ``closed`` (explicit sum), ``left`` or
    ``right`` recursion; all three agree by coassociativity.
    """
    if g not in GENERATORS:
        raise ValueError(f"unknown generator {g!r}")
    if order not in ("closed", "left", "right"):
        raise ValueError(f"unknown order {order!r}")
    return _tower_cached(g, params.N, params.mu, order)


def coproduct_pair(g: str, lam: complex, mu: float, flipped: bool = False) -> np.ndarray:
    """``(rho_lam (x) rho_0) Delta(g)``, or the flipped coproduct ``Delta' = Pi o Delta``."""
    i = g[1]
    ka, kb = eval_rep("k" + i, lam, mu), _site_rep("k" + i, mu)
    if g[0] == "k":
        return np.kron(ka, kb)
    ya, yb = eval_rep(g, lam, mu), _site_rep(g, mu)
    if flipped:
        return np.kron(ya, np.linalg.inv(kb)) + np.kron(ka, yb)
    return np.kron(np.linalg.inv(ka), yb) + np.kron(ya, kb)


# ---------------------------------------------------------------------------
# blob algebra


def tl_generator_local(q: complex) -> np.ndarray:
    u = np.zeros((4, 4), dtype=np.complex128)
    u[1, 1] = -q
    u[1, 2] = u[2, 1] = 1.0
    u[2, 2] = -1 / q
    return u


def blob_generator_local(Q: complex) -> np.ndarray:
    return np.array([[-Q, 1.0], [1.0, -1 / Q]], dtype=np.complex128)


@lru_cache(maxsize=64)
def _blob_cached(mu: float, m: float, N: int) -> tuple[np.ndarray, ...]:
    q = cmath.exp(1j * mu)
    Q = cmath.exp(1j * m * mu)
    gens = [embed(blob_generator_local(Q), 1, N)]
    u = tl_generator_local(q)
    gens.extend(embed(u, l, N) for l in range(1, N))
    for g in gens:
        g.setflags(write=False)
    return tuple(gens)


def blob_generators(params: ModelParams) -> list[np.ndarray]:
    """``[h(U_0), h(U_1), ..., h(U_{N-1})]``; U_0 acts on site 1, U_l on sites l, l+1."""
    return list(_blob_cached(params.mu, params.m, params.N))


def blob_constants(params: ModelParams) -> dict[str, complex]:
    q, Q = params.q, params.Qblob
    return {"delta": -(q + 1 / q), "delta0": -(Q + 1 / Q), "gamma": q * Q + 1 / (q * Q)}


def blob_relation_residuals(params: ModelParams) -> dict[str, float]:
    U = blob_generators(params)
    c = blob_constants(params)
    N = params.N
    out: dict[str, float] = {}
    out["U0^2=delta0 U0"] = rel_residual(U[0] @ U[0], c["delta0"] * U[0])
    for l in range(1, N):
        out[f"U{l}^2=delta U{l}"] = rel_residual(U[l] @ U[l], c["delta"] * U[l])
    for l in range(1, N - 1):
        out[f"U{l}U{l + 1}U{l}=U{l}"] = rel_residual(U[l] @ U[l + 1] @ U[l], U[l])
        out[f"U{l + 1}U{l}U{l + 1}=U{l + 1}"] = rel_residual(U[l + 1] @ U[l] @ U[l + 1], U[l + 1])
    if N >= 2:
        out["U1U0U1=gamma U1"] = rel_residual(U[1] @ U[0] @ U[1], c["gamma"] * U[1])
    for l in range(N):
        for k in range(l + 2, N):
            out[f"[U{l},U{k}]=0"] = rel_residual(U[l] @ U[k], U[k] @ U[l])
    return out


def verify_blob_relations(params: ModelParams, tolerance: float = 1e-12) -> VerificationReport:
    rel = blob_relation_residuals(params)
    p = dict(params.as_dict(), case=None, gradation=None)
    rep = VerificationReport()
    rep.extend(Entry.judge(f"blob_relation[{k}]", p, v, tolerance) for k, v in rel.items())
    return rep


def identity_chain(N: int) -> np.ndarray:
    return np.eye(2**N, dtype=np.complex128)


__all__ = [
    "ModelParams", "make_params", "eval_rep", "evaluation_homomorphism", "verify_uq_relations",
    "uq_relation_residuals", "coproduct_tower", "coproduct_pair", "blob_generators",
    "blob_constants", "blob_relation_residuals", "verify_blob_relations", "I2",
]
