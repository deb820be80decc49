"""Named identity checks.

A check takes a ``CheckContext`` (one parameter point, one chain length, a
private RNG) and returns report entries.  ``REGISTRY`` maps every check name
to its group and its function; ``run_suite`` in ``suite.py`` drives them.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import charges as ch
from . import lattice as lt
from .algebra import (ModelParams, blob_generators, blob_relation_residuals, coproduct_tower,
                      eval_rep, tl_generator_local, uq_relation_residuals)
from .laurent import LaurentMatrix
from .report import CONTROL, IDENTITY, INFO, Entry
from .tensor import I2, PERM, aux_blocks, q_commutator, rel_residual, scaled_residual

GRADATIONS = ("homogeneous", "principal")
CONTROL_THRESHOLD = 1e-4
P23 = np.kron(I2, PERM)


@dataclass
class CheckContext:
    params: ModelParams
    rng: np.random.Generator
    tol: float = 1e-10
    samples: int = 20
    cases: tuple = lt.CASES
    gradations: tuple = GRADATIONS
    entries: list = field(default_factory=list)

    def info(self, case=None, gradation=None) -> dict:
        return dict(self.params.as_dict(), case=case, gradation=gradation)

    def lam(self) -> complex:
        return complex(self.rng.uniform(-1.5, 1.5), self.rng.uniform(-1.0, 1.0))

    def lams(self, n: int | None = None) -> list[complex]:
        return [self.lam() for _ in range(n or self.samples)]

    def add(self, name, residual, factor=1.0, lambdas=(), case=None, gradation=None,
            kind=IDENTITY, message="", tolerance=None):
        tol = self.tol * factor if tolerance is None else tolerance
        self.entries.append(Entry.judge(name, self.info(case, gradation), residual, tol,
                                        lambdas, kind, message))


@dataclass(frozen=True)
class Check:
    name: str
    group: str
    fn: Callable[[CheckContext], None]
    per_n: bool = True  # False: independent of the chain length, run once per draw
    max_n: int | None = None


REGISTRY: dict[str, Check] = {}


def check(name, group, per_n=True, max_n=None):
    def deco(fn):
        REGISTRY[name] = Check(name, group, fn, per_n, max_n)
        return fn
    return deco


def _params_h(ctx) -> ModelParams:
    return ctx.params.with_(gradation="homogeneous")


# ---------------------------------------------------------------------------
# Yang-Baxter and reflection


def ybe_residual(r: LaurentMatrix, l1: complex, l2: complex) -> float:
    r12 = np.kron(r.eval(l1 - l2), I2)
    r13 = P23 @ np.kron(r.eval(l1), I2) @ P23
    r23 = np.kron(I2, r.eval(l2))
    lhs, rhs = r12 @ r13 @ r23, r23 @ r13 @ r12
    return rel_residual(lhs, rhs)


def ybe_laurent_residual(r: LaurentMatrix, l2: complex) -> float:
    """Both sides as Laurent polynomials in lambda_1 at fixed lambda_2."""
    r12 = r.substitute(shift=-l2).kron(I2)
    r13 = r.kron(I2).conjugate_by(P23)
    r23 = np.kron(I2, r.eval(l2))
    lhs = (r12 @ r13) @ r23
    rhs = r23 @ (r13 @ r12)
    return lhs.coeff_residual(rhs)


@check("ybe_numeric", "ybe", per_n=False)
def _ybe_numeric(ctx):
    for g in ctx.gradations:
        r = lt.r_matrix(ctx.params, g)
        pairs = [(ctx.lam(), ctx.lam()) for _ in range(5 * ctx.samples)]
        res = max(ybe_residual(r, a, b) for a, b in pairs)
        ctx.add("ybe_numeric", res, lambdas=[p for ab in pairs[:4] for p in ab], gradation=g,
                message=f"{len(pairs)} pairs")


@check("ybe_laurent", "ybe", per_n=False)
def _ybe_laurent(ctx):
    for g in ctx.gradations:
        l2 = ctx.lam()
        ctx.add("ybe_laurent", ybe_laurent_residual(lt.r_matrix(ctx.params, g), l2), factor=0.01,
                lambdas=[l2], gradation=g)


def reflection_residual(r: LaurentMatrix, k1: np.ndarray, k2: np.ndarray, l1, l2, n_chain: int = 0) -> float:
    """``R12(l1-l2) K1(l1) R21(l1+l2) K2(l2) = K2(l2) R12(l1+l2) K1(l1) R21(l1-l2)``.

    ``k1``, ``k2`` are the values at l1, l2 of a matrix on aux (x) chain; the
    check runs on aux (x) aux (x) chain.
    """
    eye = np.eye(2**n_chain)
    sw = np.kron(PERM, eye)

    def r12(lam):
        return np.kron(r.eval(lam), eye)

    def r21(lam):
        return sw @ r12(lam) @ sw

    big1 = sw @ np.kron(I2, k1) @ sw
    big2 = np.kron(I2, k2)
    lhs = r12(l1 - l2) @ big1 @ r21(l1 + l2) @ big2
    rhs = big2 @ r12(l1 + l2) @ big1 @ r21(l1 - l2)
    return rel_residual(lhs, rhs)


@check("reflection_k", "reflection", per_n=False)
def _reflection_k(ctx):
    for g in ctx.gradations:
        r = lt.r_matrix(ctx.params, g)
        for form in ("blob", "explicit"):
            k = lt.k_right(ctx.params, form, g)
            pairs = [(ctx.lam(), ctx.lam()) for _ in range(ctx.samples)]
            res = max(reflection_residual(r, k(a), k(b), a, b) for a, b in pairs)
            ctx.add("reflection_k", res, lambdas=pairs[0], gradation=g, message=form)


@check("reflection_k_left", "reflection", per_n=False)
def _reflection_k_left(ctx):
    # K(l) = K_left(-l - i mu)^t must itself solve the reflection equation
    mu = ctx.params.mu
    r = lt.r_matrix(ctx.params, "homogeneous")
    for case in ctx.cases:
        kl = lt.k_left(case, "homogeneous", mu).matrix
        k = kl.substitute(shift=-1j * mu, scale=-1).transpose()
        pairs = [(ctx.lam(), ctx.lam()) for _ in range(ctx.samples)]
        res = max(reflection_residual(r, k.eval(a), k.eval(b), a, b) for a, b in pairs)
        ctx.add("reflection_k_left", res, lambdas=pairs[0], case=case, gradation="homogeneous")


@check("k_forms_agree", "reflection", per_n=False)
def _k_forms(ctx):
    for g in ctx.gradations:
        a = lt.k_right(ctx.params, "blob", g).matrix
        b = lt.k_right(ctx.params, "explicit", g).matrix
        ctx.add("k_forms_agree", a.max_coeff_diff(b), factor=0.01, gradation=g)


@check("reflection_doubled", "reflection", max_n=6)
def _reflection_doubled(ctx):
    N = ctx.params.N
    for g in ctx.gradations:
        p = ctx.params.with_(gradation=g)
        r = lt.r_matrix(p, g)
        worst, lams = 0.0, []
        for _ in range(max(2, ctx.samples // 4)):
            a, b = ctx.lam(), ctx.lam()
            res = reflection_residual(r, lt.doubled_monodromy_at(p, a, g), lt.doubled_monodromy_at(p, b, g),
                                      a, b, N)
            if res >= worst:
                worst, lams = res, [a, b]
        ctx.add("reflection_doubled", worst, lambdas=lams, gradation=g)


# ---------------------------------------------------------------------------
# algebras


@check("blob_relations", "blob")
def _blob(ctx):
    res = blob_relation_residuals(ctx.params)
    worst = max(res, key=res.get)
    ctx.add("blob_relations", res[worst], factor=0.01, message=f"{len(res)} relations, worst {worst}")


@check("uq_relations", "uq", per_n=False)
def _uq(ctx):
    lams = ctx.lams(4)
    worst, name = 0.0, ""
    for lam in lams:
        res = uq_relation_residuals(lambda g: eval_rep(g, lam, ctx.params.mu), ctx.params.mu)
        k = max(res, key=res.get)
        if res[k] >= worst:
            worst, name = res[k], k
    ctx.add("uq_relations", worst, factor=0.01, lambdas=lams, message=f"worst {name}")


# ---------------------------------------------------------------------------
# transfer matrices


@check("transfer_commutativity", "transfer")
def _transfer_com(ctx):
    for g in ctx.gradations:
        p = ctx.params.with_(gradation=g)
        for case in ctx.cases:
            worst, lams = 0.0, []
            for _ in range(ctx.samples):
                a, b = ctx.lam(), ctx.lam()
                ta, tb = lt.transfer_at(p, case, a, g), lt.transfer_at(p, case, b, g)
                res = rel_residual(ta @ tb, tb @ ta)
                if res >= worst:
                    worst, lams = res, [a, b]
            ctx.add("transfer_commutativity", worst, lambdas=lams, case=case, gradation=g)


@check("transfer_commutativity_laurent", "transfer", max_n=6)
def _transfer_com_laurent(ctx):
    for g in ctx.gradations:
        p = ctx.params.with_(gradation=g)
        for case in ctx.cases:
            t = lt.transfer_matrix(p, case, g).matrix
            b = ctx.lam()
            tb = t.eval(b)
            ctx.add("transfer_commutativity_laurent", (t @ tb).coeff_residual(tb @ t), lambdas=[b],
                    case=case, gradation=g)


@check("transfer_routes_agree", "transfer", max_n=6)
def _transfer_routes(ctx):
    for g in ctx.gradations:
        p = ctx.params.with_(gradation=g)
        D = lt.doubled_monodromy(p, g)
        ctx.add("transfer_routes_agree", D.coeff_residual(lt.doubled_monodromy_product(p, g)),
                gradation=g, message="gate build vs matrix product")
        lams = ctx.lams(4)
        res = max(rel_residual(D.eval(a), lt.doubled_monodromy_at(p, a, g)) for a in lams)
        ctx.add("transfer_routes_agree", res, lambdas=lams, gradation=g, message="Laurent vs numeric")


@check("closed_transfer_commutativity", "transfer", max_n=6)
def _closed_com(ctx):
    t = lt.closed_transfer(_params_h(ctx))
    a, b = ctx.lam(), ctx.lam()
    ta, tb = t.eval(a), t.eval(b)
    ctx.add("closed_transfer_commutativity", rel_residual(ta @ tb, tb @ ta), lambdas=[a, b])


@check("gauge_invariance", "gauge", max_n=6)
def _gauge(ctx):
    ph = ctx.params.with_(gradation="homogeneous")
    pp = ctx.params.with_(gradation="principal")
    Dh, Dp = lt.doubled_monodromy(ph, "homogeneous"), lt.doubled_monodromy(pp, "principal")
    ctx.add("gauge_invariance", lt.gauge_aux(Dh, 1, 1).coeff_residual(Dp), factor=0.01,
            message="V T V vs principal build")
    for case in ctx.cases:
        lams = ctx.lams(10)
        # principal t carries the scalar e^lambda of the V K V right boundary
        res = max(rel_residual(cmath.exp(-a) * lt.transfer_at(pp, case, a, "principal"),
                               lt.transfer_at(ph, case, a, "homogeneous")) for a in lams)
        ctx.add("gauge_invariance", res, lambdas=lams, case=case, message="t_p = e^l t_h")


# ---------------------------------------------------------------------------
# charges and intertwiners


@check("charge_routes", "charges", max_n=6)
def _charge_routes(ctx):
    p = _params_h(ctx)
    ah = ch.extract_charges_asymptotic(p, "homogeneous")
    ap = ch.extract_charges_asymptotic(p.with_(gradation="principal"), "principal")
    for i in (1, 2):
        ref = ch.charge_tower(i, p, "closed_form")
        others = {
            "recursion": ch.charge_tower(i, p, "recursion"),
            "unshifted_recursion": ch.charge_tower(i, p, "unshifted_recursion"),
            "asymptotic_principal": ap.Q1 if i == 1 else ap.Q2,
        }
        if i == 1:
            others["asymptotic_homogeneous"] = ah.Q1
        for route, q in others.items():
            ctx.add("charge_routes", rel_residual(q, ref), message=f"Q{i} closed_form vs {route}")


@check("intertwiner_k", "intertwiners", per_n=False)
def _int_k(ctx):
    for i in (1, 2):
        lams = ctx.lams()
        ctx.add("intertwiner_k", max(ch.intertwiner_residual_K(i, a, ctx.params) for a in lams),
                lambdas=lams, message=f"Q{i}")


@check("intertwiner_l", "intertwiners", per_n=False)
def _int_l(ctx):
    p = _params_h(ctx)
    for g in ("e1", "f1", "k1", "e2", "f2", "k2"):
        lams = ctx.lams(5)
        ctx.add("intertwiner_l", max(ch.intertwiner_residual_L(g, a, p) for a in lams),
                lambdas=lams, message=g)


@check("intertwiner_t", "intertwiners")
def _int_t(ctx):
    p = _params_h(ctx)
    for i in (1, 2):
        qc = ch.charge_tower(i, p)
        lams = ctx.lams(10)
        res = max(ch.intertwiner_residual_T(i, a, p, q_chain=qc) for a in lams)
        ctx.add("intertwiner_t", res, lambdas=lams, message=f"Q{i}")


def exchange_residuals(params: ModelParams, lam: complex, i: int, x_override: complex | None = None,
                       big: np.ndarray | None = None) -> dict[str, float]:
    """Residuals of the four commutation relations between Q_i and the blocks of T."""
    if big is None:
        big = lt.doubled_monodromy_at(params, lam, "homogeneous")
    a1, b, c, a2 = aux_blocks(big)
    qc = ch.charge_tower(i, params)
    x = params.x1 if i == 1 else params.x2
    if x_override is not None:
        x = x_override
    eta = 1 if i == 1 else -1
    q = params.q
    mu = params.mu
    bc = b - c
    e = cmath.exp
    out = {}
    rhs = e(lam - eta * (lam + 1j * mu)) * bc
    out["[Q,A1]"] = scaled_residual(qc @ a1 - a1 @ qc - rhs, qc @ a1, a1 @ qc, rhs)
    rhs = -e(-lam + eta * (lam + 1j * mu)) * bc
    out["[Q,A2]"] = scaled_residual(qc @ a2 - a2 @ qc - rhs, qc @ a2, a2 @ qc, rhs)
    qf = q ** (-eta)
    rhs = e(lam - eta * lam) * a2 - e(-lam + eta * lam) * a1 + x * (q**eta - q**-eta) * c
    out["[Q,C]_q"] = scaled_residual(q_commutator(qc, c, qf) - rhs, qf * qc @ c, c @ qc / qf, rhs)
    qf = q**eta
    rhs = e(-lam + eta * lam) * a1 - e(lam - eta * lam) * a2 + x * (q**-eta - q**eta) * b
    out["[Q,B]_q"] = scaled_residual(q_commutator(qc, b, qf) - rhs, qf * qc @ b, b @ qc / qf, rhs)
    return out


@check("exchange_relations", "exchange")
def _exchange(ctx):
    p = _params_h(ctx)
    lams = ctx.lams()
    bigs = [lt.doubled_monodromy_at(p, a, "homogeneous") for a in lams]
    for i in (1, 2):
        worst: dict[str, float] = {}
        for a, big in zip(lams, bigs):
            for k, v in exchange_residuals(p, a, i, big=big).items():
                worst[k] = max(worst.get(k, 0.0), v)
        for k, v in worst.items():
            ctx.add("exchange_relations", v, lambdas=lams[:2], message=f"i={i} {k}")


def symmetry_residuals(params: ModelParams, case: str, lam: complex) -> dict[str, float]:
    """Vanishing commutators of t with the charges and the exact remainders."""
    big = lt.doubled_monodromy_at(params, lam, "homogeneous")
    t = lt.transfer_at(params, case, lam, "homogeneous", big=big)
    _, b, c, _ = aux_blocks(big)
    q1, q2 = ch.charge_tower(1, params), ch.charge_tower(2, params)
    bc = b - c
    s2 = 2 * cmath.sinh(2 * (lam + 1j * params.mu))
    s1 = 2 * cmath.sinh(lam + 1j * params.mu)

    def com(q, rhs=None):
        if rhs is None:
            return rel_residual(t @ q, q @ t)
        return scaled_residual(t @ q - q @ t - rhs, t @ q, q @ t, rhs)

    if case == "I":
        return {"[t,Q1]=0": com(q1), "[t,Q2]=-2sinh2(l+imu)(B-C)": com(q2, -s2 * bc)}
    if case == "II":
        return {"[t,Q2]=0": com(q2), "[t,Q1]=2sinh2(l+imu)(B-C)": com(q1, s2 * bc)}
    return {
        "[t,Q1+Q2]=0": com(q1 + q2),
        "[t,Q1]=2sinh(l+imu)(B-C)": com(q1, s1 * bc),
        "[t,Q2]=-2sinh(l+imu)(B-C)": com(q2, -s1 * bc),
        "info:[t,Q1]=-2sinh(l+imu)(B-C)": com(q1, -s1 * bc),
    }


@check("symmetry", "symmetry")
def _symmetry(ctx):
    p = _params_h(ctx)
    for case in ctx.cases:
        lams = ctx.lams()
        worst: dict[str, float] = {}
        for a in lams:
            for k, v in symmetry_residuals(p, case, a).items():
                worst[k] = max(worst.get(k, 0.0), v)
        for k, v in worst.items():
            if k.startswith("info:"):
                ctx.add("symmetry", v, lambdas=lams[:2], case=case, gradation="homogeneous", kind=INFO,
                        message=k[5:] + " (opposite sign; recorded only)")
            else:
                ctx.add("symmetry", v, lambdas=lams[:2], case=case, gradation="homogeneous", message=k)


@check("blob_charge_commutation", "blob_charge")
def _blob_charge(ctx):
    p = _params_h(ctx)
    U = blob_generators(p)
    q1, q2 = ch.charge_tower(1, p), ch.charge_tower(2, p)
    ctx.add("blob_charge_commutation", rel_residual(U[0] @ q1, q1 @ U[0]), message="[U0,Q1]")
    gens = {g: coproduct_tower(g, p) for g in ("k1", "e1", "f1")}
    worst = 0.0
    for l in range(1, p.N):
        for y in gens.values():
            worst = max(worst, rel_residual(U[l] @ y, y @ U[l]))
    if p.N > 1:
        ctx.add("blob_charge_commutation", worst, message="[U_l, K1/E1/F1], l>=1")
    worst = max(rel_residual(u @ q1, q1 @ u) for u in U)
    ctx.add("blob_charge_commutation", worst, message="[U_l,Q1], all l")
    ctx.add("blob_charge_commutation", rel_residual(U[0] @ q2, q2 @ U[0]), kind=INFO,
            message="[U0,Q2] (not expected to vanish)")


@check("hamiltonian", "hamiltonian", max_n=8)
def _hamiltonian(ctx):
    p = _params_h(ctx)
    hs = {r: lt.hamiltonian(p, r) for r in ("derivative", "blob", "pauli")}
    ctx.add("hamiltonian", rel_residual(hs["derivative"], hs["blob"]), factor=10, message="derivative vs blob")
    ctx.add("hamiltonian", rel_residual(hs["blob"], hs["pauli"]), factor=10, message="blob vs pauli")
    ctx.add("hamiltonian", rel_residual(hs["derivative"], hs["pauli"]), factor=10, message="derivative vs pauli")
    if p.N <= lt.MAX_LAURENT_SITES:
        ctx.add("hamiltonian", rel_residual(lt.hamiltonian(p, "laurent_derivative"), hs["blob"]), kind=INFO,
                message="Laurent-coefficient derivative vs blob (cancellation-limited)")
    q1 = ch.charge_tower(1, p)
    h = hs["blob"]
    ctx.add("hamiltonian", rel_residual(h @ q1, q1 @ h), message="[H,Q1]")


def braid_residual(params: ModelParams, sign: int, scale: complex = 1.0) -> float:
    tp = scale * ch.asymptotic_block_matrix(params)
    d = 2**params.N
    eye = np.eye(d)
    g = tl_generator_local(params.q) + params.q * np.eye(4)
    gp = PERM @ g
    gs = PERM @ (g if sign > 0 else np.linalg.inv(g))
    hat = lambda m: PERM @ m @ PERM  # noqa: E731
    sw = np.kron(PERM, eye)
    t1 = sw @ np.kron(I2, tp) @ sw
    t2 = np.kron(I2, tp)
    big = lambda m: np.kron(m, eye)  # noqa: E731
    lhs = big(gs) @ t1 @ big(hat(gp)) @ t2
    rhs = t2 @ big(gp) @ t1 @ big(hat(gs))
    return rel_residual(lhs, rhs)


@check("braid", "braid", max_n=3)
def _braid(ctx):
    p = _params_h(ctx)
    for sign in (1, -1):
        ctx.add("braid", braid_residual(p, sign), message=f"sign {'+' if sign > 0 else '-'}")
    r1, r3 = braid_residual(p, 1), braid_residual(p, 1, 3.0)
    ctx.add("braid", abs(r1 - r3), kind=INFO, message="residual change under T+ -> 3 T+")


# ---------------------------------------------------------------------------
# deliberate-breakage controls: these must report large residuals


@check("control_exchange_x1", "controls")
def _control_x1(ctx):
    p = _params_h(ctx)
    lams = ctx.lams(3)
    res = max(exchange_residuals(p, a, 1, x_override=p.x1 + 0.1)["[Q,C]_q"] for a in lams)
    ctx.add("control_exchange_x1", res, kind=CONTROL, lambdas=lams, tolerance=CONTROL_THRESHOLD,
            message="x1 -> x1 + 0.1 in [Q1,C]_q")


@check("control_intertwiner_m", "controls", per_n=False)
def _control_m(ctx):
    shifted = ctx.params.with_(m=ctx.params.m + 0.1)
    K = lt.k_right(shifted, "blob", "homogeneous")
    lams = ctx.lams(3)
    res = max(ch.intertwiner_residual_K(1, a, ctx.params, k_matrix=K) for a in lams)
    ctx.add("control_intertwiner_m", res, kind=CONTROL, lambdas=lams, tolerance=CONTROL_THRESHOLD,
            message="m -> m + 0.1 in K only")


@check("control_symmetry_case", "controls")
def _control_case(ctx):
    p = _params_h(ctx)
    lams = ctx.lams(3)
    q1 = ch.charge_tower(1, p)
    res = 0.0
    for a in lams:
        t = lt.transfer_at(p, "II", a, "homogeneous")
        res = max(res, rel_residual(t @ q1, q1 @ t))
    ctx.add("control_symmetry_case", res, kind=CONTROL, lambdas=lams, tolerance=CONTROL_THRESHOLD,
            case="II", message="[t_II, Q1] must not vanish")


GROUPS = sorted({c.group for c in REGISTRY.values()})


def select(names) -> list[Check]:
    """Checks matching any of ``names`` (check names or group names); all if empty."""
    if not names:
        return list(REGISTRY.values())
    names = set(names)
    unknown = names - set(REGISTRY) - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown checks or groups: {sorted(unknown)}")
    return [c for c in REGISTRY.values() if c.name in names or c.group in names]


__all__ = [
    "REGISTRY", "GROUPS", "Check", "CheckContext", "select", "ybe_residual", "ybe_laurent_residual",
    "reflection_residual", "exchange_residuals", "symmetry_residuals", "braid_residual",
]
