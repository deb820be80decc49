"""Randomized identities over the parameter space."""
import numpy as np
from hypothesis import given, settings, strategies as st

from openxxz import charges as ch
from openxxz import checks
from openxxz import lattice as lt
from openxxz.algebra import make_params
from openxxz.tensor import rel_residual

mus = st.floats(0.1, 1.4).filter(lambda m: abs(np.cos(m)) > 0.05)
ms = st.floats(0.1, 1.5)
zetas = st.floats(-0.4, 0.4)
lams = st.builds(complex, st.floats(-1.5, 1.5), st.floats(-1.0, 1.0))
grads = st.sampled_from(["homogeneous", "principal"])


@given(mus, lams, lams, grads)
def test_yang_baxter(mu, l1, l2, g):
    p = make_params(mu, 0.5, 0.1, 1)
    assert checks.ybe_residual(lt.r_matrix(p, g), l1, l2) < 1e-10


@given(mus, ms, zetas, lams, lams, grads, st.sampled_from(["blob", "explicit"]))
def test_reflection_equation(mu, m, z, l1, l2, g, form):
    p = make_params(mu, m, z, 1)
    k = lt.k_right(p, form, g)
    assert checks.reflection_residual(lt.r_matrix(p, g), k(l1), k(l2), l1, l2) < 1e-10


@settings(max_examples=15)
@given(mus, ms, zetas, st.integers(1, 3), lams, lams, st.sampled_from(lt.CASES), grads)
def test_transfer_commutativity(mu, m, z, N, l1, l2, case, g):
    p = make_params(mu, m, z, N, g)
    a, b = lt.transfer_at(p, case, l1, g), lt.transfer_at(p, case, l2, g)
    assert rel_residual(a @ b, b @ a) < 1e-10


@settings(max_examples=15)
@given(mus, ms, zetas, st.integers(1, 3), lams)
def test_charges_intertwine(mu, m, z, N, lam):
    p = make_params(mu, m, z, N)
    for i in (1, 2):
        assert ch.intertwiner_residual_K(i, lam, p) < 1e-10
        assert ch.intertwiner_residual_T(i, lam, p) < 1e-10


@settings(max_examples=15)
@given(mus, ms, zetas, st.integers(1, 4))
def test_hamiltonian_commutes_with_q1(mu, m, z, N):
    p = make_params(mu, m, z, N)
    if not p.hamiltonian_regular or abs(p.x0) < 1e-3:
        return
    h = lt.hamiltonian(p, "blob")
    q1 = ch.charge_tower(1, p)
    assert rel_residual(h @ q1, q1 @ h) < 1e-10
    assert rel_residual(lt.hamiltonian(p, "derivative"), h) < 1e-9
