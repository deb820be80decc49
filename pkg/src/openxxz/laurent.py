"""Laurent polynomials in ``u = exp(lambda)`` with complex coefficients.

``LaurentPoly`` is the scalar ring used for every spectral-parameter function
(``sinh(lambda + c)``, K-matrix entries, ...).  ``LaurentMatrix`` stores a
matrix-valued Laurent polynomial as a dense stack of coefficient matrices,
which is how R, L, K, monodromies and transfer matrices are held.

Because ``u = e^lambda``, differentiation in lambda maps ``c_n u^n`` to
``n c_n u^n`` and the lambda -> +/-inf behaviour is read off the extreme degrees.
"""
from __future__ import annotations

import cmath
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionError, NoAsymptoticTermError

PRUNE_REL = 1e-14


def _prune(coeffs: Mapping[int, complex]) -> dict[int, complex]:
    if not coeffs:
        return {}
    scale = max(abs(c) for c in coeffs.values())
    if scale == 0.0:
        return {}
    cut = PRUNE_REL * scale
    return {n: complex(c) for n, c in coeffs.items() if abs(c) > cut}


class LaurentPoly:
    """Finite sum ``sum_n c_n u^n``.  Immutable."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        self._c = _prune(coeffs or {})

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c: complex) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, n: int, c: complex = 1.0) -> "LaurentPoly":
        return cls({n: c})

    @classmethod
    def exp(cls, k: int, shift: complex = 0.0) -> "LaurentPoly":
        """``exp(k*lambda + shift)``."""
        return cls({k: cmath.exp(shift)})

    @classmethod
    def sinh(cls, k: int = 1, shift: complex = 0.0) -> "LaurentPoly":
        """``sinh(k*lambda + shift)``."""
        if k == 0:
            return cls.const(cmath.sinh(shift))
        return cls({k: 0.5 * cmath.exp(shift), -k: -0.5 * cmath.exp(-shift)})

    @classmethod
    def cosh(cls, k: int = 1, shift: complex = 0.0) -> "LaurentPoly":
        if k == 0:
            return cls.const(cmath.cosh(shift))
        return cls({k: 0.5 * cmath.exp(shift), -k: 0.5 * cmath.exp(-shift)})

    # access ---------------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._c)

    def __getitem__(self, n: int) -> complex:
        return self._c.get(n, 0j)

    def is_zero(self) -> bool:
        return not self._c

    def degrees(self) -> list[int]:
        return sorted(self._c)

    def support(self) -> tuple[int, int]:
        if not self._c:
            raise NoAsymptoticTermError("zero polynomial has empty support")
        return min(self._c), max(self._c)

    # ring ops -----------------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._c)
        for n, c in other._c.items():
            out[n] = out.get(n, 0j) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({n: -c for n, c in self._c.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, complex] = {}
        for n, a in self._c.items():
            for k, b in other._c.items():
                out[n + k] = out.get(n + k, 0j) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = _as_poly(other)
        keys = set(self._c) | set(other._c)
        return all(abs(self[n] - other[n]) <= atol for n in keys)

    # analysis -----------------------------------------------------------
    def __call__(self, lam: complex) -> complex:
        return lp_eval(self, lam)

    def d_lambda(self) -> "LaurentPoly":
        return lp_d_lambda(self)

    def leading(self, direction: str = "plus_infinity") -> tuple[int, complex]:
        return lp_leading(self, direction)

    def substitute(self, scale: int = 1, shift: complex = 0.0) -> "LaurentPoly":
        """``p(scale*lambda + shift)``; ``scale`` must be an integer."""
        return LaurentPoly({scale * n: c * cmath.exp(n * shift) for n, c in self._c.items()})

    def __repr__(self):
        if not self._c:
            return "LaurentPoly(0)"
        terms = " + ".join(f"({c:.6g})u^{n}" for n, c in sorted(self._c.items()))
        return f"LaurentPoly({terms})"


def _as_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, Number):
        return LaurentPoly.const(complex(x))
    return NotImplemented


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_eval(p: LaurentPoly, lam: complex) -> complex:
    return sum((c * cmath.exp(n * lam) for n, c in p._c.items()), 0j)


def lp_d_lambda(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({n: n * c for n, c in p._c.items() if n != 0})


def lp_leading(p: LaurentPoly, direction: str = "plus_infinity") -> tuple[int, complex]:
    """Extreme degree and its coefficient.  Raises on the zero polynomial."""
    if p.is_zero():
        raise NoAsymptoticTermError("zero polynomial has no asymptotic term")
    if direction in ("plus_infinity", "+", "+inf"):
        n = max(p._c)
    elif direction in ("minus_infinity", "-", "-inf"):
        n = min(p._c)
    else:
        raise ValueError(f"direction must be plus_infinity or minus_infinity, got {direction!r}")
    return n, p._c[n]


# ---------------------------------------------------------------------------
# matrix-valued Laurent polynomials


class LaurentMatrix:
    """``sum_{k} C_k u^{lo+k}`` with ``C_k`` dense ``(n, n)`` complex matrices.

    Treated as immutable: operations return new objects.  For operators on
    ``aux (x) chain`` the auxiliary qubit is the most significant index, so
    ``block(i, j)`` returns the chain-space entry ``(i, j)`` of the 2x2 aux grid.
    """

    __slots__ = ("lo", "coeffs")
    # let ndarray @ LaurentMatrix fall through to __rmatmul__
    __array_ufunc__ = None

    def __init__(self, lo: int, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.ndim != 3 or coeffs.shape[1] != coeffs.shape[2]:
            raise DimensionError(f"coefficient stack must be (k, n, n), got {coeffs.shape}")
        self.lo = int(lo)
        self.coeffs = coeffs
        self._trim()

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, n: int) -> "LaurentMatrix":
        return cls(0, np.zeros((0, n, n), dtype=np.complex128))

    @classmethod
    def constant(cls, mat) -> "LaurentMatrix":
        mat = np.asarray(mat, dtype=np.complex128)
        return cls(0, mat[None])

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls.constant(np.eye(n))

    @classmethod
    def from_terms(cls, terms: Mapping[int, np.ndarray], n: int | None = None) -> "LaurentMatrix":
        terms = {k: np.asarray(v, dtype=np.complex128) for k, v in terms.items()}
        if not terms:
            if n is None:
                raise ValueError("dimension needed for an empty term map")
            return cls.zeros(n)
        lo, hi = min(terms), max(terms)
        dim = next(iter(terms.values())).shape[0]
        stack = np.zeros((hi - lo + 1, dim, dim), dtype=np.complex128)
        for k, v in terms.items():
            stack[k - lo] += v
        return cls(lo, stack)

    @classmethod
    def from_entries(cls, entries: Iterable[Iterable[LaurentPoly | Number]]) -> "LaurentMatrix":
        """Build from a square nested list of ``LaurentPoly`` (or numbers)."""
        rows = [[_as_poly(e) for e in row] for row in entries]
        n = len(rows)
        terms: dict[int, np.ndarray] = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimensionError("entry grid must be square")
            for j, p in enumerate(row):
                for deg, c in p.coeffs.items():
                    terms.setdefault(deg, np.zeros((n, n), dtype=np.complex128))[i, j] += c
        return cls.from_terms(terms, n)

    @classmethod
    def from_blocks(cls, blocks) -> "LaurentMatrix":
        """Assemble a 2x2 grid of equally sized ``LaurentMatrix`` blocks."""
        flat = [b for row in blocks for b in row]
        d = flat[0].dim
        lo = min(b.lo for b in flat if b.nterms) if any(b.nterms for b in flat) else 0
        hi = max(b.hi for b in flat if b.nterms) if any(b.nterms for b in flat) else -1
        stack = np.zeros((max(hi - lo + 1, 0), 2 * d, 2 * d), dtype=np.complex128)
        for i, row in enumerate(blocks):
            for j, b in enumerate(row):
                if b.dim != d:
                    raise DimensionError("blocks must share a dimension")
                if b.nterms:
                    stack[b.lo - lo : b.hi - lo + 1, i * d : (i + 1) * d, j * d : (j + 1) * d] = b.coeffs
        return cls(lo, stack)

    # basic properties ---------------------------------------------------
    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def nterms(self) -> int:
        return self.coeffs.shape[0]

    @property
    def hi(self) -> int:
        return self.lo + self.nterms - 1

    def degree_range(self) -> tuple[int, int]:
        if not self.nterms:
            raise NoAsymptoticTermError("zero matrix polynomial has empty support")
        return self.lo, self.hi

    def is_zero(self) -> bool:
        return self.nterms == 0

    def coeff(self, n: int) -> np.ndarray:
        if self.nterms and self.lo <= n <= self.hi:
            return self.coeffs[n - self.lo].copy()
        return np.zeros((self.dim, self.dim), dtype=np.complex128)

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly({self.lo + k: self.coeffs[k, i, j] for k in range(self.nterms)})

    def _trim(self):
        if not self.nterms:
            return
        norms = np.abs(self.coeffs).reshape(self.nterms, -1).max(axis=1)
        top = norms.max()
        if top == 0.0:
            self.coeffs = self.coeffs[:0]
            return
        keep = np.nonzero(norms > PRUNE_REL * top)[0]
        a, b = keep[0], keep[-1]
        if a or b != self.nterms - 1:
            self.coeffs = self.coeffs[a : b + 1]
            self.lo += int(a)

    # arithmetic -----------------------------------------------------------
    def _aligned(self, other: "LaurentMatrix"):
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch {self.dim} vs {other.dim}")
        if not self.nterms:
            return other.lo, np.zeros_like(other.coeffs), other.coeffs
        if not other.nterms:
            return self.lo, self.coeffs, np.zeros_like(self.coeffs)
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        a = np.zeros((hi - lo + 1, self.dim, self.dim), dtype=np.complex128)
        b = np.zeros_like(a)
        a[self.lo - lo : self.hi - lo + 1] = self.coeffs
        b[other.lo - lo : other.hi - lo + 1] = other.coeffs
        return lo, a, b

    def __add__(self, other):
        if isinstance(other, np.ndarray):
            other = LaurentMatrix.constant(other)
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        lo, a, b = self._aligned(other)
        return LaurentMatrix(lo, a + b)

    __radd__ = __add__

    def __neg__(self):
        return LaurentMatrix(self.lo, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, np.ndarray):
            other = LaurentMatrix.constant(other)
        return self + (-other)

    def __mul__(self, other):
        """Scalar multiplication by a number or a ``LaurentPoly``."""
        if isinstance(other, Number):
            return LaurentMatrix(self.lo, self.coeffs * complex(other))
        if isinstance(other, LaurentPoly):
            if other.is_zero() or not self.nterms:
                return LaurentMatrix.zeros(self.dim)
            dl, dh = other.support()
            stack = np.zeros((self.nterms + dh - dl, self.dim, self.dim), dtype=np.complex128)
            for n, c in other.coeffs.items():
                stack[n - dl : n - dl + self.nterms] += c * self.coeffs
            return LaurentMatrix(self.lo + dl, stack)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, np.ndarray):
            return LaurentMatrix(self.lo, self.coeffs @ other)
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch {self.dim} vs {other.dim}")
        if not self.nterms or not other.nterms:
            return LaurentMatrix.zeros(self.dim)
        stack = np.zeros((self.nterms + other.nterms - 1, self.dim, self.dim), dtype=np.complex128)
        # one batched product per left coefficient
        for k in range(self.nterms):
            stack[k : k + other.nterms] += self.coeffs[k] @ other.coeffs
        return LaurentMatrix(self.lo + other.lo, stack)

    def __rmatmul__(self, other):
        if isinstance(other, np.ndarray):
            return LaurentMatrix(self.lo, other @ self.coeffs)
        return NotImplemented

    def kron(self, other) -> "LaurentMatrix":
        """``self (x) other`` for a constant matrix ``other``."""
        other = np.asarray(other, dtype=np.complex128)
        stack = np.stack([np.kron(c, other) for c in self.coeffs]) if self.nterms else \
            np.zeros((0, self.dim * other.shape[0], self.dim * other.shape[0]), dtype=np.complex128)
        return LaurentMatrix(self.lo, stack)

    def shift_degree(self, k: int) -> "LaurentMatrix":
        """Multiply by ``u^k``."""
        return LaurentMatrix(self.lo + k, self.coeffs)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.lo, self.coeffs.transpose(0, 2, 1))

    def conjugate_by(self, perm: np.ndarray) -> "LaurentMatrix":
        """``P @ self @ P^T`` for a constant (permutation) matrix ``P``."""
        return LaurentMatrix(self.lo, perm @ self.coeffs @ perm.T)

    # analysis -----------------------------------------------------------
    def __call__(self, lam: complex) -> np.ndarray:
        return self.eval(lam)

    def eval(self, lam: complex) -> np.ndarray:
        if not self.nterms:
            return np.zeros((self.dim, self.dim), dtype=np.complex128)
        w = np.exp((self.lo + np.arange(self.nterms)) * complex(lam))
        return np.tensordot(w, self.coeffs, axes=(0, 0))

    def d_lambda(self) -> "LaurentMatrix":
        if not self.nterms:
            return self
        n = (self.lo + np.arange(self.nterms))[:, None, None]
        return LaurentMatrix(self.lo, self.coeffs * n)

    def substitute(self, shift: complex = 0.0, scale: int = 1) -> "LaurentMatrix":
        """``M(scale*lambda + shift)`` with integer ``scale`` (typically +/-1)."""
        if not self.nterms:
            return self
        degs = self.lo + np.arange(self.nterms)
        c = self.coeffs * np.exp(degs * complex(shift))[:, None, None]
        if scale == 1:
            return LaurentMatrix(self.lo, c)
        if scale == -1:
            return LaurentMatrix(-self.hi, c[::-1])
        return LaurentMatrix.from_terms({int(scale * d): c[k] for k, d in enumerate(degs)}, self.dim)

    def leading(self, direction: str = "plus_infinity", rel_tol: float = 1e-12) -> tuple[int, np.ndarray]:
        """Extreme degree whose coefficient exceeds ``rel_tol`` times the largest."""
        if not self.nterms:
            raise NoAsymptoticTermError("zero matrix polynomial has no asymptotic term")
        norms = np.abs(self.coeffs).reshape(self.nterms, -1).max(axis=1)
        big = np.nonzero(norms > rel_tol * norms.max())[0]
        k = big[-1] if direction in ("plus_infinity", "+", "+inf") else big[0]
        return self.lo + int(k), self.coeffs[k].copy()

    def block(self, i: int, j: int) -> "LaurentMatrix":
        d = self.dim // 2
        return LaurentMatrix(self.lo, self.coeffs[:, i * d : (i + 1) * d, j * d : (j + 1) * d])

    def max_abs_degree(self) -> int:
        return max(abs(self.lo), abs(self.hi)) if self.nterms else 0

    def allclose(self, other: "LaurentMatrix", atol: float = 1e-12) -> bool:
        return self.max_coeff_diff(other) <= atol

    def max_coeff_diff(self, other: "LaurentMatrix") -> float:
        _, a, b = self._aligned(other)
        return float(np.abs(a - b).max()) if a.size else 0.0

    def coeff_residual(self, other: "LaurentMatrix") -> float:
        """Coefficient-wise analogue of ``rel_residual``."""
        _, a, b = self._aligned(other)
        if not a.size:
            return 0.0
        num = np.linalg.norm((a - b).ravel())
        return float(num / max(1.0, np.linalg.norm(a.ravel()), np.linalg.norm(b.ravel())))

    def __repr__(self):
        if not self.nterms:
            return f"LaurentMatrix(dim={self.dim}, zero)"
        return f"LaurentMatrix(dim={self.dim}, degrees={self.lo}..{self.hi})"


def check_degree_bounds(obj: LaurentMatrix | LaurentPoly, lo: int, hi: int, what: str) -> None:
    """Raise ``ValueError`` if ``obj`` has support outside ``[lo, hi]``."""
    if isinstance(obj, LaurentPoly):
        if obj.is_zero():
            return
        a, b = obj.support()
    else:
        if obj.is_zero():
            return
        a, b = obj.degree_range()
    if a < lo or b > hi:
        raise ValueError(f"{what}: Laurent degrees {a}..{b} outside documented bound {lo}..{hi}")
