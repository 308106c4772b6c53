"""Homogeneous polynomial systems with the Weyl (Bombieri) inner product.

Polynomials are stored sparsely as a map from exponent multi-indices to
real coefficients.  All objects are immutable after construction and every
operation is a pure function, so everything here is safe to share between
threads.

Points on the unit sphere are plain numpy arrays; ``sphere_point`` checks
the unit-norm invariant and ``normalize`` produces one from any nonzero
vector.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "HomogeneousPolynomial",
    "AffinePolynomial",
    "PolynomialSystem",
    "sphere_point",
    "normalize",
    "weyl_inner",
    "weyl_norm",
    "kernel_eval",
    "kernel_polynomial",
    "rotate",
    "lift_affine",
    "derivative_tensor",
    "multinomial",
    "system_to_json",
    "system_from_json",
]


def multinomial(d, exponents):
    """d! / (a_0! a_1! ... a_n!) for a multi-index with |a| = d."""
    out = math.factorial(d)
    for a in exponents:
        out //= math.factorial(a)
    return out


def normalize(x):
    x = np.asarray(x, dtype=float)
    nrm = float(np.linalg.norm(x))
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return x / nrm


def sphere_point(coords, tol=1e-12):
    """Validate that ``coords`` lies on the unit sphere (within ``tol``)."""
    x = np.asarray(coords, dtype=float)
    if abs(float(np.linalg.norm(x)) - 1.0) > tol:
        raise ValueError(f"point is not on the unit sphere: |x| = {np.linalg.norm(x)}")
    return x


# ---------------------------------------------------------------------------
# sparse coefficient maps (internal helpers, used also by condition/rotation)

def _merge_term(coeffs, expo, c):
    if c == 0.0:
        return
    prev = coeffs.get(expo, 0.0)
    new = prev + c
    if new == 0.0:
        coeffs.pop(expo, None)
    else:
        coeffs[expo] = new


def poly_mul(a, b):
    """Multiply two sparse coefficient maps."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            _merge_term(out, tuple(x + y for x, y in zip(ea, eb)), ca * cb)
    return out


def poly_pow(a, k, n_vars):
    out = {(0,) * n_vars: 1.0}
    for _ in range(k):
        out = poly_mul(out, a)
    return out


def linear_form(v):
    """Coefficient map of the linear form x -> <v, x>."""
    n_vars = len(v)
    out = {}
    for j, c in enumerate(v):
        if c != 0.0:
            e = [0] * n_vars
            e[j] = 1
            out[tuple(e)] = float(c)
    return out


def _graded_lex_key(expo):
    # all terms of a homogeneous polynomial share the degree, so this is
    # plain reverse-lex within each degree; kept graded for affine inputs
    return (sum(expo), tuple(-e for e in expo))


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """A single homogeneous polynomial in ``n_vars`` real variables.

    ``coefficients`` maps exponent tuples (length ``n_vars``, summing to
    ``degree``) to nonzero floats; missing entries are zero.
    """

    n_vars: int
    degree: int
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        clean = {}
        for expo, c in self.coefficients.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != self.n_vars:
                raise ValueError(f"multi-index {expo} has wrong arity")
            if any(e < 0 for e in expo):
                raise ValueError(f"negative exponent in {expo}")
            if sum(expo) != self.degree:
                raise ValueError(
                    f"multi-index {expo} has degree {sum(expo)}, expected {self.degree}"
                )
            c = float(c)
            if not math.isfinite(c):
                raise ValueError("coefficients must be finite")
            if c != 0.0:
                clean[expo] = c
        object.__setattr__(self, "coefficients", clean)

    def terms(self):
        """Terms in graded-lexicographic order (deterministic)."""
        return sorted(self.coefficients.items(), key=lambda t: _graded_lex_key(t[0]))

    def __call__(self, x):
        return evaluate(self, x)

    def gradient_polys(self):
        """The n_vars partial derivatives as coefficient maps."""
        grads = [dict() for _ in range(self.n_vars)]
        for expo, c in self.coefficients.items():
            for j, e in enumerate(expo):
                if e > 0:
                    de = list(expo)
                    de[j] = e - 1
                    _merge_term(grads[j], tuple(de), c * e)
        return grads


@dataclass(frozen=True)
class AffinePolynomial:
    """A (not necessarily homogeneous) polynomial, input to ``lift_affine``."""

    n_vars: int
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for expo, c in self.coefficients.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != self.n_vars:
                raise ValueError(f"multi-index {expo} has wrong arity")
            c = float(c)
            if c != 0.0:
                clean[expo] = c
        if not clean:
            raise ValueError("zero polynomial")
        object.__setattr__(self, "coefficients", clean)

    @property
    def degree(self):
        return max(sum(e) for e in self.coefficients)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        total = 0.0
        for expo, c in sorted(self.coefficients.items(), key=lambda t: _graded_lex_key(t[0])):
            term = c
            for xj, e in zip(x, expo):
                term *= xj**e
            total += term
        return total


@dataclass(frozen=True)
class PolynomialSystem:
    """n homogeneous polynomials in n+1 variables."""

    polynomials: tuple

    def __post_init__(self):
        polys = tuple(self.polynomials)
        if not polys:
            raise ValueError("empty system")
        n_vars = polys[0].n_vars
        if any(p.n_vars != n_vars for p in polys):
            raise ValueError("all polynomials must share the same number of variables")
        if n_vars != len(polys) + 1:
            raise ValueError(
                f"expected {len(polys) + 1} variables for a system of {len(polys)} "
                f"polynomials, got {n_vars}"
            )
        object.__setattr__(self, "polynomials", polys)

    @property
    def n(self):
        return len(self.polynomials)

    @property
    def n_vars(self):
        return self.polynomials[0].n_vars

    @property
    def degrees(self):
        return tuple(p.degree for p in self.polynomials)

    @property
    def max_degree(self):
        return max(self.degrees)

    @property
    def weyl_norm(self):
        return math.sqrt(sum(weyl_inner(p, p) for p in self.polynomials))

    @property
    def coefficient_dimension(self):
        """dim of the coefficient space: sum_i C(d_i + n, n)."""
        n = self.n
        return sum(math.comb(d + n, n) for d in self.degrees)

    @property
    def bezout_number(self):
        return math.prod(self.degrees)

    def scaled(self, factor):
        return PolynomialSystem(tuple(
            HomogeneousPolynomial(p.n_vars, p.degree,
                                  {e: factor * c for e, c in p.coefficients.items()})
            for p in self.polynomials))

    def normalized(self):
        """The system rescaled to unit Weyl norm."""
        nrm = self.weyl_norm
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero system")
        return self.scaled(1.0 / nrm)

    def __call__(self, x):
        return evaluate(self, x)


# ---------------------------------------------------------------------------
# evaluation and derivatives

def evaluate(f, x):
    """Evaluate a polynomial or a system at a point.

    Returns a float for a single polynomial, a length-n vector for a system.
    """
    if isinstance(f, PolynomialSystem):
        return np.array([evaluate(p, x) for p in f.polynomials])
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n_vars,):
        raise ValueError(f"expected a point with {f.n_vars} entries, got shape {x.shape}")
    total = 0.0
    for expo, c in f.terms():
        term = c
        for xj, e in zip(x, expo):
            if e:
                term *= xj**e
        total += term
    return total


def _term_values(expos, coeffs, X, cache):
    """sum_t c_t * prod_j X[:, j]**e_tj using a per-call power cache."""
    total = np.zeros(X.shape[0])
    for expo, c in zip(expos, coeffs):
        term = None
        for j, e in enumerate(expo):
            if e == 0:
                continue
            key = (j, e)
            p = cache.get(key)
            if p is None:
                p = X[:, j] ** e
                cache[key] = p
            term = p if term is None else term * p
        total += c if term is None else c * term
    return total


def evaluate_many(f, X):
    """Vectorized evaluation at many points.

    ``X`` has shape (N, n_vars).  Returns (N,) for a polynomial and
    (N, n) for a system.
    """
    X = np.asarray(X, dtype=float)
    if isinstance(f, PolynomialSystem):
        cache = {}
        cols = []
        for p in f.polynomials:
            expos, coeffs = zip(*p.terms())
            cols.append(_term_values(expos, coeffs, X, cache))
        return np.stack(cols, axis=1)
    expos, coeffs = zip(*f.terms())
    return _term_values(expos, coeffs, X, {})


def jacobian(F, x):
    """The n x (n+1) Jacobian matrix of a system at ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (F.n_vars,):
        raise ValueError(f"expected a point with {F.n_vars} entries, got shape {x.shape}")
    rows = []
    for p in F.polynomials:
        grads = p.gradient_polys()
        row = []
        for g in grads:
            v = 0.0
            for expo, c in g.items():
                term = c
                for xj, e in zip(x, expo):
                    if e:
                        term *= xj**e
                v += term
            row.append(v)
        rows.append(row)
    return np.array(rows)


def jacobian_many(F, X):
    """Vectorized Jacobians: shape (N, n, n_vars)."""
    X = np.asarray(X, dtype=float)
    N = X.shape[0]
    out = np.zeros((N, F.n, F.n_vars))
    cache = {}
    for i, p in enumerate(F.polynomials):
        for j, g in enumerate(p.gradient_polys()):
            if not g:
                continue
            expos, coeffs = zip(*sorted(g.items(), key=lambda t: _graded_lex_key(t[0])))
            out[:, i, j] = _term_values(expos, coeffs, X, cache)
    return out


_TENSOR_MAX_VARS = 5
_TENSOR_MAX_DEGREE = 6


def derivative_tensor(f, x, k):
    """The k-th derivative of ``f`` at ``x`` as a dense symmetric tensor.

    T[i1, ..., ik] = d^k f / dx_{i1} ... dx_{ik} evaluated at x, so that
    T(u, ..., u) = d^k/dt^k f(x + t u) at t = 0.  Dense storage, guarded to
    small sizes.
    """
    if f.n_vars > _TENSOR_MAX_VARS or f.degree > _TENSOR_MAX_DEGREE:
        raise ValueError("derivative_tensor is limited to n_vars <= 5 and degree <= 6")
    if not 0 <= k <= f.degree:
        raise ValueError(f"order k = {k} out of range for degree {f.degree}")
    x = np.asarray(x, dtype=float)
    n = f.n_vars
    shape = (n,) * k
    T = np.zeros(shape) if k else 0.0
    # differentiate the coefficient map k times along every index tuple
    def eval_map(m):
        v = 0.0
        for expo, c in m.items():
            term = c
            for xj, e in zip(x, expo):
                if e:
                    term *= xj**e
            v += term
        return v

    if k == 0:
        return eval_map(f.coefficients)
    for idx in np.ndindex(*shape):
        m = f.coefficients
        for j in idx:
            nxt = {}
            for expo, c in m.items():
                if expo[j] > 0:
                    de = list(expo)
                    de[j] = expo[j] - 1
                    _merge_term(nxt, tuple(de), c * expo[j])
            m = nxt
            if not m:
                break
        T[idx] = eval_map(m) if m else 0.0
    return T


def apply_tensor(T, *vectors):
    """Contract a dense symmetric tensor against k vectors."""
    out = np.asarray(T, dtype=float)
    for v in vectors:
        out = np.tensordot(out, np.asarray(v, dtype=float), axes=([out.ndim - 1], [0]))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Weyl inner product and the reproducing kernel

def weyl_inner(f, g):
    """sum_a f_a g_a / multinomial(d; a); orthogonally invariant."""
    if f.degree != g.degree or f.n_vars != g.n_vars:
        raise ValueError("Weyl inner product needs equal degree and arity")
    small, large = (f.coefficients, g.coefficients)
    if len(large) < len(small):
        small, large = large, small
    total = 0.0
    for expo, c in small.items():
        other = large.get(expo)
        if other is not None:
            total += c * other / multinomial(f.degree, expo)
    return total


def weyl_norm(f):
    if isinstance(f, PolynomialSystem):
        return f.weyl_norm
    return math.sqrt(weyl_inner(f, f))


def kernel_eval(d, x, y):
    """K_d(x, y) = <x, y>^d, the reproducing kernel value."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("kernel arguments must have equal arity")
    return float(np.dot(x, y)) ** d


def kernel_polynomial(d, y):
    """K_d(., y) as a polynomial: <f, K_d(., y)> = f(y) for all f."""
    y = np.asarray(y, dtype=float)
    n_vars = y.shape[0]
    coeffs = poly_pow(linear_form(y), d, n_vars)
    return HomogeneousPolynomial(n_vars, d, coeffs)


def rotate(f, Q, tol=1e-10):
    """The composition f(Q x) as a polynomial in x.

    ``Q`` must be orthogonal within ``tol``.
    """
    Q = np.asarray(Q, dtype=float)
    if isinstance(f, PolynomialSystem):
        return PolynomialSystem(tuple(rotate(p, Q, tol) for p in f.polynomials))
    if Q.shape != (f.n_vars, f.n_vars):
        raise ValueError("rotation matrix has wrong shape")
    if np.max(np.abs(Q.T @ Q - np.eye(f.n_vars))) > tol:
        raise ValueError("matrix is not orthogonal")
    # (Qx)_i = <row_i(Q), x>; expand each monomial as a product of powers
    # of these linear forms
    rows = [linear_form(Q[i]) for i in range(f.n_vars)]
    out = {}
    for expo, c in f.coefficients.items():
        term = {(0,) * f.n_vars: c}
        for i, e in enumerate(expo):
            if e:
                term = poly_mul(term, poly_pow(rows[i], e, f.n_vars))
        for te, tc in term.items():
            _merge_term(out, te, tc)
    return HomogeneousPolynomial(f.n_vars, f.degree, out)


# ---------------------------------------------------------------------------
# affine-to-sphere reduction

def homogenize(g):
    """Standard homogenization: prepend a variable x_0 of weight d - |a|."""
    d = g.degree
    coeffs = {}
    for expo, c in g.coefficients.items():
        coeffs[(d - sum(expo),) + expo] = c
    return HomogeneousPolynomial(g.n_vars + 1, d, coeffs)


def lift_affine(polys):
    """Lift an affine system of n polynomials in n variables to the sphere.

    Returns the system (f_1^h, ..., f_n^h, g) of n+1 homogeneous polynomials
    in n+2 variables (y_0, ..., y_n, u), where f_i^h is the standard
    homogenization of the i-th input and

        g(y, u) = y_0 u - (y_1^2 + ... + y_n^2).

    Counting: if every affine root is nondegenerate, the number of zeros of
    the lifted system on the unit sphere equals 2 (affine count + 1); the two
    extra zeros are (0, ..., 0, +-1).
    """
    polys = [p if isinstance(p, AffinePolynomial) else AffinePolynomial(p[0], p[1])
             for p in polys]
    n = len(polys)
    if any(p.n_vars != n for p in polys):
        raise ValueError(f"expected {n} polynomials in {n} variables")
    lifted = []
    for p in polys:
        h = homogenize(p)
        # extend arity with the extra variable u (exponent 0 everywhere)
        lifted.append(HomogeneousPolynomial(
            n + 2, h.degree, {e + (0,): c for e, c in h.coefficients.items()}))
    g_coeffs = {}
    e = [0] * (n + 2)
    e[0] = 1
    e[-1] = 1
    g_coeffs[tuple(e)] = 1.0
    for i in range(1, n + 1):
        e = [0] * (n + 2)
        e[i] = 2
        g_coeffs[tuple(e)] = -1.0
    lifted.append(HomogeneousPolynomial(n + 2, 2, g_coeffs))
    return PolynomialSystem(tuple(lifted))


def lifted_poles(n_vars):
    """The two zeros at infinity shared by every lifted system."""
    pole = np.zeros(n_vars)
    pole[-1] = 1.0
    return pole, -pole


# ---------------------------------------------------------------------------
# JSON interchange format

def system_to_json(F):
    """Canonical JSON document for a system."""
    return {
        "n": F.n,
        "degrees": list(F.degrees),
        "polynomials": [
            {"terms": [{"exponents": list(e), "coeff": c} for e, c in p.terms()]}
            for p in F.polynomials
        ],
    }


def system_from_json(doc):
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        n = int(doc["n"])
        degrees = [int(d) for d in doc["degrees"]]
        raw = doc["polynomials"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed system document: {exc}") from exc
    if len(degrees) != n or len(raw) != n:
        raise ValueError("system document: 'degrees' and 'polynomials' must have length n")
    polys = []
    for d, entry in zip(degrees, raw):
        coeffs = {}
        for term in entry["terms"]:
            expo = tuple(int(e) for e in term["exponents"])
            c = float(term["coeff"])
            if not math.isfinite(c):
                raise ValueError("coefficients must be finite doubles")
            if sum(expo) != d:
                raise ValueError(
                    f"exponents {expo} sum to {sum(expo)}, declared degree is {d}")
            _merge_term(coeffs, expo, c)
        polys.append(HomogeneousPolynomial(n + 1, d, coeffs))
    return PolynomialSystem(tuple(polys))
