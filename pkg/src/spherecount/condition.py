"""Singular values, the normalized condition number mu, and the counting
condition number kappa.

mu(f, x) is the Weyl norm of f divided by the smallest singular value of
the degree-scaled Jacobian restricted to the tangent space x-perp; 1/mu is
the distance from f to the systems whose restricted Jacobian at x is
singular (an Eckart-Young statement lifted through the reproducing-kernel
basis).  kappa(f, x) combines mu with the residual norm and its sphere
maximum governs the cost of the counting algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import polynomials as pl
from .mesh import build_mesh

__all__ = [
    "SingularSpectrum",
    "singular_values",
    "min_singular_value",
    "eckart_young_correction",
    "distance_to_rank_deficient",
    "tangent_basis",
    "restricted_jacobian",
    "mu",
    "mu_many",
    "kappa_point",
    "kappa_many",
    "kappa_grid",
    "minimal_singular_perturbation",
    "mu_variation_check",
    "multi_indices",
    "sample_gaussian_system",
    "kn_constant",
    "expected_ln_kappa_bound",
    "smoothed_ln_kappa_bound",
    "monte_carlo_ln_kappa",
]

_RANK_TOL = 1e-12
_SINGULAR_TOL = 1e-14


@dataclass(frozen=True)
class SingularSpectrum:
    """Nonzero singular values of a matrix, in non-increasing order."""

    values: tuple
    shape: tuple

    @property
    def rank(self):
        return len(self.values)

    @property
    def operator_norm(self):
        return self.values[0] if self.values else 0.0

    @property
    def frobenius_norm(self):
        return math.sqrt(sum(v * v for v in self.values))


def singular_values(A):
    A = np.atleast_2d(np.asarray(A, float))
    s = np.linalg.svd(A, compute_uv=False)
    cutoff = _RANK_TOL * (s[0] if s.size and s[0] > 0 else 1.0)
    vals = tuple(float(v) for v in s if v > cutoff)
    return SingularSpectrum(values=vals, shape=A.shape)


def min_singular_value(A):
    """The min(m, n)-th singular value (zero for rank-deficient input)."""
    A = np.atleast_2d(np.asarray(A, float))
    s = np.linalg.svd(A, compute_uv=False)
    return float(s[-1])


def eckart_young_correction(A):
    """The smallest Frobenius-norm B making A + B rank deficient.

    B = -sigma_min u v^T from the singular pair of sigma_min.
    """
    A = np.atleast_2d(np.asarray(A, float))
    U, s, Vt = np.linalg.svd(A)
    k = min(A.shape) - 1
    return -s[k] * np.outer(U[:, k], Vt[k, :])


def distance_to_rank_deficient(A):
    """Frobenius distance to the rank-deficient matrices: sigma_min(A)."""
    return min_singular_value(A)


# ---------------------------------------------------------------------------
# tangent frames and restricted Jacobians

def tangent_basis(x):
    """Deterministic orthonormal basis of x-perp, as columns of a (n+1, n) matrix.

    Householder completion: the non-mirror columns of the reflection taking
    e_0 to -sign(x_0) x, with each column sign-normalized so its first
    entry of magnitude > 1e-12 is positive.
    """
    x = np.asarray(x, float)
    m = x.shape[0]
    v = x.copy()
    s = 1.0 if x[0] >= 0.0 else -1.0
    v[0] += s
    denom = 1.0 + abs(x[0])
    U = np.eye(m)[:, 1:] - np.outer(v, v[1:]) / denom
    for j in range(m - 1):
        col = U[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if nz.size and col[nz[0]] < 0.0:
            U[:, j] = -col
    return U


def restricted_jacobian(F, x, basis=None):
    """Df(x) restricted to x-perp, in tangent-frame coordinates (n x n)."""
    if basis is None:
        basis = tangent_basis(pl.normalize(x))
    return pl.jacobian(F, x) @ basis


def _degree_scaling(degrees, x_norm=1.0):
    d = np.asarray(degrees, float)
    return d ** -0.5 * x_norm ** (1.0 - d)


def scaled_restricted_jacobian(F, x, basis=None):
    x = np.asarray(x, float)
    nrm = float(np.linalg.norm(x))
    if basis is None:
        basis = tangent_basis(x / nrm)
    M = pl.jacobian(F, x) @ basis
    return _degree_scaling(F.degrees, nrm)[:, None] * M


def mu(F, x):
    """The normalized condition number; numpy.inf at singular points.

    Scale invariant in f; at least sqrt(n) everywhere; for unit f equal to
    the inverse distance to the systems with singular restricted Jacobian
    at x (see minimal_singular_perturbation).
    """
    M = scaled_restricted_jacobian(F, x)
    smin = min_singular_value(M)
    nrm = F.weyl_norm
    if smin <= _SINGULAR_TOL * max(1.0, float(np.abs(M).max())):
        return math.inf
    return nrm / smin


# ---------------------------------------------------------------------------
# batched evaluation over many sphere points

def _sigma_min_batch(M):
    """Smallest singular value of each matrix in a (N, n, n) stack."""
    n = M.shape[-1]
    if n == 1:
        return np.abs(M[:, 0, 0])
    if n == 2:
        # closed form from the 2x2 Gram matrix
        a = M[:, :, 0]
        b = M[:, :, 1]
        aa = np.einsum("ij,ij->i", a, a)
        bb = np.einsum("ij,ij->i", b, b)
        ab = np.einsum("ij,ij->i", a, b)
        tr = aa + bb
        disc = np.sqrt(np.maximum((aa - bb) ** 2 + 4.0 * ab * ab, 0.0))
        return np.sqrt(np.maximum(0.5 * (tr - disc), 0.0))
    g = np.einsum("nij,nik->njk", M, M)
    w = np.linalg.eigvalsh(g)
    return np.sqrt(np.maximum(w[:, 0], 0.0))


def _restricted_jacobians_batch(F, X):
    """Scaled restricted Jacobians at many unit points: (N, n, n)."""
    J = pl.jacobian_many(F, X)
    s = np.where(X[:, 0] >= 0.0, 1.0, -1.0)
    v = X.copy()
    v[:, 0] += s
    denom = (1.0 + np.abs(X[:, 0]))[:, None, None]
    Jv = np.einsum("nij,nj->ni", J, v)
    M = J[:, :, 1:] - Jv[:, :, None] * v[:, None, 1:] / denom
    return _degree_scaling(F.degrees)[None, :, None] * M


def mu_many(F, X, f_norm=None):
    """Vectorized mu at many unit points (rows of X)."""
    X = np.asarray(X, float)
    if f_norm is None:
        f_norm = F.weyl_norm
    M = _restricted_jacobians_batch(F, X)
    smin = _sigma_min_batch(M)
    scale = np.abs(M).reshape(M.shape[0], -1).max(axis=1)
    out = np.full(X.shape[0], np.inf)
    ok = smin > _SINGULAR_TOL * np.maximum(1.0, scale)
    out[ok] = f_norm / smin[ok]
    return out


def kappa_point(F, x):
    """kappa(f, x) = 1/sqrt(mu^-2 + |f(x)|^2) for the normalized system."""
    Fn = F.normalized()
    m = mu(Fn, x)
    fv = float(np.linalg.norm(pl.evaluate(Fn, x)))
    inv_mu2 = 0.0 if math.isinf(m) else 1.0 / (m * m)
    denom = math.sqrt(inv_mu2 + fv * fv)
    return math.inf if denom == 0.0 else 1.0 / denom


def kappa_many(F, X):
    """Vectorized kappa for the normalized system at many unit points."""
    Fn = F.normalized()
    M = _restricted_jacobians_batch(Fn, np.asarray(X, float))
    smin = _sigma_min_batch(M)
    fv = np.linalg.norm(pl.evaluate_many(Fn, X), axis=1)
    denom = np.sqrt(smin * smin + fv * fv)
    with np.errstate(divide="ignore"):
        return np.where(denom > 0.0, 1.0 / denom, np.inf)


def kappa_grid(F, mesh, chunk=1 << 18):
    """Grid maximum of kappa: a certified lower estimate of kappa(f).

    Returns (estimate, covering_radius_bound) so the caller can judge how
    coarse the lower bound is.
    """
    best = 0.0
    pts = mesh.points
    for lo in range(0, pts.shape[0], chunk):
        k = kappa_many(F, pts[lo:lo + chunk])
        m = float(np.max(k))
        best = max(best, m)
    return best, mesh.covering_radius_bound


# ---------------------------------------------------------------------------
# mu as a distance (constructive Eckart-Young lift)

def _kernel_derivative_poly(d, x, u):
    """sqrt(d) <., x>^(d-1) <., u>: unit Weyl norm for unit x, u with u ⊥ x."""
    base = pl.poly_pow(pl.linear_form(x), d - 1, len(x))
    coeffs = pl.poly_mul(base, pl.linear_form(u))
    return {e: math.sqrt(d) * c for e, c in coeffs.items()}


def minimal_singular_perturbation(F, x):
    """The nearest system g whose scaled restricted Jacobian at x is singular.

    Requires unit Weyl norm; |f - g| = 1/mu(f, x) and the correction lives
    in the span of the first-derivative kernel basis, so g(x) = f(x).
    Returns F itself when mu is infinite.
    """
    if abs(F.weyl_norm - 1.0) > 1e-8:
        raise ValueError("minimal_singular_perturbation expects a unit-norm system")
    x = pl.sphere_point(x, tol=1e-9)
    basis = tangent_basis(x)
    M = scaled_restricted_jacobian(F, x, basis)
    if min_singular_value(M) <= _SINGULAR_TOL:
        return F
    B = eckart_young_correction(M)
    polys = []
    for i, p in enumerate(F.polynomials):
        coeffs = dict(p.coefficients)
        for j in range(F.n):
            if B[i, j] == 0.0:
                continue
            for e, c in _kernel_derivative_poly(p.degree, x, basis[:, j]).items():
                pl._merge_term(coeffs, e, B[i, j] * c)
        polys.append(pl.HomogeneousPolynomial(p.n_vars, p.degree, coeffs))
    return pl.PolynomialSystem(tuple(polys))


def mu_variation_check(F, G, x, y):
    """Sandwich bounds for mu(g, y) around mu(f, x).

    With u = (max d) mu(f, x) rho(x, y) and v = mu(f, x) |f - g|, returns
    (mu(f,x)/(1 + u + v), mu(f,x)/(1 - u - v), mu(g, y)); the upper bound is
    inf when u + v >= 1.  Both systems must have unit Weyl norm.
    """
    from .mesh import angular_distance

    for S in (F, G):
        if abs(S.weyl_norm - 1.0) > 1e-8:
            raise ValueError("mu_variation_check expects unit-norm systems")
    mfx = mu(F, x)
    diff = math.sqrt(sum(
        pl.weyl_inner(p, p) - 2.0 * pl.weyl_inner(p, q) + pl.weyl_inner(q, q)
        for p, q in zip(F.polynomials, G.polynomials)))
    u = F.max_degree * mfx * angular_distance(x, y)
    v = mfx * diff
    lower = mfx / (1.0 + u + v)
    upper = math.inf if u + v >= 1.0 else mfx / (1.0 - u - v)
    return lower, upper, mu(G, y)


# ---------------------------------------------------------------------------
# random systems and condition statistics

def multi_indices(n_vars, d):
    """All exponent tuples of length n_vars summing to d, graded-lex order."""
    if n_vars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in multi_indices(n_vars - 1, d - first):
            out.append((first,) + rest)
    return out


def sample_gaussian_system(n, degrees, seed):
    """Draw a system whose squared Weyl norm is chi-square distributed.

    Each coefficient is an independent centered normal with variance equal
    to its multinomial weight, which makes the density proportional to
    exp(-|f|^2/2) in Weyl coordinates and orthogonally invariant.
    """
    rng = np.random.default_rng(seed)
    polys = []
    for d in degrees:
        coeffs = {}
        for a in multi_indices(n + 1, d):
            coeffs[a] = math.sqrt(pl.multinomial(d, a)) * rng.standard_normal()
        polys.append(pl.HomogeneousPolynomial(n + 1, d, coeffs))
    return pl.PolynomialSystem(tuple(polys))


def kn_constant(n, degrees):
    """K_n = 8 (max d)^2 sqrt(prod d) sqrt(N) n^(5/2) + 1."""
    degrees = tuple(degrees)
    N = sum(math.comb(d + n, n) for d in degrees)
    D = math.prod(degrees)
    return 8.0 * max(degrees) ** 2 * math.sqrt(D) * math.sqrt(N) * n**2.5 + 1.0


def expected_ln_kappa_bound(n, degrees):
    """Closed-form bound on E(ln kappa) for Gaussian systems, n >= 3."""
    if n < 3:
        raise ValueError("the expectation bound assumes n >= 3")
    lk = math.log(kn_constant(n, degrees))
    return lk + math.sqrt(lk) + 1.0 / math.sqrt(lk) + 0.5 * math.log(2 * n)


def smoothed_ln_kappa_bound(n, degrees, sigma):
    """Uniform-perturbation bound: 2 ln N + 4 ln n + 2 ln(prod d) - ln sigma + 6."""
    if not 0.0 < sigma <= 1.0:
        raise ValueError("sigma must lie in (0, 1]")
    degrees = tuple(degrees)
    N = sum(math.comb(d + n, n) for d in degrees)
    return (2.0 * math.log(N) + 4.0 * math.log(n)
            + 2.0 * math.log(math.prod(degrees)) - math.log(sigma) + 6.0)


def monte_carlo_ln_kappa(n, degrees, trials, mesh_t, seed, threads=1):
    """Empirical mean of ln(kappa grid estimate) against the closed-form bound.

    Trial i draws its system from seed + i, so results do not depend on the
    execution schedule.  Returns a dict with the per-trial values, their
    mean, and the bound (None when n < 3).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    mesh = build_mesh(n, mesh_t)

    def one(i):
        F = sample_gaussian_system(n, degrees, seed + i).normalized()
        est, _ = kappa_grid(F, mesh)
        return math.log(est)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(one, range(trials)))
    else:
        samples = [one(i) for i in range(trials)]
    bound = expected_ln_kappa_bound(n, degrees) if n >= 3 else None
    return {
        "samples": samples,
        "mean_ln_kappa": sum(samples) / trials,
        "bound": bound,
        "mesh_covering_radius": mesh.covering_radius_bound,
    }
