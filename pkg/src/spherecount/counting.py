"""Certified root counting on the sphere by inclusion and exclusion.

At spacing eta the grid points admitted by the inclusion test become
vertices of a proximity graph (edges join points whose certified caps
intersect); distinct connected components then certify distinct zeros.
The spacing is halved until two conditions hold simultaneously:

    separation:  vertices of distinct components are farther apart than
                 2 eta sqrt(n), and
    exclusion:   every rejected grid point x has |f(x)| above
                 eta sqrt(n max d)/2, so its neighbourhood carries no zero.

On termination the number of components equals the number of zeros of f
on S^n, and refining one vertex per component locates them all.

Lifted affine systems need special treatment.  The two poles
(0, ..., 0, +-1) of a lifted system are always zeros, and they are
degenerate whenever some input degree exceeds one (the homogenized
equations are flat at y = 0), so the exclusion predicate can never clear
a pole neighbourhood and the plain loop cannot terminate.  The lifted
loop therefore treats the poles as known components:

  * admissible grid points whose certified ball reaches their nearest
    pole certify the pole itself (the certified zero is constant on the
    ball and the pole is a zero), so they join the pole's component
    instead of seeding a new one;
  * exclusion failures are clustered at grid scale and each cluster must
    contain its pole: a low-residual island elsewhere blocks stopping;
  * vertices must keep a separation margin from the pole shadows.

The count on termination is the component count plus two.  A zero whose
entire low-residual neighbourhood stays merged with a pole shadow can
defer termination until the spacing resolves the gap; the variant is
validated against dense-grid oracles and reports budget exhaustion
otherwise.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import polynomials as pl
from .certification import RefinedZero, certificate_from_values, chart_beta, refine_zero
from .condition import mu_many
from .convergence import ALPHA, r0
from .mesh import angular_distance_many, build_mesh, pairwise_angular

__all__ = [
    "UnionFind",
    "CertGraph",
    "CountResult",
    "build_graph",
    "check_stop",
    "root_count",
    "count_affine",
    "initial_eta",
    "predicted_eta_threshold",
    "predicted_complexity",
]

_CHUNK = 1 << 18


class UnionFind:
    """Disjoint sets over 0..size-1 with path compression."""

    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins, keeping labels deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def components(self, size):
        groups = {}
        for i in range(size):
            groups.setdefault(self.find(i), []).append(i)
        return [sorted(groups[r]) for r in sorted(groups)]


@dataclass(frozen=True)
class CertGraph:
    """Admissible grid points, their certificates, and the proximity graph.

    ``admissible`` covers the whole grid; the vertex set excludes points
    masked out by ``active`` (used by the lifted loop for pole certifiers).
    """

    eta: float
    vertex_indices: np.ndarray   # indices into the mesh point list
    certificates: tuple          # one Certificate per vertex
    edges: tuple                 # pairs of vertex positions
    components: tuple            # tuple of tuples of vertex positions
    f_norms: np.ndarray          # residual norm at every mesh point
    mus: np.ndarray              # mu at every mesh point (inf where singular)
    admissible: np.ndarray       # inclusion-test mask over the whole mesh
    active: np.ndarray           # vertex-eligibility mask


def _point_data(F, points, threads=1, chunk=_CHUNK):
    """Residual norms and mu at every point, chunked and optionally threaded."""
    spans = [(lo, min(lo + chunk, points.shape[0]))
             for lo in range(0, points.shape[0], chunk)]

    def work(span):
        lo, hi = span
        block = points[lo:hi]
        fv = np.linalg.norm(pl.evaluate_many(F, block), axis=1)
        return fv, mu_many(F, block, f_norm=1.0)

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, spans))
    else:
        parts = [work(s) for s in spans]
    f_norms = np.concatenate([p[0] for p in parts])
    mus = np.concatenate([p[1] for p in parts])
    return f_norms, mus


def _assemble_graph(F, mesh, f_norms, mus, admissible, active):
    vertex_indices = np.nonzero(admissible & active)[0]
    certs = []
    for idx in vertex_indices:
        x = mesh.points[idx]
        beta = chart_beta(F, x)
        certs.append(certificate_from_values(
            x, beta, float(mus[idx]), float(f_norms[idx]), F.max_degree))
    edges = []
    nv = len(vertex_indices)
    uf = UnionFind(nv)
    if nv:
        pts = mesh.points[vertex_indices]
        radii = np.array([c.inclusion_radius for c in certs])
        dist = pairwise_angular(pts)
        reach = radii[:, None] + radii[None, :]
        for i in range(nv):
            for j in range(i + 1, nv):
                if dist[i, j] <= reach[i, j]:
                    edges.append((i, j))
                    uf.union(i, j)
    components = tuple(tuple(c) for c in uf.components(nv))
    return CertGraph(
        eta=mesh.eta,
        vertex_indices=vertex_indices,
        certificates=tuple(certs),
        edges=tuple(edges),
        components=components,
        f_norms=f_norms,
        mus=mus,
        admissible=admissible,
        active=active,
    )


def _admissible_mask(F, f_norms, mus):
    with np.errstate(invalid="ignore"):
        value = F.max_degree**1.5 * mus * mus * f_norms
    return np.isfinite(mus) & (value < ALPHA.alpha_star)


def build_graph(F, mesh, threads=1, active=None):
    """Certify the grid against the normalized system and link nearby caps."""
    Fn = F.normalized()
    if active is None:
        active = np.ones(mesh.count, dtype=bool)
    f_norms, mus = _point_data(Fn, mesh.points, threads=threads)
    admissible = _admissible_mask(Fn, f_norms, mus)
    return _assemble_graph(Fn, mesh, f_norms, mus, admissible, active)


def exclusion_threshold(F, eta):
    return eta * math.sqrt(F.n * F.max_degree) / 2.0


def check_stop(F, mesh, graph):
    """The two termination predicates of the counting loop."""
    n = mesh.n
    eta = mesh.eta
    separation_ok = True
    if len(graph.components) > 1:
        pts = mesh.points[graph.vertex_indices]
        labels = np.empty(len(graph.vertex_indices), dtype=int)
        for ci, comp in enumerate(graph.components):
            labels[list(comp)] = ci
        dist = pairwise_angular(pts)
        different = labels[:, None] != labels[None, :]
        if different.any():
            separation_ok = bool(dist[different].min() > 2.0 * eta * math.sqrt(n))
    rejected = graph.active & ~graph.admissible
    exclusion_ok = bool(np.all(
        graph.f_norms[rejected] > exclusion_threshold(F, eta)))
    return {"separation_ok": separation_ok, "exclusion_ok": exclusion_ok}


@dataclass(frozen=True)
class CountResult:
    """Outcome of the counting loop."""

    count: int
    zeros: tuple
    final_eta: float
    iterations: int
    evaluations: int
    stopped: bool
    predicted_eta_threshold: float | None
    kappa_grid_estimate: float | None

    def to_json(self):
        return {
            "count": self.count,
            "zeros": [z.to_json() for z in self.zeros],
            "final_eta": self.final_eta,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "stopped": self.stopped,
            "predicted_threshold": self.predicted_eta_threshold,
        }


def initial_eta(n):
    """Largest power of two not exceeding 1/sqrt(2n); the loop starts below it."""
    t0 = math.ceil(math.log2(math.sqrt(2.0 * n)))
    return 2.0**-t0, t0


def predicted_eta_threshold(F, kappa_estimate):
    """Spacing below which the loop provably stops (sufficient, not necessary)."""
    if kappa_estimate < 1.0:
        raise ValueError("kappa estimates are >= 1")
    n = F.n
    d = F.max_degree
    a = ALPHA.alpha_star
    return (min(a, kappa_estimate / (2.0 * math.sqrt(n)) * (1.0 - 2.0 * a * r0(a)))
            / (d**1.5 * kappa_estimate**2))


def predicted_complexity(F, kappa_estimate):
    """Iteration and evaluation bounds implied by a kappa estimate."""
    eta0, _ = initial_eta(F.n)
    threshold = predicted_eta_threshold(F, kappa_estimate)
    n, d = F.n, F.max_degree
    return {
        "iterations_bound": math.ceil(math.log2(eta0 / threshold)) + 1,
        "evaluations_bound": 2.0 * n * (1.0 + 4.0 * d**1.5 * math.sqrt(n)
                                        * kappa_estimate**2) ** n,
    }


def _kappa_estimate(f_norms, mus):
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_mu2 = np.where(np.isfinite(mus), 1.0 / (mus * mus), 0.0)
        k = 1.0 / np.sqrt(inv_mu2 + f_norms * f_norms)
    k = k[np.isfinite(k)]
    return float(k.max()) if k.size else math.inf


def _component_representatives(graph):
    """One vertex per component: smallest residual, ties by vertex order."""
    reps = []
    for comp in graph.components:
        best = min(comp, key=lambda i: (graph.certificates[i].f_norm_at_x, i))
        reps.append(best)
    return reps


# ---------------------------------------------------------------------------
# the lifted loop: poles as known components

@dataclass(frozen=True)
class _PoleData:
    poles: tuple

    def distances(self, points):
        d = angular_distance_many(points, self.poles[0])
        for pole in self.poles[1:]:
            d = np.minimum(d, angular_distance_many(points, pole))
        return d


def _cluster_failures(points, link_radius):
    """Union-find clusters of the failing points at grid scale."""
    m = points.shape[0]
    uf = UnionFind(m)
    dist = pairwise_angular(points)
    for i in range(m):
        for j in range(i + 1, m):
            if dist[i, j] <= link_radius:
                uf.union(i, j)
    return uf.components(m)


def _lifted_stop_ok(graph, mesh, F, poles, pole_dist):
    eta = mesh.eta
    n = mesh.n
    link = 2.5 * eta * math.sqrt(n)
    thr = exclusion_threshold(F, eta)
    failing = np.nonzero(~graph.admissible & (graph.f_norms <= thr))[0]
    shadow_extent = 0.0
    if failing.size:
        if failing.size > 4000:
            return False, None
        pts = mesh.points[failing]
        fail_pole_dist = pole_dist[failing]
        for comp in _cluster_failures(pts, link):
            comp_dist = fail_pole_dist[list(comp)]
            if float(comp_dist.min()) > link:
                return False, None  # low-residual island away from the poles
            shadow_extent = max(shadow_extent, float(comp_dist.max()))
    if shadow_extent > 0.6:
        return False, None
    # pole certifiers define how far the pole components reach
    certifier = graph.admissible & ~graph.active
    if certifier.any():
        shadow_extent = max(shadow_extent, float(pole_dist[certifier].max()))
    if shadow_extent > 0.75:
        return False, None
    if len(graph.vertex_indices):
        margin = shadow_extent + 2.0 * eta * math.sqrt(n)
        if float(pole_dist[graph.vertex_indices].min()) <= margin:
            return False, None
    return True, shadow_extent


def _run_loop(F, max_t, threads, poles=None, max_mesh_points=20_000_000):
    Fn = F.normalized()
    n = Fn.n
    _, t0 = initial_eta(n)
    if max_t <= t0:
        raise ValueError(f"max_t = {max_t} allows no refinement (initial t = {t0})")
    evaluations = 0
    iterations = 0
    kappa_est = None
    graph = None
    mesh = None
    stopped = False
    for t in range(t0 + 1, max_t + 1):
        mesh = build_mesh(n, t, max_points=max_mesh_points)
        iterations += 1
        f_norms, mus = _point_data(Fn, mesh.points, threads=threads)
        admissible = _admissible_mask(Fn, f_norms, mus)
        pole_dist = None
        if poles is None:
            active = np.ones(mesh.count, dtype=bool)
        else:
            pole_dist = poles.distances(mesh.points)
            with np.errstate(invalid="ignore"):
                reach = r0(ALPHA.alpha_star) * mus * f_norms
            # points whose certified ball contains a pole belong to the
            # pole component, not to a new one
            active = ~(admissible & (pole_dist <= reach + 1e-15))
        graph = _assemble_graph(Fn, mesh, f_norms, mus, admissible, active)
        evaluations += 2 * mesh.count + 2 * len(graph.vertex_indices)
        if poles is None:
            kappa_est = _kappa_estimate(f_norms, mus)
            stop = check_stop(Fn, mesh, graph)
            ok = stop["separation_ok"] and stop["exclusion_ok"]
        else:
            # kappa diagnostic away from the degenerate pole shadows
            sample = pole_dist > 0.2
            kappa_est = _kappa_estimate(f_norms[sample], mus[sample])
            ok, _ = _lifted_stop_ok(graph, mesh, Fn, poles, pole_dist)
            ok = ok and check_stop(Fn, mesh, graph)["separation_ok"]
        if ok:
            stopped = True
            break
    zeros = []
    if stopped:
        for rep in _component_representatives(graph):
            x = mesh.points[graph.vertex_indices[rep]]
            z = refine_zero(Fn, x)
            evaluations += 2 * max(z.newton_steps, 1)
            zeros.append(z)
    count = len(graph.components) if graph is not None else 0
    if poles is not None:
        count += len(poles.poles)
        for pole in poles.poles:
            zeros.append(RefinedZero(zeta=np.asarray(pole, float), newton_steps=0,
                                     final_beta=0.0, converged=True))
    threshold = None
    if kappa_est is not None and math.isfinite(kappa_est) and kappa_est >= 1.0:
        threshold = predicted_eta_threshold(Fn, kappa_est)
    return CountResult(
        count=count,
        zeros=tuple(zeros),
        final_eta=mesh.eta if mesh is not None else math.nan,
        iterations=iterations,
        evaluations=evaluations,
        stopped=stopped,
        predicted_eta_threshold=threshold,
        kappa_grid_estimate=kappa_est,
    )


def root_count(F, max_t=10, threads=1, max_mesh_points=20_000_000):
    """Count (and locate) the zeros of a nondegenerate system on S^n.

    Halves the spacing until both stop conditions hold or t exceeds
    ``max_t``; budget exhaustion is reported through ``stopped=False``
    rather than raised.  Grid-size overflow does raise (MeshSizeError).
    """
    return _run_loop(F, max_t=max_t, threads=threads,
                     max_mesh_points=max_mesh_points)


# ---------------------------------------------------------------------------
# counting through the affine lift

def _balanced_scaled_lift(affine_polys, aux_scale):
    """A count-preserving representative of the lift.

    Replaces the auxiliary equation by aux_scale y_0 u - sum y_i^2 (the
    sphere count relation holds for any positive scale) and rescales every
    row to unit Weyl norm; both transformations preserve the zero set
    while often improving the condition number substantially.
    """
    lifted = pl.lift_affine(affine_polys)
    polys = list(lifted.polynomials)
    g = polys[-1]
    coeffs = {}
    for e, c in g.coefficients.items():
        coeffs[e] = c * aux_scale if e[0] == 1 else c
    polys[-1] = pl.HomogeneousPolynomial(g.n_vars, g.degree, coeffs)
    balanced = tuple(
        pl.HomogeneousPolynomial(p.n_vars, p.degree,
                                 {e: c / pl.weyl_norm(p)
                                  for e, c in p.coefficients.items()})
        for p in polys)
    return pl.PolynomialSystem(balanced).normalized()


def _probe_zero_conditioning(F, poles, probe):
    """max mu over finite zeros found from a coarse probe grid.

    Newton multistart from the lowest-residual probe points away from the
    poles: this is the quantity that drives when the lifted loop can stop.
    Returns 1.0 when no finite zero is found (any scale is then as good).
    """
    from .condition import mu as mu_point

    f_norms = np.linalg.norm(pl.evaluate_many(F, probe.points), axis=1)
    pole_dist = poles.distances(probe.points)
    away = np.nonzero(pole_dist > 0.25)[0]
    order = away[np.lexsort((away, f_norms[away]))]
    worst = 0.0
    seen = []
    for idx in order[:16]:
        z = refine_zero(F, probe.points[idx])
        if not z.converged or float(poles.distances(z.zeta[None, :])[0]) < 0.1:
            continue
        if any(float(np.linalg.norm(z.zeta - s)) < 1e-6 for s in seen):
            continue
        seen.append(z.zeta)
        worst = max(worst, mu_point(F, z.zeta))
    return worst if seen else 1.0


def count_affine(affine_polys, max_t=10, threads=1, aux_scale=None,
                 max_mesh_points=20_000_000):
    """Count real affine roots through the sphere lift.

    Returns (sphere_result, affine_count) with
    affine_count = sphere_count/2 - 1 when the loop stopped (None
    otherwise).  ``aux_scale`` overrides the automatic conditioning sweep
    of the auxiliary-equation scale.
    """
    if aux_scale is None:
        probe = None
        best = None
        for lam in (1.0, 2.0, 4.0, 8.0, 16.0):
            F = _balanced_scaled_lift(affine_polys, lam)
            poles = _PoleData(poles=tuple(pl.lifted_poles(F.n_vars)))
            if probe is None:
                probe = build_mesh(F.n, 4)
            score = _probe_zero_conditioning(F, poles, probe)
            if best is None or score < best[0]:
                best = (score, lam)
        aux_scale = best[1]
    lifted = _balanced_scaled_lift(affine_polys, aux_scale)
    poles = _PoleData(poles=tuple(pl.lifted_poles(lifted.n_vars)))
    for pole in poles.poles:
        if float(np.linalg.norm(pl.evaluate(lifted, pole))) > 1e-10:
            raise AssertionError("lift invariant violated: pole is not a zero")
    result = _run_loop(lifted, max_t=max_t, threads=threads, poles=poles,
                       max_mesh_points=max_mesh_points)
    affine_count = result.count // 2 - 1 if result.stopped else None
    return result, affine_count
