"""Time integration of i dPsi/dt = -L Psi - |Psi|^2 Psi on the star graph.

The propagator is the implicit midpoint rule (Crank-Nicolson with the
nonlinearity evaluated at the midpoint), solved per step by fixed-point
iteration on the nonlinear term around a direct linear solve.  The
linear system couples E tridiagonal edge blocks through the single
shared vertex unknown; arrowhead elimination keeps each solve O(E*N).

The scheme is time-symmetric, conserves mass at the fixed point, and
keeps the energy drift O(dt^2) per unit time.  The stationary state
evolves as the standing wave e^{i omega t} Phi with omega = M^2/36, so
the recorded phase arg<Psi(0), Psi(t)> grows linearly with slope omega.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    AliasingError,
    DomainError,
    GraphNLSError,
    StepFailureError,
)
from .graph_core import GraphSpec, GraphState, edge_weights
from .operators import _symmetrized, weighted_inner
from .profiles import half_soliton


@dataclass(frozen=True)
class EvolutionConfig:
    """Time stepping parameters.

    dt may be negative to integrate backward (the scheme is symmetric
    under dt -> -dt, which is how time-reversal round trips are run);
    it must be nonzero and |dt| must not exceed t_final.
    """

    dt: float
    t_final: float
    fixed_point_tol: float = 1e-12
    max_fixed_point_iters: int = 50
    observe_every: int = 1

    def __post_init__(self):
        if self.dt == 0.0:
            raise DomainError("dt must be nonzero")
        if not self.t_final > 0:
            raise DomainError(f"t_final must be positive, got {self.t_final}")
        if abs(self.dt) > self.t_final:
            raise DomainError("|dt| must not exceed t_final")
        if not self.fixed_point_tol > 0:
            raise DomainError("fixed_point_tol must be positive")
        if self.max_fixed_point_iters < 1:
            raise DomainError("max_fixed_point_iters must be >= 1")
        if self.observe_every < 1:
            raise DomainError("observe_every must be >= 1")


@dataclass(frozen=True)
class FlowTrace:
    """Observables sampled along a time evolution or a gradient flow.

    vertex_phase[k] is arg<Psi(0), Psi(t_k)> in the weighted inner
    product: for a standing wave e^{i omega t} Phi it equals omega*t_k.
    extras holds additional per-sample columns (e.g. grad_norm for
    gradient flows); every array must align with times.
    """

    times: np.ndarray
    masses: np.ndarray
    energies: np.ndarray
    vertex_phase: np.ndarray
    edge_masses: np.ndarray
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        for name in ("masses", "energies", "vertex_phase"):
            if len(getattr(self, name)) != n:
                raise DomainError(f"trace field {name} misaligned with times")
        if self.edge_masses.shape[0] != n:
            raise DomainError("trace field edge_masses misaligned with times")
        for key, col in self.extras.items():
            if len(col) != n:
                raise DomainError(f"trace extra {key!r} misaligned with times")
        if n >= 2:
            d = np.diff(self.times)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise DomainError("trace times must be strictly monotone")

    @property
    def mass_drift(self) -> float:
        """Largest |mass(t) - mass(0)| over the trace."""
        return float(np.max(np.abs(self.masses - self.masses[0])))

    @property
    def energy_drift(self) -> float:
        """Largest |E(t) - E(0)| / |E(0)| over the trace (absolute if E(0) = 0)."""
        e0 = self.energies[0]
        drift = float(np.max(np.abs(self.energies - e0)))
        return drift / abs(e0) if e0 != 0.0 else drift

    def to_csv(self) -> str:
        n_edges = self.edge_masses.shape[1]
        cols = ["t", "mass", "energy", "phase"]
        cols += [f"edge_mass_{e + 1}" for e in range(n_edges)]
        cols += list(self.extras)
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        for k in range(len(self.times)):
            row = [self.times[k], self.masses[k], self.energies[k], self.vertex_phase[k]]
            row += list(self.edge_masses[k])
            row += [self.extras[key][k] for key in self.extras]
            buf.write(",".join("%.17g" % v for v in row) + "\n")
        return buf.getvalue()


class _ArrowheadSolver:
    """Direct solver for ((2i/dt) I + L) W = rhs with the Kirchhoff vertex.

    Eliminating the E per-edge chains (each tridiagonal, sharing one
    matrix) against the single vertex unknown is a rank-one Schur
    complement: one banded solve per right-hand side plus a scalar
    division.  The same tridiagonal factors serve every edge because
    the grid is uniform and shared.
    """

    def __init__(self, spec: GraphSpec, dt: float):
        self.spec = spec
        self.dt = dt
        h2 = spec.spacing ** 2
        n = spec.points_per_edge - 1
        diag = 2j / dt - 2.0 / h2
        off = 1.0 / h2
        ab = np.zeros((3, n), dtype=np.complex128)
        ab[0, 1:] = off
        ab[1, :] = diag
        ab[2, :-1] = off
        self._ab = ab
        self._h2 = h2
        self._diag = diag
        # Coupling column: the vertex enters each chain's first row with
        # coefficient 1/h^2; z = T^{-1} e_1 / h^2.
        e1 = np.zeros(n, dtype=np.complex128)
        e1[0] = off
        self._z = solve_banded((1, 1), ab, e1)
        E = spec.edge_count
        self._vertex_coupling = 2.0 / (E * h2)
        self._denom = diag - (2.0 / h2) * self._z[0]

    def solve(self, rhs_vertex: complex, rhs_edges: np.ndarray):
        """Solve for (vertex value, per-edge chains of length N-1)."""
        Y = solve_banded((1, 1), self._ab, rhs_edges.T)
        v = (rhs_vertex - self._vertex_coupling * Y[0, :].sum()) / self._denom
        return v, Y.T - v * self._z


def step_crank_nicolson(
    state: GraphState,
    dt: float,
    *,
    fixed_point_tol: float = 1e-12,
    max_fixed_point_iters: int = 50,
    solver: _ArrowheadSolver | None = None,
) -> GraphState:
    """One implicit midpoint step of the focusing cubic flow.

    Solves (2i/dt) W + L W = (2i/dt) Psi - |W|^2 W for the midpoint W
    by lagging the cubic term, then returns 2W - Psi.  The vertex is a
    single unknown, so input values are first projected to their vertex
    mean.  Raises StepFailureError when the fixed point does not
    converge (the contraction factor scales with dt*max|Psi|^2, so a
    smaller dt is the usual remedy).
    """
    if dt == 0.0:
        raise DomainError("dt must be nonzero")
    spec = state.spec
    if solver is None:
        solver = _ArrowheadSolver(spec, dt)
    vals = _symmetrized(state.values)
    b = (2j / dt) * vals
    w = edge_weights(spec)
    W = vals.copy()
    norm_prev = None
    for _ in range(max_fixed_point_iters):
        rhs = b - (np.abs(W) ** 2) * W
        v, chains = solver.solve(rhs[0, 0], rhs[:, 1:])
        W_next = np.empty_like(W)
        W_next[:, 0] = v
        W_next[:, 1:] = chains
        if not np.all(np.isfinite(W_next.view(np.float64))):
            raise StepFailureError("midpoint iteration produced non-finite values", 0)
        diff = np.sqrt((w * np.abs(W_next - W) ** 2).sum())
        scale = max(1.0, np.sqrt((w * np.abs(W_next) ** 2).sum()))
        W = W_next
        norm_prev = diff
        if diff <= fixed_point_tol * scale:
            return GraphState(spec, 2.0 * W - vals)
    raise StepFailureError(
        f"midpoint fixed point did not reach tol {fixed_point_tol:.1e} in "
        f"{max_fixed_point_iters} iterations (last update {norm_prev:.3e}); "
        "try a smaller dt",
        0,
    )


def evolve(state: GraphState, config: EvolutionConfig):
    """March the state to t_final, recording a FlowTrace along the way.

    The number of steps is round(t_final/|dt|), which must match
    t_final to 1e-9 relative.  Non-vertex-continuous input is projected
    to its vertex mean once at entry; the projected state is what the
    t = 0 trace row records.  The trace samples every observe_every-th
    step plus the final one.
    """
    n_steps = int(round(config.t_final / abs(config.dt)))
    if abs(n_steps * abs(config.dt) - config.t_final) > 1e-9 * config.t_final:
        raise DomainError("t_final must be an integer number of dt steps")
    spec = state.spec
    current = GraphState(spec, _symmetrized(state.values))
    initial = current
    w = edge_weights(spec)

    times, masses, energies, phases, per_edge = [], [], [], [], []

    def record(t: float, st: GraphState):
        absq = np.abs(st.values) ** 2
        em = (w * absq).sum(axis=1)
        kin = 0.5 * (np.abs(np.diff(st.values, axis=1)) ** 2).sum() / spec.spacing
        quar = 0.25 * (w * absq ** 2).sum()
        times.append(t)
        masses.append(float(em.sum()))
        energies.append(float(kin - quar))
        phases.append(float(np.angle(weighted_inner(initial, st))))
        per_edge.append(em)

    record(0.0, current)
    solver = _ArrowheadSolver(spec, config.dt)
    for k in range(1, n_steps + 1):
        try:
            current = step_crank_nicolson(
                current,
                config.dt,
                fixed_point_tol=config.fixed_point_tol,
                max_fixed_point_iters=config.max_fixed_point_iters,
                solver=solver,
            )
        except StepFailureError as exc:
            raise StepFailureError(f"step {k}: {exc}", k) from None
        if k % config.observe_every == 0 or k == n_steps:
            record(k * config.dt, current)

    trace = FlowTrace(
        times=np.array(times),
        masses=np.array(masses),
        energies=np.array(energies),
        vertex_phase=np.array(phases),
        edge_masses=np.stack(per_edge, axis=0),
    )
    return current, trace


def _fit_phase_slope(trace: FlowTrace) -> float:
    if len(trace.times) < 3:
        raise DomainError("phase fit needs a trace with at least 3 samples")
    phases = np.unwrap(trace.vertex_phase)
    steps = np.abs(np.diff(phases))
    if steps.size and steps.max() > 0.95 * np.pi:
        raise AliasingError(
            "phase advances close to pi per sample; decrease dt*observe_every"
        )
    slope = np.polyfit(trace.times, phases, 1)[0]
    return float(slope)


def phase_slope(trace: FlowTrace) -> float:
    """Signed least-squares slope of the unwrapped phase vs time."""
    return _fit_phase_slope(trace)


def measure_omega(trace: FlowTrace) -> float:
    """|slope| of the unwrapped phase: the standing-wave frequency."""
    return abs(_fit_phase_slope(trace))


def discrete_stationary_state(
    M: float,
    spec: GraphSpec,
    tol: float = 1e-9,
    max_iters: int = 30,
):
    """Newton-refined symmetric stationary profile on this exact grid.

    The analytic half-soliton samples satisfy the discrete stationarity
    equation only up to O(h^2); this routine solves the discrete system
    -L u - u^3 + omega u = 0 (symmetric subspace: one real edge profile
    u, vertex row 2(u1-u0)/h^2, Dirichlet far end) together with the
    mass constraint E * sum(w u^2) = M, by a bordered-tridiagonal
    Newton iteration on (u, omega).

    Returns (state, omega).  The residual floor is set by rounding in
    the h^-2 difference quotients (about 1e-10 at N = 4096), hence the
    default tol of 1e-9.
    """
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    h2 = spec.spacing ** 2
    N = spec.points_per_edge
    E = spec.edge_count
    w = edge_weights(spec)

    # Symmetric stationary profile on E edges has edge mass M/E and
    # omega = (M/E)^2 / 4; the half-soliton of that mass is the guess.
    m_edge = M / E
    u = half_soliton(m_edge, spec)
    omega = (m_edge ** 2) / 4.0

    def lap_sym(u):
        out = np.empty_like(u)
        out[0] = 2.0 * (u[1] - u[0]) / h2
        out[1:-1] = (u[:-2] - 2.0 * u[1:-1] + u[2:]) / h2
        out[-1] = (u[-2] - 2.0 * u[-1]) / h2
        return out

    for _ in range(max_iters):
        G = -lap_sym(u) - u ** 3 + omega * u
        G_mass = E * float((w * u ** 2).sum()) - M
        if max(float(np.max(np.abs(G))), abs(G_mass)) < tol:
            break
        diag = 2.0 / h2 - 3.0 * u ** 2 + omega
        ab = np.zeros((3, N))
        ab[1, :] = diag
        ab[0, 1] = -2.0 / h2
        ab[0, 2:] = -1.0 / h2
        ab[2, :-1] = -1.0 / h2
        rhs = np.column_stack([-G, -u])
        sol = solve_banded((1, 1), ab, rhs)
        y, z = sol[:, 0], sol[:, 1]
        wu = 2.0 * E * (w * u)
        denom = float(wu @ z)
        if denom == 0.0:
            raise GraphNLSError("stationary refinement hit a singular mass row")
        domega = (-G_mass - float(wu @ y)) / denom
        u = u + y + domega * z
        omega = omega + domega
    else:
        raise GraphNLSError(
            f"stationary-state refinement did not converge to {tol:.1e} "
            f"in {max_iters} iterations"
        )
    values = np.broadcast_to(u.astype(np.complex128), (E, N)).copy()
    return GraphState(spec, values), float(omega)
