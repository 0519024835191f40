"""Energy-landscape procedures: comparison states, curve scans, probes, flow.

The central fact this module exercises: at fixed total mass M on the
3-edge star, every state's energy is bounded below by the sesquisoliton
curve value at m1 = (smallest edge mass), the curve increases strictly
from the unattained infimum -M^3/96 (m1 -> 0) to the stationary value
-M^3/216 (m1 = M/3), and the stationary state at the top of the curve
is a saddle: nearby same-mass states of lower energy exist along the
sesquisoliton family, while the dilation direction curves up and the
phase direction is flat.  The saddle is degenerate: the family meets
the stationary state in a cusp, the descent along it is quartic in the
peak offset, and the constrained second-difference probe along any
straight chord of the family measures a nonnegative quadratic form.
Escape under the fixed-mass gradient flow therefore needs a start that
breaks the symmetry between the two unshrunken edges; see
shift_perturbation.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    DomainError,
    GraphNLSError,
    ProbeError,
    StallError,
    TruncationError,
    ZeroEdgeMassError,
)
from .graph_core import (
    GraphSpec,
    GraphState,
    edge_masses,
    edge_weights,
    mass,
    rescale_mass,
)
from .operators import best_omega, energy, energy_gradient, weighted_inner
from .profiles import (
    SesquiParams,
    _sesqui_energy_poly,
    energy_infimum,
    energy_sesqui_closed,
    sesquisoliton,
    solve_offset,
    stationary_state,
)
from .dynamics import FlowTrace


@dataclass(frozen=True)
class CurveScan:
    """Energies sampled along a one-parameter family of states."""

    param_name: str
    param_values: np.ndarray
    closed_energy: np.ndarray | None
    discrete_energy: np.ndarray
    metadata: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.param_values)
        if len(self.discrete_energy) != n:
            raise DomainError("discrete_energy misaligned with param_values")
        if self.closed_energy is not None and len(self.closed_energy) != n:
            raise DomainError("closed_energy misaligned with param_values")
        for key, col in self.extras.items():
            if len(col) != n:
                raise DomainError(f"scan extra {key!r} misaligned with param_values")
        if n >= 2:
            d = np.diff(self.param_values)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise DomainError("param_values must be strictly monotone")

    def to_csv(self) -> str:
        cols = ["param", "closed_energy", "discrete_energy"] + list(self.extras)
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        closed = self.closed_energy
        for k in range(len(self.param_values)):
            row = [
                self.param_values[k],
                closed[k] if closed is not None else math.nan,
                self.discrete_energy[k],
            ]
            row += [self.extras[key][k] for key in self.extras]
            buf.write(",".join("%.17g" % v for v in row) + "\n")
        return buf.getvalue()


@dataclass(frozen=True)
class SaddleReport:
    """One directional second-difference probe of the constrained energy.

    Both probe energies are kept alongside the second difference so a
    reported curvature can be audited from its raw ingredients.
    """

    direction: str
    epsilon: float
    second_difference: float
    energy_plus: float
    energy_minus: float
    energy_center: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError("probe epsilon must be positive")


def saddle_reports_csv(reports) -> str:
    buf = io.StringIO()
    buf.write("direction,epsilon,second_difference\n")
    for r in reports:
        buf.write(
            "%s,%.17g,%.17g\n" % (r.direction, r.epsilon, r.second_difference)
        )
    return buf.getvalue()


def comparison_sesquisoliton(state: GraphState):
    """The proof's comparison map: a sesquisoliton below any given state.

    Relabels edges so the minimal-mass edge comes first (ties: lowest
    index), sets m1 = that edge's mass and m2 = the sum of the other
    two, and builds the matching sesquisoliton.  m2 >= 2*m1 holds
    automatically because m1 is the minimum.  Returns the permutation,
    the parameters, and the comparison state (in the relabeled frame:
    half-soliton on edge 0).
    """
    spec = state.spec
    if spec.edge_count != 3:
        raise DomainError(
            f"comparison construction is defined on the 3-edge star, got {spec.edge_count}"
        )
    masses = edge_masses(state)
    if np.any(masses == 0.0):
        raise ZeroEdgeMassError(
            "an edge carries zero mass, so no sesquisoliton matches it; "
            "the energy bound for such configurations is energy_infimum(M)"
        )
    head = int(np.argmin(masses))
    perm = (head,) + tuple(e for e in range(3) if e != head)
    m1 = float(masses[head])
    m2 = float(masses[perm[1]] + masses[perm[2]])
    params = SesquiParams.solve(m1, m2)
    return perm, params, sesquisoliton(params, spec)


def scan_sesqui_curve(M: float, m1_values, spec: GraphSpec) -> CurveScan:
    """Sesquisoliton energies along m1, closed form vs discrete.

    m1 values must be strictly ascending within (0, M/3].  The discrete
    energies are checked to be strictly increasing up to a 1e-8 slack
    between neighbors, echoing the monotonicity of the closed form.
    """
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    m1s = np.asarray(m1_values, dtype=float)
    if m1s.ndim != 1 or len(m1s) == 0:
        raise DomainError("m1_values must be a nonempty 1-D sequence")
    if len(m1s) >= 2 and not np.all(np.diff(m1s) > 0):
        raise DomainError("m1_values must be strictly ascending")
    hi = (M / 3.0) * (1.0 + 1e-12)
    if m1s[0] <= 0 or m1s[-1] > hi:
        raise DomainError(f"m1 values must lie in (0, {M / 3.0}]")
    closed = np.array([energy_sesqui_closed(m1, M) for m1 in m1s])
    offsets = np.empty_like(m1s)
    discrete = np.empty_like(m1s)
    for k, m1 in enumerate(m1s):
        params = SesquiParams.solve(m1, M - m1)
        offsets[k] = params.offset
        discrete[k] = energy(sesquisoliton(params, spec)).total
    if len(discrete) >= 2 and not np.all(np.diff(discrete) > -1e-8):
        raise GraphNLSError(
            "discrete sesquisoliton energies failed to increase along m1; "
            "the grid is too coarse for this scan"
        )
    return CurveScan(
        param_name="m1",
        param_values=m1s,
        closed_energy=closed,
        discrete_energy=discrete,
        metadata=_grid_metadata(M, spec),
        extras={"offset": offsets},
    )


def dilation_family(M: float, lam: float, spec: GraphSpec) -> GraphState:
    """sqrt(lam) * phi_{M/3}(lam x) on every edge: mass-preserving dilation."""
    if not lam > 0:
        raise DomainError(f"dilation parameter must be positive, got {lam}")
    if spec.edge_count != 3:
        raise DomainError("the dilation family lives on the 3-edge star")
    m = M / 3.0
    x = spec.coordinates()
    edge = np.sqrt(lam) * (m / math.sqrt(2.0)) / np.cosh(0.5 * m * lam * x)
    return GraphState.from_edges(spec, [edge] * 3)


def scan_dilation_curve(M: float, lambda_values, spec: GraphSpec) -> CurveScan:
    """Energies along the symmetric dilation family through the saddle.

    Closed form lam^2*K - lam*P with K = M^3/216, P = M^3/108: a
    parabola with its minimum at lam = 1, where the family crosses the
    stationary state.  The scan must include lam = 1.
    """
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    lams = np.asarray(lambda_values, dtype=float)
    if lams.ndim != 1 or len(lams) == 0:
        raise DomainError("lambda_values must be a nonempty 1-D sequence")
    if np.any(lams <= 0):
        raise DomainError("lambda values must be positive")
    if len(lams) >= 2 and not np.all(np.diff(lams) > 0):
        raise DomainError("lambda values must be strictly ascending")
    if not np.any(np.isclose(lams, 1.0, rtol=0.0, atol=1e-9)):
        raise DomainError("the dilation scan must include lambda = 1")
    K = M ** 3 / 216.0
    P = M ** 3 / 108.0
    closed = lams ** 2 * K - lams * P
    discrete = np.empty_like(lams)
    masses = np.empty_like(lams)
    for k, lam in enumerate(lams):
        st = dilation_family(M, lam, spec)
        rep = energy(st)
        discrete[k] = rep.total
        masses[k] = rep.mass
    return CurveScan(
        param_name="lambda",
        param_values=lams,
        closed_energy=closed,
        discrete_energy=discrete,
        metadata=_grid_metadata(M, spec),
        extras={"mass": masses},
    )


def minimizing_sequence_demo(M: float, m1_values, spec: GraphSpec) -> CurveScan:
    """Walk the sesquisoliton curve toward the unattained infimum.

    m1 values must be strictly decreasing; for each, the scan reports
    the offset, the discrete energy, and the gap to -M^3/96.  Gaps must
    come out positive and strictly decreasing, demonstrating a
    minimizing sequence with no minimizer.  Requires the soliton peak
    to stay at least 5 widths (width = 4/m2) from the far boundary,
    otherwise a TruncationError reports the admissible m1 floor.
    """
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    m1s = np.asarray(m1_values, dtype=float)
    if m1s.ndim != 1 or len(m1s) == 0:
        raise DomainError("m1_values must be a nonempty 1-D sequence")
    if len(m1s) >= 2 and not np.all(np.diff(m1s) < 0):
        raise DomainError("m1_values must be strictly decreasing")
    hi = (M / 3.0) * (1.0 + 1e-12)
    if m1s[-1] <= 0 or m1s[0] > hi:
        raise DomainError(f"m1 values must lie in (0, {M / 3.0}]")
    L = spec.truncation_length
    for m1 in m1s:
        m2 = M - m1
        if solve_offset(m1, m2) + 5.0 * (4.0 / m2) > L:
            # Leading-order offset for small m1 is (4/M) log(M/m1), so
            # the admissible floor is roughly M exp(-(M L - 20)/4).
            floor = M * math.exp(-(M * L - 20.0) / 4.0)
            raise TruncationError(
                f"m1 = {m1} pushes the soliton peak too close to the "
                f"truncation boundary L = {L}; smallest admissible m1 is "
                f"about {floor:.3e}",
                floor,
            )
    closed = np.array([energy_sesqui_closed(m1, M) for m1 in m1s])
    offsets = np.empty_like(m1s)
    discrete = np.empty_like(m1s)
    for k, m1 in enumerate(m1s):
        params = SesquiParams.solve(m1, M - m1)
        offsets[k] = params.offset
        discrete[k] = energy(sesquisoliton(params, spec)).total
    gaps = discrete - energy_infimum(M)
    if not np.all(gaps > 0):
        raise GraphNLSError("a minimizing-sequence energy fell below the infimum")
    if len(gaps) >= 2 and not np.all(np.diff(gaps) < 0):
        raise GraphNLSError("minimizing-sequence gaps failed to decrease")
    return CurveScan(
        param_name="m1",
        param_values=m1s,
        closed_energy=closed,
        discrete_energy=discrete,
        metadata=_grid_metadata(M, spec),
        extras={"offset": offsets, "gap": gaps},
    )


def hessian_probe(
    center: GraphState, direction: GraphState, epsilon: float, label: str = "probe"
) -> SaddleReport:
    """Second difference of the mass-constrained energy along a direction.

    Probe states center +- eps*direction are rescaled back to the
    center's mass before their energies enter the second difference, so
    the result estimates the curvature of the energy restricted to the
    constraint sphere.  Raises ProbeError when the rescaling moves the
    mass by more than 10%, which is where the quadratic reading of the
    result stops being meaningful.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    w = edge_weights(center.spec)
    if float((w * np.abs(direction.values) ** 2).sum()) == 0.0:
        raise DomainError("probe direction must be nonzero")
    M0 = mass(center)
    if not M0 > 0:
        raise DomainError("probe center must have positive mass")
    probed = []
    for sign in (+1.0, -1.0):
        raw = GraphState(center.spec, center.values + sign * epsilon * direction.values)
        m_raw = mass(raw)
        if abs(m_raw / M0 - 1.0) > 0.1:
            raise ProbeError(
                f"epsilon = {epsilon} moves the mass by "
                f"{abs(m_raw / M0 - 1.0):.1%}; the probe is not meaningful "
                "beyond 10%"
            )
        probed.append(energy(rescale_mass(raw, M0)).total)
    e_center = energy(center).total
    sd = (probed[0] + probed[1] - 2.0 * e_center) / epsilon ** 2
    return SaddleReport(
        direction=label,
        epsilon=epsilon,
        second_difference=sd,
        energy_plus=probed[0],
        energy_minus=probed[1],
        energy_center=e_center,
        metadata=_grid_metadata(M0, center.spec),
    )


def sesqui_tangent(M: float, spec: GraphSpec, delta: float = 0.1) -> GraphState:
    """Chord of the sesquisoliton curve ending at the stationary state.

    Finite difference (in m1) of mass-projected sesquisolitons at
    m1 = M/3 and M/3 - delta.  The curve meets the stationary state
    with a square-root cusp in m1, so this chord is dominated by the
    family's offset direction and its norm grows like 1/sqrt(delta);
    probes along it need only a sign, not a normalization.
    """
    if not 0 < delta < M / 3.0:
        raise DomainError(f"delta must lie in (0, M/3), got {delta}")
    top = rescale_mass(
        sesquisoliton(SesquiParams.solve(M / 3.0, 2.0 * M / 3.0), spec), M
    )
    below = rescale_mass(
        sesquisoliton(SesquiParams.solve(M / 3.0 - delta, 2.0 * M / 3.0 + delta), spec), M
    )
    return GraphState(spec, (top.values - below.values) / delta)


def dilation_tangent(M: float, spec: GraphSpec, delta: float = 1e-3) -> GraphState:
    """Central-difference tangent of the dilation family at lambda = 1."""
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    plus = rescale_mass(dilation_family(M, 1.0 + delta, spec), M)
    minus = rescale_mass(dilation_family(M, 1.0 - delta, spec), M)
    return GraphState(spec, (plus.values - minus.values) / (2.0 * delta))


def phase_direction(state: GraphState) -> GraphState:
    """i times the state: the gauge direction, along which energy is flat."""
    return GraphState(state.spec, 1j * state.values)


def sesqui_curve_second_derivative(M: float, m1: float, delta: float = 1e-3) -> float:
    """d^2/dm1^2 of the closed-form curve energy by central differences.

    The closed form is a cubic polynomial in m1, so the central second
    difference is exact up to rounding for any delta; evaluation slightly
    past M/3 uses the polynomial itself, not a trial state.  At
    m1 = M/3 the value is -M/8.
    """
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    if not 0 < m1 <= (M / 3.0) * (1.0 + 1e-12):
        raise DomainError(f"m1={m1} outside (0, M/3] with M={M}")
    if not delta > 0:
        raise DomainError("delta must be positive")
    return (
        _sesqui_energy_poly(m1 + delta, M)
        + _sesqui_energy_poly(m1 - delta, M)
        - 2.0 * _sesqui_energy_poly(m1, M)
    ) / delta ** 2


def gradient_flow_fixed_mass(
    state0: GraphState,
    step: float = 0.1,
    max_iters: int = 500,
    grad_tol: float = 1e-3,
):
    """Projected gradient descent on the mass sphere.

    Iterates Psi <- rescale_mass(Psi - s * energy_gradient(Psi), M)
    with backtracking: a trial step that raises the energy halves s and
    is retried (never recorded); accepted steps grow s by 1.2 back
    toward the initial step.  Terminates when the projected-gradient
    norm ||grad E + best_omega * Psi|| drops to grad_tol, or after
    max_iters accepted steps.  Step underflow below 1e-12 raises
    StallError carrying the partial trace.

    Returns (final state, FlowTrace); trace extras record the projected
    gradient norm and the position (edge, coordinate) of the modulus
    maximum, a proxy for where the escaping soliton sits.
    """
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    if max_iters < 0:
        raise DomainError("max_iters must be nonnegative")
    M0 = mass(state0)
    if not M0 > 0:
        raise DomainError("gradient flow needs a state with positive mass")
    spec = state0.spec
    w = edge_weights(spec)
    h = spec.spacing
    N = spec.points_per_edge

    times, masses, energies, phases, per_edge = [], [], [], [], []
    grad_norms, peak_edges, peak_coords = [], [], []
    initial = state0

    def build_trace():
        return FlowTrace(
            times=np.array(times),
            masses=np.array(masses),
            energies=np.array(energies),
            vertex_phase=np.array(phases),
            edge_masses=np.stack(per_edge, axis=0),
            extras={
                "grad_norm": np.array(grad_norms),
                "peak_edge": np.array(peak_edges, dtype=float),
                "peak_coordinate": np.array(peak_coords),
            },
        )

    def record(it, st, e_total, pg_norm):
        times.append(float(it))
        masses.append(mass(st))
        energies.append(e_total)
        phases.append(float(np.angle(weighted_inner(initial, st))))
        per_edge.append(edge_masses(st))
        grad_norms.append(pg_norm)
        flat = int(np.argmax(np.abs(st.values)))
        peak_edges.append(flat // N)
        peak_coords.append((flat % N) * h)

    def projected_gradient_norm(st, g):
        omega_hat = best_omega(st)
        r = g.values + omega_hat * st.values
        return float(np.sqrt((w * np.abs(r) ** 2).sum()))

    current = state0
    e_current = energy(current).total
    g = energy_gradient(current)
    pg = projected_gradient_norm(current, g)
    record(0, current, e_current, pg)
    s = step
    for it in range(1, max_iters + 1):
        if pg <= grad_tol:
            break
        while True:
            trial = rescale_mass(
                GraphState(spec, current.values - s * g.values), M0
            )
            e_trial = energy(trial).total
            if e_trial < e_current:
                break
            s *= 0.5
            if s < 1e-12:
                raise StallError(
                    "gradient flow stalled: no descent step above 1e-12", build_trace()
                )
        current, e_current = trial, e_trial
        s = min(s * 1.2, step)
        g = energy_gradient(current)
        pg = projected_gradient_norm(current, g)
        record(it, current, e_current, pg)
    return current, build_trace()


def shift_perturbation(M: float, spec: GraphSpec, fraction: float = 0.01) -> GraphState:
    """Stationary state with mass slid between the last two edges.

    The profiles on edges 1 and 2 are translated by +/-eta along their
    common line, which carries `fraction` of the total mass across the
    vertex from edge 2 to edge 1 while leaving edge 0 untouched.  This
    is the antisymmetric kick that seeds the unstable channel of the
    saddle; the fixed-mass gradient flow escapes from it.  The small
    vertex mismatch of the translated profiles is averaged out before
    the final mass rescale.
    """
    if spec.edge_count != 3:
        raise DomainError("shift perturbation is defined on the 3-edge star")
    if not 0.0 < fraction < 1.0 / 3.0:
        raise DomainError("fraction must lie in (0, 1/3)")
    m = M / spec.edge_count
    # a shift eta moves m*tanh(m*eta/2) of mass onto the receiving edge
    eta = (2.0 / m) * math.atanh(fraction * M / m)
    x = spec.coordinates()
    amp = m / math.sqrt(2.0)
    rows = [
        amp / np.cosh(m * x / 2.0),
        amp / np.cosh(m * (x - eta) / 2.0),
        amp / np.cosh(m * (x + eta) / 2.0),
    ]
    vals = np.asarray(rows, dtype=complex)
    vals[:, 0] = vals[:, 0].mean()
    return rescale_mass(GraphState(spec, vals), M)


def deposit_perturbation(M: float, spec: GraphSpec, fraction: float = 0.01) -> GraphState:
    """Stationary state with mass moved from edge 0 onto the other edges.

    Edge 0 is scaled down and every other edge scaled up so that
    `fraction` of the total mass leaves edge 0, split evenly.  The
    result keeps the symmetry among the receiving edges, and in that
    symmetric subspace the stationary state is a strict constrained
    local minimum: the gradient flow carries this start back to the
    stationary energy instead of escaping.
    """
    if not 0.0 < fraction < 1.0 / 3.0:
        raise DomainError("fraction must lie in (0, 1/3)")
    state, _ = stationary_state(M, spec)
    moved = fraction * M
    edge0 = M / spec.edge_count
    rest = spec.edge_count - 1
    vals = state.values.copy()
    vals[0] *= math.sqrt(1.0 - moved / edge0)
    vals[1:] *= math.sqrt(1.0 + moved / (rest * edge0))
    vals[:, 0] = vals[:, 0].mean()
    return rescale_mass(GraphState(spec, vals), M)


def random_vertex_continuous_state(
    spec: GraphSpec,
    rng: np.random.Generator,
    target_mass: float | None = None,
    control_points: int = 9,
) -> GraphState:
    """Smooth random state: per-edge cubic splines sharing the vertex value.

    Control values are complex Gaussians at equispaced nodes; the
    vertex control is shared across edges (exact continuity) and the
    last two controls are zero so the state dies off well before the
    truncation boundary.  Optionally rescaled to a target mass.
    """
    if control_points < 4:
        raise DomainError("need at least 4 control points")
    L = spec.truncation_length
    nodes = np.linspace(0.0, L, control_points)
    x = spec.coordinates()
    vertex_value = complex(rng.standard_normal() + 1j * rng.standard_normal())
    rows = []
    for _ in range(spec.edge_count):
        ctrl = rng.standard_normal(control_points) + 1j * rng.standard_normal(control_points)
        ctrl[0] = vertex_value
        ctrl[-2:] = 0.0
        vals = CubicSpline(nodes, ctrl)(x)
        vals[-1] = 0.0
        rows.append(vals)
    state = GraphState.from_edges(spec, rows)
    if target_mass is not None:
        state = rescale_mass(state, target_mass)
    return state


def _grid_metadata(M: float, spec: GraphSpec) -> dict:
    return {
        "M": M,
        "edges": spec.edge_count,
        "length": spec.truncation_length,
        "points": spec.points_per_edge,
    }
