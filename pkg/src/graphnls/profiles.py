"""Closed-form soliton profiles and their energies.

Building blocks, all for the cubic focusing nonlinearity:

* half_soliton: phi_m(x) = (m/sqrt(2)) sech(m x / 2), the half-line
  soliton tail with mass m, peak at x = 0.  Its H^1 and L^4 integrals
  are m^3/12 and m^3/3, so its energy is -m^3/24.

* line_soliton: (m/(2 sqrt(2))) sech(m (xi - y) / 4), the full-line
  soliton with mass m centered at xi = y; energy -m^3/96.

* sesquisoliton: a trial state on the 3-edge star made of a half-soliton
  of mass m1 on edge 0 and the two halves of a mass-m2 line soliton,
  shifted outward by a common offset so all three edges meet
  continuously at the vertex.  Exists iff m2 >= 2 m1; its energy has the
  closed form -m1^3/24 + (m1 - M)^3/96 where M = m1 + m2.

* stationary_state: the unique critical point at fixed total mass M,
  three identical half-solitons of mass M/3 (frequency M^2/36, energy
  -M^3/216).

The infimum of the fixed-mass energy is -M^3/96 (a line soliton escaped
to infinity along two edges); it is approached but never attained, and
the sesquisoliton family with m1 -> 0 realizes a minimizing sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OffsetError
from .graph_core import GraphSpec, GraphState

_OFFSET_EDGE_SLACK = 1e-14


def half_soliton(m: float, spec: GraphSpec) -> np.ndarray:
    """Samples of (m/sqrt(2)) sech(m x / 2) on one edge, shape (N,)."""
    if not m > 0:
        raise DomainError(f"soliton mass must be positive, got {m}")
    x = spec.coordinates()
    return (m / math.sqrt(2.0)) / np.cosh(0.5 * m * x)


def line_soliton(m: float, y: float, xi) -> np.ndarray:
    """Samples of the mass-m line soliton centered at y, on coordinates xi."""
    if not m > 0:
        raise DomainError(f"soliton mass must be positive, got {m}")
    xi = np.asarray(xi, dtype=float)
    return (m / (2.0 * math.sqrt(2.0))) / np.cosh(0.25 * m * (xi - y))


def solve_offset(m1: float, m2: float) -> float:
    """Offset x >= 0 with (m1/sqrt2) = line soliton value at distance x.

    Matching the half-soliton peak against the mass-m2 line soliton
    profile gives cosh(m2 x / 4) = m2 / (2 m1), i.e.
    x = (4/m2) arccosh(m2 / (2 m1)).  Requires m2 >= 2 m1; at equality
    the offset is 0 and the sesquisoliton degenerates to the symmetric
    three-half-soliton state when additionally m1 = m2/2 = M/3.
    """
    if not (m1 > 0 and m2 > 0):
        raise DomainError(f"masses must be positive, got m1={m1}, m2={m2}")
    ratio = m2 / (2.0 * m1)
    if ratio < 1.0 - _OFFSET_EDGE_SLACK:
        raise OffsetError(
            f"no continuous matching exists for m1={m1}, m2={m2}: needs m2 >= 2*m1"
        )
    # Rounding can land a hair below 1 at the degenerate corner; clamp.
    ratio = max(ratio, 1.0)
    if ratio > 1e8:
        # acosh(z) = log(2z) up to O(z^-2); avoids overflow of z + sqrt(z^2-1)
        # in intermediate precision for extreme mass ratios.
        return (4.0 / m2) * math.log(2.0 * ratio)
    return (4.0 / m2) * math.acosh(ratio)


@dataclass(frozen=True)
class SesquiParams:
    """Masses and vertex offset of a sesquisoliton trial state."""

    m1: float
    m2: float
    offset: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise DomainError(f"masses must be positive, got m1={self.m1}, m2={self.m2}")
        expected = solve_offset(self.m1, self.m2)
        if not math.isclose(self.offset, expected, rel_tol=1e-10, abs_tol=1e-12):
            raise DomainError(
                f"offset {self.offset} does not match the masses "
                f"(continuity needs {expected})"
            )

    @classmethod
    def solve(cls, m1: float, m2: float) -> "SesquiParams":
        return cls(m1=m1, m2=m2, offset=solve_offset(m1, m2))

    @property
    def total_mass(self) -> float:
        return self.m1 + self.m2


def sesquisoliton(params: SesquiParams, spec: GraphSpec) -> GraphState:
    """Sesquisoliton trial state on the 3-edge star.

    Edge 0 carries the half-soliton of mass m1.  Edges 1 and 2 carry the
    two halves of the mass-m2 line soliton: on the straightened line
    through the vertex (edge 1 at xi < 0, edge 2 at xi > 0) the soliton
    is centered at xi = -offset, so edge 1 holds the bump with its peak
    a distance offset from the vertex and edge 2 holds the monotone far
    tail.  Swapping edges 1 and 2 gives the mirror state with the same
    energy; this constructor fixes the peak on edge 1.
    """
    if spec.edge_count != 3:
        raise DomainError(
            f"sesquisoliton is defined on the 3-edge star, got {spec.edge_count} edges"
        )
    x = spec.coordinates()
    e0 = half_soliton(params.m1, spec)
    # Straightened coordinate: edge 1 is xi = -x, edge 2 is xi = +x.
    # Soliton centered at xi = -offset puts the peak on edge 1.
    e1 = line_soliton(params.m2, params.offset, x)
    e2 = line_soliton(params.m2, -params.offset, x)
    return GraphState.from_edges(spec, [e0, e1, e2])


@dataclass(frozen=True)
class StationaryInfo:
    """Parameters of the symmetric stationary state at total mass M."""

    total_mass: float
    omega: float
    energy: float


def stationary_state(M: float, spec: GraphSpec):
    """Three half-solitons of mass M/3: the unique fixed-mass critical point.

    Returns (state, info) with info.omega = M^2/36 and
    info.energy = -M^3/216.  It is a saddle of the fixed-mass energy,
    not a minimum.
    """
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    if spec.edge_count != 3:
        raise DomainError(
            f"the stationary state lives on the 3-edge star, got {spec.edge_count} edges"
        )
    edge = half_soliton(M / 3.0, spec)
    state = GraphState.from_edges(spec, [edge] * 3)
    info = StationaryInfo(total_mass=M, omega=M * M / 36.0, energy=-(M ** 3) / 216.0)
    return state, info


def energy_infimum(M: float) -> float:
    """Greatest lower bound -M^3/96 of the energy at total mass M (not attained)."""
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    return -(M ** 3) / 96.0


def _sesqui_energy_poly(m1: float, M: float) -> float:
    # The closed form as a polynomial, valid for any real m1; domain
    # checks live in energy_sesqui_closed.
    return -(m1 ** 3) / 24.0 + ((m1 - M) ** 3) / 96.0


def energy_sesqui_closed(m1: float, M: float) -> float:
    """Closed-form sesquisoliton energy -m1^3/24 + (m1-M)^3/96.

    Defined for 0 < m1 <= M/3 (so that m2 = M - m1 >= 2 m1).  Strictly
    increasing in m1, tending to -M^3/96 as m1 -> 0 and reaching the
    stationary energy -M^3/216 with zero slope at m1 = M/3.
    """
    if not M > 0:
        raise DomainError(f"total mass must be positive, got {M}")
    if not 0 < m1 <= (M / 3.0) * (1.0 + 1e-12):
        raise DomainError(
            f"m1={m1} outside (0, M/3] with M={M}; the trial state needs m2 >= 2*m1"
        )
    return _sesqui_energy_poly(m1, M)
