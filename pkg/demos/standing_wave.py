"""Evolve the stationary profile and watch it rotate in place.

The profile refined to the exact discrete grid keeps its modulus frozen
to near machine precision while its phase advances at omega = M^2/36.
Running the time step backward returns to the start, confirming the
scheme's time symmetry.
"""

import os

import numpy as np

from graphnls import (
    EvolutionConfig,
    GraphSpec,
    discrete_stationary_state,
    evolve,
    measure_omega,
)

M = 6.0
OUT = os.environ.get("GRAPHNLS_OUT", "demo_output")


def main():
    os.makedirs(OUT, exist_ok=True)
    spec = GraphSpec(3, 30.0, 1024)
    state, omega_grid = discrete_stationary_state(M, spec)
    print(f"discrete stationary profile, grid omega {omega_grid:.8f} "
          f"(continuum M^2/36 = {M*M/36})\n")

    config = EvolutionConfig(dt=1e-3, t_final=1.0, observe_every=10)
    final, trace = evolve(state, config)
    print(f"evolved to t = {config.t_final} in {int(config.t_final/config.dt)} steps")
    print(f"  measured omega      {measure_omega(trace):.8f}")
    print(f"  mass drift          {trace.mass_drift:.3e}")
    print(f"  energy drift (rel)  {trace.energy_drift:.3e}")
    modulus_move = np.max(np.abs(np.abs(final.values) - np.abs(state.values)))
    print(f"  modulus drift       {modulus_move:.3e}")

    back, _ = evolve(final, EvolutionConfig(dt=-1e-3, t_final=1.0))
    err = np.max(np.abs(back.values - state.values))
    print(f"  reversal error      {err:.3e}")

    path = os.path.join(OUT, "standing_wave.csv")
    with open(path, "w") as fh:
        fh.write(trace.to_csv())
    print(f"\ntrace written to {path}")


if __name__ == "__main__":
    main()
