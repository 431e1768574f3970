"""Condition numbers of the tracking Gramians over random fields.

The N^2 x N^2 unitary-tracking Gramian G is routinely ill-conditioned, while
the m x m multiobservable Gramian stays far better behaved; rank deficiency
of the initial state pushes it upward.  This is the small-sample version of
the `motc gramian-dist` experiment.
"""

import numpy as np

from motc import gramian_motc, gramian_unitary, motc_a_vector, propagate
from motc.bench import (
    build_model_system,
    build_observable_set,
    build_pure_ground_state,
    build_thermal_state,
    sample_random_field,
)

system = build_model_system(11, t_final=100.0, q=1024)
oset = build_observable_set(11, 10, np.random.default_rng(0))
thermal = build_thermal_state(system, 1.0)
pure = build_pure_ground_state(system)

rows = []
for k in range(20):
    field = sample_random_field(system, np.random.default_rng(1000 + k))
    prop = propagate(system, field)
    cond_g = gramian_unitary(prop).condition
    cond_th = gramian_motc(motc_a_vector(prop, thermal, oset), prop.weights).condition
    cond_pu = gramian_motc(motc_a_vector(prop, pure, oset), prop.weights).condition
    rows.append((cond_g, cond_th, cond_pu))

table = np.array(rows)
print(f"{'quantity':28s} {'log10 median':>12s} {'log10 mean':>10s}")
for name, col in zip(
    ("G (unitary tracking)", "Gamma (m=10, thermal)", "Gamma (m=10, pure)"), table.T
):
    logs = np.log10(col)
    print(f"{name:28s} {np.median(logs):12.2f} {logs.mean():10.2f}")
print("\npure-state Gamma sits above the full-rank thermal one, and G is")
print("orders of magnitude worse than either; solves above condition 1e10")
print("switch to the truncated pseudo-inverse automatically.")
