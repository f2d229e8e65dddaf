"""The maximally entangled family from GHZ to W, and random states above it."""
import numpy as np

import entwb
from entwb import family as fam

print(f"{'gamma/pi':>9s} {'t*':>9s} {'g':>10s} {'h':>10s} {'tau':>8s} {'E_r':>8s}")
for gamma in np.linspace(0, np.pi / 2, 11):
    p = fam.max_entangled_state(gamma)
    m = p.measures
    print(f"{gamma / np.pi:9.3f} {p.t_star:9.6f} {p.g:10.7f} {p.h:10.7f} {m.tau:8.5f} {m.residual_bipartite:8.5f}")

# roots of the degeneracy polynomial at 2pi/5: g1 has its minimum at t*
gamma = 2 * np.pi / 5
s = fam.separation_check(gamma)
print(f"\ngamma = 2pi/5: min g1 = {s.min_g1:.7f} at t = {s.t_min_g1:.5f}, "
      f"max g2 = {s.max_g2:.7f} at t = {s.t_max_g2:.5f}")

# near W the exact family overlap rises linearly in the tangle
for tau in (1e-2, 1e-3, 1e-4):
    print(f"tau = {tau:.0e}: g - 2/3 = {fam.exact_g_near_w(tau) - 2 / 3:.3e}  (tau/16 = {tau / 16:.3e})")

records, summary = entwb.verify_family_envelope(500, seed=1)
print(f"\n{summary['n']} Haar states: min margin above the family = {summary['min_margin']:.3e}, "
      f"violations = {summary['violations']}")
