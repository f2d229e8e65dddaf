"""Entanglement measures of a few three-qubit states, and their canonical forms."""
import numpy as np

import entwb
from entwb import states as st

examples = {
    "GHZ": st.ghz_state(),
    "W": st.w_state(),
    "|000>": st.basis_state("000"),
    "Bell x |0>": np.kron(np.array([1, 0, 0, 1]) / np.sqrt(2), [1, 0]),
    "Haar #0": entwb.haar_random_state(0, 0),
}

print(f"{'state':12s} {'g':>8s} {'tau':>8s} {'E_r':>8s} {'N_A':>8s} {'E_R>=':>8s}  class")
for name, psi in examples.items():
    r = entwb.measure_report(psi)
    print(f"{name:12s} {r.g:8.5f} {r.tau:8.5f} {r.residual_bipartite:8.5f} "
          f"{r.negativity[0]:8.5f} {r.er_lower:8.5f}  {r.slocc}")

# canonical form of a random state, and the round trip back to it
psi = examples["Haar #0"]
c = entwb.canonicalize(psi)
print("\ncanonical form of Haar #0:")
print(f"  g={c.g:.6f} t=({c.t1:.6f}, {c.t2:.6f}, {c.t3:.6f}) h={c.h:.6f} gamma={c.gamma:.6f}")
print(f"  fidelity of the restored state: {st.fidelity(c.restore(), psi):.12f}")
