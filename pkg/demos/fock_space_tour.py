"""A quick tour of the truncated Fock-space toolkit.

Builds ladder operators and elementary gates, and demonstrates the exactness
guarantees the rest of the library leans on: truncate-then-exponentiate gives
exactly unitary gates, and the truncated commutator picks up the expected
boundary term.

Run:  python demos/fock_space_tour.py
"""

import numpy as np

from cvforge import fock, gates

D = 8

# Ladder operators at cutoff D. The commutator of the truncated matrices is
# the identity minus a boundary projector, not the identity itself.
a, a_dag, n = fock.ladder(D)
comm = a @ a_dag - a_dag @ a
print(f"cutoff D = {D}")
print("commutator diagonal:", np.diag(comm).real)
print("(the last entry is 1 - D: the price of truncation)\n")

# Quadratures in the hbar = 2 convention: vacuum variance <x^2> = 1.
x, p = fock.quadratures(D)
print("vacuum <x^2> =", (x @ x)[0, 0].real)

# Every gate is exactly unitary on the truncated space because the
# *generator* is truncated first and then exponentiated.
for name, gate in [
    ("displacement(0.5+0.2i)", gates.displacement(0.5, 0.2, D)),
    ("squeezing(0.3)", gates.squeezing(0.3, D)),
    ("kerr(0.7)", gates.kerr(0.7, D)),
    ("beamsplitter(pi/4)", gates.beamsplitter(np.pi / 4, 0.0, D)),
    ("cubic_phase(0.02)", gates.cubic_phase(0.02, 2 * D)),
]:
    print(f"unitarity defect of {name}: {fock.unitarity_defect(gate):.2e}")

# Vacuum amplitudes agree with the closed forms once the cutoff is padded.
alpha, r = 0.3, 0.2
d_gate = gates.displacement(alpha, 0.0, 16)
s_gate = gates.squeezing(r, 24)
print(f"\n|<0|D({alpha})|0>| = {abs(d_gate[0, 0]):.8f}"
      f"  (exp(-|a|^2/2) = {np.exp(-alpha**2 / 2):.8f})")
print(f"|<0|S({r})|0>|  = {abs(s_gate[0, 0]):.8f}"
      f"  (1/sqrt(cosh r) = {1 / np.sqrt(np.cosh(r)):.8f})")

# A pi/2 beamsplitter swaps the modes: |1,0> -> |0,1> up to phase.
D2 = 4
bs = gates.beamsplitter(np.pi / 2, 0.0, D2)
ket10 = fock.basis_state(1 * D2 + 0, D2 * D2)
out = bs @ ket10
print("\n|1,0> through a pi/2 beamsplitter -> index of largest amplitude:",
      int(np.argmax(np.abs(out))), "(flat index of |0,1>)")

# The Frechet derivative of the exponential drives every gate gradient.
m = 1j * (x @ x) * 0.1
e = 1j * x * 0.05
lhs = fock.expm_frechet(m, e)
h = 1e-6
rhs = (fock.expm_antihermitian(m + h * e) - fock.expm_antihermitian(m - h * e)) / (2 * h)
print(f"\nFrechet derivative vs finite differences: {np.max(np.abs(lhs - rhs)):.2e}")
