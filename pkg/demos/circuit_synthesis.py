#!/usr/bin/env python3
"""Compiling the walk unitaries into qudit gate lists.

For two qutrits (N = 9) every one of the eight walk unitaries reduces to a
short sequence of Fourier, phase, and controlled-phase gates.  The dense
evaluation of each list is compared against the directly constructed
unitary, and the gate counts are tabulated for growing register sizes to
show the quadratic scaling.
"""

from margulis import PhaseSpaceContext, affine_circuit, equal_up_to_phase, evaluate
from margulis.circuits import gate_list_to_jsonl
from margulis.phasespace import affine_unitary
from margulis.walk import generator_map

d = 3
print(f"qudit dimension d = {d}\n")

print("gate lists at n = 2 qudits (N = 9):")
ctx = PhaseSpaceContext(9)
for label, T in generator_map(9).items():
    gl = affine_circuit(d, 2, T)
    ok, phase = equal_up_to_phase(evaluate(gl), affine_unitary(ctx, T))
    print(f"  {label:<6} {len(gl.gates):2d} gates   matches dense: {ok}   "
          f"aligning phase {phase:.4f}")

print("\nfull dump for T2:")
print(gate_list_to_jsonl(affine_circuit(d, 2, generator_map(9)["T2"]), "T2"))

print("gate counts by register size (quadratic in n):")
print("  n      " + "  ".join(f"{lbl:>6}" for lbl in generator_map(3)))
for n in range(1, 5):
    counts = [len(affine_circuit(d, n, T).gates)
              for T in generator_map(d ** n).values()]
    print(f"  {n}      " + "  ".join(f"{c:6d}" for c in counts))
