"""Search the (gain, phase) plane for the best dtms codes.

A coarse grid locates the peaks, Nelder-Mead polishes them, and the result
is compared with the squeezing bound sqrt((2G - 1) pi), which the optima
saturate.
"""
import numpy as np

from dtmsgkp import CodeSpec, code_distance
from dtmsgkp.optimize import balance_report, optimize_distance, saturation_distance

for family, N, mode in [("dtms", 2, "css"), ("dtms", 3, "css"), ("dtms", 2, "balanced"),
                        ("dtms", 3, "balanced"), ("dtms2", 3, "css"), ("dtms2", 4, "css")]:
    res = optimize_distance(family, N, 2, mode)
    G, phi = res.gain, res.best_params["phase"]
    print(f"{family:5s} N={N} {mode:8s} G*={G:.5f} phi*={phi:.4f} D*={res.best_distance:.5f} "
          f"bound={saturation_distance(family, G):.5f} evaluations={res.evaluations}")
    if family == "dtms" and mode == "balanced":
        dx, dy, dz = balance_report(CodeSpec.dtms(N, 2, G, phi))
        print(f"      Pauli distances X={dx:.5f} Y={dy:.5f} Z={dz:.5f}")

# Past the optimum extra squeezing hurts: the ancilla lattice crowds the data.
res = optimize_distance("dtms", 2, 2, "css")
for dG in (0.0, 0.25, 0.5, 1.0):
    D = code_distance(CodeSpec.dtms(2, 2, res.gain + dG)).code_distance
    print(f"G = G* + {dG:4.2f}: distance {D:.5f}")
