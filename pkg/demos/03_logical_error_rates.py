"""Logical error rates of the two-stage linear decoder.

Compares Monte Carlo counts with the numerical integral and the erfc
asymptote at low noise, then locates where the multi-mode codes stop
beating the square code.
"""
import numpy as np

from dtmsgkp import CodeSpec
from dtmsgkp.decoder import (
    asymptotic_px, error_rate_integral, gain_lownoise, simulate_error_rate,
)
from dtmsgkp.symplectic import gain_to_db

trials = 10**6
print(" N   gain    dB   sigma   Monte Carlo   integral      asymptote")
for N in (1, 2, 3, 4):
    G = gain_lownoise(N, 2)
    spec = CodeSpec.dtms(N, 2, G)
    for sigma in (0.25, 0.3, 0.4):
        mc = simulate_error_rate(spec, sigma, trials, seed=1, threads=4)
        print(f"{N:2d} {G:6.4f} {gain_to_db(G):5.2f} {sigma:6.2f}   {mc.px:.4e}   "
              f"{error_rate_integral(spec, sigma):.4e}   {asymptotic_px(N, 2, sigma):.4e}")

# At high noise the square code wins again; the curves cross near 0.55.
square = CodeSpec.dtms(1, 2, 1.0)
print("\nsigma   N=1      N=2      N=3")
for sigma in np.arange(0.48, 0.62, 0.02):
    rates = [error_rate_integral(square, sigma)] + [
        error_rate_integral(CodeSpec.dtms(N, 2, gain_lownoise(N, 2)), sigma) for N in (2, 3)]
    print(f"{sigma:.2f}  " + "  ".join(f"{p:.4f}" for p in rates))
