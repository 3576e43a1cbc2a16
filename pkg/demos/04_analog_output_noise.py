"""Output noise when the dtms circuit protects an analog mode.

The linear estimate from the GKP ancillae removes most of the amplified
noise; what remains is compared with the asymptotic law and with the
squeezing bound sigma^2 / (2G - 1).
"""
import numpy as np

from dtmsgkp import CodeSpec
from dtmsgkp.decoder import asymptotic_o2o, o2o_variance_lattice_sum, simulate_o2o_variance

trials = 400_000
print(" N  sigma   gain    sim/sigma^2  lattice-sum  asymptote  bound")
for N in (2, 3, 4):
    for sigma in (0.05, 0.1, 0.2, 0.3):
        G, v_asym = asymptotic_o2o(N, sigma)
        spec = CodeSpec.dtms(N, 2, max(G, 1.0))
        mc = simulate_o2o_variance(spec, sigma, trials, seed=0)
        ls = o2o_variance_lattice_sum(spec, sigma, trials, seed=1)
        s2 = sigma**2
        print(f"{N:2d} {sigma:5.2f} {max(G, 1.0):7.3f}   {mc.value / s2:9.4f}  {ls.value / s2:9.4f}"
              f"  {v_asym / s2:9.4f}  {1 / (2 * max(G, 1.0) - 1):6.4f}")

# Without squeezing the decoder has nothing to work with.
mc = simulate_o2o_variance(CodeSpec.dtms(3, 2, 1.0), 0.2, trials, seed=0)
print(f"\nno squeezing: sigma_out/sigma = {np.sqrt(mc.value) / 0.2:.4f}")
