"""Parameter searches: code distance over (G, phi), transmissivities, decoder gain."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .codes import CodeSpec, Family, initial_generator
from .decoder import error_rate_integral, gain_lownoise, gain_two_qubit, simulate_error_rate
from .errors import DomainError, UnsupportedError
from .lattice import code_distance, default_cutoff
from .symplectic import bs_array, dtms_encoder

CSS, BALANCED = "css", "balanced"


@dataclass
class OptimizationResult:
    family: str
    n_modes: int
    d: int
    mode: str
    best_params: dict
    best_distance: float
    evaluations: int
    verified: bool
    pauli_distances: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)      # (gain, phase, distance)
    grid: Optional[dict] = None                   # coarse scan, for contour plots

    @property
    def gain(self) -> float:
        return self.best_params["gain"]

    def to_dict(self, include_trace: bool = False) -> dict:
        out = {
            "family": self.family, "n_modes": self.n_modes, "d": self.d, "mode": self.mode,
            "best_params": {k: float(v) for k, v in self.best_params.items()},
            "best_distance": float(self.best_distance),
            "pauli_distances": {k: float(v) for k, v in self.pauli_distances.items()},
            "evaluations": int(self.evaluations), "verified": bool(self.verified),
        }
        if include_trace:
            out["trace"] = [[float(x) for x in row] for row in self.trace]
        return out


def _spec(family, N, d, G, phi) -> CodeSpec:
    family = Family(family)
    if family is Family.DTMS:
        return CodeSpec.dtms(N, d, G, phi)
    if family is Family.DTMS2:
        return CodeSpec.dtms2(N, G, phi)
    raise UnsupportedError(f"cannot optimize family {family.value!r}")


def distance_grid(family, N: int, d: int, gains, phases, cutoff: Optional[int] = None) -> np.ndarray:
    """Code distance on a (gain, phase) grid; rows follow ``gains``, columns ``phases``."""
    if cutoff is None:
        cutoff = default_cutoff(N)
    return np.array([[code_distance(_spec(family, N, d, G, p), cutoff=cutoff,
                                    verify=False).code_distance for p in phases]
                     for G in gains])


def _grid_peaks(table):
    """Cells no lower than any neighbour; the phase axis wraps around."""
    padded = np.pad(table, ((1, 1), (0, 0)), constant_values=-np.inf)
    peak = np.ones(table.shape, bool)
    for a in (-1, 0, 1):
        for b in ((-1, 0, 1) if table.shape[1] > 1 else (0,)):
            if a or b:
                peak &= table >= np.roll(np.roll(padded, a, 0), b, 1)[1:-1]
    return list(zip(*np.nonzero(peak)))


def optimize_distance(family="dtms", N: int = 2, d: int = 2, mode: str = CSS,
                      grid=(60, 45), g_max: float = 4.0, xatol: float = 1e-6,
                      cutoff: Optional[int] = None, n_starts: int = 6) -> OptimizationResult:
    """Coarse grid scan of the code distance followed by Nelder-Mead refinement.

    CSS mode fixes phi = 0 and searches the gain only; balanced mode searches
    (G, phi) with phi in [0, pi/2).  Nelder-Mead starts from the ``n_starts``
    best local maxima of the grid.
    """
    mode = mode.lower()
    if mode not in (CSS, BALANCED):
        raise DomainError(f"mode must be '{CSS}' or '{BALANCED}'")
    _spec(family, N, d, 1.0, 0.0)  # validates family and sizes
    if cutoff is None:
        cutoff = default_cutoff(N)
    trace = []

    def dist(G, phi):
        if G < 1.0 or G > g_max:
            return 0.0
        D = code_distance(_spec(family, N, d, G, phi), cutoff=cutoff, verify=False).code_distance
        trace.append((G, phi, D))
        return D

    n_g, n_phi = grid
    gs = np.linspace(1.0, g_max, n_g)
    phis = np.array([0.0]) if mode == CSS else np.linspace(0, np.pi / 2, n_phi, endpoint=False)
    table = np.array([[dist(G, p) for p in phis] for G in gs])
    dg = gs[1] - gs[0] if n_g > 1 else 0.1
    dp = phis[1] - phis[0] if len(phis) > 1 else 0.1

    # Refine from the best grid local maxima (row-major order breaks ties
    # towards small (G, phi)).  Equally tall peaks and ridges occur at
    # different gains; among equal distances the smallest gain wins.
    order = sorted(_grid_peaks(table), key=lambda ij: (-table[ij], ij))
    candidates = []
    for i, j in order[:n_starts]:
        if mode == CSS:
            x0 = np.array([gs[i]])
            simplex = np.array([[gs[i]], [min(gs[i] + dg, g_max)]])
            f = lambda x: -dist(x[0], 0.0)
        else:
            x0 = np.array([gs[i], phis[j]])
            simplex = np.array([x0, x0 + [dg, 0], x0 + [0, dp]])
            f = lambda x: -dist(x[0], float(np.mod(x[1], np.pi / 2)))
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"xatol": xatol, "fatol": 1e-12, "initial_simplex": simplex})
        G_r = float(res.x[0])
        phi_r = 0.0 if mode == CSS else float(np.mod(res.x[1], np.pi / 2))
        candidates.append((-res.fun, G_r, phi_r))
        candidates.append((table[i, j], float(gs[i]), float(phis[j])))
    D_top = max(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] >= D_top - 1e-9]
    G_low = min(c[1] for c in tied)
    # gains closer than the refinement tolerance count as equal
    _, G_best, phi_best = min((c for c in tied if c[1] <= G_low + 10 * xatol),
                              key=lambda c: (c[2], c[1]))

    report = code_distance(_spec(family, N, d, G_best, phi_best), cutoff=cutoff, verify=True)
    return OptimizationResult(
        Family(family).value, N, d, mode, {"gain": G_best, "phase": phi_best},
        report.code_distance, len(trace), report.verified_at_cutoff_plus_one,
        report.pauli_distances, trace,
        {"gain": gs.tolist(), "phase": phis.tolist(), "distance": table.tolist()},
    )


def balance_report(code, logicals=None, cutoff: Optional[int] = None):
    """(D_X, D_Y, D_Z) of a single-qubit code (spec, built code, or generator + logicals)."""
    rep = code_distance(code, logicals, None if logicals is None else [2],
                        cutoff=cutoff, verify=False)
    pd = rep.pauli_distances
    if set(pd) != {"X", "Y", "Z"}:
        raise UnsupportedError("balance report needs a single-qubit code")
    return pd["X"], pd["Y"], pd["Z"]


def saturation_distance(family, G: float) -> float:
    family = Family(family)
    if family is Family.DTMS:
        return float(np.sqrt((2 * G - 1) * np.pi))
    if family is Family.DTMS2:
        return float(np.sqrt(G * np.pi))
    raise UnsupportedError("saturation relation is only defined for dtms families")


def saturation_check(family, N: int, result, tol: float = 0.02) -> bool:
    """True if the distance sits on the upper bound implied by its gain.

    ``result`` is an OptimizationResult or a (gain, distance) pair.
    """
    if isinstance(result, OptimizationResult):
        G, D = result.gain, result.best_distance
    else:
        G, D = result
    return abs(D - saturation_distance(family, G)) <= tol


# ---------------------------------------------------------------------------
# exploratory search over the beamsplitter array


def staircase_distance(N: int, G: float, etas, d: int = 2, cutoff: Optional[int] = None) -> float:
    """Distance of a CSS single-data code whose ancilla array has transmissivities ``etas``."""
    K = N - 1
    B = bs_array(np.clip(etas, 0.0, 1.0), np.zeros(K))
    S = dtms_encoder(N, G, ancilla_array=B)
    M_in = initial_generator([d], N)
    logicals = (S @ np.diag(1.0 / np.diag(M_in)))[:, :2]
    return code_distance(S @ M_in, logicals, [d], cutoff=cutoff, verify=False).code_distance


def _best_gain(N, etas, d, g_max, cutoff):
    f = lambda G: -staircase_distance(N, G, etas, d, cutoff)
    gs = np.linspace(1.0, g_max, 16)
    vals = [f(G) for G in gs]
    i = int(np.argmin(vals))
    lo, hi = gs[max(i - 1, 0)], gs[min(i + 1, len(gs) - 1)]
    r = minimize_scalar(f, bounds=(lo, hi), method="bounded", options={"xatol": 1e-5})
    return (float(r.x), -float(r.fun)) if r.fun <= vals[i] else (float(gs[i]), -vals[i])


def explore_transmissivities(N: int, d: int = 2, n_starts: int = 5, seed: int = 0,
                             g_max: float = 3.0, cutoff: Optional[int] = None):
    """Maximize the distance over the gain and every staircase transmissivity.

    Each random start runs Nelder-Mead over the transmissivities; for each
    candidate the gain is optimized by a bounded scalar search.  Returns a
    list of dicts with keys ``etas``, ``gain`` and ``distance``.
    """
    if N < 3:
        raise DomainError("need at least two ancillae")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_starts):
        x0 = rng.uniform(0.15, 0.85, N - 2)

        def obj(x):
            if np.any(x <= 0) or np.any(x >= 1):
                return 0.0
            return -_best_gain(N, x, d, g_max, cutoff)[1]

        res = minimize(obj, x0, method="Nelder-Mead",
                       options={"xatol": 1e-4, "fatol": 1e-9, "maxiter": 400})
        G, D = _best_gain(N, res.x, d, g_max, cutoff)
        out.append({"etas": res.x.tolist(), "gain": G, "distance": D})
    return out


# ---------------------------------------------------------------------------
# decoder gain at low noise


def optimize_gain_lownoise(spec: CodeSpec, sigma0: float = 0.15, trials: Optional[int] = None,
                           seed: int = 0, g_max: float = 3.0, method: str = "integral") -> float:
    """Gain minimizing Pr[X] at noise ``sigma0`` (golden-section search).

    ``method="integral"`` uses the numerically integrated error rate, which
    resolves the tiny rates found at low noise; ``method="mc"`` uses Monte
    Carlo with common random numbers (the same seed for every gain), only
    useful when the rate is large enough to be sampled.
    """
    if spec.family is Family.DTMS and spec.n_modes == 1:
        return 1.0
    if method == "integral":
        def f(G):
            return np.log(max(error_rate_integral(spec.with_gain(G), sigma0), 1e-300))
    elif method == "mc":
        n = trials or 10**6

        def f(G):
            r = simulate_error_rate(spec.with_gain(G), sigma0, n, seed)
            return np.log((r.counts["X1" if r.two_qubit else "X"] + 0.5) / n)
    else:
        raise DomainError("method must be 'integral' or 'mc'")
    gs = np.linspace(1.0 + 1e-6, g_max, 25)
    vals = [f(G) for G in gs]
    i = int(np.argmin(vals))
    if 0 < i < len(gs) - 1:
        r = minimize_scalar(f, bracket=(gs[i - 1], gs[i], gs[i + 1]), method="golden",
                            options={"xtol": 1e-6})
        return float(r.x)
    return float(gs[i])


def closed_form_gain(spec: CodeSpec) -> float:
    if spec.family is Family.DTMS:
        return float(gain_lownoise(spec.n_modes, spec.local_dims[0]))
    if spec.family is Family.DTMS2:
        return float(gain_two_qubit(spec.n_modes))
    raise UnsupportedError("closed-form gain is only defined for dtms families")
