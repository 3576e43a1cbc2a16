"""Two-stage linear decoder for CSS dtms codes under additive Gaussian noise.

Stage one (oscillator level): undo the encoder, read the ancilla syndromes
modulo ELL and subtract a linear estimate of the data noise.  Stage two:
round each data quadrature to the nearest logical shift.

Random numbers come from per-block Philox streams keyed by (seed, block);
the block size is fixed, so results do not depend on the number of worker
threads.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import erfc, ndtr

from .codes import CodeSpec, Family, encoder_for
from .errors import DomainError, UnsupportedDecoderError
from .lattice import ELL, centered_mod
from .symplectic import Z2, omega, symplectic_inverse

BLOCK = 1 << 16
WILSON_Z = 1.959963984540054


@dataclass(frozen=True)
class NoiseModel:
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")


def _sigma(noise) -> float:
    return noise.sigma if isinstance(noise, NoiseModel) else NoiseModel(float(noise)).sigma


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for trial block ``block``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.Philox(ss))


def wilson_interval(k: int, n: int, z: float = WILSON_Z):
    if n <= 0:
        return 0.0, 1.0
    p = k / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    # the bounds contain p exactly; round-off would otherwise leak at k = 0 or n
    lo = 0.0 if k == 0 else min(p, max(0.0, mid - half))
    hi = 1.0 if k == n else max(p, min(1.0, mid + half))
    return float(lo), float(hi)


# ---------------------------------------------------------------------------
# linear estimator


def c_gain(G: float) -> float:
    """Estimator gain 2 sqrt(G(G-1)) / (2G - 1)."""
    return 2 * np.sqrt(G * (G - 1)) / (2 * G - 1)


def correlated_noise_cov(S_enc, sigma: float) -> np.ndarray:
    """Covariance of the decoded noise, sigma^2 S^-1 S^-T."""
    Si = symplectic_inverse(S_enc)
    return sigma**2 * Si @ Si.T


def _require_css(spec: CodeSpec):
    if spec.family is Family.FIXTURE:
        raise UnsupportedDecoderError("the linear decoder is defined for dtms families only")
    if spec.phase != 0.0:
        raise UnsupportedDecoderError("the linear decoder needs a CSS code (phi = 0)")


def estimator_matrix(spec: CodeSpec) -> np.ndarray:
    """Linear map from unwrapped ancilla noise to the data-noise estimate."""
    _require_css(spec)
    K = spec.n_ancillae
    if K == 0:
        return np.zeros((2 * spec.n_data, 0))
    C = c_gain(spec.gain)
    row = np.hstack([Z2] * K)
    if spec.family is Family.DTMS:
        return -C / np.sqrt(K) * row
    return -C / np.sqrt(2 * K) * np.vstack([row, row])


class _Decoder:
    # cached matrices for repeated batches
    def __init__(self, spec: CodeSpec):
        _require_css(spec)
        self.spec = spec
        self.k2 = 2 * spec.n_data
        self.Sinv_T = symplectic_inverse(encoder_for(spec)).T
        self.F_T = estimator_matrix(spec).T
        K = spec.n_ancillae
        self.W = omega(K) if K else np.zeros((0, 0))

    def residual(self, e):
        ep = e @ self.Sinv_T
        data, anc = ep[:, : self.k2], ep[:, self.k2:]
        if anc.shape[1] == 0:
            return data
        s = centered_mod(anc @ self.W.T, ELL)
        return data - (s @ self.W) @ self.F_T


def o2o_correct(spec: CodeSpec, e) -> np.ndarray:
    """Residual data noise after the oscillator-level correction.

    ``e`` is a phase-space vector of length 2N or a batch of shape (T, 2N).
    """
    e = np.asarray(e, dtype=float)
    out = _Decoder(spec).residual(np.atleast_2d(e))
    return out[0] if e.ndim == 1 else out


def qudit_correct(d: int, eps):
    """Logical shift class (mod d) left after rounding to the nearest lattice point.

    Exact half-way points go to the neighbour with class 0 when there is
    one, otherwise to the smaller shift.
    """
    if d < 2:
        raise DomainError("d must be >= 2")
    x = np.asarray(eps, dtype=float) / (ELL / np.sqrt(d))
    k = np.floor(x + 0.5)
    tie = (x - np.floor(x)) == 0.5
    if np.any(tie):
        lo = np.floor(x)
        hi = lo + 1
        pick = np.where(np.mod(lo, d) == 0, lo,
                        np.where(np.mod(hi, d) == 0, hi, np.where(np.abs(lo) <= np.abs(hi), lo, hi)))
        k = np.where(tie, pick, k)
    m = np.mod(k, d).astype(np.int64)
    return int(m) if m.ndim == 0 else m


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass
class SimReport:
    spec: dict
    sigma: float
    gain: float
    trials: int
    seed: int
    counts: dict
    residual_variance: list
    rates: dict = field(init=False)
    intervals: dict = field(init=False)

    def __post_init__(self):
        self.rates = {k: v / self.trials for k, v in self.counts.items()}
        self.intervals = {k: wilson_interval(v, self.trials) for k, v in self.counts.items()}

    @property
    def two_qubit(self) -> bool:
        return "X1" in self.counts

    @property
    def px(self) -> float:
        return self.rates["X1" if self.two_qubit else "X"]

    @property
    def sigma_out_sq(self) -> float:
        return float(np.mean(self.residual_variance))

    def to_dict(self) -> dict:
        return {
            "spec": self.spec, "sigma": self.sigma, "gain": self.gain,
            "trials": self.trials, "seed": self.seed,
            "counts": dict(self.counts), "rates": dict(self.rates),
            "intervals": {k: list(v) for k, v in self.intervals.items()},
            "residual_variance": list(self.residual_variance),
        }

    def csv_row(self) -> dict:
        xl = "X1" if self.two_qubit else "X"
        zl = "Z1" if self.two_qubit else "Z"
        yl = "Y1" if self.two_qubit else "Y"
        lo, hi = self.intervals[xl]
        return {
            "family": self.spec["family"], "N": self.spec["n_modes"],
            "k": len(self.spec["local_dims"]), "d": self.spec["local_dims"][0],
            "G": self.gain, "phi": self.spec["phase"], "sigma": self.sigma,
            "trials": self.trials, "px": self.rates[xl], "px_lo": lo, "px_hi": hi,
            "pz": self.rates[zl], "py": self.rates[yl],
            "pjoint": self.rates.get("X1|X2", float("nan")),
            "sigma_out_sq": self.sigma_out_sq, "seed": self.seed,
        }


def _blocks(trials: int):
    nb = -(-trials // BLOCK)
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range(nb)]


def _run_blocks(fn, trials, threads):
    blocks = _blocks(trials)
    if threads and threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(fn, blocks))
    else:
        parts = [fn(b) for b in blocks]
    return parts  # ordered by block index, so reductions are deterministic


def simulate_error_rate(spec: CodeSpec, noise, trials: int, seed: int = 0,
                        threads: int = 1) -> SimReport:
    """Monte Carlo logical error rates of the two-stage decoder."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    sigma = _sigma(noise)
    dec = _Decoder(spec)
    dims = spec.local_dims
    k = spec.n_data
    n2 = 2 * spec.n_modes

    def one(block):
        b, n = block
        e = sigma * block_rng(seed, b).standard_normal((n, n2))
        eps = dec.residual(e)
        c = {}
        xs = []
        for t in range(k):
            x = qudit_correct(dims[t], eps[:, 2 * t]) != 0
            z = qudit_correct(dims[t], eps[:, 2 * t + 1]) != 0
            sfx = "" if k == 1 else str(t + 1)
            c["X" + sfx], c["Z" + sfx], c["Y" + sfx] = int(x.sum()), int(z.sum()), int((x & z).sum())
            xs.append(x)
        if k == 2:
            c["X1|X2"] = int((xs[0] | xs[1]).sum())
            c["X1&X2"] = int((xs[0] & xs[1]).sum())
        return c, (eps**2).sum(axis=0)

    parts = _run_blocks(one, trials, threads)
    counts = {key: sum(p[0][key] for p in parts) for key in parts[0][0]}
    sq = np.sum([p[1] for p in parts], axis=0)
    return SimReport(spec.to_dict(), sigma, spec.gain, trials, int(seed), counts,
                     [float(v) for v in sq / trials])


@dataclass(frozen=True)
class VarianceEstimate:
    value: float
    stderr: float

    @property
    def interval(self):
        return (self.value - WILSON_Z * self.stderr, self.value + WILSON_Z * self.stderr)

    def to_dict(self):
        return {"value": self.value, "stderr": self.stderr, "interval": list(self.interval)}


def _mean_se(parts, trials):
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s1 / trials
    var = max(s2 / trials - mean**2, 0.0)
    return VarianceEstimate(float(mean), float(np.sqrt(var / max(trials - 1, 1))))


def simulate_o2o_variance(spec: CodeSpec, noise, trials: int, seed: int = 0,
                          threads: int = 1) -> VarianceEstimate:
    """Output variance per quadrature after the oscillator-level correction only."""
    sigma = _sigma(noise)
    dec = _Decoder(spec)
    n2, k2 = 2 * spec.n_modes, 2 * spec.n_data

    def one(block):
        b, n = block
        e = sigma * block_rng(seed, b).standard_normal((n, n2))
        v = (dec.residual(e) ** 2).sum(axis=1) / k2
        return float(v.sum()), float((v * v).sum())

    return _mean_se(_run_blocks(one, trials, threads), trials)


@dataclass
class ResidualPdfParams:
    """Residual data noise is a mixture of Gaussians N(mu(n), Sigma) weighted by f(n).

    ``n`` indexes the ELL-boxes of Omega e'_anc, and f(n) is the probability
    of that box under N(0, Sigma_anc).
    """

    Sigma: np.ndarray
    Sigma_anc: np.ndarray
    F: np.ndarray

    def mu(self, n):
        n = np.asarray(n, dtype=float)
        K = self.Sigma_anc.shape[0] // 2
        return ELL * (n @ omega(K)) @ self.F.T if K else np.zeros(n.shape[:-1] + (self.F.shape[0],))


def residual_pdf_params(spec: CodeSpec, noise) -> ResidualPdfParams:
    sigma = _sigma(noise)
    F = estimator_matrix(spec)
    V = correlated_noise_cov(encoder_for(spec), sigma)
    k2 = 2 * spec.n_data
    Vdd, Vda, Vaa = V[:k2, :k2], V[:k2, k2:], V[k2:, k2:]
    Sigma = Vdd - F @ Vda.T - Vda @ F.T + F @ Vaa @ F.T
    return ResidualPdfParams(0.5 * (Sigma + Sigma.T), Vaa, F)


def o2o_variance_lattice_sum(spec: CodeSpec, noise, sample_count: int, seed: int = 0,
                             threads: int = 1) -> VarianceEstimate:
    """tr(Sigma)/2k plus the sampled mean of |mu(n)|^2/2k over ancilla boxes."""
    params = residual_pdf_params(spec, noise)
    K2 = params.Sigma_anc.shape[0]
    k2 = params.Sigma.shape[0]
    base = float(np.trace(params.Sigma)) / k2
    if K2 == 0 or spec.gain == 1.0:
        return VarianceEstimate(base, 0.0)
    L = np.linalg.cholesky(params.Sigma_anc)
    W = omega(K2 // 2)

    def one(block):
        b, n = block
        x = block_rng(seed, b).standard_normal((n, K2)) @ L.T
        nbox = np.floor((x @ W.T) / ELL + 0.5)
        v = base + (params.mu(nbox) ** 2).sum(axis=1) / k2
        return float(v.sum()), float((v * v).sum())

    return _mean_se(_run_blocks(one, sample_count, threads), sample_count)


# ---------------------------------------------------------------------------
# numerical integration of the logical error rate


def _interval_prob(a, b):
    """P(a < Z < b) for standard normal Z, accurate in both tails."""
    a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
    out = ndtr(b) - ndtr(a)
    up = a > 0
    out = np.where(up, ndtr(-a) - ndtr(-b), out)
    return np.maximum(out, 0.0)


def _shift_error_prob(mu, s, d):
    """P(r - mu lands in a cell of non-zero class), r ~ N(0, s^2)."""
    delta = ELL / np.sqrt(d)
    mu = np.asarray(mu, dtype=float)
    span = int(np.ceil(12 * s / delta)) + 2
    centre = np.rint(-mu / delta)
    j = np.arange(-span, span + 1)
    cells = centre[..., None] + j
    keep = np.mod(cells, d) != 0
    lo = ((cells - 0.5) * delta + mu[..., None]) / s
    hi = ((cells + 0.5) * delta + mu[..., None]) / s
    return np.where(keep, _interval_prob(lo, hi), 0.0).sum(axis=-1)


def error_rate_integral(spec: CodeSpec, noise, t_max: float = 40.0, t_points: int = 8001) -> float:
    """Pr[X] (first data qudit) of the two-stage decoder by numerical integration.

    Given a common-mode variable t, the ancilla boxes are independent, so
    the distribution of their sum is a K-fold convolution; the residual is
    Gaussian around a shift proportional to that sum.  The outer integral
    over t is a trapezoid rule.
    """
    _require_css(spec)
    sigma = _sigma(noise)
    G = spec.gain
    d = spec.local_dims[0]
    K = spec.n_ancillae
    C = c_gain(G)
    if spec.family is Family.DTMS:
        s = sigma / np.sqrt(2 * G - 1)
        kappa = C / np.sqrt(K) if K else 0.0
    else:
        s = sigma * np.sqrt(G / (2 * G - 1))
        kappa = C / np.sqrt(2 * K)
    if K == 0 or G == 1.0:
        return float(_shift_error_prob(np.zeros(1), s if K else sigma, d)[0])

    a = sigma * np.sqrt(2 * (G - 1) / K)
    t = np.linspace(-t_max, t_max, t_points)
    w = np.exp(-0.5 * t * t) / np.sqrt(2 * np.pi)
    m_max = int(np.ceil((a * t_max + 10 * sigma) / ELL)) + 1
    m = np.arange(-m_max, m_max + 1)
    lo = ((m - 0.5) * ELL - a * t[:, None]) / sigma
    hi = ((m + 0.5) * ELL - a * t[:, None]) / sigma
    p = _interval_prob(lo, hi)                      # (T, 2 m_max + 1)
    dist = p
    for _ in range(K - 1):
        L = dist.shape[1] + p.shape[1] - 1
        nxt = np.zeros((dist.shape[0], L))
        for j in range(p.shape[1]):
            nxt[:, j:j + dist.shape[1]] += dist * p[:, j:j + 1]
        dist = nxt
    S = np.arange(dist.shape[1]) - K * m_max
    perr = _shift_error_prob(kappa * ELL * S, s, d)  # (len(S),)
    integrand = (dist @ perr) * w
    return float(trapezoid(integrand, t))


# ---------------------------------------------------------------------------
# closed-form approximations


def gain_lownoise(N: int, d: int = 2) -> float:
    """Gain balancing data and ancilla failures at low noise."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return 1 + (np.sqrt((N - 2) ** 2 + 4 * d * (N - 1)) - N) / 4


def effective_distance(N: int, d: int = 2) -> float:
    G = gain_lownoise(N, d)
    return float(np.sqrt((2 * G - 1) * 2 * np.pi / d))


def asymptotic_px(N: int, d: int, sigma: float) -> float:
    D = effective_distance(N, d)
    return float(N * erfc(np.sqrt(D**2 / (8 * sigma**2))))


def gain_two_qubit(N: int) -> float:
    if N < 3:
        raise DomainError("two-qubit codes need N >= 3")
    return (np.sqrt(4 * N - 7) + 3) / 4


def effective_distance_two_qubit(N: int) -> float:
    G = gain_two_qubit(N)
    return float(np.sqrt((2 * G - 1) / G) * np.sqrt(np.pi))


def asymptotic_px_two_qubit(N: int, sigma: float):
    """(Pr[X1], Pr[X1 or X2]) at the closed-form gain."""
    D = effective_distance_two_qubit(N)
    e = erfc(np.sqrt(D**2 / (8 * sigma**2)))
    return float((N - 1) * e), float(N * e)


def asymptotic_o2o(N: int, sigma: float):
    """(gain, output variance) of the oscillator-level code at low noise."""
    if N < 2:
        raise DomainError("N must be >= 2")
    K = N - 1
    lg = np.log(np.pi**1.5 * K**2 / (2 * sigma**4))
    return float(np.pi * K / (8 * sigma**2) / lg), float(4 * sigma**4 / (np.pi * K) * lg)
