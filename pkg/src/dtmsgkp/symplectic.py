"""Real symplectic linear algebra in the (q1, p1, ..., qN, pN) ordering.

Every Gaussian operation is represented by its action on phase-space
vectors, x -> S x.  The constructors below return plain ``numpy`` arrays.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import DimensionError, DomainError, ModeIndexError

I2 = np.eye(2)
Z2 = np.diag([1.0, -1.0])
_OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])

CONSTRUCTION_TOL = 1e-10


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form: ``n_modes`` copies of [[0, 1], [-1, 0]] on the diagonal."""
    if n_modes < 1:
        raise DomainError("n_modes must be >= 1")
    return np.kron(np.eye(n_modes), _OMEGA1)


def n_modes_of(S) -> int:
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {S.shape}")
    if S.shape[0] % 2:
        raise DimensionError("phase-space matrices have even dimension")
    return S.shape[0] // 2


def is_symplectic(S, tol: float = 1e-9) -> bool:
    """True if ||S Omega S^T - Omega||_F <= tol."""
    S = np.asarray(S, dtype=float)
    W = omega(n_modes_of(S))
    return bool(np.linalg.norm(S @ W @ S.T - W) <= tol)


def symplectic_inverse(S) -> np.ndarray:
    """Inverse of a symplectic matrix, Omega S^T Omega^T (no general inversion)."""
    S = np.asarray(S, dtype=float)
    W = omega(n_modes_of(S))
    return W @ S.T @ W.T


def direct_sum(*blocks) -> np.ndarray:
    """Block-diagonal sum; empty (0x0) blocks are skipped."""
    blocks = [np.atleast_2d(np.asarray(b, dtype=float)) for b in blocks if np.size(b)]
    return block_diag(*blocks)


def tms(G: float, sign: int = 1) -> np.ndarray:
    """Two-mode squeezer with gain G.

    ``sign=-1`` flips the sign of the sqrt(G-1) coupling, which gives the
    inverse operation.
    """
    if G < 1:
        raise DomainError(f"gain must be >= 1, got {G}")
    a, b = np.sqrt(G), sign * np.sqrt(G - 1.0)
    return np.block([[a * I2, b * Z2], [b * Z2, a * I2]])


def single_mode_squeeze(G: float) -> np.ndarray:
    if G <= 0:
        raise DomainError(f"single-mode gain must be > 0, got {G}")
    return np.diag([np.sqrt(G), 1.0 / np.sqrt(G)])


def rotation(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def beamsplitter(theta: float, phi: float, m: int, n: int, n_modes: int) -> np.ndarray:
    """Variable beamsplitter between modes ``m`` and ``n`` (0-based).

    The 4x4 block on (m, n) is [[cos(theta) R(phi), -sin(theta) R(phi)],
    [sin(theta) I, cos(theta) I]]; transmissivity is cos(theta)**2.
    """
    if m == n:
        raise ModeIndexError("beamsplitter needs two distinct modes")
    if not (0 <= m < n_modes and 0 <= n < n_modes):
        raise ModeIndexError(f"modes ({m}, {n}) out of range for {n_modes} modes")
    c, s = np.cos(theta), np.sin(theta)
    R = rotation(phi)
    B = np.eye(2 * n_modes)
    im, jn = slice(2 * m, 2 * m + 2), slice(2 * n, 2 * n + 2)
    B[im, im] = c * R
    B[im, jn] = -s * R
    B[jn, im] = s * I2
    B[jn, jn] = c * I2
    return B


def sum_gate() -> np.ndarray:
    """SUM gate [[I, -Pi_p], [Pi_q, I]]; symplectic but not orthogonal."""
    Pq, Pp = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    return np.block([[I2, -Pp], [Pq, I2]])


def uniform_transmissivities(K: int) -> np.ndarray:
    """Staircase transmissivities 1/K, 1/(K-1), ..., 1/2 (empty for K = 1)."""
    return np.array([1.0 / (K - j) for j in range(K - 1)])


def staircase_mixer(etas: Sequence[float]) -> np.ndarray:
    """Orthogonal K x K mode-mixing matrix of a beamsplitter staircase.

    Beamsplitter j couples modes (j, j+1) with transmissivity ``etas[j]``.
    The first row comes out as (sqrt(eta_1), sqrt((1-eta_1) eta_2), ...),
    all with positive sign, i.e. the amplitude with which every input port
    feeds port 0.
    """
    etas = np.asarray(etas, dtype=float)
    if np.any((etas < 0) | (etas > 1)):
        raise DomainError("transmissivities must lie in [0, 1]")
    K = len(etas) + 1
    O = np.eye(K)
    for j, eta in enumerate(etas):
        c, s = np.sqrt(eta), np.sqrt(1.0 - eta)
        T = np.eye(K)
        T[j, j], T[j, j + 1], T[j + 1, j], T[j + 1, j + 1] = c, s, -s, c
        O = O @ T
    return O


def _match_first_column(O: np.ndarray) -> np.ndarray:
    # Re-mix output ports 1..K-1 with a Householder reflection so that the
    # first column equals the (transposed) first row.  Port 0 is untouched,
    # and since only port 0 later meets the squeezer this passive mixing is
    # an orthogonal change of lattice coordinates: distances and the
    # decoder statistics do not change.
    K = O.shape[0]
    if K < 2:
        return O
    col, row = O[1:, 0], O[0, 1:]
    w = col - row
    nw = np.linalg.norm(w)
    if nw < 1e-15:
        return O
    H = np.eye(K)
    H[1:, 1:] -= 2.0 * np.outer(w, w) / nw**2
    return H @ O


def bs_array(etas: Sequence[float], phases: Sequence[float]) -> np.ndarray:
    """Staircase beamsplitter array with a phase rotation on every input arm.

    Returns the 2K x 2K matrix (O kron I2) (R(phi_1) + ... + R(phi_K)).
    """
    etas = np.asarray(etas, dtype=float)
    phases = np.asarray(phases, dtype=float)
    K = len(etas) + 1
    if len(phases) != K:
        raise DimensionError(f"need {K} phases for {K} arms, got {len(phases)}")
    O = staircase_mixer(etas)
    return np.kron(O, I2) @ direct_sum(*[rotation(p) for p in phases])


def uniform_bs_array(K: int, phi: float = 0.0) -> np.ndarray:
    """Balanced K-port array; every block of the first row and column is R(phi)/sqrt(K)."""
    if K < 1:
        raise DomainError("need at least one ancilla mode")
    O = _match_first_column(staircase_mixer(uniform_transmissivities(K)))
    return np.kron(O, I2) @ np.kron(np.eye(K), rotation(phi))


def dtms_encoder(n_modes: int, G: float, phi: float = 0.0, *, ancilla_array=None) -> np.ndarray:
    """Encoder for a single-data dtms code: (S_G + I)(I2 + B).

    Mode 0 holds the data; modes 1..N-1 are canonical ancillae.  A custom
    ancilla array (2(N-1) x 2(N-1)) may be passed instead of the balanced one.
    """
    if n_modes < 2:
        raise DomainError("dtms codes need N >= 2 modes")
    K = n_modes - 1
    B = uniform_bs_array(K, phi) if ancilla_array is None else np.asarray(ancilla_array, float)
    if B.shape != (2 * K, 2 * K):
        raise DimensionError(f"ancilla array must be {2 * K}x{2 * K}")
    return direct_sum(tms(G), np.eye(2 * (n_modes - 2))) @ direct_sum(I2, B)


def dtms_decoder(n_modes: int, G: float, phi: float = 0.0) -> np.ndarray:
    """Inverse encoder, (I2 + B^T)(S_{-G} + I)."""
    if n_modes < 2:
        raise DomainError("dtms codes need N >= 2 modes")
    B = uniform_bs_array(n_modes - 1, phi)
    return direct_sum(I2, B.T) @ direct_sum(tms(G, sign=-1), np.eye(2 * (n_modes - 2)))


def dtms2_encoder(n_modes: int, G: float, phi: float = 0.0) -> np.ndarray:
    """Two-qubit encoder: (I2 + S_G + I)(B_50:50 + B).

    Modes 0 and 1 hold data and are mixed on a 50:50 beamsplitter; the
    squeezer couples data mode 1 with ancilla mode 2.
    """
    if n_modes < 3:
        raise DomainError("two-qubit dtms codes need N >= 3 modes")
    B = uniform_bs_array(n_modes - 2, phi)
    b50 = beamsplitter(np.pi / 4, 0.0, 0, 1, 2)
    return direct_sum(I2, tms(G), np.eye(2 * (n_modes - 3))) @ direct_sum(b50, B)


def gain_to_db(G: float) -> float:
    """Equivalent single-mode squeezing in dB, 20 log10(sqrt(G) + sqrt(G-1))."""
    if G < 1:
        raise DomainError(f"gain must be >= 1, got {G}")
    return float(20.0 * np.log10(np.sqrt(G) + np.sqrt(G - 1.0)))
