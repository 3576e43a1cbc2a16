"""Symplectically integral lattices and the distance pipeline.

Bases are stored column-wise: the generator ``M`` has lattice vectors as
its columns, and the physical lattice is ``ELL * M`` with ``ELL = sqrt(2 pi)``.
Distances are found with LLL reduction, Babai nearest-plane rounding and a
pruned depth-first enumeration of a coefficient box around the Babai point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateLatticeError, DimensionError, DomainError, NotGKPLatticeError
from .symplectic import n_modes_of, omega

ELL = float(np.sqrt(2.0 * np.pi))

GRAM_TOL = 1e-6
TIE_TOL = 1e-10


def default_cutoff(n_modes: int) -> int:
    return 4 if n_modes <= 4 else 3


def centered_mod(x, period: float):
    """Representative of x modulo ``period`` in [-period/2, period/2)."""
    x = np.asarray(x, dtype=float)
    return x - period * np.floor(x / period + 0.5)


def gram(M, tol: float = GRAM_TOL) -> np.ndarray:
    """Integer symplectic Gram matrix A = M^T Omega M.

    Raises NotGKPLatticeError if an entry is further than ``tol`` from an integer.
    """
    M = np.asarray(M, dtype=float)
    A = M.T @ omega(n_modes_of(M)) @ M
    Ai = np.rint(A)
    dev = np.abs(A - Ai).max()
    if dev > tol:
        raise NotGKPLatticeError(f"Gram matrix is not integral (max deviation {dev:.3g})")
    return Ai.astype(np.int64)


def dual(M) -> np.ndarray:
    """Dual generator M A^-1 Omega, satisfying M^T Omega Mbar = Omega."""
    M = np.asarray(M, dtype=float)
    A = gram(M).astype(float)
    if abs(np.linalg.det(A)) < 0.5:
        raise DegenerateLatticeError("Gram matrix is singular")
    return M @ np.linalg.solve(A, omega(n_modes_of(M)))


# ---------------------------------------------------------------------------
# LLL reduction


def _gram_schmidt(B):
    n = B.shape[1]
    Bs = np.zeros_like(B)
    mu = np.eye(n)
    bn = np.zeros(n)
    for i in range(n):
        v = B[:, i].copy()
        for j in range(i):
            mu[i, j] = B[:, i] @ Bs[:, j] / bn[j]
            v -= mu[i, j] * Bs[:, j]
        Bs[:, i] = v
        bn[i] = v @ v
    return mu, bn


def lll_reduce(M, delta: float = 0.75):
    """LLL-reduce the columns of ``M``.

    Returns
    -------
    reduced : ndarray
        Reduced basis, equal to ``M @ U``.
    U : ndarray of int
        Unimodular transform.
    """
    if not 0.25 < delta <= 1.0:
        raise DomainError("delta must lie in (1/4, 1]")
    B = np.array(M, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise DimensionError("lll_reduce expects a square basis")
    n = B.shape[1]
    if np.linalg.matrix_rank(B) < n:
        raise DegenerateLatticeError("basis is rank deficient")
    U = np.eye(n, dtype=np.int64)
    mu, bn = _gram_schmidt(B)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = int(np.floor(mu[k, j] + 0.5))
            if q:
                B[:, k] -= q * B[:, j]
                U[:, k] -= q * U[:, j]
                mu[k, : j + 1] -= q * mu[j, : j + 1]
        if bn[k] >= (delta - mu[k, k - 1] ** 2) * bn[k - 1]:
            k += 1
        else:
            B[:, [k - 1, k]] = B[:, [k, k - 1]]
            U[:, [k - 1, k]] = U[:, [k, k - 1]]
            mu, bn = _gram_schmidt(B)
            k = max(k - 1, 1)
    return B, U


def is_lll_reduced(B, delta: float = 0.75, tol: float = 1e-9) -> bool:
    mu, bn = _gram_schmidt(np.asarray(B, dtype=float))
    n = len(bn)
    for i in range(n):
        for j in range(i):
            if abs(mu[i, j]) > 0.5 + tol:
                return False
    return all(bn[k] >= (delta - mu[k, k - 1] ** 2) * bn[k - 1] - tol for k in range(1, n))


def is_unimodular(U) -> bool:
    """True iff U is a square integer matrix with det = +-1 (exact arithmetic)."""
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    if not np.all(np.abs(U - np.rint(U)) < 1e-9):
        return False
    return abs(_exact_det(np.rint(U).astype(np.int64))) == 1


def _exact_det(A) -> int:
    # Bareiss fraction-free elimination on Python integers.
    a = [[int(x) for x in row] for row in A]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------------------
# closest point search


@dataclass(frozen=True)
class ClosestPoint:
    """Result of a closest-point query (unscaled units)."""

    point: np.ndarray
    distance: float
    coefficients: np.ndarray  # integer coefficients w.r.t. the basis passed in


class LatticeSolver:
    """Caches the LLL reduction of a basis for repeated closest-point queries."""

    def __init__(self, M, delta: float = 0.75):
        self.basis = np.asarray(M, dtype=float)
        self.reduced, self.U = lll_reduce(self.basis, delta)
        Q, R = np.linalg.qr(self.reduced)
        self._Q = Q
        self._R = R
        self._Rl = R.tolist()

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def babai(self, v) -> np.ndarray:
        """Nearest-plane coefficients of ``v`` in the reduced basis."""
        y = self._Q.T @ np.asarray(v, dtype=float)
        R = self._R
        n = self.dim
        a = np.zeros(n)
        for i in range(n - 1, -1, -1):
            c = (y[i] - R[i, i + 1:] @ a[i + 1:]) / R[i, i]
            a[i] = np.floor(c + 0.5)
        return a.astype(np.int64)

    def closest(self, v, cutoff: int) -> ClosestPoint:
        """Exact closest point within the box |a - a_babai|_inf <= cutoff.

        Depth-first enumeration in the triangular coordinates of the reduced
        basis; a branch is dropped once its partial squared norm exceeds the
        best complete candidate found so far.  Ties are resolved towards the
        lexicographically smallest coefficient vector (original basis).
        """
        if cutoff < 0:
            raise DomainError("cutoff must be non-negative")
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise DimensionError(f"vector must have length {self.dim}")
        n = self.dim
        R = self._Rl
        y = (self._Q.T @ v).tolist()
        a0 = self.babai(v)
        lo = [int(x) - cutoff for x in a0]
        hi = [int(x) + cutoff for x in a0]

        r0 = np.asarray(self._R) @ a0 - np.asarray(y)
        best = [float(r0 @ r0)]
        winners = [tuple(int(x) for x in a0)]
        a = [0] * n

        def visit(i, partial):
            row = R[i]
            c = y[i]
            for j in range(i + 1, n):
                c -= row[j] * a[j]
            c /= row[i]
            rii = row[i]
            cand = sorted(range(lo[i], hi[i] + 1), key=lambda t: abs(t - c))
            for t in cand:
                d = rii * (t - c)
                p = partial + d * d
                if p > best[0] + TIE_TOL:
                    break
                a[i] = t
                if i == 0:
                    if p < best[0] - TIE_TOL:
                        best[0] = p
                        winners.clear()
                        winners.append(tuple(a))
                    else:
                        best[0] = min(best[0], p)
                        winners.append(tuple(a))
                else:
                    visit(i - 1, p)

        visit(n - 1, 0.0)
        # tie-break over all optimal candidates, in original coefficients
        orig = [tuple(int(x) for x in self.U @ np.array(w)) for w in set(winners)]
        pts = [(float(np.sum((self.basis @ np.array(c) - v) ** 2)), c) for c in orig]
        dmin = min(p for p, _ in pts)
        coeffs = min(c for p, c in pts if p <= dmin + TIE_TOL)
        coeffs = np.array(coeffs, dtype=np.int64)
        point = self.basis @ coeffs
        return ClosestPoint(point, float(np.linalg.norm(point - v)), coeffs)


def babai_nearest(M, v) -> np.ndarray:
    """Lattice point found by nearest-plane rounding (after LLL reduction)."""
    s = LatticeSolver(M)
    return s.reduced @ s.babai(v)


def closest_point(M, v, cutoff: int) -> ClosestPoint:
    return LatticeSolver(M).closest(v, cutoff)


def pauli_distance(M, pauli_vec, cutoff: int | None = None) -> float:
    """ELL times the distance from a dual vector to the lattice spanned by M."""
    M = np.asarray(M, dtype=float)
    if cutoff is None:
        cutoff = default_cutoff(n_modes_of(M))
    return ELL * closest_point(M, pauli_vec, cutoff).distance


def syndrome(M, e) -> np.ndarray:
    """s = M^T Omega e modulo ELL, centred.  ``e`` may be a batch of row vectors."""
    M = np.asarray(M, dtype=float)
    W = omega(n_modes_of(M))
    e = np.asarray(e, dtype=float)
    return centered_mod(e @ (M.T @ W).T, ELL)


# ---------------------------------------------------------------------------
# code distance


@dataclass
class DistanceReport:
    pauli_distances: dict
    code_distance: float
    cutoff: int
    verified_at_cutoff_plus_one: bool
    worst_logical: str = ""
    witness: list = field(default_factory=list)  # shortest displacement (physical units)

    def to_dict(self) -> dict:
        return {
            "pauli_distances": {k: float(v) for k, v in self.pauli_distances.items()},
            "code_distance": float(self.code_distance),
            "cutoff": int(self.cutoff),
            "verified_at_cutoff_plus_one": bool(self.verified_at_cutoff_plus_one),
            "worst_logical": self.worst_logical,
            "witness": [float(x) for x in self.witness],
        }


def _qudit_label(a: int, b: int, d: int) -> str:
    if d == 2:
        return {(1, 0): "X", (0, 1): "Z", (1, 1): "Y"}.get((a, b), "")
    out = ""
    if a:
        out += "X" if a == 1 else f"X^{a}"
    if b:
        out += "Z" if b == 1 else f"Z^{b}"
    return out


def logical_representatives(logicals, local_dims: Sequence[int]):
    """All non-identity logical Pauli vectors built from X/Z dual columns.

    ``logicals`` holds columns (X_1, Z_1, X_2, Z_2, ...).  Returns a list of
    (label, vector) pairs; for a single logical qudit labels are plain
    ("X", "Z", "Y"), otherwise each factor carries its qudit index.
    """
    L = np.asarray(logicals, dtype=float)
    k = len(local_dims)
    if L.shape[1] != 2 * k:
        raise DimensionError(f"need {2 * k} logical columns, got {L.shape[1]}")
    out = []
    ranges = [range(d) for d in local_dims for _ in range(2)]
    for exps in itertools.product(*ranges):
        if not any(exps):
            continue
        parts = []
        for t in range(k):
            lab = _qudit_label(exps[2 * t], exps[2 * t + 1], local_dims[t])
            if lab:
                parts.append(lab if k == 1 else f"{lab}{t + 1}" if len(lab) == 1 else f"({lab}){t + 1}")
        out.append(("".join(parts), L @ np.array(exps, dtype=float)))
    return out


def code_distance(code, logicals=None, local_dims=None, cutoff: int | None = None,
                  verify: bool = True) -> DistanceReport:
    """Smallest Pauli distance over all non-identity logical operators.

    ``code`` is either a generator matrix (then ``logicals`` and
    ``local_dims`` are required), a ``CodeSpec`` or a built ``Code``.
    """
    if hasattr(code, "family"):
        from .codes import build_code
        code = build_code(code)
    if hasattr(code, "logicals"):
        M, logicals, local_dims = code.lattice, code.logicals, code.local_dims
    else:
        M = np.asarray(code, dtype=float)
        if logicals is None or local_dims is None:
            raise DomainError("logicals and local_dims are needed with a bare generator")
    M = np.asarray(M, dtype=float)
    if cutoff is None:
        cutoff = default_cutoff(n_modes_of(M))
    solver = LatticeSolver(M)
    reps = logical_representatives(logicals, list(local_dims))

    dists, hits = {}, {}
    for label, vec in reps:
        cp = solver.closest(vec, cutoff)
        dists[label] = ELL * cp.distance
        hits[label] = ELL * (vec - cp.point)
    verified = True
    if verify:
        for label, vec in reps:
            d1 = ELL * solver.closest(vec, cutoff + 1).distance
            if abs(d1 - dists[label]) > 1e-9:
                verified = False
                dists[label] = d1
    worst = min(dists, key=lambda k: (dists[k], k))
    return DistanceReport(dists, dists[worst], cutoff, verified, worst, list(hits[worst]))


def verify_lattice_membership(M, vectors, tol: float = 1e-8) -> bool:
    """True if every column of ``vectors`` is an integer combination of M's columns."""
    c = np.linalg.solve(np.asarray(M, float), np.asarray(vectors, float))
    return bool(np.all(np.abs(c - np.rint(c)) < tol))

