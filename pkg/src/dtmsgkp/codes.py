"""Code constructors: dtms families, initial generators and reference fixtures."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError, UnsupportedError, VerificationError
from .lattice import ELL, dual, gram, is_unimodular
from .symplectic import direct_sum, dtms2_encoder, dtms_encoder, is_symplectic, tms


class Family(str, Enum):
    DTMS = "dtms"          # one data qudit, N-1 canonical ancillae
    DTMS2 = "dtms2"        # two data qubits, N-2 canonical ancillae
    FIXTURE = "fixture"


@dataclass(frozen=True)
class CodeSpec:
    family: Family
    n_modes: int
    local_dims: tuple = (2,)
    gain: float = 1.0
    phase: float = 0.0
    fixture_name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "local_dims", tuple(int(d) for d in self.local_dims))
        if self.family is Family.FIXTURE:
            return
        k = len(self.local_dims)
        if self.family is Family.DTMS and self.n_modes == 1:
            # bare single-mode qudit, kept as the N = 1 member of the family
            if self.gain != 1.0:
                raise DomainError("a single-mode code has no squeezer (gain must be 1)")
        elif self.n_modes <= k:
            raise DomainError(f"need more modes than data qudits (N={self.n_modes}, k={k})")
        if self.gain < 1:
            raise DomainError(f"gain must be >= 1, got {self.gain}")
        if any(d < 2 for d in self.local_dims):
            raise DomainError("data qudit dimensions must be >= 2")
        if self.family is Family.DTMS and k != 1:
            raise DomainError("dtms codes carry exactly one data qudit")
        if self.family is Family.DTMS2 and self.local_dims != (2, 2):
            raise DomainError("two-qubit dtms codes carry two qubits")

    @classmethod
    def dtms(cls, n_modes: int, d: int = 2, gain: float = 1.0, phase: float = 0.0):
        return cls(Family.DTMS, n_modes, (d,), gain, phase)

    @classmethod
    def dtms2(cls, n_modes: int, gain: float = 1.0, phase: float = 0.0):
        return cls(Family.DTMS2, n_modes, (2, 2), gain, phase)

    @classmethod
    def fixture(cls, name: str, d: int = 3):
        fx = fixture(name, d)
        return cls(Family.FIXTURE, fx.n_modes, fx.local_dims, 1.0, 0.0, fx.name)

    @property
    def n_data(self) -> int:
        return len(self.local_dims)

    @property
    def n_ancillae(self) -> int:
        return self.n_modes - self.n_data

    @property
    def is_css(self) -> bool:
        return self.family is not Family.FIXTURE and self.phase == 0.0

    def with_gain(self, gain: float, phase: Optional[float] = None) -> "CodeSpec":
        return CodeSpec(self.family, self.n_modes, self.local_dims, gain,
                        self.phase if phase is None else phase, self.fixture_name)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["family"] = self.family.value
        out["local_dims"] = list(self.local_dims)
        out["n_data"] = self.n_data
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CodeSpec":
        keys = ("family", "n_modes", "local_dims", "gain", "phase", "fixture_name")
        return cls(**{k: data[k] for k in keys if k in data})


@dataclass
class Code:
    """A built code: encoder, generator, dual and logical X/Z dual vectors."""

    spec: CodeSpec
    encoder: Optional[np.ndarray]
    lattice: np.ndarray
    dual: np.ndarray
    logicals: np.ndarray          # columns X_1, Z_1, X_2, Z_2, ...
    local_dims: tuple

    def __iter__(self):
        return iter((self.encoder, self.lattice, self.dual))

    @property
    def n_modes(self) -> int:
        return self.lattice.shape[0] // 2


def initial_generator(local_dims, n_modes: int) -> np.ndarray:
    """(sqrt(d_1) I2 + ... + sqrt(d_k) I2) + I for the remaining canonical modes."""
    local_dims = list(local_dims)
    if any(int(d) != d or d < 1 for d in local_dims):
        raise DomainError("local dimensions must be integers >= 1")
    if len(local_dims) > n_modes:
        raise DomainError("more data qudits than modes")
    diag = [np.sqrt(d) for d in local_dims for _ in range(2)]
    diag += [1.0] * (2 * (n_modes - len(local_dims)))
    return np.diag(diag)


def encoder_for(spec: CodeSpec) -> np.ndarray:
    if spec.family is Family.DTMS and spec.n_modes == 1:
        return np.eye(2)
    if spec.family is Family.DTMS:
        return dtms_encoder(spec.n_modes, spec.gain, spec.phase)
    if spec.family is Family.DTMS2:
        return dtms2_encoder(spec.n_modes, spec.gain, spec.phase)
    raise UnsupportedError(f"no encoder for family {spec.family.value}")


def build_code(spec: CodeSpec) -> Code:
    if spec.family is Family.FIXTURE:
        fx = fixture(spec.fixture_name, spec.local_dims[0])
        return Code(spec, fx.symplectic, fx.lattice, fx.dual, fx.logicals, fx.local_dims)
    S = encoder_for(spec)
    M_in = initial_generator(spec.local_dims, spec.n_modes)
    M = S @ M_in
    gram(M)  # integrality check
    Mbar = S @ np.diag(1.0 / np.diag(M_in))
    k = spec.n_data
    return Code(spec, S, M, Mbar, Mbar[:, : 2 * k].copy(), spec.local_dims)


def distance_upper_bound(spec: CodeSpec) -> float:
    """Length of the shortest encoded logical dual column."""
    if spec.family is Family.DTMS:
        return float(np.sqrt(2 * spec.gain - 1) * np.sqrt(2 * np.pi / spec.local_dims[0]))
    if spec.family is Family.DTMS2:
        return float(np.sqrt(spec.gain) * np.sqrt(np.pi))
    raise UnsupportedError("upper bound is only defined for dtms families")


# ---------------------------------------------------------------------------
# fixtures

_r, _s = 1 / np.sqrt(2), np.sqrt(2)
_q, _qi = 2 ** 0.25, 2 ** -0.25

_M_TESS = _q * np.array([
    [1, 0, 0, 0],
    [0, _r, 0, _r],
    [0, 0, -1, 0],
    [0, _r, 0, -_r],
])
_S_TESS = np.array([
    [_qi, 0, _q, 0],
    [0, 0, 0, _qi],
    [-_qi, 0, 0, 0],
    [0, -_q, 0, _qi],
])
_N_TESS = np.array([
    [1, 0, 1, 0],
    [0, -1, 0, 1],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
])

_M_422 = _r * np.array([
    [1, 0, 2, 0, 0, 0, 0, 0],
    [0, 1, 0, 2, 0, 0, 0, 0],
    [1, 0, 0, 0, 2, 0, 0, 0],
    [0, 1, 0, 0, 0, 2, 0, 0],
    [1, 0, 0, 0, 0, 0, 2, 0],
    [0, 1, 0, 0, 0, 0, 0, 2],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
])
_S_422 = np.array([
    [1, 0, 0, -1, _r, 0, _s, 0],
    [0, 0, 0, 0, 0, 0, 0, _r],
    [1, 0, 0, 0, _r, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, -_r],
    [0, 0, 0, 0, _r, 0, 0, 0],
    [0, -1, -1, 0, 0, _s, 0, _r],
    [0, 0, 0, -1, _r, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, -_r],
])
_N_422 = np.array([
    [0, 0, 0, -2, 1, 0, 0, 0],
    [0, 0, 2, 0, 0, 0, 0, -1],
    [1, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, -1, 0, 0, 0, 0, 1],
    [1, 0, 0, 1, 0, 0, 0, 0],
    [0, 1, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, -1, -2, 0, 0, 1, 0, 1],
])

# Columns 1-4 are the stabilisers IXZZX, XZZXI, XIXZZ, ZXIXZ written as
# (q, p) bit patterns over five square qubits.
_M_513 = _r * np.array([
    [0, 1, 1, 0, 2, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 2, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 2, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 2, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 2],
    [0, 1, 0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
])
_S_513 = np.array([
    [0, -1, _r, 0, _s, 0, 0, _r, 0, 0],
    [0, 0, 0, 0, 0, _r, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, _r, 0],
    [0, 0, 0, 0, 0, 0, 0, _r, 0, _s],
    [0, 0, _r, 0, 0, 0, 0, 0, 0, 0],
    [-1, 0, 0, _s, 0, -_r, -_s, _r, _r, 0],
    [-1, -1, 0, 0, 0, _r, 0, _r, 0, 0],
    [0, 0, _r, 0, 0, -_r, -_s, 0, _r, 0],
    [0, 1, 0, 0, 0, -_r, -_s, 0, _r, 0],
    [-1, -1, _r, 0, 0, _r, 0, 0, 0, 0],
])
_N_513 = np.array([
    [0, 2, 0, 0, 0, -1, -2, 0, 1, 0],
    [0, -2, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, -2, 1, 0, 0, 0, 0, 0, 0, 0],
    [-2, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, -1, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, 0, 0, 1, 0, 0, 0, 0, 0, 0],
])

TESSERACT_GAIN = (np.sqrt(2) + 1) / 2
TESSERACT_ETA = (2 - np.sqrt(2)) / 4

_ALIASES = {
    "square": "square", "squarequbit": "square",
    "square-qudit": "square-qudit", "squarequdit": "square-qudit",
    "hex": "hex", "hexqubit": "hex", "hexagonal": "hex",
    "tesseract": "tesseract",
    "code422": "code422", "422": "code422",
    "code513": "code513", "513": "code513",
}

FIXTURE_NAMES = ("square", "square-qudit", "hex", "tesseract", "code422", "code513")


@dataclass
class Fixture:
    name: str
    lattice: np.ndarray
    dual: np.ndarray
    logicals: np.ndarray
    local_dims: tuple
    known_distance: float
    symplectic: Optional[np.ndarray] = None
    unimodular: Optional[np.ndarray] = None
    description: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def n_modes(self) -> int:
        return self.lattice.shape[0] // 2


def canonical_fixture_name(name: str) -> str:
    key = str(name).lower().replace("_", "").replace(" ", "")
    if key not in _ALIASES:
        raise UnsupportedError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    return _ALIASES[key]


def _from_encoder(name, M, S, Nu, local_dims, dist, desc):
    n = M.shape[0] // 2
    M_in = initial_generator(local_dims, n)
    logicals = (S @ np.diag(1.0 / np.diag(M_in)))[:, : 2 * len(local_dims)]
    return Fixture(name, M.copy(), dual(M), logicals, tuple(local_dims), dist,
                   S.copy(), Nu.copy(), desc)


def fixture(name: str, d: int = 3) -> Fixture:
    """Reference lattice by name (``d`` is only used by the square qudit)."""
    name = canonical_fixture_name(name)
    if name == "square":
        M = np.sqrt(2) * np.eye(2)
        return Fixture(name, M, dual(M), np.eye(2) / np.sqrt(2), (2,), np.sqrt(np.pi),
                       description="single-mode square qubit")
    if name == "square-qudit":
        if d < 2:
            raise DomainError("qudit dimension must be >= 2")
        M = np.sqrt(d) * np.eye(2)
        return Fixture(name, M, dual(M), np.eye(2) / np.sqrt(d), (d,), ELL / np.sqrt(d),
                       description=f"single-mode square qudit, d={d}")
    if name == "hex":
        basis = np.array([[1.0, 0.5], [0.0, np.sqrt(3) / 2]])
        M = np.sqrt(4 / np.sqrt(3)) * basis
        Mbar = dual(M)
        return Fixture(name, M, Mbar, Mbar[:, :2].copy(), (2,), ELL / 3 ** 0.25,
                       description="single-mode hexagonal qubit")
    if name == "tesseract":
        fx = _from_encoder(name, _M_TESS, _S_TESS, _N_TESS, [2], _q * np.sqrt(np.pi),
                           "two-mode tesseract qubit")
        fx.extra = {"gain": TESSERACT_GAIN, "eta": TESSERACT_ETA}
        return fx
    if name == "code422":
        return _from_encoder(name, _M_422, _S_422, _N_422, [2, 2], np.sqrt(2 * np.pi),
                             "[[4,2,2]] code concatenated with square qubits")
    return _from_encoder(name, _M_513, _S_513, _N_513, [2], np.sqrt(3 * np.pi),
                         "[[5,1,3]] code concatenated with square qubits")


def tesseract_decomposition():
    """(B, S_G) with S_tess = B S_G: a beamsplitter after a two-mode squeezer."""
    eta = TESSERACT_ETA
    I2 = np.eye(2)
    B = np.block([[np.sqrt(eta) * I2, np.sqrt(1 - eta) * I2],
                  [-np.sqrt(1 - eta) * I2, np.sqrt(eta) * I2]])
    return B, tms(TESSERACT_GAIN)


def verify_fixture_relation(name: str, tol: float = 1e-9) -> bool:
    """Check S M_in = M N with unimodular N (plus the tesseract decomposition).

    Returns True, or raises VerificationError carrying the largest deviation.
    """
    fx = fixture(name)
    if fx.symplectic is None or fx.unimodular is None:
        raise UnsupportedError(f"fixture {fx.name!r} has no symplectic construction")
    S, Nu, M = fx.symplectic, fx.unimodular, fx.lattice
    if not is_symplectic(S, tol):
        raise VerificationError(f"{fx.name}: S is not symplectic")
    if not is_unimodular(Nu):
        raise VerificationError(f"{fx.name}: N is not unimodular")
    M_in = initial_generator(fx.local_dims, fx.n_modes)
    dev = float(np.abs(S @ M_in - M @ Nu).max())
    if fx.name == "tesseract":
        B, SG = tesseract_decomposition()
        dev = max(dev, float(np.abs(B @ SG - S).max()))
    if dev > tol:
        raise VerificationError(f"{fx.name}: relation violated (max deviation {dev:.3g})", dev)
    return True


def catalog() -> list:
    """Families and fixtures with a one-line description each."""
    rows = [
        {"name": "dtms", "kind": "family",
         "description": "one data qudit, two-mode squeezer plus balanced ancilla array",
         "parameters": "n, d, gain, phi"},
        {"name": "dtms2", "kind": "family",
         "description": "two data qubits on a 50:50 beamsplitter, one squeezer, ancilla array",
         "parameters": "n, gain, phi"},
    ]
    for nm in FIXTURE_NAMES:
        fx = fixture(nm)
        rows.append({"name": nm, "kind": "fixture", "description": fx.description,
                     "n_modes": fx.n_modes, "known_distance": float(fx.known_distance)})
    return rows
