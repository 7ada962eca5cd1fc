"""Truncated SU(2) level-k fusion ring and the commutative algebra it spans.

Labels are integers 0..k in the twice-spin convention, so the module with
label n has dimension n+1.  All labels are self-conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL


def admissible(a: int, b: int, c: int, level: int) -> bool:
    """Truncated triangle rule: |a-b| <= c <= min(a+b, 2k-a-b), a+b+c even."""
    if (a + b + c) % 2:
        return False
    return abs(a - b) <= c <= min(a + b, 2 * level - a - b)


def good_channels(a: int, b: int, level: int) -> list[int]:
    lo, hi = abs(a - b), min(a + b, 2 * level - a - b)
    return list(range(lo, hi + 1, 2)) if hi >= lo else []


@dataclass(frozen=True)
class FusionData:
    """Fusion multiplicities N[a, b, c] plus scalar label data for level k."""

    level: int
    N: np.ndarray                 # (k+1)^3 tensor of 0/1 multiplicities
    classical_dims: np.ndarray    # n + 1
    qdims: np.ndarray             # positive reals [n+1]_q
    # label involution; the identity map here, kept so callers never
    # hard-code self-duality
    bar: np.ndarray

    @property
    def labels(self) -> range:
        return range(self.level + 1)

    def conj(self, a: int) -> int:
        return int(self.bar[a])


def build_fusion(level: int) -> FusionData:
    """Fusion data for SU(2) at integer level >= 1."""
    if level < 1:
        raise ValueError(f"level must be a positive integer, got {level}")
    n_lab = level + 1
    N = np.zeros((n_lab, n_lab, n_lab), dtype=int)
    for a in range(n_lab):
        for b in range(n_lab):
            for c in good_channels(a, b, level):
                N[a, b, c] = 1
    qd = np.array([np.sin(np.pi * (n + 1) / (level + 2))
                   / np.sin(np.pi / (level + 2)) for n in range(n_lab)])
    fd = FusionData(
        level=level,
        N=N,
        classical_dims=np.arange(1, n_lab + 1),
        qdims=qd,
        bar=np.arange(n_lab),
    )
    _validate(fd)
    return fd


def _validate(fd: FusionData, tol: float = DEFAULT_TOL) -> None:
    N, d = fd.N, fd.qdims
    labs = list(fd.labels)
    if np.any(d <= 0):
        raise AssertionError("quantum dimensions must be strictly positive")
    for a in labs:
        if N[a, fd.conj(a), 0] != 1:
            raise AssertionError(f"N[{a},{a}bar,0] != 1")
        for b in labs:
            # d_a d_b = sum_c N^{ab}_c d_c
            if abs(d[a] * d[b] - N[a, b] @ d) > tol * d[a] * d[b]:
                raise AssertionError(f"quantum dimensions break fusion at ({a},{b})")
            for c in labs:
                ok = (N[a, b, c] == N[b, a, c]
                      == N[b, fd.conj(c), fd.conj(a)])
                if not ok:
                    raise AssertionError(f"fusion symmetry fails at ({a},{b},{c})")


@dataclass(frozen=True)
class FusionVector:
    """Element of the commutative algebra spanned by the fusion generators."""

    fusion: FusionData
    coeffs: np.ndarray = field(default=None)

    def __post_init__(self):
        c = np.zeros(self.fusion.level + 1, dtype=complex) \
            if self.coeffs is None else np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def generator(cls, fd: FusionData, label: int) -> "FusionVector":
        c = np.zeros(fd.level + 1, dtype=complex)
        c[label] = 1.0
        return cls(fd, c)

    @classmethod
    def unit(cls, fd: FusionData) -> "FusionVector":
        return cls.generator(fd, 0)

    def star(self) -> "FusionVector":
        """(c^a)* = c^{a-bar} extended antilinearly."""
        out = np.zeros_like(self.coeffs)
        for a in self.fusion.labels:
            out[self.fusion.conj(a)] = np.conj(self.coeffs[a])
        return FusionVector(self.fusion, out)

    def __add__(self, other: "FusionVector") -> "FusionVector":
        return FusionVector(self.fusion, self.coeffs + other.coeffs)

    def __sub__(self, other: "FusionVector") -> "FusionVector":
        return FusionVector(self.fusion, self.coeffs - other.coeffs)

    def __rmul__(self, scalar: complex) -> "FusionVector":
        return FusionVector(self.fusion, scalar * self.coeffs)

    def __mul__(self, other: "FusionVector") -> "FusionVector":
        return fusion_mult(self, other)


def fusion_mult(x: FusionVector, y: FusionVector) -> FusionVector:
    """Bilinear extension of c^a c^b = sum_c N^{ab}_c c^c."""
    if x.fusion.level != y.fusion.level:
        raise ValueError("fusion vectors live at different levels")
    N = x.fusion.N
    out = np.einsum("a,b,abc->c", x.coeffs, y.coeffs, N)
    return FusionVector(x.fusion, out)
