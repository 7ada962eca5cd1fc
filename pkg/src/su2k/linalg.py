"""Small dense-linear-algebra helpers shared by the matrix layer."""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-9
# Integer extraction accumulates O(k^2) terms, so it gets a wider gate.
INT_TOL = 1e-6
MAX_COND = 1e8


def qnum(n: float, q: complex) -> complex:
    """The symmetric q-integer (q^n - q^-n)/(q - q^-1)."""
    return (q**n - q ** (-n)) / (q - q ** (-1))


def qfact(n: int, q: complex) -> complex:
    out = 1.0 + 0j
    for i in range(1, n + 1):
        out *= qnum(i, q)
    return out


def residual(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry deviation relative to the larger of the two entry norms."""
    a = np.asarray(a)
    b = np.asarray(b)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)),
                float(np.max(np.abs(b), initial=0.0)))
    return float(np.max(np.abs(a - b), initial=0.0)) / scale


def safe_inv(mat: np.ndarray, what: str = "operator") -> np.ndarray:
    """Inverse with a loud failure when the matrix is ill-conditioned."""
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > MAX_COND:
        raise np.linalg.LinAlgError(
            f"{what} is numerically singular (cond={cond:.3e})")
    return np.linalg.inv(mat)


def round_int(x: complex, tol: float = INT_TOL) -> int:
    """Round to the nearest integer, asserting the rounding error is tiny."""
    n = int(round(float(np.real(x))))
    err = abs(x - n)
    if err > tol:
        raise ValueError(f"value {x} is not an integer to tolerance {tol} "
                         f"(residual {err:.3e})")
    return n


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def flip_matrix(d1: int, d2: int) -> np.ndarray:
    """Permutation V1 (x) V2 -> V2 (x) V1."""
    p = np.zeros((d1 * d2, d1 * d2))
    for i in range(d1):
        for j in range(d2):
            p[j * d1 + i, i * d2 + j] = 1.0
    return p


def lift_sites(op: np.ndarray, dims: list[int], sites: list[int]) -> np.ndarray:
    """Embed ``op``, given on the tensor factors ``sites`` (in that order),
    into the full product over ``dims`` as a dense matrix."""
    n = len(dims)
    rest = [s for s in range(n) if s not in sites]
    order = list(sites) + rest
    dim_rest = int(np.prod([dims[s] for s in rest])) if rest else 1
    big = np.kron(op, np.eye(dim_rest))
    idx = np.arange(int(np.prod(dims))).reshape(dims)
    perm = np.transpose(idx, order).reshape(-1)
    out = np.zeros_like(big)
    out[np.ix_(perm, perm)] = big
    return out


def is_unitary(mat: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    d = mat.shape[0]
    return residual(mat @ mat.conj().T, np.eye(d)) < tol
