"""Concrete U_q(sl2) data: irreducible representations, R-matrices, ribbon
scalars and q-traces, for q on the unit circle.

Conventions (fixed once, everything downstream depends on them):

* weight basis |m>, m = n, n-2, ..., -n on the (n+1)-dimensional module V^n;
* K = q^H acts by q^m, and the half-power K^(1/2) = q^(H/2) is kept as a
  generator so the Cartan part q^(H (x) H / 2) of the R-matrix is directly
  representable;
* coproducts  D(E) = E (x) K + 1 (x) E,  D(F) = F (x) 1 + K^-1 (x) F,
  D(K) = K (x) K,  antipode S(E) = -E K^-1, S(F) = -K F, S(K) = K^-1;
* R = q^(H(x)H/2) * sum_n q^(n(n-1)/2) (q - q^-1)^n / [n]! E^n (x) F^n
  (the sum terminates at min of the two labels).

With these choices R intertwines the flipped coproduct, satisfies the
Yang-Baxter equation, and R^dagger = (R')^-1 on the unitary-form modules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import flip_matrix, qfact, qnum, safe_inv


@dataclass(frozen=True)
class QParams:
    """Deformation parameter setup.

    ``root`` mode works at q = exp(i pi / (level+2)) with labels 0..level;
    ``generic`` mode takes a user phase away from small-order roots and a
    plain label cutoff (classical fusion).
    """

    mode: str                  # "root" | "generic"
    level: int | None = None
    q: complex = None
    cutoff: int | None = None
    tol: float = 1e-9

    def __post_init__(self):
        if self.mode == "root":
            if self.level is None or self.level < 1:
                raise ValueError("root mode requires level >= 1")
            object.__setattr__(
                self, "q", np.exp(1j * np.pi / (self.level + 2)))
            object.__setattr__(self, "cutoff", self.level)
        elif self.mode == "generic":
            q = self.q if self.q is not None else np.exp(1j * np.pi * np.sqrt(2.0) / 10.0)
            if abs(abs(q) - 1.0) > 1e-12:
                raise ValueError("generic q must lie on the unit circle")
            object.__setattr__(self, "q", complex(q))
            object.__setattr__(
                self, "cutoff", 4 if self.cutoff is None else self.cutoff)
            for n in range(1, 2 * self.cutoff + 2):
                if abs(qnum(n, self.q)) < 1e-9:
                    raise ValueError(
                        f"generic q too close to a root of unity: [{n}] ~ 0")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def is_root(self) -> bool:
        return self.mode == "root"

    @property
    def qhalf(self) -> complex:
        if self.is_root:
            return np.exp(1j * np.pi / (2 * (self.level + 2)))
        return np.exp(1j * np.angle(self.q) / 2.0)


@dataclass(frozen=True)
class IrrepData:
    """Generator matrices of one irreducible on the weight basis."""

    label: int
    weights: np.ndarray
    e: np.ndarray
    f: np.ndarray
    k: np.ndarray          # q^H
    k_half: np.ndarray     # q^(H/2)
    g: np.ndarray          # grouplike u^-1 v = q^-H; q-trace weight
    v_scalar: complex      # ribbon scalar on this module

    @property
    def dim(self) -> int:
        return self.label + 1


def _raise_coef(n: int, m: int, q: complex) -> float:
    """Matrix element of E from weight m to m+2 on V^n (real, >= 0)."""
    j, mm = n / 2.0, m / 2.0
    return float(np.sqrt(abs(qnum(j - mm, q) * qnum(j + mm + 1, q))))


def _lower_coef(n: int, m: int, q: complex) -> float:
    j, mm = n / 2.0, m / 2.0
    return float(np.sqrt(abs(qnum(j + mm, q) * qnum(j - mm + 1, q))))


def irrep(n: int, qp: QParams) -> IrrepData:
    """Irreducible of label n (dimension n+1)."""
    if n < 0:
        raise ValueError("label must be non-negative")
    if qp.is_root and n > qp.level:
        raise ValueError(f"label {n} exceeds level {qp.level}")
    for m in range(1, n + 1):
        if np.real(qnum(m, qp.q)) <= 0:
            raise ValueError(
                f"label {n} has no unitary-form module at this q "
                f"([{m}] <= 0); lower the cutoff or move q")
    q, qh = qp.q, qp.qhalf
    d = n + 1
    w = np.array([n - 2 * i for i in range(d)])
    e = np.zeros((d, d), dtype=complex)
    f = np.zeros((d, d), dtype=complex)
    for i, m in enumerate(w):
        if i - 1 >= 0:
            e[i - 1, i] = _raise_coef(n, m, q)
        if i + 1 < d:
            f[i + 1, i] = _lower_coef(n, m, q)
    k = np.diag(q ** w.astype(float))
    k_half = np.diag(qh ** w.astype(float))
    u = _u_matrix(n, w, e, f, k, qp)
    v, g = _split_ribbon(n, w, u, q)
    return IrrepData(label=n, weights=w, e=e, f=f, k=k, k_half=k_half,
                     g=g, v_scalar=v)


def _u_matrix(n, w, e, f, k, qp: QParams) -> np.ndarray:
    """The canonical element sum S(r^2) r^1 evaluated on V^n.

    Expanding the Cartan part of R over weight projectors and applying the
    antipode to the second leg gives
    u = sum_a c_a (-K F)^a  q^(-m^2/2)|_m  E^a.
    """
    q, qh = qp.q, qp.qhalf
    d = n + 1
    u = np.zeros((d, d), dtype=complex)
    mkf = -(k @ f)
    wsq = np.diag([qh ** float(-m * m) for m in w])
    for a in range(n + 1):
        c = (q - q ** (-1)) ** a / qfact(a, q) * q ** (a * (a - 1) / 2.0)
        u += c * np.linalg.matrix_power(mkf, a) @ wsq \
            @ np.linalg.matrix_power(e, a)
    return u


def _split_ribbon(n, w, u, q):
    """Factor the diagonal u into ribbon scalar v_n times q^{+H}.

    u = v g^-1 with the grouplike g = q^-H; the split is read off the
    diagonal and cross-checked entrywise.
    """
    du = np.diag(u)
    if np.max(np.abs(u - np.diag(du))) > 1e-10:
        raise AssertionError("canonical element is not diagonal on an irrep")
    v = du[0] * q ** float(-w[0])
    for m, entry in zip(w, du):
        if abs(entry - v * q ** float(m)) > 1e-9 * max(1.0, abs(entry)):
            raise AssertionError(
                f"ribbon split fails on V^{n} at weight {m}")
    g = np.diag(q ** (-w.astype(float)))
    return complex(v), g


def q_trace(x: np.ndarray, rep: IrrepData) -> complex:
    """tr(x g) with the grouplike weight; invariant under the adjoint action."""
    return complex(np.trace(x @ rep.g))


def qdim(rep: IrrepData) -> float:
    return float(np.real(q_trace(np.eye(rep.dim), rep)))


def r_matrix(rep1: IrrepData, rep2: IrrepData, qp: QParams) -> np.ndarray:
    """R evaluated on V^I (x) V^J (dense, (dI dJ) x (dI dJ))."""
    q, qh = qp.q, qp.qhalf
    d1, d2 = rep1.dim, rep2.dim
    cart = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i, m1 in enumerate(rep1.weights):
        for j, m2 in enumerate(rep2.weights):
            cart[i * d2 + j, i * d2 + j] = qh ** float(m1 * m2)
    nil = np.zeros_like(cart)
    for a in range(min(rep1.label, rep2.label) + 1):
        c = (q - q ** (-1)) ** a / qfact(a, q) * q ** (a * (a - 1) / 2.0)
        nil += c * np.kron(np.linalg.matrix_power(rep1.e, a),
                           np.linalg.matrix_power(rep2.f, a))
    return cart @ nil


def r_prime(rep1: IrrepData, rep2: IrrepData, qp: QParams) -> np.ndarray:
    """Flipped R on V^I (x) V^J: P R^{JI} P."""
    p = flip_matrix(rep1.dim, rep2.dim)
    return p.T @ r_matrix(rep2, rep1, qp) @ p


def monodromy(rep1: IrrepData, rep2: IrrepData, qp: QParams) -> np.ndarray:
    """R' R; its eigenvalue on the label-K component is v_I v_J / v_K."""
    return r_prime(rep1, rep2, qp) @ r_matrix(rep1, rep2, qp)


def coproduct(gen: str, rep1: IrrepData, rep2: IrrepData) -> np.ndarray:
    """D(gen) on V^I (x) V^J for gen in {E, F, K, Khalf, Kinv}."""
    i1, i2 = np.eye(rep1.dim), np.eye(rep2.dim)
    if gen == "E":
        return np.kron(rep1.e, rep2.k) + np.kron(i1, rep2.e)
    if gen == "F":
        return np.kron(rep1.f, i2) + np.kron(safe_inv(rep1.k, "K"), rep2.f)
    if gen == "K":
        return np.kron(rep1.k, rep2.k)
    if gen == "Khalf":
        return np.kron(rep1.k_half, rep2.k_half)
    if gen == "Kinv":
        return np.kron(safe_inv(rep1.k, "K"), safe_inv(rep2.k, "K"))
    raise ValueError(f"unknown generator {gen!r}")


@dataclass(frozen=True)
class RibbonScalars:
    """Per-label ribbon data extracted from the matrix layer."""

    labels: tuple
    u_mats: dict        # label -> matrix of the canonical element
    v: dict             # label -> ribbon phase
    kappa: dict         # label -> coherent square root of v
    g_mats: dict        # label -> grouplike matrix (q-trace weight)
    qdims: dict         # label -> quantum dimension [n+1]

    def q_trace(self, label: int, x: np.ndarray) -> complex:
        return complex(np.trace(x @ self.g_mats[label]))


def ribbon_scalars(qp: QParams, labels, kappa: dict | None = None) -> RibbonScalars:
    """Collect u, v, g, d for ``labels``; kappa may be supplied by the
    level data (sign system resolved against the braiding normalization)."""
    u_mats, v, g_mats, qd = {}, {}, {}, {}
    for n in labels:
        rep = irrep(n, qp)
        u_mats[n] = _u_matrix(n, rep.weights, rep.e, rep.f, rep.k, qp)
        v[n] = rep.v_scalar
        g_mats[n] = rep.g
        qd[n] = qdim(rep)
        if abs(abs(v[n]) - 1.0) > 1e-10:
            raise AssertionError(f"ribbon scalar off the unit circle at {n}")
    if kappa is None:
        kappa = {n: np.sqrt(v[n]) for n in labels}
    return RibbonScalars(labels=tuple(labels), u_mats=u_mats, v=v,
                         kappa=dict(kappa), g_mats=g_mats, qdims=qd)
