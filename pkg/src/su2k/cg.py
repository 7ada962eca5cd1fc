"""Clebsch-Gordan maps, channel projectors, good-subspace machinery and the
deformed inner product.

A coupling (I,J|K) carries two maps: the projection C : V^I (x) V^J -> V^K
and the embedding T : V^K -> V^I (x) V^J, normalized so that

    C T = 1,          C R' C^dag = omega * 1,   |omega| = 1,

with the phase of C fixed by a positive-real leading coefficient.  After
this normalization T = (kappa_K / (kappa_I kappa_J)) R' C^dag holds exactly,
so E_K = T C is the channel idempotent and the good projector is the sum of
the E_K over admissible channels.

At a root of unity the highest-weight vector is built by a two-term product
recursion (all q-numbers involved are nonzero for admissible triples), not
by numerical nullspace extraction, which would pick up null vectors of the
non-semisimple summands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fusion import good_channels
from .linalg import flip_matrix, safe_inv
from .uq import IrrepData, QParams, coproduct, irrep, r_prime, _raise_coef, _lower_coef


@dataclass(frozen=True)
class CGMap:
    """Normalized coupling data for one admissible triple."""

    labels: tuple          # (I, J, K)
    proj: np.ndarray       # C: V^I (x) V^J -> V^K
    embed: np.ndarray      # T: V^K -> V^I (x) V^J, with C T = 1
    omega: complex         # braiding scalar C R' C^dag, unit modulus

    @property
    def dim_in(self) -> int:
        return self.proj.shape[1]

    @property
    def dim_out(self) -> int:
        return self.proj.shape[0]


def classical_channels(a: int, b: int) -> list[int]:
    return list(range(abs(a - b), a + b + 1, 2))


def channels(a: int, b: int, qp: QParams) -> list[int]:
    if qp.is_root:
        return good_channels(a, b, qp.level)
    return classical_channels(a, b)


def _hw_vector(rI: IrrepData, rJ: IrrepData, nK: int, q: complex) -> np.ndarray:
    """Highest-weight vector of the K-channel by the product recursion."""
    nI, nJ = rI.label, rJ.label
    dJ = rJ.dim
    m1max, m1min = min(nI, nK + nJ), max(-nI, nK - nJ)
    ms = list(range(m1max, m1min - 1, -2))
    coef = {ms[0]: 1.0 + 0j}
    for m1 in ms[1:]:
        num = coef[m1 + 2] * _raise_coef(nJ, nK - m1 - 2, q)
        den = _raise_coef(nI, m1, q) * q ** float(nK - m1)
        if abs(den) < 1e-12:
            raise AssertionError(
                f"vanishing q-number in admissible coupling ({nI},{nJ}|{nK})")
        coef[m1] = -num / den
    x = np.zeros(rI.dim * dJ, dtype=complex)
    for m1 in ms:
        i, j = (nI - m1) // 2, (nJ - (nK - m1)) // 2
        x[i * dJ + j] = coef[m1]
    return x


def cg(nI: int, nJ: int, nK: int, qp: QParams) -> CGMap:
    """Normalized Clebsch-Gordan pair for an admissible triple."""
    if nK not in channels(nI, nJ, qp):
        raise ValueError(f"({nI},{nJ}|{nK}) is not an admissible coupling")
    q = qp.q
    rI, rJ = irrep(nI, qp), irrep(nJ, qp)
    rK = irrep_any(nK, qp)
    x = _hw_vector(rI, rJ, nK, q)
    lower = coproduct("F", rI, rJ)
    cols = [x]
    m = nK
    while m > -nK:
        x = lower @ cols[-1] / _lower_coef(nK, m, q)
        cols.append(x)
        m -= 2
    embed = np.array(cols).T
    rp = r_prime(rI, rJ, qp)
    proj = embed.conj().T @ safe_inv(rp, "R'")
    lam = (proj @ embed)[0, 0]
    proj = proj / lam
    omega = (proj @ rp @ proj.conj().T)[0, 0]
    scale = np.sqrt(abs(omega))
    proj, embed = proj / scale, embed * scale
    lead = proj[0, np.flatnonzero(np.abs(proj[0]) > 1e-12)[0]]
    phase = lead / abs(lead)
    proj, embed = proj / phase, embed * phase
    omega = (proj @ rp @ proj.conj().T)[0, 0]
    return CGMap(labels=(nI, nJ, nK), proj=proj, embed=embed,
                 omega=complex(omega))


def irrep_any(n: int, qp: QParams) -> IrrepData:
    """Irrep builder that permits channel labels above a generic cutoff."""
    if qp.is_root:
        return irrep(n, qp)
    wide = QParams(mode="generic", q=qp.q, cutoff=max(qp.cutoff, n), tol=qp.tol)
    return irrep(n, wide)


def dual_maps(nK: int, qp: QParams, v_k: complex, d_k: float):
    """The vacuum coupling of K with its conjugate and its braided partner.

    Returns (C[K Kbar|0], C^c) where C^c = R' C^dag d_K / v_K maps the
    vacuum into V^K (x) V^Kbar with the opposite duality convention.
    """
    m = cg(nK, nK, 0, qp)
    rK = irrep(nK, qp) if qp.is_root else irrep_any(nK, qp)
    rp = r_prime(rK, rK, qp)
    c_c = rp @ m.proj.conj().T * (d_k / v_k)
    return m.proj, c_c


# ---------------------------------------------------------------------------
# channel idempotents, fusion trees, good projectors, deformed form
# ---------------------------------------------------------------------------


def channel_idempotent(cgm: CGMap) -> np.ndarray:
    """E_K = T C on V^I (x) V^J; E_K E_L = delta_KL E_K."""
    return cgm.embed @ cgm.proj


@dataclass(frozen=True)
class FusionTree:
    """One left-comb path: internal labels after fusing 1..j factors."""

    factors: tuple
    internal: tuple        # length len(factors); internal[0] == factors[0]

    @property
    def result(self) -> int:
        return self.internal[-1]

    def label(self) -> str:
        parts = []
        for j in range(1, len(self.factors)):
            parts.append(f"{self.internal[j-1]}*{self.factors[j]}"
                         f"->{self.internal[j]}")
        return ", ".join(parts) if parts else str(self.result)


def fusion_paths(factors, qp: QParams) -> list[FusionTree]:
    """All admissible left-comb trees over the given factor labels."""
    paths = [FusionTree(tuple(factors), (factors[0],))]
    for f in factors[1:]:
        nxt = []
        for p in paths:
            for c in channels(p.internal[-1], f, qp):
                nxt.append(FusionTree(p.factors, p.internal + (c,)))
        paths = nxt
    return paths


def good_projector(factors, qp: QParams) -> np.ndarray:
    """Projector onto the span of all admissible left-comb fusion trees.

    Equals the identity in generic mode; at a root of unity its complement
    is the null part of the deformed inner product.
    """
    from .catalog import Catalog

    if qp.is_root:
        cat = Catalog.root(qp.level)
    else:
        cat = Catalog(qp)
    return cat.good_projector(tuple(factors))
