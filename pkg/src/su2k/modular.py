"""Basis-free modular and Verlinde data for SU(2) at level k.

The S-matrix is assembled from fusion rules, quantum dimensions and twists
(the coupled-basis evaluation of the normalized double-braiding trace); the
twists themselves are the unit phases whose monodromy eigenvalues the matrix
layer reproduces, and the half-twist signs are resolved against the braiding
normalization of the Clebsch-Gordan maps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .catalog import Catalog
from .fusion import FusionData, FusionVector, build_fusion
from .linalg import DEFAULT_TOL, INT_TOL, round_int


@dataclass(frozen=True)
class ModularData:
    """Scalar modular data at one level."""

    fusion: FusionData
    v: np.ndarray            # unit-modulus twists, v[0] = 1
    kappa: np.ndarray        # coherent square roots of v
    norm: float              # (sum_K d_K^2)^(-1/2)
    S: np.ndarray
    C: np.ndarray            # charge conjugation N^{IJ}_0
    theta: complex           # normalized Gauss sum
    twist_convention: str

    @property
    def level(self) -> int:
        return self.fusion.level

    @property
    def labels(self) -> range:
        return self.fusion.labels

    def to_json(self) -> str:
        """Deterministic JSON dump (reals at 17 significant digits)."""
        def c2(z):
            return [float(f"{z.real:.17g}"), float(f"{z.imag:.17g}")]

        payload = {
            "level": self.level,
            "labels": [int(n) for n in self.labels],
            "qdims": [float(f"{d:.17g}") for d in self.fusion.qdims],
            "twists": [c2(z) for z in self.v],
            "kappa": [c2(z) for z in self.kappa],
            "S": [[c2(z) for z in row] for row in self.S],
            "theta": c2(self.theta),
            "convention": self.twist_convention,
        }
        return json.dumps(payload, indent=None, separators=(",", ":"))


def build_modular(level: int, tol: float = DEFAULT_TOL) -> ModularData:
    """Modular data at ``level``, with phase conventions resolved against
    the matrix layer (monodromy eigenvalues for v, braiding scalars for the
    kappa signs)."""
    fusion = build_fusion(level)
    cat = Catalog.root(level)
    v = np.array([cat.v(n) for n in fusion.labels])
    kap = np.array([cat.kappa[n] for n in fusion.labels])
    if np.max(np.abs(np.abs(v) - 1.0)) > tol:
        raise AssertionError("twists are off the unit circle")
    norm = float(1.0 / np.sqrt(np.sum(fusion.qdims ** 2)))
    md = ModularData(
        fusion=fusion, v=v, kappa=kap, norm=norm,
        S=np.zeros((level + 1, level + 1), dtype=complex),
        C=fusion.N[:, :, 0].astype(float),
        theta=0.0,
        twist_convention=cat.convention(),
    )
    s = s_matrix_gauss(md)
    md = ModularData(fusion=fusion, v=v, kappa=kap, norm=norm, S=s,
                     C=fusion.N[:, :, 0].astype(float), theta=0.0,
                     twist_convention=cat.convention())
    theta = gauss_theta(md)
    return ModularData(fusion=fusion, v=v, kappa=kap, norm=norm, S=s,
                       C=fusion.N[:, :, 0].astype(float), theta=theta,
                       twist_convention=cat.convention())


def s_matrix_gauss(md: ModularData) -> np.ndarray:
    """S_{IJ} = N * sum_K N^{IJ}_K d_K v_I v_J / v_K.

    This is the normalized q-trace of the double braiding written in the
    coupled basis: the K-component contributes its quantum dimension times
    the monodromy eigenvalue.
    """
    fd, v = md.fusion, md.v
    n = fd.level + 1
    s = np.zeros((n, n), dtype=complex)
    for a in fd.labels:
        for b in fd.labels:
            s[a, b] = md.norm * np.sum(
                fd.N[a, b] * fd.qdims * v[a] * v[b] / v)
    return s


def check_s_properties(md: ModularData, tol: float = 1e-10) -> dict:
    """Residuals of the five standard S-matrix identities."""
    s, fd = md.S, md.fusion
    n = fd.level + 1
    d = fd.qdims
    out = {}
    out["symmetry"] = float(np.max(np.abs(s - s.T)))
    out["first-row"] = float(np.max(np.abs(s[0] - md.norm * d)))
    out["unitarity"] = float(np.max(np.abs(s @ s.conj().T - np.eye(n))))
    out["square-is-conjugation"] = float(np.max(np.abs(s @ s - md.C)))
    diag = np.einsum("abk,kl->abl", fd.N.astype(complex), s)
    rhs = np.einsum("bl,al,l->abl", s, s, 1.0 / (md.norm * d))
    out["fusion-diagonalization"] = float(np.max(np.abs(diag - rhs)))
    failures = {k: r for k, r in out.items() if r > tol}
    if failures:
        raise AssertionError(f"S-matrix identities above tolerance: {failures}")
    return out


def verlinde_rep(md: ModularData, j: int, x: FusionVector) -> complex:
    """One-dimensional representation of the fusion algebra:
    the generator of label a is sent to S_{aJ} / (N d_J)."""
    chars = md.S[:, j] / (md.norm * md.fusion.qdims[j])
    return complex(np.dot(x.coeffs, chars))


def chi(md: ModularData, label: int) -> FusionVector:
    """Minimal central idempotent selecting the given representation."""
    fd = md.fusion
    coeffs = np.array([md.norm * fd.qdims[label] * md.S[label, fd.conj(a)]
                       for a in fd.labels])
    return FusionVector(fd, coeffs)


def gauss_theta(md: ModularData, tol: float = DEFAULT_TOL) -> complex:
    """theta = N sum_I v_I d_I^2; aborts if the sum is off the unit circle."""
    th = complex(md.norm * np.sum(md.v * md.fusion.qdims ** 2))
    if abs(abs(th) - 1.0) > tol:
        raise AssertionError(
            f"Gauss sum has modulus {abs(th):.12f}; twist convention broken")
    return th


def dehn_element(md: ModularData, tol: float = 1e-10) -> FusionVector:
    """The inverse-twist element  theta^-1 sum_I N d_I v_I c^I.

    Verifies coefficientwise agreement with sum_I v_I^-1 chi^I, that the
    quantum-dimension character sends it to 1, and that it is unitary in
    the fusion algebra.
    """
    fd = md.fusion
    coeffs = np.array([md.theta ** -1 * md.norm * fd.qdims[a] * md.v[a]
                       for a in fd.labels])
    h = FusionVector(fd, coeffs)
    alt = FusionVector(fd, np.zeros(fd.level + 1, complex))
    for a in fd.labels:
        alt = alt + (1.0 / md.v[a]) * chi(md, a)
    if np.max(np.abs(h.coeffs - alt.coeffs)) > tol:
        raise AssertionError("the two forms of the twist element disagree")
    qd_char = complex(np.dot(h.coeffs, fd.qdims))
    if abs(qd_char - 1.0) > tol:
        raise AssertionError("twist element does not normalize to 1 under "
                             "the quantum-dimension character")
    prod = h * h.star()
    unit = FusionVector.unit(fd)
    if np.max(np.abs(prod.coeffs - unit.coeffs)) > 1e-9:
        raise AssertionError("twist element is not unitary in the fusion algebra")
    return h


# ---------------------------------------------------------------------------
# block-space dimensions
# ---------------------------------------------------------------------------


def _dim_closed_form(md: ModularData, genus: int, punctures, sector: int = 0) -> int:
    s, d = md.S, md.fusion.qdims
    total = 0.0 + 0j
    for j in md.labels:
        term = s[0, j] ** (2 - 2 * genus - len(punctures) - 1)
        term *= s[sector, j]
        for p in punctures:
            term *= s[p, j]
        total += term
    return round_int(total, INT_TOL)


def _dim_path_count(md: ModularData, genus: int, punctures, sector: int = 0) -> int:
    """Multiplicity of ``sector`` in the product of the punctures and
    ``genus`` copies of sum_J V^J (x) V^J, by iterated contraction."""
    fd = md.fusion
    n = fd.level + 1
    state = np.zeros(n, dtype=np.int64)
    state[0] = 1
    for p in punctures:
        state = state @ fd.N[:, p, :]
    for _ in range(genus):
        # fuse J then J-bar for every sector label J and sum
        new = np.zeros(n, dtype=np.int64)
        for j in fd.labels:
            jj = fd.conj(j)
            new += (state @ fd.N[:, j, :]) @ fd.N[:, jj, :]
        state = new
    return int(state[sector])


def verlinde_dim(md: ModularData, genus: int, punctures, sector: int = 0) -> int:
    """Block-space dimension, computed two ways and cross-asserted.

    Route (a) is the closed-form character sum; route (b) is brute-force
    fusion-path counting.  Their disagreement is an internal-consistency
    failure, not a tolerance issue.
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    for p in punctures:
        if not 0 <= p <= md.level:
            raise ValueError(f"puncture label {p} out of range for level {md.level}")
    a = _dim_closed_form(md, genus, list(punctures), sector)
    b = _dim_path_count(md, genus, list(punctures), sector)
    if a != b:
        raise AssertionError(
            f"dimension mismatch: closed form {a} vs path count {b} "
            f"for genus={genus}, punctures={tuple(punctures)}, sector={sector}")
    return a


def pinching_identity(md: ModularData, genus: int, punctures,
                      cut: str = "fuse") -> dict:
    """Exact integer identities from degenerating the surface.

    ``fuse`` fuses the last two punctures through a channel sum; ``handle``
    trades one handle for a conjugate puncture pair.  Both sides are
    returned; inequality raises.
    """
    punctures = list(punctures)
    if cut == "fuse":
        if len(punctures) < 2:
            raise ValueError("fusing needs at least two punctures")
        lhs = verlinde_dim(md, genus, punctures)
        rest, (p1, p2) = punctures[:-2], punctures[-2:]
        rhs = 0
        terms = {}
        for c in md.labels:
            t = (verlinde_dim(md, genus, rest + [c])
                 * verlinde_dim(md, 0, [md.fusion.conj(c), p1, p2]))
            if t:
                terms[c] = t
            rhs += t
    elif cut == "handle":
        if genus < 1:
            raise ValueError("handle cut needs genus >= 1")
        lhs = verlinde_dim(md, genus, punctures)
        rhs = 0
        terms = {}
        for c in md.labels:
            t = verlinde_dim(md, genus - 1, punctures + [c, md.fusion.conj(c)])
            if t:
                terms[c] = t
            rhs += t
    else:
        raise ValueError(f"unknown cut {cut!r}")
    if lhs != rhs:
        raise AssertionError(
            f"pinching identity fails ({cut}): {lhs} != {rhs} "
            f"[genus={genus}, punctures={tuple(punctures)}, terms={terms}]")
    return {"cut": cut, "lhs": lhs, "rhs": rhs, "terms": terms}


def torus_sl2z(md: ModularData, tol: float = DEFAULT_TOL) -> dict:
    """Projective SL(2,Z) relations for (S, diag(v^-1)).

    Returns the two projective phases and how the braid phase relates to
    the Gauss sum.
    """
    s = md.S
    t = np.diag(1.0 / md.v)
    n = md.level + 1
    st3 = np.linalg.matrix_power(s @ t, 3)
    s2 = s @ s
    # (ST)^3 = zeta1 S^2
    num = np.trace(s2.conj().T @ st3)
    den = np.trace(s2.conj().T @ s2)
    zeta1 = complex(num / den)
    if np.max(np.abs(st3 - zeta1 * s2)) > tol:
        raise AssertionError("(ST)^3 is not projectively S^2")
    s4 = np.linalg.matrix_power(s, 4)
    zeta2 = complex(np.trace(s4) / n)
    if np.max(np.abs(s4 - zeta2 * np.eye(n))) > tol:
        raise AssertionError("S^4 is not projectively the identity")
    if abs(abs(zeta1) - 1) > tol or abs(abs(zeta2) - 1) > tol:
        raise AssertionError("projective phases are off the unit circle")
    if np.max(np.abs(s2 - md.C)) > tol:
        raise AssertionError("S^2 does not equal charge conjugation")
    return {
        "S": s,
        "T": t,
        "zeta1": zeta1,
        "zeta2": zeta2,
        "zeta1_vs_theta": complex(zeta1 * md.theta),  # ~1 when zeta1 = 1/theta
    }
