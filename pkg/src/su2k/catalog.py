"""Immutable per-(mode, level) catalog of matrix data.

A ``Catalog`` caches irreps, R-matrices, Clebsch-Gordan pairs, the resolved
half-twist (kappa) sign system, fusion-tree maps, good projectors and
deformed Gram matrices.  Construction is done once; every accessor is a pure
lookup, so concurrent reads are safe.
"""

from __future__ import annotations

import functools

import numpy as np

from . import cg as cgmod
from .cg import CGMap, FusionTree, cg, channels, fusion_paths
from .linalg import kron_all, lift_sites, safe_inv
from .uq import IrrepData, QParams, coproduct, irrep, monodromy, r_matrix, r_prime


class Catalog:
    """Cached matrix data for one deformation-parameter setup."""

    def __init__(self, qp: QParams):
        self.qp = qp
        self.labels = tuple(range(qp.cutoff + 1))
        self._kappa = None

    @classmethod
    @functools.lru_cache(maxsize=8)
    def root(cls, level: int) -> "Catalog":
        return cls(QParams(mode="root", level=level))

    @classmethod
    def generic(cls, q: complex | None = None, cutoff: int = 4) -> "Catalog":
        return cls(QParams(mode="generic", q=q, cutoff=cutoff))

    # -- irreps and R-matrices ---------------------------------------------

    @functools.lru_cache(maxsize=None)
    def rep(self, n: int) -> IrrepData:
        return cgmod.irrep_any(n, self.qp)

    @functools.lru_cache(maxsize=None)
    def rmat(self, a: int, b: int) -> np.ndarray:
        return r_matrix(self.rep(a), self.rep(b), self.qp)

    @functools.lru_cache(maxsize=None)
    def rprime(self, a: int, b: int) -> np.ndarray:
        return r_prime(self.rep(a), self.rep(b), self.qp)

    @functools.lru_cache(maxsize=None)
    def rinv(self, a: int, b: int) -> np.ndarray:
        return safe_inv(self.rmat(a, b), "R")

    @functools.lru_cache(maxsize=None)
    def rprime_inv(self, a: int, b: int) -> np.ndarray:
        return safe_inv(self.rprime(a, b), "R'")

    @functools.lru_cache(maxsize=None)
    def mono(self, a: int, b: int) -> np.ndarray:
        return monodromy(self.rep(a), self.rep(b), self.qp)

    def dim(self, n: int) -> int:
        return n + 1

    def v(self, n: int) -> complex:
        return self.rep(n).v_scalar

    def qd(self, n: int) -> float:
        return float(np.real(np.trace(self.rep(n).g)))

    def g_weight(self, n: int) -> np.ndarray:
        return self.rep(n).g

    def channels(self, a: int, b: int) -> list[int]:
        return channels(a, b, self.qp)

    @functools.lru_cache(maxsize=None)
    def cg(self, a: int, b: int, c: int) -> CGMap:
        return cg(a, b, c, self.qp)

    # -- half-twist sign system --------------------------------------------

    @property
    def kappa(self) -> dict:
        """Coherent square roots kappa_n of the twists.

        The sign system is resolved against the braiding scalars of the
        couplings (1,1|0) and (1,n|n+1): with kappa_0 = 1 these force
        kappa_1^2 = omega(1,1|0) and kappa_{n+1} = kappa_1 kappa_n /
        omega(1,n|n+1).  The result is checked to square to the twists and
        to reproduce every braiding scalar with the plus sign; failure of
        either check aborts loudly.
        """
        if self._kappa is None:
            self._kappa = self._solve_half_twists()
        return self._kappa

    def _solve_half_twists(self) -> dict:
        top = self._kappa_bound()
        kap = {0: 1.0 + 0j}
        if top >= 1:
            kap[1] = complex(np.sqrt(self.cg(1, 1, 0).omega))
            for n in range(1, top):
                kap[n + 1] = kap[1] * kap[n] / self.cg(1, n, n + 1).omega
        for n in range(top + 1):
            if abs(kap[n] ** 2 - self.v(n)) > 1e-9:
                raise AssertionError(
                    "half-twist sign system is unsatisfiable: "
                    f"kappa_{n}^2 != v_{n}")
        # In generic mode only in-range channels are coupled through; the
        # sign of a braiding scalar with v_a v_b = v_c is not continuous in
        # q and may flip for out-of-range channels at a far-from-1 phase.
        chan_cap = top if self.qp.is_root else self.qp.cutoff
        for a in self.labels:
            for b in self.labels:
                for c in self.channels(a, b):
                    if c > min(top, chan_cap):
                        continue
                    err = abs(self.cg(a, b, c).omega - kap[a] * kap[b] / kap[c])
                    if err > 1e-8:
                        raise AssertionError(
                            f"braiding scalar of ({a},{b}|{c}) breaks the "
                            f"plus-sign convention (residual {err:.2e})")
        return kap

    def _kappa_bound(self) -> int:
        """Largest channel label with a unitary-form module at this q."""
        top = self._chan_top()
        if self.qp.is_root:
            return top
        from .linalg import qnum
        n = 0
        while n < top and all(np.real(qnum(m, self.qp.q)) > 0
                              for m in range(1, n + 2)):
            n += 1
        return n

    def convention(self) -> str:
        """Serialized record of the resolved phase conventions."""
        return ("v_n = monodromy-compatible phase q^(-n(n+2)/2); "
                "kappa: plus-sign braiding normalization, "
                "kappa_1 = principal sqrt of omega(1,1|0)")

    def kappa_phase(self, n: int) -> complex:
        """kappa_n, analytically continued above the unitary-zone bound.

        Within the bound the resolved sign system must agree with the
        quarter-power formula q^(-n(n+2)/4); beyond it (high fusion channels
        in generic mode) the formula is the definition.
        """
        formula = self.qp.qhalf ** float(-n * (n + 2) / 2.0)
        if n in self.kappa:
            if abs(self.kappa[n] - formula) > 1e-8:
                raise AssertionError(
                    f"half-twist {n} deviates from the closed phase formula")
            return self.kappa[n]
        return complex(formula)

    @functools.lru_cache(maxsize=None)
    def monodromy_channel_projectors(self, a: int, b: int):
        """Spectral projectors of the double braiding on V^a (x) V^b keyed by
        channel label (eigenvalue v_a v_b / v_K).  Works without coupling
        data, so it is usable above the unitary-zone bound."""
        mono = self.mono(a, b)
        evals, vecs = np.linalg.eig(mono)
        vinv = safe_inv(vecs, "monodromy eigenbasis")
        out = {}
        for k in range(abs(a - b), a + b + 1, 2):
            target = self.v(a) * self.v(b) / self._v_scalar(k)
            sel = np.abs(evals - target) < 1e-8
            if not np.any(sel):
                continue
            out[k] = (vecs[:, sel] @ vinv[sel, :])
        total = sum(out.values())
        if np.max(np.abs(total - np.eye(mono.shape[0]))) > 1e-8:
            raise AssertionError(
                f"monodromy spectrum of ({a},{b}) does not resolve by channel")
        return out

    def _v_scalar(self, n: int) -> complex:
        """Ribbon phase by formula (valid for any label)."""
        return complex(self.qp.q ** float(-n * (n + 2) / 2.0))

    # -- multi-factor machinery ---------------------------------------------

    @functools.lru_cache(maxsize=None)
    def paths(self, factors: tuple) -> tuple:
        return tuple(fusion_paths(list(factors), self.qp))

    @functools.lru_cache(maxsize=None)
    def tree_maps(self, factors: tuple):
        """(tree, U, Utilde) triples for the left-comb trees over ``factors``.

        U : product space -> V^result is the iterated projection chain and
        Utilde the matching embedding chain with U Utilde = 1; distinct trees
        satisfy U_p Utilde_q = 0.
        """
        dims = [self.dim(f) for f in factors]
        out = [(FusionTree(tuple(factors), (factors[0],)),
                np.eye(dims[0], dtype=complex),
                np.eye(dims[0], dtype=complex))]
        for j in range(1, len(factors)):
            nxt = []
            for tree, u, ut in out:
                cur = tree.internal[-1]
                idj = np.eye(dims[j])
                for c in self.channels(cur, factors[j]):
                    m = self.cg(cur, factors[j], c)
                    u2 = m.proj @ np.kron(u, idj)
                    ut2 = np.kron(ut, idj) @ m.embed
                    nxt.append((FusionTree(tree.factors,
                                           tree.internal + (c,)), u2, ut2))
            out = nxt
        return tuple(out)

    @functools.lru_cache(maxsize=None)
    def isotypic_projector(self, factors: tuple, result: int) -> np.ndarray:
        """Projector onto the good part of the ``result``-isotypic component."""
        d = int(np.prod([self.dim(f) for f in factors]))
        p = np.zeros((d, d), dtype=complex)
        for tree, u, ut in self.tree_maps(factors):
            if tree.result == result:
                p += ut @ u
        return p

    @functools.lru_cache(maxsize=None)
    def good_projector(self, factors: tuple) -> np.ndarray:
        """Projector onto the span of all admissible fusion trees."""
        d = int(np.prod([self.dim(f) for f in factors]))
        p = np.zeros((d, d), dtype=complex)
        for tree, u, ut in self.tree_maps(factors):
            p += ut @ u
        return p

    @functools.lru_cache(maxsize=None)
    def central_value(self, factors: tuple, scalars: tuple) -> np.ndarray:
        """sum_K scalars[K] * isotypic projector, i.e. the evaluation of a
        central element with the given per-label scalars."""
        d = int(np.prod([self.dim(f) for f in factors]))
        out = np.zeros((d, d), dtype=complex)
        for tree, u, ut in self.tree_maps(factors):
            out += scalars[tree.result] * (ut @ u)
        return out

    @functools.lru_cache(maxsize=None)
    def deformed_gram(self, factors: tuple) -> np.ndarray:
        """Hermitian Gram matrix of the deformed inner product.

        Built iteratively: on (V_{1..j-1}) (x) V_j the correction is
        R_{1j}...R_{(j-1)j} times the central evaluation of
        D(kappa)(kappa^-1 (x) kappa^-1), whose label-K eigenvalue is
        v_K / (v_left v_j) on the K-isotypic part (kappa signs cancel).
        At a root the form is positive definite on the good subspace and
        vanishes on its complement.
        """
        if len(factors) == 1:
            return np.eye(self.dim(factors[0]), dtype=complex)
        dims = [self.dim(f) for f in factors]
        kap = tuple(self.kappa_phase(n) for n in range(self._chan_top() + 1))
        kap_inv = tuple(1.0 / z for z in kap)
        h = np.eye(dims[0], dtype=complex)
        for j in range(1, len(factors)):
            sub = factors[:j + 1]
            dsub = dims[:j + 1]
            rpart = np.eye(int(np.prod(dsub)), dtype=complex)
            for i in range(j):
                rpart = rpart @ lift_sites(self.rmat(factors[i], factors[j]),
                                           dsub, [i, j])
            full = self.central_value(tuple(sub), kap)
            left = self.central_value(tuple(sub[:-1]), kap_inv)
            eta = full @ np.kron(left, np.eye(dims[j])) \
                / self.kappa_phase(factors[j])
            h = np.kron(h, np.eye(dims[j])) @ rpart @ eta
        if np.max(np.abs(h - h.conj().T)) > 1e-8:
            raise AssertionError("deformed Gram matrix is not Hermitian")
        return (h + h.conj().T) / 2.0

    def _chan_top(self) -> int:
        """Largest label a channel can carry."""
        if self.qp.is_root:
            return self.qp.level
        return 2 * self.qp.cutoff

    # -- coupled symmetry action --------------------------------------------

    @functools.lru_cache(maxsize=None)
    def coupled_generator(self, gen: str, factors: tuple) -> np.ndarray:
        """Iterated-coproduct action of one generator on a factor product."""
        reps = [self.rep(f) for f in factors]
        if len(reps) == 1:
            r = reps[0]
            return {"E": r.e, "F": r.f, "K": r.k, "Khalf": r.k_half,
                    "Kinv": safe_inv(r.k, "K")}[gen]
        if gen == "E":
            ks = [r.k for r in reps]
            out = np.zeros((int(np.prod([r.dim for r in reps])),) * 2, complex)
            for i, r in enumerate(reps):
                mats = [np.eye(s.dim) for s in reps[:i]] + [r.e] \
                    + ks[i + 1:]
                out += kron_all(mats)
            return out
        if gen == "F":
            kinvs = [safe_inv(r.k, "K") for r in reps]
            out = np.zeros((int(np.prod([r.dim for r in reps])),) * 2, complex)
            for i, r in enumerate(reps):
                mats = kinvs[:i] + [r.f] + [np.eye(s.dim) for s in reps[i + 1:]]
                out += kron_all(mats)
            return out
        if gen in ("K", "Khalf", "Kinv"):
            pick = {"K": lambda r: r.k, "Khalf": lambda r: r.k_half,
                    "Kinv": lambda r: safe_inv(r.k, "K")}[gen]
            return kron_all([pick(r) for r in reps])
        raise ValueError(f"unknown generator {gen!r}")

    @functools.lru_cache(maxsize=None)
    def weight_vector(self, factors: tuple) -> np.ndarray:
        """Total weight of each product-basis vector."""
        ws = [self.rep(f).weights for f in factors]
        total = np.zeros(1)
        for w in ws:
            total = (total[:, None] + w[None, :]).reshape(-1)
        return total
