"""Named identity suites with machine-readable reports.

Every suite evaluates a list of identities and returns a ``CheckReport``
whose entries carry a stable identifier, a short human description, the
worst residual observed and the tolerance it was held to.  The aggregate
``all`` suite is the programmatic acceptance gate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .catalog import Catalog
from .fusion import FusionVector, build_fusion
from .handle import HandleGNS
from .linalg import lift_sites, residual, safe_inv
from .modular import (build_modular, check_s_properties, chi, dehn_element,
                      gauss_theta, pinching_identity, torus_sl2z,
                      verlinde_dim, verlinde_rep)
from .mcg import (CurveMonodromy, SurfaceWord, Letter, TwistGenerator,
                  dehn_operator, etaprep_operator, fusion_algebra_of_curve,
                  inner_implementation_check, naive_power,
                  projective_relation, weight)
from .reps import (deformed_inner_product, flatness_check, invariant_basis,
                   lambda_g_rep, loop_rep, central_eval, moduli_restrict,
                   multi_loop_rep, star_check)
from .uq import QParams, coproduct, irrep, monodromy, q_trace, r_matrix

SUITES = ("modular", "cat", "loop", "multiloop", "handle", "moduli", "mcg")


@dataclass
class CheckEntry:
    ident: str
    what: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def line(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        return (f"[{mark}] {self.ident:<36} residual {self.residual:9.3e} "
                f"(tol {self.tol:.0e})  {self.what}")


@dataclass
class CheckReport:
    suite: str
    entries: list = field(default_factory=list)

    def add(self, ident: str, what: str, res: float, tol: float = 1e-9):
        self.entries.append(CheckEntry(ident, what, float(res), tol))

    def run(self, ident: str, what: str, fn, tol: float = 1e-9):
        """Record a residual-returning callable; exceptions count as
        failures with an infinite residual."""
        try:
            res = float(fn())
        except Exception as exc:   # loud in the report, not in the process
            self.entries.append(CheckEntry(ident, f"{what} [{exc}]",
                                           float("inf"), tol))
            return
        self.add(ident, what, res, tol)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def merge(self, other: "CheckReport") -> "CheckReport":
        out = CheckReport(suite=f"{self.suite}+{other.suite}")
        out.entries = self.entries + other.entries
        return out

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [{"id": e.ident, "what": e.what,
                        "residual": e.residual, "tol": e.tol,
                        "passed": e.passed} for e in self.entries],
        }


def _closed_form_s(level: int) -> np.ndarray:
    n = level + 1
    return np.array([[np.sqrt(2.0 / (level + 2))
                      * np.sin(np.pi * (a + 1) * (b + 1) / (level + 2))
                      for b in range(n)] for a in range(n)])


# ---------------------------------------------------------------------------


def suite_modular(level: int, seed: int = 0, tol: float = 1e-9) -> CheckReport:
    rep = CheckReport("modular")
    md = build_modular(level)
    fd = md.fusion

    rep.run("s-closed-form", "trace route matches the sine closed form",
            lambda: np.max(np.abs(md.S - _closed_form_s(level))), 1e-10)
    props = check_s_properties(md, tol=1e-10)
    for name, res in props.items():
        rep.add(f"s-{name}", "standard S-matrix identity", res, 1e-10)

    rep.run("fusion-associativity", "integer associativity of fusion",
            lambda: float(np.max(np.abs(
                np.einsum("ije,ekl->ijkl", fd.N, fd.N)
                - np.einsum("jkf,ifl->ijkl", fd.N, fd.N)))), 0.0)

    rng = np.random.default_rng(seed)
    def rep_mult():
        worst = 0.0
        for _ in range(8):
            x = FusionVector(fd, rng.normal(size=level + 1)
                             + 1j * rng.normal(size=level + 1))
            y = FusionVector(fd, rng.normal(size=level + 1)
                             + 1j * rng.normal(size=level + 1))
            for j in fd.labels:
                worst = max(worst, abs(
                    verlinde_rep(md, j, x * y)
                    - verlinde_rep(md, j, x) * verlinde_rep(md, j, y)))
        return worst
    rep.add("verlinde-multiplicative",
            "one-dimensional characters are multiplicative", rep_mult(), 1e-8)

    def chi_props():
        worst = 0.0
        for a in fd.labels:
            for b in fd.labels:
                prod = chi(md, a) * chi(md, b)
                want = chi(md, a).coeffs if a == b \
                    else np.zeros(level + 1, complex)
                worst = max(worst, float(np.max(np.abs(prod.coeffs - want))))
            worst = max(worst, float(np.max(np.abs(
                chi(md, a).star().coeffs - chi(md, a).coeffs))))
        total = sum((chi(md, a) for a in fd.labels),
                    FusionVector(fd))
        worst = max(worst, float(np.max(np.abs(
            total.coeffs - FusionVector.unit(fd).coeffs))))
        return worst
    rep.run("chi-idempotents", "central idempotents of the fusion algebra",
            chi_props, 1e-9)

    rep.run("gauss-sum-modulus", "normalized Gauss sum is a phase",
            lambda: abs(abs(gauss_theta(md)) - 1.0), 1e-12)
    cc = 3.0 * level / (level + 2)
    rep.run("gauss-sum-value", "Gauss sum equals the central-charge phase",
            lambda: abs(md.theta - np.exp(-2j * np.pi * cc / 8.0)), 1e-10)

    def dehn_forms():
        h = dehn_element(md)
        qd_char = complex(np.dot(h.coeffs, fd.qdims))
        return abs(qd_char - 1.0)
    rep.run("twist-element", "two forms of the twist element agree and "
            "normalize", dehn_forms, 1e-10)

    def dims():
        for g in range(0, 3):
            for m in range(0, 4):
                import itertools
                for punct in itertools.product(fd.labels, repeat=m):
                    if g == 2 and (m > 0 or level > 2):
                        continue
                    verlinde_dim(md, g, list(punct))
        return 0.0
    rep.run("dimension-two-routes", "closed form equals brute-force path "
            "count", dims, 0.0)

    def pinch():
        import itertools
        for m in (2, 3, 4):
            for punct in itertools.product(fd.labels, repeat=m):
                pinching_identity(md, 0, list(punct), "fuse")
        pinching_identity(md, 1, [], "handle")
        if level <= 3:
            pinching_identity(md, 1, [1], "handle")
            pinching_identity(md, 2, [], "handle")
        return 0.0
    rep.run("pinching", "degeneration dimension identities", pinch, 0.0)

    def sl2z():
        out = torus_sl2z(md)
        return max(abs(abs(out["zeta1"]) - 1), abs(abs(out["zeta2"]) - 1))
    rep.run("torus-modular-relations", "projective torus relations of (S,T)",
            sl2z, 1e-9)
    return rep


# ---------------------------------------------------------------------------


def suite_cat(level: int | None = None, generic: bool = False,
              cutoff: int = 2, tol: float = 1e-9) -> CheckReport:
    rep = CheckReport("cat")
    cat = Catalog.generic(cutoff=cutoff) if generic else Catalog.root(level)
    labels = list(cat.labels)

    def defining():
        worst = 0.0
        q = cat.qp.q
        for n in labels:
            r = cat.rep(n)
            kinv = safe_inv(r.k, "K")
            worst = max(worst, residual(r.k_half @ r.e @ safe_inv(r.k_half, "K"),
                                        q * r.e))
            worst = max(worst, residual(r.e @ r.f - r.f @ r.e,
                                        (r.k - kinv) / (q - q ** -1)))
            worst = max(worst, residual(r.e.conj().T, r.f))
        return worst
    rep.run("irrep-relations", "defining relations and unitary form",
            defining, 1e-12)

    def ybe():
        worst = 0.0
        for (a, b, c) in [(1, 1, 1), (1, 1, min(2, labels[-1]))]:
            dims = [cat.dim(a), cat.dim(b), cat.dim(c)]
            r12 = lift_sites(cat.rmat(a, b), dims, [0, 1])
            r13 = lift_sites(cat.rmat(a, c), dims, [0, 2])
            r23 = lift_sites(cat.rmat(b, c), dims, [1, 2])
            worst = max(worst, residual(r12 @ r13 @ r23, r23 @ r13 @ r12))
        return worst
    rep.run("yang-baxter", "braid consistency of R", ybe, 1e-10)

    def quasi():
        worst = 0.0
        from .uq import coproduct as cop
        from .linalg import flip_matrix
        for (a, b) in [(1, 1), (1, min(2, labels[-1]))]:
            ra, rb = cat.rep(a), cat.rep(b)
            r = cat.rmat(a, b)
            p = flip_matrix(cat.dim(a), cat.dim(b))
            for gen in ("E", "F", "K"):
                d = cop(gen, ra, rb)
                dp = p.T @ cop(gen, rb, ra) @ p if a == b else None
                if a == b:
                    worst = max(worst, residual(r @ d, dp @ r))
        return worst
    rep.run("coproduct-intertwining", "R intertwines the flipped coproduct",
            quasi, 1e-10)

    def ribbon():
        worst = 0.0
        for n in labels:
            worst = max(worst, abs(abs(cat.v(n)) - 1.0))
            worst = max(worst, abs(cat.kappa[n] ** 2 - cat.v(n)))
            d = cat.qd(n)
            import numpy as _np
            from .linalg import qnum
            worst = max(worst, abs(d - float(_np.real(qnum(n + 1, cat.qp.q)))))
        return worst
    rep.run("ribbon-scalars", "twists, half-twists, quantum dimensions",
            ribbon, 1e-10)

    def mono_eigs():
        # at a root the bad part of a pair is not diagonalizable, so the
        # eigenvalues are read off the good channel projectors instead
        worst = 0.0
        for a in labels:
            for b in labels:
                mono = cat.mono(a, b)
                if generic:
                    projs = cat.monodromy_channel_projectors(a, b)
                else:
                    projs = {c: cat.isotypic_projector((a, b), c)
                             for c in cat.channels(a, b)}
                for c, proj in projs.items():
                    lam = cat.v(a) * cat.v(b) / cat._v_scalar(c)
                    worst = max(worst, residual(mono @ proj, lam * proj))
        return worst
    rep.run("monodromy-eigenvalues", "double braiding acts by twist ratios",
            mono_eigs, 1e-9)

    def pos_scalars():
        worst = 0.0
        for a in labels:
            for b in labels:
                for c in cat.channels(a, b):
                    if not generic and c > cat.qp.level:
                        continue
                    if generic and c > cat.qp.cutoff:
                        continue
                    m = cat.cg(a, b, c)
                    mat = m.proj @ cat.rprime(a, b) @ m.proj.conj().T
                    worst = max(worst, residual(
                        mat, (cat.kappa[a] * cat.kappa[b] / cat.kappa[c])
                        * np.eye(cat.dim(c))))
                    worst = max(worst, abs(abs(m.omega) - 1.0))
        return worst
    rep.run("braiding-normalization", "coupling braiding scalars carry the "
            "plus sign", pos_scalars, 1e-9)

    def completeness():
        worst = 0.0
        for (a, b) in [(1, 1), (labels[-1], labels[-1])]:
            p = cat.good_projector((a, b))
            worst = max(worst, residual(p @ p, p))
            want_rank = sum(c + 1 for c in cat.channels(a, b))
            worst = max(worst, abs(np.trace(p).real - want_rank))
            if generic:
                worst = max(worst, residual(p, np.eye(cat.dim(a) * cat.dim(b))))
        return worst
    rep.run("completeness", "channel idempotents resolve the good part",
            completeness, 1e-9)

    def duality():
        worst = 0.0
        from .cg import dual_maps
        for kk in labels:
            if kk == 0:
                continue
            dk = cat.dim(kk)
            c0, cc = dual_maps(kk, cat.qp, cat.v(kk), cat.qd(kk))
            t = cat.cg(kk, kk, 0)
            # invariance of the coupling
            ra = cat.rep(kk)
            worst = max(worst, residual(
                c0 @ coproduct("E", ra, ra), np.zeros((1, dk * dk))))
            worst = max(worst, residual(
                c0 @ coproduct("F", ra, ra), np.zeros((1, dk * dk))))
            # zig-zag: contract the braided partner against the coupling
            # across shared legs; proportional to the identity with |.|=d
            xi = cc.reshape(dk, dk)
            cap = c0.reshape(dk, dk)
            snake = np.einsum("ab,bc->ac" if False else "xa,xy->ya", xi, cap)
            lam = snake[0, 0]
            worst = max(worst, residual(snake, lam * np.eye(dk)))
            worst = max(worst, abs(abs(lam) - cat.qd(kk)))
        return worst
    rep.run("duality-maps", "vacuum couplings and the zig-zag contraction",
            duality, 1e-9)

    def qtrace_mult():
        worst = 0.0
        rng = np.random.default_rng(1)
        for (a, b) in [(1, 1), (1, labels[-1])]:
            ra, rb = cat.rep(a), cat.rep(b)
            x = rng.normal(size=(ra.dim, ra.dim)) \
                + 1j * rng.normal(size=(ra.dim, ra.dim))
            y = rng.normal(size=(rb.dim, rb.dim)) \
                + 1j * rng.normal(size=(rb.dim, rb.dim))
            lhs = q_trace(np.kron(x, y),
                          _pair_rep(cat, a, b))
            worst = max(worst, abs(lhs - q_trace(x, ra) * q_trace(y, rb)))
        return worst
    rep.run("q-trace-multiplicative", "q-trace factorizes over tensor "
            "factors", qtrace_mult, 1e-9)

    def good_comm():
        if generic:
            return 0.0
        worst = 0.0
        facs = (1, 1, 1) if cat.qp.level == 1 else (1, 2, 1)
        p = cat.good_projector(facs)
        dims = [cat.dim(f) for f in facs]
        for (i, j) in [(0, 1), (1, 2), (0, 2)]:
            op = lift_sites(cat.mono(facs[i], facs[j]), dims, [i, j])
            worst = max(worst, residual(p @ op, op @ p))
        return worst
    rep.run("good-projector-braiding", "good projector commutes with "
            "double braidings", good_comm, 1e-9)

    if not generic:
        def cross_s():
            md = build_modular(cat.qp.level)
            worst = 0.0
            for a in labels:
                for b in labels:
                    ga = np.kron(cat.g_weight(a), cat.g_weight(b))
                    val = md.norm * np.trace(cat.mono(a, b) @ ga)
                    worst = max(worst, abs(val - md.S[a, b]))
            return worst
        rep.run("cross-layer-s", "matrix trace of the double braiding "
                "reproduces S", cross_s, 1e-9)

    def deformed():
        facs = (1, 1) if generic else (1, min(2, labels[-1]))
        h = deformed_inner_product(cat, facs)
        return residual(h, h.conj().T)
    rep.run("deformed-product", "deformed Gram Hermitian and positive on "
            "the good part", deformed, 1e-9)
    return rep


def _pair_rep(cat, a, b):
    """Minimal stand-in with the tensor-product q-trace weight."""
    from dataclasses import dataclass as _dc

    class _P:
        g = np.kron(cat.g_weight(a), cat.g_weight(b))
    return _P


# ---------------------------------------------------------------------------


def _functoriality_residual(rep_obj, gen, labels, project: bool) -> float:
    cat = rep_obj.catalog
    car = rep_obj.carrier
    worst = 0.0
    for a in labels:
        for b in labels:
            da, db = cat.dim(a), cat.dim(b)
            dims = [da, db, car.dim]
            m1 = lift_sites(rep_obj.op(gen, a), dims, [0, 2])
            m2 = lift_sites(rep_obj.op(gen, b), dims, [1, 2])
            r12 = lift_sites(cat.rmat(a, b), dims, [0, 1])
            lhs = m1 @ r12 @ m2
            rhs = np.zeros_like(lhs)
            for c in cat.channels(a, b):
                m = cat.cg(a, b, c)
                big = np.kron(m.proj.conj().T, np.eye(car.dim)) \
                    @ rep_obj.op(gen, c) \
                    @ np.kron(m.proj, np.eye(car.dim))
                rhs += big
            if project:
                pg = np.kron(cat.good_projector((a, b)),
                             rep_obj.good_projector())
                worst = max(worst, residual(pg @ lhs @ pg, pg @ rhs @ pg))
            else:
                worst = max(worst, residual(lhs, rhs))
    return worst


def _same_loop_exchange(rep_obj, gen, labels) -> float:
    """R' M1 R M2 = M2 R' M1 R with the auxiliary legs braided."""
    cat, car = rep_obj.catalog, rep_obj.carrier
    worst = 0.0
    for a in labels:
        for b in labels:
            da, db = cat.dim(a), cat.dim(b)
            dims = [da, db, car.dim]
            m1 = lift_sites(rep_obj.op(gen, a), dims, [0, 2])
            m2 = lift_sites(rep_obj.op(gen, b), dims, [1, 2])
            r = lift_sites(cat.rmat(a, b), dims, [0, 1])
            rp = lift_sites(cat.rprime(a, b), dims, [0, 1])
            worst = max(worst, residual(rp @ m1 @ r @ m2, m2 @ rp @ m1 @ r))
    return worst


def _cross_loop_exchange(rep_obj, gens, labels) -> float:
    cat, car = rep_obj.catalog, rep_obj.carrier
    worst = 0.0
    for g1, g2 in gens:
        for a in labels:
            for b in labels:
                da, db = cat.dim(a), cat.dim(b)
                dims = [da, db, car.dim]
                m1 = lift_sites(rep_obj.op(g1, a), dims, [0, 2])
                m2 = lift_sites(rep_obj.op(g2, b), dims, [1, 2])
                r = lift_sites(cat.rmat(a, b), dims, [0, 1])
                ri = safe_inv(r, "R")
                worst = max(worst, residual(ri @ m1 @ r @ m2,
                                            m2 @ ri @ m1 @ r))
    return worst


def _covariance_residual(rep_obj, gen, labels) -> float:
    """mu(xi) M = M mu(xi) with the coupled symmetry action."""
    cat, car = rep_obj.catalog, rep_obj.carrier
    worst = 0.0
    for a in labels:
        da = cat.dim(a)
        ra = cat.rep(a)
        x = rep_obj.op(gen, a)
        kinvs = safe_inv(ra.k, "K")
        for name in ("E", "F", "K"):
            if name == "E":
                mu = np.kron(ra.e, rep_obj.symmetry("K")) \
                    + np.kron(np.eye(da), rep_obj.symmetry("E"))
            elif name == "F":
                mu = np.kron(ra.f, np.eye(car.dim)) \
                    + np.kron(kinvs, rep_obj.symmetry("F"))
            else:
                mu = np.kron(ra.k, rep_obj.symmetry("K"))
            worst = max(worst, residual(mu @ x, x @ mu))
    return worst


def suite_loop(level: int | None = None, generic: bool = False,
               cutoff: int = 2) -> CheckReport:
    rep = CheckReport("loop")
    cat = Catalog.generic(cutoff=cutoff) if generic else Catalog.root(level)
    labels = list(cat.labels)
    carrier_labels = labels if not generic else labels[1:]
    for lab in carrier_labels:
        r = loop_rep(cat, lab)
        rep.run(f"product-rule-{lab}", "operator product law of the loop "
                "monodromies", lambda r=r: _functoriality_residual(
                    r, ("l", 1), labels, project=not generic), 1e-9)
        rep.run(f"exchange-{lab}", "same-loop exchange relation",
                lambda r=r: _same_loop_exchange(r, ("l", 1), labels), 1e-9)
        rep.run(f"covariance-{lab}", "symmetry covariance of the monodromy",
                lambda r=r: _covariance_residual(r, ("l", 1), labels), 1e-9)
        rep.run(f"star-{lab}", "star structure against the deformed product",
                lambda r=r: max(star_check(r, labels=labels).values()), 1e-9)
    if not generic:
        md = build_modular(cat.qp.level)

        def central():
            worst = 0.0
            for lab in labels:
                r = loop_rep(cat, lab)
                for j in labels:
                    got = central_eval(r, j)
                    worst = max(worst, abs(
                        got - md.S[j, lab] / (md.norm * md.fusion.qdims[lab])))
            return worst
        rep.run("central-values", "central elements act by S-matrix ratios",
                central, 1e-9)

        def char_proj():
            worst = 0.0
            for lab in labels:
                r = loop_rep(cat, lab)
                for kk in labels:
                    tot = np.zeros((cat.dim(lab),) * 2, dtype=complex)
                    for i in labels:
                        ci = cat.kappa[i] * r.q_trace_aux(r.op(("l", 1), i), i)
                        tot += md.norm * md.fusion.qdims[kk] * md.S[kk, i] * ci
                    want = np.eye(cat.dim(lab)) if kk == lab \
                        else np.zeros_like(tot)
                    worst = max(worst, residual(tot, want))
            return worst
        rep.run("characteristic-projectors", "sector projectors select the "
                "carrier label", char_proj, 1e-9)
    return rep


def suite_multiloop(level: int | None = None, generic: bool = False,
                    cutoff: int = 2) -> CheckReport:
    rep = CheckReport("multiloop")
    cat = Catalog.generic(cutoff=cutoff) if generic else Catalog.root(level)
    labels = list(cat.labels)
    punct = (1, 1) if generic or cat.qp.level == 1 else (1, 2)
    r = multi_loop_rep(cat, punct)

    rep.run("cross-exchange", "distinct loops exchange through the braiding",
            lambda: _cross_loop_exchange(
                r, [(("l", 1), ("l", 2))], labels), 1e-9)
    rep.run("product-rule", "operator product law per loop",
            lambda: max(_functoriality_residual(r, ("l", nu), labels,
                                                project=not generic)
                        for nu in (1, 2)), 1e-9)
    rep.run("star", "star structure against the deformed product",
            lambda: max(star_check(r).values()), 1e-9)

    if not generic:
        md = build_modular(cat.qp.level)

        def char_proj():
            worst = 0.0
            for nu, lab in enumerate(punct, start=1):
                for kk in labels:
                    tot = np.zeros((r.carrier.dim,) * 2, dtype=complex)
                    for i in labels:
                        ci = cat.kappa[i] * r.q_trace_aux(r.op(("l", nu), i), i)
                        tot += md.norm * md.fusion.qdims[kk] * md.S[kk, i] * ci
                    want = np.eye(r.carrier.dim) if kk == lab \
                        else np.zeros_like(tot)
                    worst = max(worst, residual(tot, want))
            return worst
        rep.run("characteristic-projectors", "per-loop sector projectors",
                char_proj, 1e-9)

    def positivity():
        h = deformed_inner_product(cat, punct)
        evals = np.linalg.eigvalsh(h)
        p = cat.good_projector(punct)
        rank = int(round(float(np.real(np.trace(p)))))
        pos = np.sort(evals)[::-1][:rank]
        return max(0.0, 1e-12 - float(pos.min())) + max(
            0.0, float(-evals.min()))
    rep.run("deformed-positivity", "carrier product positive on the good "
            "part", positivity, 1e-8)

    if generic:
        def faithful():
            mats = [np.eye(r.carrier.dim)]
            for nu in (1, 2):
                for j in labels[1:]:
                    dj = cat.dim(j)
                    t = r.op(("l", nu), j).reshape(dj, r.carrier.dim,
                                                   dj, r.carrier.dim)
                    for a in range(dj):
                        for b in range(dj):
                            mats.append(t[a, :, b, :])
            prev = 0
            while True:
                stack = np.array([m.reshape(-1) for m in mats])
                rank = np.linalg.matrix_rank(stack, tol=1e-10)
                if rank in (prev, r.carrier.dim ** 2):
                    break
                prev = rank
                mats = mats + [m1 @ m2 for m1 in mats[:32]
                               for m2 in mats[:32]]
            return abs(rank - r.carrier.dim ** 2)
        rep.run("faithfulness-rank", "monodromy components span the full "
                "matrix algebra", faithful, 0.0)
    return rep


def suite_handle(cutoff: int = 2) -> CheckReport:
    rep = CheckReport("handle")
    cat = Catalog.generic(cutoff=2 * cutoff)
    h = HandleGNS(cat, cutoff=cutoff)
    rep.run("cyclic-vector", "b-cycle eigenvalue on the cyclic vector",
            h.bxivac_check, 1e-10)
    rep.run("sector-projectors", "b-cycle idempotents select one-letter "
            "sectors", h.chiba_check, 1e-8)
    rep.run("commutator-loop", "commutator of the handle cycles represents "
            "the double braiding", lambda: h.minpi_check(
                labels=[n for n in h.space.labels if n >= 1]), 1e-8)
    rep.run("exchange", "a/b exchange relation as operators",
            lambda: h.exchange_check(), 1e-9)

    def gram():
        g = h.gram()
        evals = np.linalg.eigvalsh(g)
        rep.add("gram-smallest-eigenvalue",
                "smallest eigenvalue of the functional Gram",
                float(evals.min()), float("inf"))
        return max(0.0, float(-evals.min()) + (0.0 if evals.min() > 0 else 1.0))
    rep.run("gram-positive", "functional Gram positive definite", gram, 1e-12)
    return rep


def suite_moduli(level: int) -> CheckReport:
    rep = CheckReport("moduli")
    cat = Catalog.root(level)
    md = build_modular(level)
    import itertools

    def ranks():
        sigs = [(0, p) for m in range(1, 5)
                for p in itertools.product(cat.labels, repeat=m)]
        sigs += [(1, p) for m in range(0, 3 if level <= 2 else 2)
                 for p in itertools.product(cat.labels, repeat=m)]
        if level <= 2:
            sigs.append((2, ()))
        worst = 0
        for g, punct in sigs:
            b = invariant_basis(lambda_g_rep(cat, g, punct), 0)
            worst = max(worst, abs(b.dim - verlinde_dim(md, g, list(punct))))
        return float(worst)
    rep.run("block-ranks", "tree bases match both dimension routes", ranks, 0.0)

    r = lambda_g_rep(cat, 1, ())
    basis = invariant_basis(r, 0)

    def compress_hom():
        word = SurfaceWord(1, 0, ()).extend([Letter("l", 1, 1)])
        cm = CurveMonodromy(r, word)
        worst = 0.0
        for i in cat.labels:
            for j in cat.labels:
                a = moduli_restrict(r, cm.char(i), basis, tol=1e-7)
                b = moduli_restrict(r, cm.char(j), basis, tol=1e-7)
                ab = moduli_restrict(r, cm.char(i) @ cm.char(j), basis,
                                     tol=1e-7)
                worst = max(worst, residual(a @ b, ab))
        return worst
    rep.run("compression-homomorphism", "block compression respects "
            "invariant products", compress_hom, 1e-8)

    def chi00():
        m, g = 0, 1
        word = SurfaceWord(g, m, ()).extend(
            [Letter("l", p, 1) for p in range(m + 2 * g, 0, -1)])
        cm = CurveMonodromy(r, word)
        worst = 0.0
        for kk in cat.labels:
            tot = np.zeros((r.carrier.dim,) * 2, dtype=complex)
            for i in cat.labels:
                tot += md.norm * md.fusion.qdims[kk] * md.S[kk, i] * cm.char(i)
            for sector in cat.labels:
                bs = invariant_basis(r, sector)
                if bs.dim == 0:
                    continue
                blk = moduli_restrict(r, tot, bs, tol=1e-6)
                want = np.eye(bs.dim) if kk == sector \
                    else np.zeros((bs.dim, bs.dim))
                worst = max(worst, residual(blk, want))
        return worst
    rep.run("boundary-projector", "boundary sector projector grades the "
            "blocks", chi00, 1e-7)

    rep.run("flatness", "boundary monodromy is a coherent half-twist power "
            "on the blocks",
            lambda: 0.0 if flatness_check(r, basis)["exponent"] is not None
            else 1.0, 0.0)
    return rep


def suite_mcg(level: int) -> CheckReport:
    rep = CheckReport("mcg")
    cat = Catalog.root(level)

    def weights():
        worst = 0
        m, g = 2, 1
        letters = [Letter("l", i, s) for i in (1, 2) for s in (1, -1)]
        letters += [Letter(kind, 1, s) for kind in "ab" for s in (1, -1)]
        for c1 in letters:
            for c2 in letters:
                if c1 == c2.inverse():
                    continue
                w1 = weight(c1, c2, m)
                w2 = weight(c2.inverse(), c1.inverse(), m)
                worst = max(worst, abs(w1 + w2))
        return float(worst)
    rep.run("weight-antisymmetry", "letter weights are antisymmetric under "
            "reversal", weights, 0.0)

    def commutator_power():
        w = SurfaceWord(1, 0, ()).extend(
            [Letter("b", 1, 1), Letter("a", 1, -1),
             Letter("b", 1, -1), Letter("a", 1, 1)])
        return float(abs(naive_power(w) - 3))
    rep.run("commutator-weight", "handle commutator carries the cubed "
            "half-twist", commutator_power, 0.0)

    r = lambda_g_rep(cat, 1, ())
    basis = invariant_basis(r, 0)

    def unitary():
        worst = 0.0
        for curve in ("beta:1", "delta:1", "alpha:1"):
            h = dehn_operator(r, basis, curve)
            worst = max(worst, residual(h @ h.conj().T, np.eye(basis.dim)))
        return worst
    rep.run("twist-unitarity", "all twist operators unitary on the block",
            unitary, 1e-9)

    def cross():
        worst = 0.0
        for curve in ("beta:1", "delta:1", "alpha:1"):
            worst = max(worst, residual(
                dehn_operator(r, basis, curve),
                etaprep_operator(r, basis, curve)))
        if level == 2:
            r2 = lambda_g_rep(cat, 1, (1, 1))
            b2 = invariant_basis(r2, 0)
            for curve in ("eta:1,2", "eta:1,3", "alpha:1", "delta:1",
                          "eps:1"):
                worst = max(worst, residual(
                    dehn_operator(r2, b2, curve),
                    etaprep_operator(r2, b2, curve)))
        return worst
    rep.run("generator-cross-check", "closed forms equal the twist-element "
            "route", cross, 1e-8)

    def braid():
        out = projective_relation(
            r, basis, ["beta:1", "delta:1", "beta:1"],
            ["delta:1", "beta:1", "delta:1"])
        return abs(abs(out["phase"]) - 1.0) + out["residual"]
    rep.run("braid-relation", "torus twists satisfy the braid relation",
            braid, 1e-8)

    def sl2z():
        md = build_modular(level)
        tb = dehn_operator(r, basis, "beta:1")
        td = dehn_operator(r, basis, "delta:1")
        shat = tb @ td @ tb
        st3 = np.linalg.matrix_power(shat @ td, 3)
        s2 = shat @ shat
        z1 = np.trace(s2.conj().T @ st3) / np.trace(s2.conj().T @ s2)
        res = residual(st3, z1 * s2)
        s4 = np.linalg.matrix_power(shat, 4)
        z2 = np.trace(s4) / basis.dim
        res = max(res, residual(s4, z2 * np.eye(basis.dim)))
        res = max(res, abs(abs(z1) - 1), abs(abs(z2) - 1))
        # spectra against the scalar modular data, one phase per generator
        evt = np.sort_complex(np.linalg.eigvals(td))
        res = max(res, float(np.max(np.abs(
            evt - np.sort_complex(1.0 / md.v)))))
        evs = np.linalg.eigvals(shat)
        evm = np.linalg.eigvals(md.S)
        phase = None
        for cand in evs / evm[0]:
            if abs(abs(cand) - 1) > 1e-8:
                continue
            if _multiset_close(evs, cand * evm):
                phase = cand
                break
        res = max(res, 0.0 if phase is not None else 1.0)
        return res
    rep.run("modular-generation", "twists generate the projective torus "
            "relations with modular spectra", sl2z, 1e-8)

    def inner():
        out = inner_implementation_check(r, basis, ["b1", "a1", "b1 a1"])
        return max(out.values())
    rep.run("inner-implementation", "twist conjugation realizes the curve "
            "substitution", inner, 1e-8)

    def hdef_hchi():
        md = build_modular(level)
        dehn_element(md)
        return 0.0
    rep.run("twist-element-forms", "twist element equals the inverse-twist "
            "combination of idempotents", hdef_hchi, 0.0)
    return rep


def _multiset_close(a, b, tol=1e-8) -> bool:
    a = sorted(np.asarray(a), key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    b = sorted(np.asarray(b), key=lambda z: (round(z.real, 8), round(z.imag, 8)))
    return all(abs(x - y) < tol for x, y in zip(a, b))


def run_suite(name: str, level: int = 2, seed: int = 0,
              cutoff: int = 2) -> CheckReport:
    """Run one named suite (or ``all``) at the given level."""
    if name == "modular":
        return suite_modular(level, seed=seed)
    if name == "cat":
        return suite_cat(level).merge(suite_cat(generic=True, cutoff=cutoff))
    if name == "loop":
        return suite_loop(level).merge(
            suite_loop(generic=True, cutoff=cutoff))
    if name == "multiloop":
        return suite_multiloop(level).merge(
            suite_multiloop(generic=True, cutoff=cutoff))
    if name == "handle":
        return suite_handle(cutoff=cutoff)
    if name == "moduli":
        return suite_moduli(level)
    if name == "mcg":
        return suite_mcg(level)
    if name == "all":
        out = CheckReport("all")
        for nm in SUITES:
            out.entries.extend(run_suite(nm, level=level, seed=seed,
                                         cutoff=cutoff).entries)
        return out
    raise ValueError(f"unknown suite {name!r}")
