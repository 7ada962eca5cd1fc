"""Realized monodromy representations: loop, multi-loop and genus-g.

The carrier for genus g with punctures (K_1..K_m) is a direct sum over
handle sector assignments (J_1..J_g); the block of one assignment is the
plain tensor product

    V^{K_1} (x) ... (x) V^{K_m} (x) (V^{J_1} (x) V^{J_1}) (x) ...

with one conjugate pair per handle (labels are self-dual here).  All loop
generators l_p, p = 1..m+2g -- where l_{m+2i-1} is the inverse-conjugated
b-cycle around handle i and l_{m+2i} the b-cycle itself -- act by one
unified formula: conjugate the double braiding of the auxiliary leg with
strand p by the braiding chain over strands 1..p-1.  The a-cycle generators
mix sectors; their action is obtained from the cyclic-vector realization of
the handle algebra (see ``handle``) transported to the conjugate-pair
coordinates, then dressed by the same braiding chain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .catalog import Catalog
from .handle import gns_a_action, pair_transport
from .linalg import DEFAULT_TOL, lift_sites, residual, safe_inv


@dataclass(frozen=True)
class Carrier:
    """Sector-resolved state space of a genus-g multi-puncture surface."""

    catalog: Catalog
    punctures: tuple
    genus: int
    sectors: tuple          # ordered tuples (J_1..J_g)
    offsets: tuple
    dim: int

    @classmethod
    def build(cls, catalog: Catalog, punctures, genus: int) -> "Carrier":
        punctures = tuple(punctures)
        labels = catalog.labels
        sectors = tuple(itertools.product(labels, repeat=genus))
        offsets, dim = [], 0
        for s in sectors:
            offsets.append(dim)
            dim += int(np.prod([catalog.dim(f)
                                for f in cls._factors(punctures, s)]) or 1)
        return cls(catalog=catalog, punctures=punctures, genus=genus,
                   sectors=sectors, offsets=tuple(offsets), dim=dim)

    @staticmethod
    def _factors(punctures, sector) -> tuple:
        out = list(punctures)
        for j in sector:
            out.extend((j, j))
        return tuple(out)

    def factors(self, sector) -> tuple:
        return self._factors(self.punctures, sector)

    def block_dims(self, sector) -> list:
        return [self.catalog.dim(f) for f in self.factors(sector)]

    def block_dim(self, sector) -> int:
        return int(np.prod(self.block_dims(sector)) or 1)

    def offset(self, sector) -> int:
        return self.offsets[self.sectors.index(tuple(sector))]

    @property
    def n_strands(self) -> int:
        return len(self.punctures) + 2 * self.genus

    def block_diag(self, per_sector) -> np.ndarray:
        """Assemble a carrier operator from one matrix per sector."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for s in self.sectors:
            off = self.offset(s)
            blk = per_sector(s)
            d = blk.shape[0]
            out[off:off + d, off:off + d] = blk
        return out


class MonodromyRep:
    """Generator table of one realized graph-algebra representation.

    ``op(gen, I)`` returns the dense operator on V^I (x) carrier for
    ``gen`` one of ("l", p), ("a", i), ("b", i); the symmetry action of the
    quantum algebra on the carrier is exposed through ``symmetry``.
    """

    def __init__(self, catalog: Catalog, carrier: Carrier):
        self.catalog = catalog
        self.carrier = carrier
        self._ops: dict = {}
        self._sym: dict = {}

    # -- generators ---------------------------------------------------------

    def op(self, gen, label: int) -> np.ndarray:
        key = (tuple(gen), label)
        if key not in self._ops:
            kind, idx = gen
            if kind == "l":
                mat = self._loop_op(idx, label)
            elif kind == "b":
                mat = self._loop_op(len(self.carrier.punctures) + 2 * idx, label)
            elif kind == "a":
                mat = self._a_op(idx, label)
            else:
                raise ValueError(f"unknown generator kind {kind!r}")
            mat.flags.writeable = False
            self._ops[key] = mat
        return self._ops[key]

    def op_inv(self, gen, label: int) -> np.ndarray:
        key = (tuple(gen), label, "inv")
        if key not in self._ops:
            self._ops[key] = safe_inv(self.op(gen, label),
                                      f"monodromy {gen} label {label}")
        return self._ops[key]

    def generator_ids(self):
        m, g = len(self.carrier.punctures), self.carrier.genus
        out = [("l", p) for p in range(1, m + 2 * g + 1)]
        out += [("a", i) for i in range(1, g + 1)]
        out += [("b", i) for i in range(1, g + 1)]
        return out

    # unified loop-generator formula ----------------------------------------

    def _loop_op(self, strand: int, label: int) -> np.ndarray:
        cat, car = self.catalog, self.carrier
        dI = cat.dim(label)
        out = np.zeros((dI * car.dim, dI * car.dim), dtype=complex)
        for s in car.sectors:
            blk = self._loop_block(strand, label, s)
            _place(out, blk, dI, car.dim, car.offset(s), car.offset(s),
                   car.block_dim(s), car.block_dim(s))
        return out / cat.kappa[label]

    def _loop_block(self, strand: int, label: int, sector) -> np.ndarray:
        """K_p R'_{0p} R_{0p} K_p^{-1} on V^label (x) block, aux = site 0."""
        cat, car = self.catalog, self.carrier
        factors = car.factors(sector)
        dims = [cat.dim(label)] + car.block_dims(sector)
        chain = np.eye(int(np.prod(dims)), dtype=complex)
        for site in range(1, strand):
            chain = chain @ lift_sites(cat.rprime(label, factors[site - 1]),
                                       dims, [0, site])
        core = lift_sites(cat.mono(label, factors[strand - 1]),
                          dims, [0, strand])
        return chain @ core @ safe_inv(chain, "braiding chain")

    # a-cycle generators ------------------------------------------------------

    def _a_op(self, handle: int, label: int) -> np.ndarray:
        cat, car = self.catalog, self.carrier
        if not 1 <= handle <= car.genus:
            raise ValueError(f"no handle {handle}")
        m = len(car.punctures)
        dI = cat.dim(label)
        first = m + 2 * handle - 1          # first strand of this handle
        out = np.zeros((dI * car.dim, dI * car.dim), dtype=complex)
        for s in car.sectors:
            j = s[handle - 1]
            for k_lab, pair_op in gns_a_action(cat, label, j).items():
                t = list(s)
                t[handle - 1] = k_lab
                t = tuple(t)
                blk = self._dress_pair_op(pair_op, label, s, t, first)
                _place(out, blk, dI, car.dim, car.offset(t), car.offset(s),
                       car.block_dim(t), car.block_dim(s))
        return out

    def _dress_pair_op(self, pair_op: np.ndarray, label: int, src, dst,
                       first: int) -> np.ndarray:
        """Lift an aux (x) pair operator into aux (x) block coordinates and
        conjugate by the braiding chain over the preceding strands."""
        cat, car = self.catalog, self.carrier
        fsrc, fdst = car.factors(src), car.factors(dst)
        dims_src = [cat.dim(label)] + [cat.dim(f) for f in fsrc]
        dims_dst = [cat.dim(label)] + [cat.dim(f) for f in fdst]
        big = _lift_rect(pair_op, dims_dst, dims_src, [0, first, first + 1])
        chain_src = np.eye(int(np.prod(dims_src)), dtype=complex)
        chain_dst = np.eye(int(np.prod(dims_dst)), dtype=complex)
        for site in range(1, first):
            chain_src = chain_src @ lift_sites(
                cat.rprime(label, fsrc[site - 1]), dims_src, [0, site])
            chain_dst = chain_dst @ lift_sites(
                cat.rprime(label, fdst[site - 1]), dims_dst, [0, site])
        return chain_dst @ big @ safe_inv(chain_src, "braiding chain")

    # -- symmetry action and structure matrices -----------------------------

    def symmetry(self, gen: str) -> np.ndarray:
        if gen not in self._sym:
            car = self.carrier
            self._sym[gen] = car.block_diag(
                lambda s: self.catalog.coupled_generator(gen, car.factors(s)))
        return self._sym[gen]

    def deformed_gram(self) -> np.ndarray:
        car = self.carrier
        return car.block_diag(
            lambda s: self.catalog.deformed_gram(car.factors(s)))

    def good_projector(self) -> np.ndarray:
        car = self.carrier
        return car.block_diag(
            lambda s: self.catalog.good_projector(car.factors(s)))

    def sym_r_chain(self, label: int, inverse: bool = False) -> np.ndarray:
        """(tau^label (x) carrier action)(R): descending braiding chain."""
        cat, car = self.catalog, self.carrier
        dI = cat.dim(label)
        out = np.zeros((dI * car.dim, dI * car.dim), dtype=complex)
        for s in car.sectors:
            factors = car.factors(s)
            dims = [dI] + car.block_dims(s)
            blk = np.eye(int(np.prod(dims)), dtype=complex)
            for site in range(len(factors), 0, -1):
                blk = blk @ lift_sites(cat.rmat(label, factors[site - 1]),
                                       dims, [0, site])
            if inverse:
                blk = safe_inv(blk, "R chain")
            _place(out, blk, dI, car.dim, car.offset(s), car.offset(s),
                   car.block_dim(s), car.block_dim(s))
        return out

    def central_kappa(self, inverse: bool = False) -> np.ndarray:
        """Carrier action of the half-twist element (or its inverse)."""
        cat, car = self.catalog, self.carrier
        top = cat._chan_top()
        scal = tuple((1.0 / cat.kappa[n] if inverse else cat.kappa[n])
                     for n in range(top + 1))
        return car.block_diag(
            lambda s: cat.central_value(car.factors(s), scal))

    def q_trace_aux(self, mat: np.ndarray, label: int) -> np.ndarray:
        """Partial q-trace over the auxiliary leg of an operator on
        V^label (x) carrier."""
        cat, car = self.catalog, self.carrier
        dI = cat.dim(label)
        g = cat.g_weight(label)
        t = mat.reshape(dI, car.dim, dI, car.dim)
        return np.einsum("ba,aubv->uv", g, t)


def _place(big, blk, dI, dim_car, off_r, off_c, dr, dc):
    t = blk.reshape(dI, dr, dI, dc)
    view = big.reshape(dI, dim_car, dI, dim_car)
    view[:, off_r:off_r + dr, :, off_c:off_c + dc] += t


def _lift_rect(op, dims_out, dims_in, sites):
    """Like ``lift_sites`` but the factors at ``sites`` may change dimension."""
    n = len(dims_in)
    rest = [s for s in range(n) if s not in sites]
    if [dims_in[s] for s in rest] != [dims_out[s] for s in rest]:
        raise ValueError("identity legs must keep their dimensions")
    order = list(sites) + rest
    d_rest = int(np.prod([dims_in[s] for s in rest])) if rest else 1
    big = np.kron(op, np.eye(d_rest))
    idx_in = np.arange(int(np.prod(dims_in))).reshape(dims_in)
    idx_out = np.arange(int(np.prod(dims_out))).reshape(dims_out)
    perm_in = np.transpose(idx_in, order).reshape(-1)
    perm_out = np.transpose(idx_out, order).reshape(-1)
    out = np.zeros((len(perm_out), len(perm_in)), dtype=complex)
    out[np.ix_(perm_out, perm_in)] = big
    return out


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def lambda_g_rep(catalog: Catalog, genus: int, punctures) -> MonodromyRep:
    """Monodromy representation of the genus-g graph algebra."""
    if genus < 0:
        raise ValueError("genus must be non-negative")
    carrier = Carrier.build(catalog, punctures, genus)
    return MonodromyRep(catalog, carrier)


def multi_loop_rep(catalog: Catalog, punctures) -> MonodromyRep:
    return lambda_g_rep(catalog, 0, punctures)


def loop_rep(catalog: Catalog, label: int) -> MonodromyRep:
    return lambda_g_rep(catalog, 0, [label])


def central_eval(rep: MonodromyRep, j: int, strand: int = 1,
                 tol: float = DEFAULT_TOL) -> complex:
    """Value of the central fusion generator of label j over one loop.

    kappa_j times the aux q-trace of the loop operator must be a scalar;
    a non-scalar result means the representation is broken.
    """
    cat = rep.catalog
    mat = cat.kappa[j] * rep.q_trace_aux(rep.op(("l", strand), j), j)
    d = mat.shape[0]
    scal = complex(np.trace(mat) / d)
    if residual(mat, scal * np.eye(d)) > tol:
        raise AssertionError(
            f"central element of label {j} is not scalar on the carrier")
    return scal


# ---------------------------------------------------------------------------
# deformed product, star structure
# ---------------------------------------------------------------------------


def deformed_inner_product(catalog: Catalog, factors,
                           tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian Gram matrix of the deformed product on a factor list.

    Positive definite in generic mode; at a root it is positive definite on
    the good subspace and null on its complement.
    """
    h = catalog.deformed_gram(tuple(factors))
    evals = np.linalg.eigvalsh(h)
    p = catalog.good_projector(tuple(factors))
    rank = int(round(float(np.real(np.trace(p)))))
    pos = np.sort(evals)[::-1][:rank]
    if rank and pos.min() < tol:
        raise AssertionError("deformed product is not positive on the "
                             "good subspace")
    if evals.min() < -1e-8:
        raise AssertionError("deformed product has a negative direction")
    return h


def star_check(rep: MonodromyRep, gens=None, labels=None,
               tol: float = DEFAULT_TOL, project: bool | None = None) -> dict:
    """Residuals of the star structure in a realized representation.

    For each loop-type generator matrix X the conjugated inverse
    sigma_kappa(R X^-1 R^-1) must be the entrywise adjoint of X with
    respect to the deformed carrier product (auxiliary indices transposed).
    At a root the comparison is made on the good subspace.

    Sector-raising generators are excluded by default: their inverse exists
    only in the truncated algebra, not as a carrier matrix, so their star
    structure is certified indirectly (defining exchange relations plus
    block unitarity of the twist operators).
    """
    cat, car = rep.catalog, rep.carrier
    h = rep.deformed_gram()
    if gens is None:
        m, g = len(car.punctures), car.genus
        gens = [("l", p) for p in range(1, m + 2 * g + 1)]
    gens = list(gens)
    labels = list(labels) if labels is not None else list(cat.labels)
    if project is None:
        project = cat.qp.is_root
    p = rep.good_projector() if project else np.eye(car.dim)
    out = {}
    for gen in gens:
        for lab in labels:
            x = rep.op(gen, lab)
            dI = cat.dim(lab)
            rchain = rep.sym_r_chain(lab)
            big_kap = np.kron(np.eye(dI), rep.central_kappa())
            big_kapi = np.kron(np.eye(dI), rep.central_kappa(inverse=True))
            lhs = big_kapi @ rchain @ safe_inv(x, "monodromy") \
                @ safe_inv(rchain, "R chain") @ big_kap
            # matrix-element form of the adjoint condition:
            # P (lhs-block(b,a))^dag H P = P H (x-block(a,b)) P
            lt = lhs.reshape(dI, car.dim, dI, car.dim)
            xt = x.reshape(dI, car.dim, dI, car.dim)
            worst = 0.0
            for a in range(dI):
                for b in range(dI):
                    lhs_w = p.conj().T @ lt[b, :, a, :].conj().T @ h @ p
                    rhs_w = p.conj().T @ h @ xt[a, :, b, :] @ p
                    worst = max(worst, residual(lhs_w, rhs_w))
            out[(tuple(gen), lab)] = worst
    worst = max(out.values())
    if worst > tol:
        bad = {k: v for k, v in out.items() if v > tol}
        raise AssertionError(f"star structure fails: {bad}")
    return out


# ---------------------------------------------------------------------------
# invariant block bases and moduli compression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockBasis:
    """Isometric embedding of one block space into the carrier."""

    carrier: Carrier
    sector: int
    matrix: np.ndarray          # carrier_dim x n_blocks, deformed-orthonormal
    path_labels: tuple
    gram: np.ndarray = field(repr=False)    # carrier deformed Gram

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def compress(self, x: np.ndarray) -> np.ndarray:
        return self.matrix.conj().T @ self.gram @ x @ self.matrix

    def leakage(self, x: np.ndarray) -> float:
        """Deformed norm of the part of x(basis) outside the block span."""
        xb = x @ self.matrix
        rem = xb - self.matrix @ self.compress(x)
        sq = np.einsum("ui,uv,vi->i", rem.conj(), self.gram, rem)
        scale = max(1.0, float(np.max(np.abs(xb))))
        return float(np.sqrt(max(np.max(np.real(sq)), 0.0))) / scale


def invariant_basis(rep_or_carrier, sector: int = 0,
                    tol: float = DEFAULT_TOL) -> BlockBasis:
    """Orthonormal fusion-tree basis of the sector block space.

    Columns are highest-weight tree vectors over every sector assignment,
    orthonormalized under the deformed product; the column count must match
    the fusion-path count (and, for the vacuum sector, the two dimension
    routes of the scalar layer).
    """
    car = rep_or_carrier.carrier if isinstance(rep_or_carrier, MonodromyRep) \
        else rep_or_carrier
    cat = car.catalog
    cols, labels = [], []
    for s in car.sectors:
        factors = car.factors(s)
        off = car.offset(s)
        for tree, u, ut in cat.tree_maps(factors):
            if tree.result != sector:
                continue
            vec = np.zeros(car.dim, dtype=complex)
            vec[off:off + ut.shape[0]] = ut[:, 0]
            cols.append(vec)
            tag = f"sectors={s}; {tree.label()}" if s else tree.label()
            labels.append(tag)
    h = car.block_diag(lambda s: cat.deformed_gram(car.factors(s)))
    if not cols:
        return BlockBasis(car, sector, np.zeros((car.dim, 0), complex),
                          tuple(), h)
    b = np.array(cols).T
    gram = b.conj().T @ h @ b
    evals, vecs = np.linalg.eigh(gram)
    if evals.min() < tol:
        raise AssertionError(
            "tree vectors are deformed-degenerate; rank mismatch with the "
            f"fusion-path count ({len(cols)})")
    ginv_half = (vecs * (1.0 / np.sqrt(evals))) @ vecs.conj().T
    return BlockBasis(car, sector, b @ ginv_half, tuple(labels), h)


def moduli_restrict(rep: MonodromyRep, op: np.ndarray, basis: BlockBasis,
                    tol: float = DEFAULT_TOL) -> np.ndarray:
    """Compression of an invariant carrier operator to the block space."""
    leak = basis.leakage(op)
    if leak > tol:
        raise AssertionError(
            f"operator leaks out of the block space (residual {leak:.3e})")
    return basis.compress(op)


def flatness_check(rep: MonodromyRep, basis: BlockBasis,
                   tol: float = DEFAULT_TOL) -> dict:
    """The total boundary monodromy acts on the vacuum block as a
    label-coherent power of the half-twist.

    The raw product of all loop generators (descending strand order) is
    compressed to the block; the compression must be kappa_L^c times the
    identity with one integer exponent c shared by every label L.
    """
    cat, car = rep.catalog, rep.carrier
    m, g = len(car.punctures), car.genus
    n = m + 2 * g
    scalars = {}
    for lab in cat.labels:
        dI = cat.dim(lab)
        mat = np.eye(dI * car.dim, dtype=complex)
        for p in range(n, 0, -1):
            mat = mat @ rep.op(("l", p), lab)
        # aux-blockwise compression to the invariant block
        comp = np.zeros((dI * basis.dim, dI * basis.dim), dtype=complex)
        t = mat.reshape(dI, car.dim, dI, car.dim)
        for a in range(dI):
            for b in range(dI):
                blk = moduli_restrict(rep, t[a, :, b, :], basis, tol=1e-7) \
                    if basis.dim else np.zeros((0, 0))
                comp[a * basis.dim:(a + 1) * basis.dim,
                     b * basis.dim:(b + 1) * basis.dim] = blk
        if basis.dim == 0:
            continue
        scal = complex(np.trace(comp) / (dI * basis.dim))
        if residual(comp, scal * np.eye(dI * basis.dim)) > 1e-7:
            raise AssertionError(
                f"boundary monodromy is not scalar on the block (label {lab})")
        scalars[lab] = scal
    expo = None
    for c in range(-(4 * g + m) - 2, 4 * g + m + 3):
        err = max(abs(scalars[lab] - cat.kappa[lab] ** c)
                  for lab in scalars)
        if err < 1e-6:
            expo = c
            break
    if expo is None and scalars:
        raise AssertionError(
            f"boundary scalars are not a coherent half-twist power: {scalars}")
    return {"scalars": scalars, "exponent": expo}
