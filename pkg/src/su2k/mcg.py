"""Surface words, curve monodromies, Dehn-twist operators and projective
mapping-class-group relations on the block spaces.

A closed curve is described by a reduced word in the fundamental-group
generators.  Its quantum monodromy is the product of the generator
monodromies times an integer power of the label's half-twist.  The naive
power is the sum of the position weights of adjacent letters; because that
bookkeeping is convention-sensitive, the shipped power is re-derived by
requiring the monodromy family to generate a fusion algebra (closure of the
traced characters under the fusion rules), searching integer offsets in a
window around the naive value.  The resolved offset is reported next to the
naive one.

Twist operators come in two independent constructions that the test suite
plays against each other: the inverse-twist element of the curve's fusion
algebra, and closed-form braiding-chain operators for the generating
twists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .catalog import Catalog
from .linalg import DEFAULT_TOL, lift_sites, residual, safe_inv
from .reps import BlockBasis, MonodromyRep, moduli_restrict


# ---------------------------------------------------------------------------
# words and weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Letter:
    kind: str      # "l" | "a" | "b"
    index: int
    power: int     # +1 | -1

    def inverse(self) -> "Letter":
        return Letter(self.kind, self.index, -self.power)

    def __str__(self):
        s = f"{self.kind}{self.index}"
        return s if self.power == 1 else s + "^-1"


@dataclass(frozen=True)
class SurfaceWord:
    """Reduced word in the fundamental-group generators of a surface."""

    genus: int
    punctures: int
    letters: tuple

    @classmethod
    def parse(cls, text: str, genus: int, punctures: int) -> "SurfaceWord":
        letters = []
        for tok in text.split():
            power = 1
            if "^" in tok:
                tok, p = tok.split("^")
                power = int(p)
                if power not in (1, -1):
                    raise ValueError("only unit exponents are supported")
            kind, idx = tok[0], int(tok[1:])
            if kind not in "lab":
                raise ValueError(f"unknown generator {tok!r}")
            letters.append(Letter(kind, idx, power))
        return cls(genus, punctures, ()).extend(letters)

    def extend(self, letters) -> "SurfaceWord":
        out = list(self.letters)
        for let in letters:
            self._validate(let)
            if out and out[-1] == let.inverse():
                out.pop()
            else:
                out.append(let)
        return SurfaceWord(self.genus, self.punctures, tuple(out))

    def _validate(self, let: Letter):
        top = self.punctures + 2 * self.genus
        if let.kind == "l" and not 1 <= let.index <= top:
            raise ValueError(f"loop index {let.index} out of range")
        if let.kind in "ab" and not 1 <= let.index <= self.genus:
            raise ValueError(f"handle index {let.index} out of range")

    def inverse(self) -> "SurfaceWord":
        return SurfaceWord(self.genus, self.punctures,
                           tuple(l.inverse() for l in reversed(self.letters)))

    def __mul__(self, other: "SurfaceWord") -> "SurfaceWord":
        return self.extend(other.letters)

    def __str__(self):
        return " ".join(str(l) for l in self.letters) or "(empty)"

    def basic_letters(self):
        """Expansion with the handle-loop abbreviations spelled out."""
        m = self.punctures
        out = []
        for let in self.letters:
            if let.kind == "l" and let.index > m:
                i = (let.index - m + 1) // 2
                if (let.index - m) % 2 == 0:
                    seq = [Letter("b", i, 1)]
                else:
                    seq = [Letter("a", i, -1), Letter("b", i, -1),
                           Letter("a", i, 1)]
                out.extend(seq if let.power == 1 else
                           [x.inverse() for x in reversed(seq)])
            else:
                out.append(let)
        return out


def _t_value(let: Letter, m: int) -> int:
    base = {"l": lambda i: 2 * i,
            "a": lambda i: 2 * m + 4 * i,
            "b": lambda i: 2 * m + 4 * i - 1}[let.kind](let.index)
    if let.power == 1:
        return base
    return _s_value(Letter(let.kind, let.index, 1), m)


def _s_value(let: Letter, m: int) -> int:
    if let.power == -1:
        return _t_value(Letter(let.kind, let.index, 1), m)
    off = {"l": 1, "a": 2, "b": 2}[let.kind]
    return _t_value(Letter(let.kind, let.index, 1), m) - off


def weight(c1: Letter, c2: Letter, punctures: int) -> int:
    """Position weight of an adjacent letter pair: +1 when the tail of the
    first letter sits before the head of the second, -1 otherwise."""
    if c1 == c2.inverse():
        raise ValueError("weight is undefined on cancelling letters")
    t, s = _t_value(c1, punctures), _s_value(c2, punctures)
    if t == s:
        raise ValueError(f"degenerate letter pair {c1}, {c2}")
    return 1 if t < s else -1


def naive_power(word: SurfaceWord) -> int:
    letters = word.basic_letters()
    return sum(weight(letters[i], letters[i + 1], word.punctures)
               for i in range(len(letters) - 1))


# ---------------------------------------------------------------------------
# curve monodromies with calibrated half-twist powers
# ---------------------------------------------------------------------------


class CurveMonodromy:
    """Calibrated monodromy family of one curve in one representation."""

    def __init__(self, rep: MonodromyRep, word: SurfaceWord,
                 tol: float = 1e-7):
        if (word.genus, word.punctures) != (rep.carrier.genus,
                                            len(rep.carrier.punctures)):
            raise ValueError("word signature does not match the carrier")
        self.rep = rep
        self.word = word
        self.tol = tol
        self._raw = {}
        self.naive = naive_power(word) if word.letters else 0
        self.offset = self._calibrate()

    def raw_product(self, label: int) -> np.ndarray:
        if label not in self._raw:
            rep = self.rep
            dim = rep.catalog.dim(label) * rep.carrier.dim
            mat = np.eye(dim, dtype=complex)
            for let in self.word.letters:
                gen = (let.kind, let.index)
                mat = mat @ (rep.op(gen, label) if let.power == 1
                             else rep.op_inv(gen, label))
            self._raw[label] = mat
        return self._raw[label]

    def _char_op(self, label: int, power: int) -> np.ndarray:
        """kappa-corrected trace character on the carrier."""
        cat = self.rep.catalog
        kap = cat.kappa[label] ** (power + 1)
        return kap * self.rep.q_trace_aux(self.raw_product(label), label)

    def _calibrate(self) -> int:
        """Unique half-twist offset making the characters close under
        fusion on the good part of the carrier."""
        rep, cat = self.rep, self.rep.catalog
        if not self.word.letters:
            return 0
        p = rep.good_projector()
        labels = list(cat.labels)
        n_rel = cat.qp.level if cat.qp.is_root else None
        from .fusion import build_fusion
        fd = build_fusion(cat.qp.level)
        m, g = len(rep.carrier.punctures), rep.carrier.genus
        window = 4 * g + m + 2
        hits = []
        for off in range(self.naive - window, self.naive + window + 1):
            chars = {i: self._char_op(i, off) for i in labels}
            worst = 0.0
            for i in labels:
                for j in labels:
                    lhs = chars[i] @ chars[j]
                    rhs = sum(int(fd.N[i, j, c]) * chars[c] for c in labels)
                    worst = max(worst, residual(p @ lhs @ p, p @ rhs @ p))
            if worst < self.tol:
                hits.append(off)
        if not hits:
            raise AssertionError(
                f"half-twist calibration failed for [{self.word}]: no "
                f"offset in the search window closes the fusion algebra "
                f"(naive {self.naive})")
        # at level 1 the half-twist powers have a mod-4 degeneracy; resolve
        # deterministically to the offset closest to the naive bookkeeping
        return min(hits, key=lambda o: (abs(o - self.naive), o))

    def monodromy(self, label: int) -> np.ndarray:
        return self.rep.catalog.kappa[label] ** self.offset \
            * self.raw_product(label)

    def char(self, label: int) -> np.ndarray:
        """c of the curve: kappa times the aux q-trace of the monodromy."""
        return self._char_op(label, self.offset)


def monodromy_of_word(rep: MonodromyRep, word: SurfaceWord, label: int,
                      tol: float = 1e-7) -> np.ndarray:
    """Calibrated monodromy of a reduced word (see ``CurveMonodromy``)."""
    return CurveMonodromy(rep, word, tol).monodromy(label)


def fusion_algebra_of_curve(rep: MonodromyRep, basis: BlockBasis,
                            word: SurfaceWord,
                            tol: float = DEFAULT_TOL) -> dict:
    """Block matrices of the curve characters; they must commute pairwise
    and close under the fusion rules on the block space."""
    cm = CurveMonodromy(rep, word)
    cat = rep.catalog
    from .fusion import build_fusion
    fd = build_fusion(cat.qp.level)
    blocks = {i: moduli_restrict(rep, cm.char(i), basis, tol=1e-7)
              for i in cat.labels}
    for i in cat.labels:
        for j in cat.labels:
            comm = residual(blocks[i] @ blocks[j], blocks[j] @ blocks[i])
            if comm > 1e-8:
                raise AssertionError(
                    f"curve characters {i},{j} do not commute ({comm:.2e})")
            rhs = sum(int(fd.N[i, j, c]) * blocks[c] for c in cat.labels)
            clo = residual(blocks[i] @ blocks[j], rhs)
            if clo > 1e-7:
                raise AssertionError(
                    f"curve characters break fusion closure at ({i},{j})")
    return blocks


# ---------------------------------------------------------------------------
# Dehn-twist operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistGenerator:
    """Named generating Dehn twist with its curve word."""

    name: str        # "eta" | "alpha" | "beta" | "delta" | "eps"
    indices: tuple

    def word(self, genus: int, punctures: int) -> SurfaceWord:
        m = punctures
        w = SurfaceWord(genus, m, ())
        if self.name == "eta":
            nu, p = self.indices
            return w.extend([Letter("l", p, 1), Letter("l", nu, 1)])
        if self.name == "alpha":
            (i,) = self.indices
            if i == 1:
                return w.extend([Letter("l", m + 1, 1)])
            return w.extend([Letter("l", m + 2 * i - 1, 1),
                             Letter("l", m + 2 * i - 2, 1)])
        if self.name == "beta":
            (i,) = self.indices
            return w.extend([Letter("a", i, 1)])
        if self.name == "delta":
            (i,) = self.indices
            return w.extend([Letter("l", m + 2 * i - 1, 1)])
        if self.name == "eps":
            (i,) = self.indices
            return w.extend([Letter("l", m + 2 * j - 1, 1)
                             for j in range(i, 0, -1)])
        raise ValueError(f"unknown twist {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> "TwistGenerator":
        name, _, idx = text.partition(":")
        indices = tuple(int(x) for x in idx.split(",") if x)
        return cls(name.strip(), indices)

    def __str__(self):
        return f"{self.name}:{','.join(map(str, self.indices))}"


def _as_word(curve, genus: int, punctures: int) -> SurfaceWord:
    if isinstance(curve, SurfaceWord):
        return curve
    if isinstance(curve, TwistGenerator):
        return curve.word(genus, punctures)
    if isinstance(curve, str):
        if ":" in curve:
            return TwistGenerator.parse(curve).word(genus, punctures)
        return SurfaceWord.parse(curve, genus, punctures)
    raise TypeError(f"cannot interpret curve {curve!r}")


def dehn_operator(rep: MonodromyRep, basis: BlockBasis, curve,
                  tol: float = DEFAULT_TOL) -> np.ndarray:
    """Block matrix of the inverse-twist element over the curve.

    h(x) = theta^-1 sum_I N d_I v_I c^I(x), compressed to the block space;
    the result must be unitary there.
    """
    cat = rep.catalog
    word = _as_word(curve, rep.carrier.genus, len(rep.carrier.punctures))
    cm = CurveMonodromy(rep, word)
    qd = np.array([cat.qd(n) for n in cat.labels])
    norm = 1.0 / np.sqrt(np.sum(qd ** 2))
    vs = np.array([cat.v(n) for n in cat.labels])
    theta = norm * np.sum(vs * qd ** 2)
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i in cat.labels:
        out += norm * qd[i] * vs[i] / theta \
            * moduli_restrict(rep, cm.char(i), basis, tol=1e-7)
    if basis.dim and residual(out @ out.conj().T, np.eye(basis.dim)) > 1e-8:
        raise AssertionError(
            f"twist operator of [{word}] is not unitary on the block")
    return out


# closed-form operators for the generating twists ---------------------------


def _strand_v(carrier, catalog, sector, strand: int) -> complex:
    """Twist phase of the label carried by one strand in one sector."""
    return catalog.v(carrier.factors(sector)[strand - 1])


def _q_chain(catalog, dims, factors, nu: int, mu: int) -> np.ndarray:
    """Braiding conjugation chain between strands nu < mu (1-based)."""
    if not nu < mu:
        raise ValueError("strand order must be increasing")
    total = int(np.prod(dims))
    left = np.eye(total, dtype=complex)
    for s in range(nu + 1, mu + 1):
        left = left @ lift_sites(
            catalog.rprime(factors[nu - 1], factors[s - 1]),
            dims, [nu - 1, s - 1])
    core = lift_sites(catalog.rmat(factors[nu - 1], factors[mu - 1]),
                      dims, [nu - 1, mu - 1])
    right = np.eye(total, dtype=complex)
    for s in range(mu - 1, nu, -1):
        right = right @ safe_inv(
            lift_sites(catalog.rprime(factors[nu - 1], factors[s - 1]),
                       dims, [nu - 1, s - 1]), "braiding")
    return left @ core @ right


def etaprep_operator(rep: MonodromyRep, basis: BlockBasis, curve,
                     tol: float = DEFAULT_TOL) -> np.ndarray:
    """Closed-form block operator of a generating twist.

    Two-strand twists act by inverse strand twists times the braiding
    conjugation chain; single-strand twists act by the inverse strand twist
    alone; the b-cycle twist acts on a handle pair by the sector-mixing
    vacuum-coupling contraction weighted with the modular data.
    """
    cat, car = rep.catalog, rep.carrier
    m = len(car.punctures)
    tw = curve if isinstance(curve, TwistGenerator) \
        else TwistGenerator.parse(curve)

    def per_sector(builder):
        out = np.zeros((car.dim, car.dim), dtype=complex)
        for s in car.sectors:
            blk = builder(s)
            off, d = car.offset(s), car.block_dim(s)
            out[off:off + d, off:off + d] = blk
        return out

    if tw.name == "eta":
        nu, p = tw.indices
        op = per_sector(lambda s: _q_chain(
            cat, car.block_dims(s), car.factors(s), nu, p)
            / (_strand_v(car, cat, s, nu) * _strand_v(car, cat, s, p)))
    elif tw.name == "alpha":
        (i,) = tw.indices
        if i == 1:
            op = per_sector(lambda s: np.eye(car.block_dim(s))
                            / _strand_v(car, cat, s, m + 1))
        else:
            op = per_sector(lambda s: _q_chain(
                cat, car.block_dims(s), car.factors(s),
                m + 2 * i - 2, m + 2 * i - 1)
                / (_strand_v(car, cat, s, m + 2 * i - 2)
                   * _strand_v(car, cat, s, m + 2 * i - 1)))
    elif tw.name == "delta":
        (i,) = tw.indices
        # inverse strand twist; the literal positive power in the source
        # formula disagrees with the twist-element route and is recorded
        # as resolved in favor of the inverse
        op = per_sector(lambda s: np.eye(car.block_dim(s))
                        / _strand_v(car, cat, s, m + 2 * i - 1))
    elif tw.name == "eps":
        (i,) = tw.indices

        def eps_block(s):
            dims = car.block_dims(s)
            factors = car.factors(s)
            blk = np.eye(int(np.prod(dims)), dtype=complex)
            for p in range(m + 1, m + 2 * i - 1):
                blk = blk @ _q_chain(cat, dims, factors, p, m + 2 * i - 1)
            for p in range(m + 1, m + 2 * i):
                blk = blk / _strand_v(car, cat, s, p)
            return blk

        op = per_sector(eps_block)
    elif tw.name == "beta":
        return _beta_block_form(rep, basis)
    else:
        raise ValueError(f"no closed form for twist {tw.name!r}")
    return moduli_restrict(rep, op, basis, tol=1e-7)


def _beta_block_form(rep: MonodromyRep, basis: BlockBasis) -> np.ndarray:
    """Block matrix of the b-cycle twist on the one-handle surface.

    In the vacuum-coupling tree basis (one vector per sector, ordered by
    label) the twist is the half-twist conjugate of the modular transform
    of the inverse strand twist:

        diag(kappa)^-1  S diag(v^-1) S  diag(kappa).

    This realizes the sector-mixing vacuum-contraction formula entirely in
    terms of the scalar modular data, independently of the sector-raising
    generators, and is the generator-level bridge to the surgery-calculus
    representation.
    """
    car, cat = rep.carrier, rep.catalog
    if car.genus != 1 or car.punctures:
        raise ValueError("the closed b-cycle form is implemented for the "
                         "bare torus")
    if basis.dim != cat.qp.level + 1:
        raise ValueError("unexpected block count on the torus")
    from .modular import build_modular
    md = build_modular(cat.qp.level)
    kap = np.array([cat.kappa[n] for n in cat.labels])
    mat = md.S @ np.diag(1.0 / md.v) @ md.S
    return np.diag(1.0 / kap) @ mat @ np.diag(kap)


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------


def projective_relation(rep: MonodromyRep, basis: BlockBasis,
                        lhs, rhs, tol: float = 1e-8) -> dict:
    """Phase between two twist products on the block space.

    Returns the unit-modulus phase with product(lhs) = phase * product(rhs)
    or raises when no phase matches.
    """
    def product(curves):
        out = np.eye(basis.dim, dtype=complex)
        for c in curves:
            out = out @ dehn_operator(rep, basis, c)
        return out

    a = product(lhs)
    b = product(rhs)
    phase = complex(np.trace(b.conj().T @ a) / basis.dim)
    res = residual(a, phase * b)
    if res > tol:
        raise AssertionError(
            f"no projective phase matches the relation (residual {res:.2e})")
    if abs(abs(phase) - 1.0) > tol:
        raise AssertionError(f"projective phase off the unit circle: {phase}")
    return {"phase": phase, "residual": res}


def twist_word_action(word: SurfaceWord, twist: TwistGenerator) -> SurfaceWord:
    """Torus twist action on fundamental-group words (b-cycle twist along
    the a-curve: b -> b a, a -> a)."""
    if twist.name != "beta" or twist.indices != (1,):
        raise ValueError("word substitution is implemented for the torus "
                         "a-curve twist only")
    out = []
    for let in word.letters:
        if let.kind == "b":
            if let.power == 1:
                out.extend([Letter("b", let.index, 1),
                            Letter("a", let.index, 1)])
            else:
                out.extend([Letter("a", let.index, -1),
                            Letter("b", let.index, -1)])
        else:
            out.append(let)
    return SurfaceWord(word.genus, word.punctures, ()).extend(out)


def inner_implementation_check(rep: MonodromyRep, basis: BlockBasis,
                               sample_words, tol: float = 1e-8) -> dict:
    """The torus a-curve twist conjugates curve characters to the
    characters of the substituted curves."""
    car = rep.carrier
    if car.genus != 1 or len(car.punctures) > 1:
        raise ValueError("word-substitution checks support the torus only")
    twist = TwistGenerator("beta", (1,))
    h = dehn_operator(rep, basis, twist)
    out = {}
    for text in sample_words:
        word = _as_word(text, car.genus, len(car.punctures))
        sub = twist_word_action(word, twist)
        blocks = fusion_algebra_of_curve(rep, basis, word)
        blocks_sub = fusion_algebra_of_curve(rep, basis, sub)
        worst = 0.0
        for i in rep.catalog.labels:
            worst = max(worst, residual(h @ blocks[i], blocks_sub[i] @ h))
        out[str(word)] = worst
        if worst > tol:
            raise AssertionError(
                f"twist does not implement the substitution on [{word}] "
                f"(residual {worst:.2e})")
    return out
