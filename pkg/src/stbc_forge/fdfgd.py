"""Rate-5/4 fast-group-decodable family and its punctured/extended codes.

For 2^m antennas, m >= 2, start from S_xi1 = {[0|z1..zm] : zi in {0, xi1}}
with xi1 = w.  Split by weight parity into S_A (even) and S_B, then

    S_C = nu + S_A,   S_D = nu + S_B,   S_E = dlt + S_A,

where nu = [m even | xi2,...,xi2] with xi2 in {1, w2}, and dlt flips the
F2 component.  S1 = S_A and S2 = S_B u S_C u S_D u S_E give a rate-5/4
design: every vector outside S_A has odd weight, so {S_A,...,S_D} is
4-group decodable and {S1, S2} is 2-group decodable.

Rates below 5/4 puncture S_E and rates above add a complement subset O.
Both keep the vector set closed under addition of t = [0|0..0,w,w], so
symbols pair up as {x_y, x_{y+t}} and each pair carries one rotated QAM
symbol.  phi_inv(y) + i*phi_inv(y+t) is always full rank, which is the
sufficient condition for rotation angles achieving full diversity.

Pair selection for puncturing (lexicographically largest first) and for
O (lexicographically smallest first) is a deterministic choice; any
t-closed choice works.

For 2 antennas (m = 1) the family is the Silver code punctured pairwise,
with decoding complexity M^{2(R-1)}.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .f4 import O as F0, I as F1, W, W2, F4Vec, weight, enumerate_all, delta
from .design import (Design, Leaf, Cond, ComplexityReport, plan_complexity,
                     JOINT, HARD_LAST, HARD_ALL)
from .pauli import phi_inv

SUBSET_ORDER = ("S_A", "S_B", "S_C", "S_D", "S_E", "O")


def t_vector(m):
    if m < 2:
        raise ValueError("t is defined for m >= 2")
    return F4Vec(0, (F0,) * (m - 2) + (W, W))


@dataclass(frozen=True)
class FamilyDesign:
    m: int
    xi1: int
    xi2: int
    R: Fraction
    subsets: tuple  # ((name, (vectors...)), ...) in SUBSET_ORDER

    @property
    def t(self):
        return t_vector(self.m)

    def subset(self, name):
        for n, vs in self.subsets:
            if n == name:
                return vs
        raise KeyError(name)

    @property
    def vectors(self):
        return tuple(v for _n, vs in self.subsets for v in vs)

    @property
    def K(self):
        return len(self.vectors)

    def design(self):
        """Design with the 2-group partition (S1, S2') when it is one."""
        vs = self.vectors
        n1 = len(self.subset("S_A"))
        partition = None
        if not self.subset("O"):
            partition = (tuple(range(n1)), tuple(range(n1, len(vs))))
        return Design(self.m, vs, partition)


def _sorted_pairs(vectors, t):
    """Pairs {y, y+t} ordered by (and vectors within a pair by) lex order."""
    vs = set(vectors)
    if {v + t for v in vs} != vs:
        missing = next(v for v in sorted(vs) if v + t not in vs)
        raise ValueError("set not closed under +t (partner of %r missing)"
                         % (missing,))
    pairs = sorted({tuple(sorted((v, v + t))) for v in vs})
    return pairs


def _ordered(vectors, t):
    """Flatten pairs so each y_I is immediately followed by y_I + t."""
    return tuple(v for pair in _sorted_pairs(vectors, t) for v in pair)


def build_base(m, xi1=W, xi2=W2):
    if m < 2:
        raise ValueError("base family needs m >= 2 (m = 1 is the Silver code)")
    if xi1 != W:
        raise ValueError("xi1 is fixed to w")
    if xi2 not in (F1, W2):
        raise ValueError("xi2 must be 1 or w2")
    t = t_vector(m)
    s_xi1 = [v for v in enumerate_all(m)
             if v.lam == 0 and all(x in (F0, xi1) for x in v.xs)]
    s_a = [v for v in s_xi1 if weight(v) % 2 == 0]
    s_b = [v for v in s_xi1 if weight(v) % 2 == 1]
    nu = F4Vec(1 if m % 2 == 0 else 0, (xi2,) * m)
    dlt = delta(m)
    subsets = (("S_A", _ordered(s_a, t)),
               ("S_B", _ordered(s_b, t)),
               ("S_C", _ordered([nu + v for v in s_a], t)),
               ("S_D", _ordered([nu + v for v in s_b], t)),
               ("S_E", _ordered([dlt + v for v in s_a], t)),
               ("O", ()))
    return FamilyDesign(m=m, xi1=xi1, xi2=xi2, R=Fraction(5, 4),
                        subsets=subsets)


def puncture(base, R):
    """Drop lexicographically largest pairs {y, y+t} from S_E."""
    R = Fraction(R)
    if not 1 <= R < Fraction(5, 4):
        raise ValueError("puncture targets rates in [1, 5/4)")
    if base.subset("O"):
        raise ValueError("cannot puncture an extended design")
    target = 2 ** (base.m + 1) * (R - 1)
    if target.denominator != 1:
        raise ValueError("rate %s leaves a fractional S_E size" % R)
    target = int(target)
    s_e = base.subset("S_E")
    if (len(s_e) - target) % 2 != 0:
        raise ValueError("rate %s needs an odd number of removals; "
                         "puncturing works in pairs" % R)
    pairs = _sorted_pairs(s_e, base.t)
    kept = pairs[:target // 2]
    subsets = tuple((n, tuple(v for p in kept for v in p)) if n == "S_E"
                    else (n, vs) for n, vs in base.subsets)
    return FamilyDesign(m=base.m, xi1=base.xi1, xi2=base.xi2, R=R,
                        subsets=subsets)


def extend(base, R):
    """Add lexicographically smallest complement pairs as the set O."""
    R = Fraction(R)
    if R <= Fraction(5, 4):
        raise ValueError("extend targets rates above 5/4")
    size = 2 ** (base.m - 1) * (4 * R - 5)
    if size.denominator != 1 or int(size) % 2 != 0:
        raise ValueError("|O| = 2^(m-1)(4R-5) = %s is not an even integer" % size)
    size = int(size)
    used = set(base.vectors)
    comp = [v for v in enumerate_all(base.m) if v not in used]
    pairs = _sorted_pairs(comp, base.t)
    if size // 2 > len(pairs):
        raise ValueError("rate %s exceeds the ambient space" % R)
    chosen = pairs[:size // 2]
    subsets = tuple((n, tuple(v for p in chosen for v in p)) if n == "O"
                    else (n, vs) for n, vs in base.subsets)
    return FamilyDesign(m=base.m, xi1=base.xi1, xi2=base.xi2, R=R,
                        subsets=subsets)


def pair_split(d):
    """(S_I, S_Q) with S_I the lex-smaller of each {y, y+t} pair."""
    vectors = d.vectors if hasattr(d, "vectors") else tuple(d)
    m = vectors[0].m
    t = t_vector(m)
    pairs = _sorted_pairs(vectors, t)
    s_i = tuple(p[0] for p in pairs)
    return s_i, tuple(t + v for v in s_i)


def check_prop16(y):
    """phi_inv(y) + i*phi_inv(y+t) has full rank (always true, m >= 2)."""
    if y.m < 2:
        raise ValueError("defined for m >= 2")
    A = phi_inv(y) + 1j * phi_inv(y + t_vector(y.m))
    sv = np.linalg.svd(A, compute_uv=False)
    return bool(sv[-1] > 1e-8)


def predicted_complexity(m, R):
    """Dominant-plus-side-term decoding cost of the rate-R family member."""
    R = Fraction(R)
    if m < 1:
        raise ValueError("m >= 1")
    if m == 1:
        if not 1 <= R <= 2:
            raise ValueError("2-antenna family covers 1 <= R <= 2")
        return ComplexityReport(terms=((1, 2 * (R - 1)),))
    if not 1 < R <= 2 ** m:
        raise ValueError("family covers 1 < R <= N for m >= 2")
    q = Fraction(2 ** (m - 2))
    lead = (3, q * (4 * R - 3) - Fraction(1, 2))
    side = (1, q * (4 * R - 4) - Fraction(1, 2)) if R > Fraction(5, 4) \
        else (1, q - Fraction(1, 2))
    return ComplexityReport(terms=(lead, side))


def family_plan(fd):
    """Decode plan over real-symbol indices in fd.vectors order.

    Condition on O (when present), decode S1 = S_A on its own, and
    condition on S_E' to split the rest into S_B, S_C, S_D.  Every leaf
    hard-limits its last real symbol.
    """
    pos, k = {}, 0
    for name, vs in fd.subsets:
        pos[name] = tuple(range(k, k + len(vs)))
        k += len(vs)
    leaves = [Leaf(pos["S_A"], HARD_LAST)]
    inner = [Leaf(pos[n], HARD_LAST) for n in ("S_B", "S_C", "S_D")]
    if pos["S_E"]:
        leaves.append(Cond(conditioning=pos["S_E"], children=tuple(inner)))
    else:
        leaves.extend(inner)
    return Cond(conditioning=pos["O"], children=tuple(leaves))


def family_pairs(fd):
    """(i_I, i_Q) index pairs in vector order; partners are adjacent."""
    return tuple((i, i + 1) for i in range(0, fd.K, 2))


# ---------------------------------------------------------------------------
# 2 antennas: the punctured Silver code path

def silver_stbc(M, R=Fraction(2), thetas=None):
    """Silver-code STBC, optionally punctured pairwise to R in {1, 3/2, 2}.

    Symbols s1, s2 are QAM pairs; (s3, s4) are jointly precoded QAM.
    Decoding conditions on the precoded block and hard-limits the four
    remaining reals, costing exactly M^{2(R-1)} metric evaluations.
    """
    from .constructions import catalog, SILVER_U
    from .design import LinearDesign
    from .signalset import SignalSet, PairQAM, BlockValues, pam_points, qam_side
    from .simulate import STBCInstance

    R = Fraction(R)
    if R not in (Fraction(1), Fraction(3, 2), Fraction(2)):
        raise ValueError("pairwise puncturing allows R in {1, 3/2, 2}")
    entry = catalog("silver")
    keep = int(4 * R)  # real symbol count after puncturing s4 (and s3)
    linear = LinearDesign(m=1, entries=entry.linear.entries[:keep])
    th = list(thetas) if thetas is not None else [0.0, 0.0]
    units = [PairQAM((0, 1), M, th[0]), PairQAM((2, 3), M, th[1])]
    hard = Leaf((0, 1, 2, 3), HARD_ALL)
    if R == 2:
        pam = pam_points(qam_side(M))
        rows = []
        for z3r in pam:
            for z3i in pam:
                for z4r in pam:
                    for z4i in pam:
                        s3, s4 = SILVER_U @ np.array([z3r + 1j * z3i,
                                                      z4r + 1j * z4i])
                        rows.append((s3.real, s3.imag, s4.real, s4.imag))
        units.append(BlockValues((4, 5, 6, 7), tuple(rows)))
        plan = Cond(conditioning=(4, 5, 6, 7), children=(hard,))
    elif R == Fraction(3, 2):
        units.append(PairQAM((4, 5), M, 0.0))
        plan = Cond(conditioning=(4, 5), children=(hard,))
    else:
        plan = hard
    return STBCInstance(linear=linear, signals=SignalSet(units=tuple(units)),
                        plan=plan)


def assemble_stbc(fd, angles, M):
    """STBC of the family design: paired rotated QAM plus the family plan.

    angles: one theta per pair (in family_pairs order), or "auto" to run
    the rotation search pair by pair against the zero-codeword prior.
    """
    from .signalset import qam_signal_set
    from .simulate import STBCInstance

    pairs = family_pairs(fd)
    entries = []
    from .design import LDEntry, LinearDesign
    for i, v in enumerate(fd.vectors):
        entries.append(LDEntry(label="x%d" % (i + 1), matrix=phi_inv(v),
                               vector=v, sign=1))
    linear = LinearDesign(m=fd.m, entries=tuple(entries))
    if isinstance(angles, str) and angles == "auto":
        # angle per pair against the code built so far, so the final
        # code is full diversity, not just each pair in isolation
        from .diversity import rotation_search
        from .signalset import pam_points, qam_side
        pam = pam_points(qam_side(M))
        prior = [np.zeros((2 ** fd.m, 2 ** fd.m), complex)]
        thetas = []
        for iI, iQ in pairs:
            A1, A2 = entries[iI].matrix, entries[iQ].matrix
            th = rotation_search(prior, A1, A2, M, 720)
            thetas.append(th)
            z = np.exp(1j * th) * np.array([a + 1j * b
                                            for a in pam for b in pam])
            prior = [C + zz.real * A1 + zz.imag * A2
                     for C in prior for zz in z]
    else:
        thetas = list(angles)
        if len(thetas) != len(pairs):
            raise ValueError("need %d angles, got %d" % (len(pairs), len(thetas)))
    signals = qam_signal_set(pairs, M, thetas)
    return STBCInstance(linear=linear, signals=signals, plan=family_plan(fd))
