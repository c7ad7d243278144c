"""Ready-to-simulate STBC bundles for the catalog designs.

Each builder fixes the signal set and decode plan that make the design's
advertised decoding complexity concrete: orthogonal designs hard-limit
every real, multigroup designs scan each group (optionally hard-limiting
the last real), and the fast-group-decodable code conditions on the
non-orthogonal part of its big group.
"""

from fractions import Fraction

from .constructions import catalog
from .design import (Design, LinearDesign, Leaf, Cond, JOINT, HARD_LAST,
                     HARD_ALL, finest_partition)
from .f4 import weight
from .signalset import SignalSet, RealPoints, pam_points, qam_side
from .simulate import STBCInstance


def _pam_instance(linear, Q, plan):
    sig = SignalSet(units=tuple(RealPoints(i, pam_points(Q))
                                for i in range(linear.K)))
    return STBCInstance(linear=linear, signals=sig, plan=plan)


def alamouti_stbc(M):
    """Four independently hard-limited reals: 4 metric evaluations total."""
    lin = catalog("alamouti").linear
    plan = Cond(conditioning=(),
                children=tuple(Leaf((i,), HARD_LAST) for i in range(4)))
    return _pam_instance(lin, qam_side(M), plan)


def qod4_stbc(Q=2, kind=JOINT):
    """Four 2-real groups scanned jointly (or with the last hard-limited)."""
    entry = catalog("qod4")
    plan = Cond(conditioning=(),
                children=tuple(Leaf(g, kind) for g in entry.design.partition))
    return _pam_instance(entry.linear, Q, plan)


def group_stbc(entry, Q=2, kind=JOINT):
    """Generic per-group plan for any validly partitioned catalog design."""
    d = entry.design
    part = d.partition or finest_partition(d).groups
    plan = Cond(conditioning=(), children=tuple(Leaf(g, kind) for g in part))
    return _pam_instance(entry.linear, Q, plan)


def fgd_ren_stbc(Q=2, rate=Fraction(17, 8)):
    """Fast-group-decodable code; rate 2 drops one symbol of S2 \\ O.

    S1 is the zero vector; inside S2 the five mutually HR-orthogonal
    symbols O are decoded one by one for each hypothesis of the rest.
    """
    entry = catalog("fgd_ren")
    rate = Fraction(rate)
    vectors = list(entry.design.vectors)
    ortho = set(entry.notes["ortho_indices"])
    if rate == 2:
        drop = max(i for i in range(1, len(vectors)) if i not in ortho)
        keep = [i for i in range(len(vectors)) if i != drop]
        vectors = [vectors[i] for i in keep]
        ortho = {keep.index(i) for i in ortho}
    elif rate != Fraction(17, 8):
        raise ValueError("supported rates: 17/8 and 2")
    K = len(vectors)
    d = Design(2, tuple(vectors), ((0,), tuple(range(1, K))))
    from .design import to_linear_design
    lin = to_linear_design(d)
    rest = tuple(i for i in range(1, K) if i not in ortho)
    plan = Cond(conditioning=(), children=(
        Leaf((0,), JOINT),
        Cond(conditioning=rest,
             children=tuple(Leaf((i,), JOINT) for i in sorted(ortho)))))
    return _pam_instance(lin, Q, plan)
