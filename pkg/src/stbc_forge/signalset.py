"""Signal sets: the constellations feeding the real symbols of a design.

A SignalSet is an ordered list of units, each unit owning one or more
real-symbol indices:

  PairQAM     two reals (I, Q) drawn jointly from a rotated square QAM,
              x_I + i x_Q = e^{i theta} (a + i b) with a, b PAM
  RealPoints  one real drawn from an explicit ascending point list
  BlockValues several reals drawn jointly from an explicit value table
              (used e.g. for unitarily precoded symbol pairs)

QAM constellations are zero mean with unit minimum distance; PAM is the
projection of such a QAM onto one axis.  Codeword enumeration order is
the mixed-radix product over units in unit order, first unit slowest;
within a PairQAM the PAM index of a is the outer digit.  This fixed
order is what makes lowest-index tie-breaking well defined.
"""

from dataclasses import dataclass
from math import isqrt

import numpy as np


def pam_points(Q):
    """Q-ary PAM: zero mean, unit spacing, ascending."""
    if Q < 1:
        raise ValueError("PAM size must be positive")
    return tuple(k - (Q - 1) / 2.0 for k in range(Q))


def qam_side(M):
    r = isqrt(M)
    if r * r != M:
        raise ValueError("QAM size must be a perfect square")
    return r


@dataclass(frozen=True)
class PairQAM:
    indices: tuple  # (i_I, i_Q)
    M: int
    theta: float = 0.0

    def __post_init__(self):
        if len(self.indices) != 2:
            raise ValueError("PairQAM owns exactly two real indices")
        qam_side(self.M)

    @property
    def size(self):
        return self.M

    def values(self):
        """(M, 2) array of (x_I, x_Q); a is the outer enumeration digit."""
        pam = pam_points(qam_side(self.M))
        c, s = np.cos(self.theta), np.sin(self.theta)
        out = np.empty((self.M, 2))
        k = 0
        for a in pam:
            for b in pam:
                out[k, 0] = c * a - s * b
                out[k, 1] = s * a + c * b
                k += 1
        return out


@dataclass(frozen=True)
class RealPoints:
    index: int
    points: tuple

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty point list")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("points must be strictly increasing")

    @property
    def indices(self):
        return (self.index,)

    @property
    def size(self):
        return len(self.points)

    def values(self):
        return np.asarray(self.points).reshape(-1, 1)


@dataclass(frozen=True)
class BlockValues:
    indices: tuple
    table: tuple  # tuple of value tuples, each len(indices) long

    def __post_init__(self):
        if not self.table:
            raise ValueError("empty value table")
        if any(len(row) != len(self.indices) for row in self.table):
            raise ValueError("table rows must match index count")

    @property
    def size(self):
        return len(self.table)

    def values(self):
        return np.asarray(self.table, dtype=float)


@dataclass(frozen=True)
class SignalSet:
    units: tuple

    def __post_init__(self):
        idx = [i for u in self.units for i in u.indices]
        if sorted(idx) != list(range(len(idx))):
            raise ValueError("units must cover real indices 0..K-1 exactly once")

    @property
    def K(self):
        return sum(len(u.indices) for u in self.units)

    @property
    def count(self):
        n = 1
        for u in self.units:
            n *= u.size
        return n

    def symbol_table(self):
        """(count, K) array of all real-symbol vectors in enumeration order."""
        K = self.K
        vals = [u.values() for u in self.units]
        n = self.count
        out = np.empty((n, K))
        rep = n
        for u, V in zip(self.units, vals):
            rep //= u.size
            tile = n // (rep * u.size)
            block = np.repeat(V, rep, axis=0)
            block = np.tile(block, (tile, 1))
            for col, i in enumerate(u.indices):
                out[:, i] = block[:, col]
        return out


def qam_signal_set(pairs, M, thetas=None):
    """PairQAM unit per index pair, common M, optional per-pair angles."""
    units = []
    for k, p in enumerate(pairs):
        th = 0.0 if thetas is None else float(thetas[k])
        units.append(PairQAM(indices=tuple(p), M=M, theta=th))
    return SignalSet(units=tuple(units))


def pam_signal_set(K, Q):
    """Independent Q-ary PAM on every real symbol."""
    return SignalSet(units=tuple(RealPoints(i, pam_points(Q)) for i in range(K)))
