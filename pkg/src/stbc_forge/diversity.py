"""Generator matrices, cubic shaping, and full-diversity constellations.

The generator matrix stacks the real and imaginary parts of each
vectorized weight matrix as a column; a design has cubic shaping when
(GQ)^T (GQ) is a scalar matrix for the orthogonal symbol rotation Q.
For weight matrices realizing F2 + F4^m vectors this Gram is always
2^m I_K, so shaping holds for any rotated integer-lattice constellation.

Full diversity of a finite code means every pairwise codeword difference
has nonzero determinant.  Rotating each QAM pair by a suitable angle
always achieves it when the pair matrices combine to a full-rank matrix;
the angle is found here by maximizing the minimum absolute difference
determinant over a uniform grid on (0, 2pi], refining the grid when no
point clears the certification threshold.  Arbitrary per-real point sets
achieving full diversity are grown greedily, accepting each sampled
point only if the enlarged code still passes the exhaustive check.
"""

from dataclasses import dataclass

import numpy as np

DET_TOL = 1e-8
PAIR_CAP = 10 ** 5


@dataclass(frozen=True)
class GeneratorMatrix:
    G: object  # (2*N*T, K) real
    Q: object  # (K, K) orthogonal

    @property
    def rotated(self):
        return self.G @ self.Q

    def gram(self):
        GQ = self.rotated
        return GQ.T @ GQ


def generator_matrix(ld, Q=None):
    """Columns are [Re vec(A_k); Im vec(A_k)]; Q defaults to identity."""
    cols = []
    for e in ld.entries:
        v = np.asarray(e.matrix).reshape(-1, order="F")
        cols.append(np.concatenate([v.real, v.imag]))
    G = np.stack(cols, axis=1)
    K = G.shape[1]
    Q = np.eye(K) if Q is None else np.asarray(Q, dtype=float)
    if Q.shape != (K, K):
        raise ValueError("Q must be %dx%d" % (K, K))
    if np.linalg.norm(Q.T @ Q - np.eye(K)) > 1e-9:
        raise ValueError("Q is not orthogonal")
    return GeneratorMatrix(G=G, Q=Q)


def cubic_shaping_check(gm, tol=1e-9):
    """True when the rotated Gram is a scalar matrix."""
    M = gm.gram()
    a = float(np.mean(np.diag(M)))
    return bool(np.linalg.norm(M - a * np.eye(M.shape[0])) < tol)


def _det_batch(A):
    """Determinants of a (..., n, n) stack; explicit for n <= 2."""
    n = A.shape[-1]
    if n == 1:
        return A[..., 0, 0]
    if n == 2:
        return A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    return np.linalg.det(A)


def _unique_matrices(stack, decimals=9):
    key = np.round(stack.reshape(stack.shape[0], -1), decimals)
    view = np.ascontiguousarray(
        np.concatenate([key.real, key.imag], axis=1))
    _uni, idx = np.unique(view, axis=0, return_index=True)
    return stack[np.sort(idx)]


def _qam_diffs(M):
    """Nonzero differences of the unrotated unit-distance M-QAM."""
    from .signalset import pam_points, qam_side
    pam = pam_points(qam_side(M))
    d = sorted({round(a - b, 9) for a in pam for b in pam})
    out = [complex(x, y) for x in d for y in d if (x, y) != (0.0, 0.0)]
    return np.asarray(out)


def rotation_search(C_prior, A1, A2, M, grid_size=720):
    """Angle making C_prior extended by an e^{i theta} QAM pair full diversity.

    Maximizes the minimum |det| of all nonzero codeword differences over
    a uniform grid on (0, 2pi]; on failure the grid is refined 4x up to
    three times before giving up.
    """
    A1 = np.asarray(A1, complex)
    A2 = np.asarray(A2, complex)
    sv = np.linalg.svd(A1 + 1j * A2, compute_uv=False)
    if sv[-1] <= DET_TOL:
        raise ValueError("A1 + i*A2 is rank deficient; no angle can work")
    C = np.asarray(list(C_prior), complex)
    diffs = _unique_matrices((C[:, None] - C[None, :]).reshape(
        -1, *C.shape[1:]))
    nz = diffs[np.abs(diffs).reshape(diffs.shape[0], -1).max(axis=1) > 1e-12]
    base_min = np.inf
    if nz.shape[0]:
        base_min = float(np.abs(_det_batch(nz)).min())
    w = _qam_diffs(M)
    # half of A1 -+ i A2: x_I A1 + x_Q A2 = z*Bp + conj(z)*Bm
    Bp = (A1 - 1j * A2) / 2.0
    Bm = (A1 + 1j * A2) / 2.0
    for _ in range(4):
        thetas = 2 * np.pi * np.arange(1, grid_size + 1) / grid_size
        best_theta, best_min = None, -1.0
        for th in thetas:
            dz = np.exp(1j * th) * w
            pair_term = dz[:, None, None] * Bp + np.conj(dz)[:, None, None] * Bm
            cand = diffs[:, None] + pair_term[None, :]
            mn = float(np.abs(_det_batch(cand)).min())
            mn = min(mn, base_min)
            if mn > best_min:
                best_theta, best_min = float(th), mn
        if best_min > DET_TOL:
            return best_theta
        grid_size *= 4
    raise ValueError("no grid angle certifies full diversity "
                     "(best min |det| = %.3g)" % best_min)


def _min_abs_det_pairs(mats):
    """Exact min |det(C_i - C_j)| over i < j, chunked."""
    n = mats.shape[0]
    if n * (n - 1) // 2 > 10 ** 7:
        raise ValueError("codebook too large for exhaustive diversity check")
    best = np.inf
    chunk = max(1, 10 ** 6 // max(1, n))
    for i0 in range(0, n, chunk):
        block = mats[i0:i0 + chunk]
        d = block[:, None] - mats[None, :]
        dets = np.abs(_det_batch(d))
        # keep strictly upper-triangular pairs only
        rows = np.arange(i0, i0 + block.shape[0])[:, None]
        cols = np.arange(n)[None, :]
        dets = np.where(cols > rows, dets, np.inf)
        best = min(best, float(dets.min()))
    return best


def full_diversity_check(stbc):
    """Minimum |det| over all distinct codeword differences."""
    n = stbc.count
    if n > PAIR_CAP:
        raise ValueError("codebook too large for exhaustive diversity check")
    V = stbc.symbol_table
    A = stbc.matrices
    mats = np.tensordot(V, A, axes=(1, 0))
    return _min_abs_det_pairs(mats)


def _min_det_from_points(matrices, point_lists):
    from itertools import product
    combos = np.array(list(product(*point_lists)))
    mats = np.tensordot(combos, matrices, axes=(1, 0))
    return _min_abs_det_pairs(mats)


def grow_constellation(ld, sizes, seed=0, retries=200):
    """Greedy per-real point growth keeping the code full diversity.

    Requires every weight matrix to be full rank; each accepted point is
    certified by an exhaustive difference-determinant check, so the
    returned point lists always produce a full-diversity code.
    """
    A = ld.matrices()
    for k, a in enumerate(A):
        sv = np.linalg.svd(a, compute_uv=False)
        if sv[-1] <= DET_TOL:
            raise ValueError("weight matrix %d is singular" % k)
    K = ld.K
    if len(sizes) != K:
        raise ValueError("need one size per real symbol")
    total = 1
    for q in sizes:
        total *= q
    if total > PAIR_CAP:
        raise ValueError("requested codebook exceeds the exhaustive cap")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    points = [[] for _ in range(K)]
    for k in range(K):
        points[k].append(float(rng.uniform(-10, 10)))
    for k in range(K):
        budget = retries
        while len(points[k]) < sizes[k]:
            cand = float(rng.uniform(-10, 10))
            if any(abs(cand - p) < 1e-9 for p in points[k]):
                continue
            trial = [list(p) for p in points]
            trial[k].append(cand)
            if _min_det_from_points(A, trial) > DET_TOL:
                points[k].append(cand)
            else:
                budget -= 1
                if budget == 0:
                    raise RuntimeError(
                        "growth retry budget exhausted at symbol %d" % k)
    return tuple(tuple(sorted(p)) for p in points)


def grow_with_pam_prefix(ld, L, pam_sets, sizes=None, seed=0, retries=200):
    """Keep PAM sets on the first L orthogonal symbols, grow the rest.

    The first L weight matrices must satisfy the Hurwitz-Radon equations
    A_i^H A_j + A_j^H A_i = 2*1{i=j}*I.  sizes gives the target point
    counts for symbols L+1..K (default 2 each).
    """
    A = ld.matrices()
    N = A.shape[1]
    for i in range(L):
        for j in range(i, L):
            want = 2.0 * np.eye(N) if i == j else np.zeros((N, N))
            got = A[i].conj().T @ A[j] + A[j].conj().T @ A[i]
            if np.linalg.norm(got - want) > 1e-9:
                raise ValueError(
                    "matrices %d,%d violate the Hurwitz-Radon equations"
                    % (i, j))
    if len(pam_sets) != L:
        raise ValueError("need %d PAM sets" % L)
    K = ld.K
    if sizes is None:
        sizes = (2,) * (K - L)
    if len(sizes) != K - L:
        raise ValueError("need one target size per grown symbol")
    for k, a in enumerate(A[L:], start=L):
        sv = np.linalg.svd(a, compute_uv=False)
        if sv[-1] <= DET_TOL:
            raise ValueError("weight matrix %d is singular" % k)
    points = [sorted(map(float, p)) for p in pam_sets] + \
        [[] for _ in range(K - L)]
    rng = np.random.default_rng(np.random.SeedSequence([seed, L]))
    if L < K:
        for k in range(L, K):
            points[k].append(float(rng.uniform(-10, 10)))
    mn = _min_det_from_points(A, points)
    if mn <= DET_TOL:
        raise RuntimeError("initial configuration failed certification")
    for k in range(L, K):
        budget = retries
        while len(points[k]) < sizes[k - L]:
            cand = float(rng.uniform(-10, 10))
            if any(abs(cand - p) < 1e-9 for p in points[k]):
                continue
            trial = [list(p) for p in points]
            trial[k].append(cand)
            if _min_det_from_points(A, trial) > DET_TOL:
                points[k].append(cand)
            else:
                budget -= 1
                if budget == 0:
                    raise RuntimeError(
                        "growth retry budget exhausted at symbol %d" % k)
    return tuple(tuple(sorted(p)) for p in points)
