"""Translation recovery once the rotation is known.

Pairs that violate the pairwise test are dropped, each surviving pair yields
one translation by a small least-squares solve, and every coordinate of the
translation is chosen by an independent 1D consensus vote.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

from .constants import DEFAULT_DELTA, PAIR_DEGENERATE, VOTE_MIN_HALF_WIDTH
from .errors import AllPairsRemovedError, ConfigError, EmptyInputError, NoCandidatesError
from .pairing import Correspondence, Correspondences

# default translation threshold as a fraction of the surviving scene extent
EPSILON_SCALE = 0.05


@dataclass(frozen=True)
class TranslationCandidate:
    t: np.ndarray
    depths: tuple[float, float]
    source_ids: tuple[int, int]


@dataclass(frozen=True)
class TranslationConfig:
    delta: float = DEFAULT_DELTA
    epsilon: float | None = None
    max_iterations: int = 100_000

    def __post_init__(self):
        if self.epsilon is not None and self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")


@dataclass
class TranslationReport:
    t: np.ndarray
    per_axis_consensus: tuple[int, int, int]
    candidate_count: int
    filtered_pair_count: int
    epsilon: float
    candidates: list[TranslationCandidate] = field(default_factory=list, repr=False)
    surviving_pairs: np.ndarray = field(default=None, repr=False)


def pairwise_residuals(corrs: Correspondences, pairs: np.ndarray, R: np.ndarray) -> np.ndarray:
    """``|angle(q_i x q_j, R (p_i - p_j)) - pi/2|`` for index pairs; NaN if degenerate."""
    pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
    P, Q = corrs.points, corrs.bearings
    u = (P[pairs[:, 0]] - P[pairs[:, 1]]) @ np.asarray(R).T
    v = np.cross(Q[pairs[:, 0]], Q[pairs[:, 1]])
    nu = np.linalg.norm(u, axis=1)
    nv = np.linalg.norm(v, axis=1)
    ok = (nu >= PAIR_DEGENERATE) & (nv >= PAIR_DEGENERATE)
    out = np.full(len(pairs), np.nan)
    dot = np.abs(np.einsum("ij,ij->i", u[ok], v[ok]))
    cross = np.linalg.norm(np.cross(u[ok], v[ok]), axis=1)
    out[ok] = np.arctan2(dot, cross)
    return out


def filter_pairs(corrs: Correspondences, pairs: np.ndarray, R: np.ndarray, delta: float) -> np.ndarray:
    """Index pairs that pass the pairwise test at ``R``."""
    pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
    res = pairwise_residuals(corrs, pairs, R)
    keep = np.nan_to_num(res, nan=np.inf) < delta
    if not np.any(keep):
        raise AllPairsRemovedError(f"no pair passes the pairwise test at delta={delta}")
    return pairs[keep]


def _solve_pairs(Pi, Qi, Pj, Qj, R):
    # unknowns (t, lam_i, lam_j):  t - lam_i q_i = -R p_i,  t - lam_j q_j = -R p_j
    k = len(Pi)
    A = np.zeros((k, 6, 5))
    A[:, :3, :3] = np.eye(3)
    A[:, 3:, :3] = np.eye(3)
    A[:, :3, 3] = -Qi
    A[:, 3:, 4] = -Qj
    b = np.concatenate([-Pi @ R.T, -Pj @ R.T], axis=1)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    rank_ok = s[:, -1] > PAIR_DEGENERATE * s[:, 0]
    s_inv = np.where(rank_ok[:, None], 1.0 / np.where(s > 0, s, 1.0), 0.0)
    coef = np.einsum("kji,kj->ki", U, b) * s_inv
    x = np.einsum("kji,kj->ki", Vt, coef)
    return x, rank_ok


def pair_translation(ci: Correspondence, cj: Correspondence, R: np.ndarray) -> TranslationCandidate | None:
    """Joint least-squares translation and depths for one pair.

    Returns ``None`` when the bearings are parallel (rank deficient) or either
    depth is not positive.
    """
    x, ok = _solve_pairs(ci.p[None], ci.q[None], cj.p[None], cj.q[None], np.asarray(R, dtype=float))
    if not ok[0] or x[0, 3] <= 0 or x[0, 4] <= 0:
        return None
    return TranslationCandidate(x[0, :3], (float(x[0, 3]), float(x[0, 4])), (ci.id, cj.id))


def translation_candidates(corrs: Correspondences, pairs: np.ndarray, R: np.ndarray) -> list[TranslationCandidate]:
    pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
    if len(pairs) == 0:
        return []
    P, Q = corrs.points, corrs.bearings
    i, j = pairs[:, 0], pairs[:, 1]
    x, ok = _solve_pairs(P[i], Q[i], P[j], Q[j], np.asarray(R, dtype=float))
    ok &= (x[:, 3] > 0) & (x[:, 4] > 0)
    return [
        TranslationCandidate(x[k, :3], (float(x[k, 3]), float(x[k, 4])), (int(i[k]), int(j[k])))
        for k in np.flatnonzero(ok)
    ]


def _count_within(sorted_vals: np.ndarray, centers: np.ndarray, radius: float) -> np.ndarray:
    hi = np.searchsorted(sorted_vals, centers + radius, side="right")
    lo = np.searchsorted(sorted_vals, centers - radius, side="left")
    return hi - lo


def vote_axis(values, epsilon: float, max_iterations: int = 100_000) -> tuple[float, int]:
    """Globally optimal 1D consensus ``max_t #{s : |t - t_s| <= epsilon}``.

    Interval bisection over ``[min, max]``, best-first on the upper bound. The
    returned centre is the midpoint of the span of the winning consensus set,
    which is an equally optimal point and sits in the middle of the cluster.
    """
    vals = np.sort(np.asarray(values, dtype=float).ravel())
    if len(vals) == 0:
        raise EmptyInputError("vote_axis needs at least one value")
    if epsilon <= 0:
        raise ConfigError("epsilon must be positive")
    lo_end, hi_end = float(vals[0]), float(vals[-1])
    width = hi_end - lo_end
    if width == 0.0:
        return lo_end, len(vals)

    min_half = VOTE_MIN_HALF_WIDTH * width
    center, half = 0.5 * (lo_end + hi_end), 0.5 * width

    def bounds(cs, mu):
        cs = np.asarray(cs)
        return _count_within(vals, cs, epsilon + mu), _count_within(vals, cs, epsilon)

    (up,), (low,) = bounds([center], half)
    best_t, best = center, int(low)
    heap = [(-int(up), -int(low), half, center)]
    it = 0
    while heap and it < max_iterations:
        neg_up, _, h, c = heapq.heappop(heap)
        if -neg_up <= best:
            break
        mu = 0.5 * h
        if mu < min_half:
            continue
        it += 1
        kids = np.array([c - mu, c + mu])
        ups, lows = bounds(kids, mu)
        for k in range(2):
            if lows[k] > best:
                best, best_t = int(lows[k]), float(kids[k])
        for k in range(2):
            if ups[k] > best:
                heapq.heappush(heap, (-int(ups[k]), -int(lows[k]), mu, float(kids[k])))

    # recentre on the consensus set
    a = np.searchsorted(vals, best_t - epsilon, side="left")
    b = np.searchsorted(vals, best_t + epsilon, side="right")
    mid = 0.5 * (vals[a] + vals[b - 1])
    if _count_within(vals, np.array([mid]), epsilon)[0] >= best:
        best_t = float(mid)
    return best_t, best


def default_epsilon(corrs: Correspondences, pairs: np.ndarray) -> float:
    idx = np.unique(np.asarray(pairs).ravel())
    pts = corrs.points[idx]
    scale = float(pdist(pts).max()) if len(pts) > 1 else 0.0
    return EPSILON_SCALE * scale if scale > 0 else 1.0


def solve_translation(corrs: Correspondences, pairs: np.ndarray, R: np.ndarray,
                      config: TranslationConfig = TranslationConfig()) -> TranslationReport:
    survivors = filter_pairs(corrs, pairs, R, config.delta)
    cands = translation_candidates(corrs, survivors, R)
    if not cands:
        raise NoCandidatesError("every translation candidate was rejected")
    eps = config.epsilon if config.epsilon is not None else default_epsilon(corrs, survivors)
    T = np.array([c.t for c in cands])
    t = np.empty(3)
    counts = []
    for axis in range(3):
        t[axis], n = vote_axis(T[:, axis], eps, config.max_iterations)
        counts.append(n)
    return TranslationReport(t, tuple(counts), len(cands), len(survivors), eps, cands, survivors)
