"""Pairwise orthogonality constraints that remove the translation.

For two inlier correspondences the bearing-plane normal ``v = q_i x q_j`` is
orthogonal to the rotated world-point difference ``R (p_i - p_j)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .constants import ALL_PAIRS_CAP, HALF_PI, PAIR_DEGENERATE, UNIT_TOL
from .errors import ConfigError, EmptyInputError
from .geometry import angle_between


@dataclass(frozen=True)
class Correspondence:
    p: np.ndarray
    q: np.ndarray
    id: int


@dataclass
class Correspondences:
    """``n`` world points with their unit bearings, stored as arrays."""

    points: np.ndarray
    bearings: np.ndarray
    ids: np.ndarray = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        self.bearings = np.asarray(self.bearings, dtype=float).reshape(-1, 3)
        if len(self.points) != len(self.bearings):
            raise ValueError("points and bearings differ in length")
        norms = np.linalg.norm(self.bearings, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_TOL):
            raise ValueError("bearings must be unit vectors")
        if self.ids is None:
            self.ids = np.arange(len(self.points))
        self.ids = np.asarray(self.ids, dtype=int)

    @classmethod
    def from_list(cls, corrs: list[Correspondence]) -> "Correspondences":
        return cls(
            np.array([c.p for c in corrs]).reshape(-1, 3),
            np.array([c.q for c in corrs]).reshape(-1, 3),
            np.array([c.id for c in corrs], dtype=int),
        )

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i) -> Correspondence:
        return Correspondence(self.points[i], self.bearings[i], int(self.ids[i]))


@dataclass(frozen=True)
class PairConstraint:
    u: np.ndarray
    v: np.ndarray
    e: np.ndarray
    source_ids: tuple[int, int]


@dataclass
class ConstraintSet:
    """Batch of ``m`` pair constraints.

    ``source_ids`` holds row indices into the originating
    :class:`Correspondences`, not their external ids.
    """

    u: np.ndarray
    v: np.ndarray
    source_ids: np.ndarray
    skipped: int = 0
    e: np.ndarray = field(init=False)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float).reshape(-1, 3)
        self.v = np.asarray(self.v, dtype=float).reshape(-1, 3)
        self.source_ids = np.asarray(self.source_ids, dtype=int).reshape(-1, 2)
        # e[3*b + a] = v_a * u_b, matching column-major rotation stacking
        self.e = (self.u[:, :, None] * self.v[:, None, :]).reshape(-1, 9)

    def __len__(self):
        return len(self.u)

    def __getitem__(self, k) -> PairConstraint:
        i, j = self.source_ids[k]
        return PairConstraint(self.u[k], self.v[k], self.e[k], (int(i), int(j)))

    def subset(self, idx) -> "ConstraintSet":
        idx = np.asarray(idx, dtype=int)
        return ConstraintSet(self.u[idx], self.v[idx], self.source_ids[idx], self.skipped)


@dataclass(frozen=True)
class PairingStrategy:
    mode: Literal["half", "augmented", "all"] = "half"
    degree: int = 1
    rng_seed: int = 0
    all_pairs_cap: int = ALL_PAIRS_CAP

    def __post_init__(self):
        if self.mode not in ("half", "augmented", "all"):
            raise ConfigError(f"unknown pairing mode {self.mode!r}")
        if self.degree < 1:
            raise ConfigError("degree must be >= 1")

    @classmethod
    def parse(cls, text: str, rng_seed: int = 0) -> "PairingStrategy":
        """``half``, ``all`` or ``augmented:K``."""
        if text in ("half", "all"):
            return cls(text, rng_seed=rng_seed)
        mode, _, k = text.partition(":")
        if mode != "augmented" or not k.isdigit():
            raise ConfigError(f"bad pairing mode {text!r}")
        return cls("augmented", int(k), rng_seed)


def _index_pairs(n: int, strategy: PairingStrategy) -> np.ndarray:
    rng = np.random.default_rng(strategy.rng_seed)
    if strategy.mode == "half":
        if n < 2:
            raise EmptyInputError("half pairing needs at least 2 correspondences")
        perm = rng.permutation(n)
        m = n // 2
        return perm[: 2 * m].reshape(m, 2)
    if strategy.mode == "all":
        if n > strategy.all_pairs_cap:
            raise ConfigError(f"all-pairs mode is capped at n={strategy.all_pairs_cap}")
        if n < 2:
            raise EmptyInputError("need at least 2 correspondences")
        return np.array(list(itertools.combinations(range(n), 2)), dtype=int).reshape(-1, 2)
    d = strategy.degree
    if n < d + 1:
        raise EmptyInputError(f"augmented:{d} pairing needs at least {d + 1} correspondences")
    seen = set()
    out = []
    for i in range(n):
        # d distinct partners != i
        partners = rng.choice(n - 1, size=d, replace=False)
        partners = partners + (partners >= i)
        for j in partners:
            key = (min(i, j), max(i, j))
            if key not in seen:
                seen.add(key)
                out.append(key)
    return np.array(out, dtype=int).reshape(-1, 2)


def constraints_from_index_pairs(corrs: Correspondences, pairs: np.ndarray) -> ConstraintSet:
    """Build constraints for explicit index pairs, skipping degenerate ones."""
    pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
    P, Q = corrs.points, corrs.bearings
    u = P[pairs[:, 0]] - P[pairs[:, 1]]
    v = np.cross(Q[pairs[:, 0]], Q[pairs[:, 1]])
    nu = np.linalg.norm(u, axis=1)
    nv = np.linalg.norm(v, axis=1)
    ok = (nu >= PAIR_DEGENERATE) & (nv >= PAIR_DEGENERATE) & (pairs[:, 0] != pairs[:, 1])
    return ConstraintSet(
        u[ok] / nu[ok, None],
        v[ok] / nv[ok, None],
        pairs[ok],
        skipped=int(np.count_nonzero(~ok)),
    )


def build_pairs(corrs: Correspondences, strategy: PairingStrategy = PairingStrategy()) -> ConstraintSet:
    return constraints_from_index_pairs(corrs, _index_pairs(len(corrs), strategy))


def pair_residual(c: PairConstraint, R: np.ndarray) -> float:
    """Distance of ``angle(v, R u)`` from pi/2, in ``[0, pi/2]``."""
    return abs(angle_between(c.v, np.asarray(R) @ c.u) - HALF_PI)
