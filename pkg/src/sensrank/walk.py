"""The statistic family T_n(x) as a random walk over ranks.

T_n(k/(n+1)) = sum_{i=n+1-k}^n c_i S_i is the partial sum of score-weighted
sign indicators taken from the top rank downward; k runs 1..n.  The starred
variant T*_n includes each tie group atomically: group g (lowest rank m_g)
enters the sum only once the threshold ceil((1-x)(n+1)) reaches m_g, i.e.
at k = n + 1 - m_g, and contributes sum over the whole group of c*_i S_i.
With no ties the two walks coincide index by index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import RankedSample, TieScores
from .errors import InputError
from .scores import ScoreFunction, rank_scores


@dataclass(frozen=True)
class WalkFamily:
    """values[k-1] = T(k/(n+1)) for k = 1..n; constant between eval_ranks.

    eval_ranks lists the k at which the walk can change: all of 1..n for
    the plain statistic, one per tie group (k = n + 1 - m_g) for the
    starred one.  scores carries the c_i (or c*_i) in rank order, which is
    what the boundary needs.
    """

    n: int
    values: np.ndarray
    eval_ranks: np.ndarray
    starred: bool
    scores: np.ndarray

    @property
    def full_statistic(self) -> float:
        """T_n = T(n/(n+1)) evaluated over all ranks."""
        return float(self.values[-1])


def build_walk(ranked: RankedSample, score: ScoreFunction) -> WalkFamily:
    """Plain walk with c_i = phi(i/(n+1))."""
    c = rank_scores(score, ranked.n)
    steps = c * ranked.signs
    values = np.cumsum(steps[::-1])
    return WalkFamily(
        n=ranked.n,
        values=values,
        eval_ranks=np.arange(1, ranked.n + 1, dtype=np.int64),
        starred=False,
        scores=c,
    )


def build_star_walk(ranked: RankedSample, tie_scores: TieScores) -> WalkFamily:
    """Tie-invariant walk with tie groups entering atomically.

    Group g enters at k_g = n + 1 - m_g with its whole contribution
    sum_{i in J_g} c*_i S_i; values[k-1] holds the sum of groups with
    k_g <= k.  Because within a group all c*_i are equal, the contribution
    is c*_g times the group's positive count, which no reordering of tied
    inputs can change.
    """
    c_star = np.asarray(tie_scores.c_star, dtype=float)
    if c_star.shape != (ranked.n,):
        raise InputError(
            f"tie scores have length {c_star.size}, expected {ranked.n}")
    n = ranked.n
    contrib = np.bincount(ranked.group_id, weights=c_star * ranked.signs,
                          minlength=ranked.n_groups)
    # groups are numbered in increasing m_g; entry ranks decrease with m_g
    enter_rank = n + 1 - ranked.group_start            # per group
    order = np.argsort(enter_rank)                     # ascending k
    running = np.cumsum(contrib[order])
    # spread the per-group running sums onto all ranks 1..n
    values = np.empty(n, dtype=float)
    ks = enter_rank[order]
    prev = 0
    for j, k in enumerate(ks):
        values[prev:k - 1] = running[j - 1] if j > 0 else 0.0
        prev = k - 1
    values[prev:] = running[-1]
    # ranks below the first entry hold 0 (no group fully above threshold)
    first = int(ks[0])
    values[: first - 1] = 0.0
    return WalkFamily(
        n=n,
        values=values,
        eval_ranks=ks.astype(np.int64),
        starred=True,
        scores=c_star,
    )
