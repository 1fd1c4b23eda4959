"""Paired differences, absolute-value ranking, tie groups, averaged scores.

Ranks are 1-based throughout, matching the statistic definitions: rank i
refers to |Y_(i)| with |Y_(1)| <= ... <= |Y_(n)|.  A tie group J_i collects
the ranks sharing one absolute value; m(i) = min J_i is the group's lowest
rank.  Zero differences form their own group (|Y| = 0) and always carry
sign indicator 0.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .scores import ScoreFunction, rank_scores


@dataclass(frozen=True)
class PairDifferences:
    """Treated-minus-control differences, one per matched pair."""

    y: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.y, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise InputError("need a one-dimensional, nonempty difference vector")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InputError(f"non-finite difference at position {bad}")
        object.__setattr__(self, "y", arr)

    @property
    def n(self) -> int:
        return int(self.y.size)


@dataclass(frozen=True)
class RankedSample:
    """Differences ordered by |Y|, with signs and tie-group structure.

    group_id[i-1] identifies the tie group of rank i (groups numbered 0..
    in rank order); group_min[i-1] = m(i); group_start/group_size index the
    groups themselves.
    """

    abs_sorted_values: np.ndarray
    signs: np.ndarray
    group_id: np.ndarray
    group_min: np.ndarray
    group_start: np.ndarray
    group_size: np.ndarray
    zero_count: int

    @property
    def n(self) -> int:
        return int(self.abs_sorted_values.size)

    @property
    def n_groups(self) -> int:
        return int(self.group_start.size)

    @property
    def has_ties(self) -> bool:
        return bool(np.any(self.group_size > 1))

    def tie_group_of(self, rank: int) -> range:
        """J_rank as a 1-based rank range."""
        if not 1 <= rank <= self.n:
            raise IndexError(f"rank {rank} out of 1..{self.n}")
        g = int(self.group_id[rank - 1])
        start = int(self.group_start[g])
        return range(start, start + int(self.group_size[g]))


@dataclass(frozen=True)
class TieScores:
    """Tie-averaged scores c*_i = |J_i|^{-1} sum_{j in J_i} phi(j/(n+1))."""

    c_star: np.ndarray


def rank_by_abs(data: PairDifferences, *, tie_tol: float = 0.0,
                drop_zeros: bool = False) -> RankedSample:
    """Stable sort by |Y| and compute tie groups.

    Ties are detected by exact equality of |Y| by default; tie_tol > 0
    instead chains consecutive sorted values whose gap is <= tie_tol (for
    data rounded upstream).  Stability means equal magnitudes keep their
    input order, which is an arbitrary-but-deterministic choice; every
    starred statistic downstream is invariant to it.
    """
    y = data.y
    if drop_zeros:
        y = y[y != 0.0]
        if y.size == 0:
            raise InputError("all differences are zero after drop_zeros")
    abs_y = np.abs(y)
    order = np.argsort(abs_y, kind="stable")
    sorted_abs = abs_y[order]
    signs = (y[order] > 0.0).astype(np.int8)

    n = y.size
    if n == 1:
        new_group = np.array([True])
    else:
        gaps = np.diff(sorted_abs)
        new_group = np.concatenate(([True], gaps > tie_tol))
    group_id = np.cumsum(new_group) - 1
    group_start = np.flatnonzero(new_group) + 1           # 1-based rank
    group_size = np.diff(np.append(group_start, n + 1))
    group_min = group_start[group_id]

    return RankedSample(
        abs_sorted_values=sorted_abs,
        signs=signs,
        group_id=group_id.astype(np.int64),
        group_min=group_min.astype(np.int64),
        group_start=group_start.astype(np.int64),
        group_size=group_size.astype(np.int64),
        zero_count=int(np.count_nonzero(y == 0.0)),
    )


def tie_averaged_scores(ranked: RankedSample, score: ScoreFunction) -> TieScores:
    """Average phi(j/(n+1)) within each tie group.

    With no ties this returns the plain scores exactly (a mean over a
    singleton is the identity, also in floating point).
    """
    c = rank_scores(score, ranked.n)
    sums = np.bincount(ranked.group_id, weights=c,
                       minlength=ranked.n_groups)
    means = sums / ranked.group_size
    return TieScores(c_star=means[ranked.group_id])


def load_csv(path) -> PairDifferences:
    """Read pair differences from CSV.

    Accepts either a single column ``y`` of differences or the pair
    ``treated,control`` (differences formed as treated - control).  A header
    row is required; extra columns are ignored.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise InputError(f"{path}: empty file (header row required)")
        by_name = {c.strip(): c for c in reader.fieldnames}
        if "y" in by_name:
            take = (by_name["y"],)
        elif "treated" in by_name and "control" in by_name:
            take = (by_name["treated"], by_name["control"])
        else:
            raise InputError(
                f"{path}: need column 'y' or columns 'treated' and "
                f"'control'; found {sorted(by_name)}")
        values = []
        for line_no, row in enumerate(reader, start=2):
            try:
                nums = [float(row[c]) for c in take]
            except (TypeError, ValueError, KeyError) as exc:
                raise InputError(
                    f"{path}: bad numeric value in line {line_no} "
                    f"(columns {', '.join(take)})") from exc
            values.append(nums[0] if len(take) == 1 else nums[0] - nums[1])
    if not values:
        raise InputError(f"{path}: no data rows")
    return PairDifferences(np.asarray(values, dtype=float))


def digest(ranked: RankedSample) -> dict:
    """Small input summary embedded in CLI reports."""
    sizes = ranked.group_size
    return {
        "n": ranked.n,
        "tie_groups": int(np.count_nonzero(sizes > 1)),
        "tied_values": int(sizes[sizes > 1].sum()),
        "zero_count": ranked.zero_count,
    }
