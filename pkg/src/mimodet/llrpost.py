"""LLR extraction from candidate lists and combining across decompositions.

LLR sign convention throughout: Lambda = min over the (+1) partition
minus min over the (-1) partition, so the sign points toward the hard
decision (negative when the detected bit is +1).  Outputs carry the
unscaled distance metric; multiplying by sigma^2/2 recovers true
log-likelihood ratios and is left to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detcore import CandidateList

__all__ = ["DetectionResult", "hard_decision", "llr_two_sided", "combine_lists"]


@dataclass(frozen=True)
class DetectionResult:
    hard: np.ndarray  # (N,) complex symbol vector
    dmin: float
    llr: tuple[np.ndarray, ...]  # per layer, (q_n,)
    distance_mode: str  # "L" | "H" | "exact"
    layers_used: tuple[int, ...]


def hard_decision(clist: CandidateList) -> tuple[np.ndarray, float]:
    """Minimum-distance entry; equal distances resolve to the lower index."""
    if len(clist) == 0:
        raise ValueError("empty candidate list")
    i = int(np.argmin(clist.distances))
    return clist.symbols[i], float(clist.distances[i])


def _partition_minima(clist: CandidateList, layer: int, constellation) -> tuple[np.ndarray, np.ndarray]:
    """Per-bit minima of the list distances over the +-1 partitions of one layer."""
    bits = constellation.bits_of_points(clist.symbols[:, layer])
    dist = clist.distances[:, None]
    pos = np.min(np.where(bits == 1, dist, np.inf), axis=0)
    neg = np.min(np.where(bits == -1, dist, np.inf), axis=0)
    return pos, neg


def llr_two_sided(
    list1: CandidateList,
    list2: CandidateList,
    constellations,
    min_match_rtol: float | None = 1e-9,
) -> DetectionResult:
    """Exact 2-layer soft output from the two one-sided lists.

    ``list1`` must enumerate layer 0 and ``list2`` layer 1.  Each
    layer's bit LLRs come from its own list; the two lists must attain
    the same minimum distance (checked, since both enumerate the full
    search space through norm-preserving decompositions).  Pass
    ``min_match_rtol=None`` to skip the check when the inputs were
    deliberately perturbed, e.g. quantized.
    """
    if (list1.layer, list2.layer) != (0, 1):
        raise ValueError("expected lists enumerating layers 0 and 1")
    hard1, min1 = hard_decision(list1)
    hard2, min2 = hard_decision(list2)
    if min_match_rtol is not None and (
        abs(min1 - min2) > min_match_rtol * max(1.0, abs(min1), abs(min2))
    ):
        raise ValueError(
            f"one-sided minima disagree beyond tolerance: {min1!r} vs {min2!r}"
        )
    llrs = []
    for layer, clist in ((0, list1), (1, list2)):
        pos, neg = _partition_minima(clist, layer, constellations[layer])
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(neg))):
            raise AssertionError("bit partition empty despite full enumeration")
        llrs.append(pos - neg)
    hard, dmin = (hard1, min1) if min1 <= min2 else (hard2, min2)
    return DetectionResult(
        hard=hard,
        dmin=dmin,
        llr=tuple(llrs),
        distance_mode=list1.distance_mode,
        layers_used=(0, 1),
    )


def combine_lists(lists, constellations) -> DetectionResult:
    """Minimum-based combining of one list per detection layer.

    The hard decision is the overall argmin across lists (ties resolve
    to the lower detection layer, then the lower enumeration index).
    Per-bit LLRs take minima across all lists' partitions; a partition
    empty in one list contributes +inf and the result stays finite
    because list n enumerates layer n exhaustively.  For two layers this
    reduces to :func:`llr_two_sided`.
    """
    lists = sorted(lists, key=lambda cl: cl.layer)
    n = len(constellations)
    if [cl.layer for cl in lists] != list(range(n)):
        raise ValueError("need exactly one list per layer")
    modes = {cl.distance_mode for cl in lists}
    if len(modes) != 1:
        raise ValueError("lists mix distance modes")

    hard = None
    dmin = np.inf
    for cl in lists:
        h, d = hard_decision(cl)
        if d < dmin:
            hard, dmin = h, d
    llrs = []
    for layer in range(n):
        pos = np.full(constellations[layer].bits_per_symbol, np.inf)
        neg = pos.copy()
        for cl in lists:
            p, m = _partition_minima(cl, layer, constellations[layer])
            pos = np.minimum(pos, p)
            neg = np.minimum(neg, m)
        llrs.append(pos - neg)
    return DetectionResult(
        hard=hard,
        dmin=float(dmin),
        llr=tuple(llrs),
        distance_mode=modes.pop(),
        layers_used=tuple(cl.layer for cl in lists),
    )
