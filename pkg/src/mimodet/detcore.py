"""One-sided detector core: precomputed constants, slicers, candidate lists.

Distances are evaluated in the expanded quadratic form

    gbar(x) = A(x1re^2 + x1im^2) + C x1re + D x1im - b(x1)' lam1
              + sum_n min over levels of [B_n p^2 + (G_n + u)p - b(p)' lam_n]

with u = E_n x1re + F_n x1im on the real axis of layer n and
u = E_n x1im - F_n x1re on the imaginary axis.  gbar drops the
x-independent term |y|^2, which is kept as ``dropped_const`` so absolute
distances ||y - Lx||^2 - b(x)'lam are reconstructible; candidate lists
store the absolute value.

Per-axis minimization runs either through soft decision boundaries
(``mode="slicer"``) or by enumerating the axis (``mode="exhaustive"``);
both paths evaluate the same float expressions and must agree bit for
bit.  Priors are accepted pre-scaled (the 1/sigma^2 of the prior-LLR
definition is the caller's responsibility).

Tie conventions, fixed for determinism: slicer intervals are closed at
the lower edge (lo <= u < hi), and equal-distance candidates resolve to
the lower level / lower enumeration index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import PamAxis, split_prior
from .decomp import PuncturedDecomposition

__all__ = [
    "DistanceConstants",
    "distance_constants",
    "hard_slice",
    "SlicerTable",
    "build_slicer_table",
    "soft_slice",
    "CandidateList",
    "detect_one_sided",
    "detect_one_sided_batch",
    "rescore_candidates",
]


@dataclass(frozen=True)
class DistanceConstants:
    """Scalars of the expanded distance form for one decomposition.

    ``enum_*`` multiply the enumerated layer's coordinates, ``slice_*``
    and ``cross_*`` (arrays over the sliced layers, index n-2) feed the
    per-layer axis metrics.
    """

    enum_quad: float  # alpha^2 + sum |c_n|^2
    enum_lin_re: float  # -2(alpha y1re + sum(c_nre y_nre + c_nim y_nim))
    enum_lin_im: float  # -2(alpha y1im + sum(c_nre y_nim - c_nim y_nre))
    slice_quad: np.ndarray  # beta_n^2
    cross_re: np.ndarray  # +2 beta_n c_nre
    cross_im: np.ndarray  # -2 beta_n c_nim
    slice_lin_re: np.ndarray  # -2 beta_n y_nre
    slice_lin_im: np.ndarray  # -2 beta_n y_nim


def distance_constants(l: np.ndarray, y: np.ndarray) -> DistanceConstants:
    """Constants of the expanded distance form from (punctured) L and y."""
    l = np.asarray(l, dtype=complex)
    y = np.asarray(y, dtype=complex)
    n = l.shape[0]
    if l.shape != (n, n) or y.shape != (n,):
        raise ValueError("inconsistent decomposition dimensions")
    alpha = float(l[0, 0].real)
    cre = l[1:, 0].real.astype(float)
    cim = l[1:, 0].imag.astype(float)
    beta = np.diagonal(l)[1:].real.astype(float)
    yre = y.real.astype(float)
    yim = y.imag.astype(float)
    return DistanceConstants(
        enum_quad=alpha * alpha + float(np.sum(cre * cre + cim * cim)),
        enum_lin_re=-2.0 * (alpha * yre[0] + float(np.sum(cre * yre[1:] + cim * yim[1:]))),
        enum_lin_im=-2.0 * (alpha * yim[0] + float(np.sum(cre * yim[1:] - cim * yre[1:]))),
        slice_quad=beta * beta,
        cross_re=2.0 * beta * cre,
        cross_im=-2.0 * beta * cim,
        slice_lin_re=-2.0 * beta * yre[1:],
        slice_lin_im=-2.0 * beta * yim[1:],
    )


def hard_slice(axis: PamAxis, z, beta: float):
    """Nearest axis level of z under scaling beta (zero-prior slicing).

    Decision regions are beta*(p_{i-1}+p_i)/2 <= z < beta*(p_i+p_{i+1})/2,
    closed on the left, so an exact midpoint resolves to the upper level.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    z = np.asarray(z, dtype=float)
    if axis.size == 1:
        out = np.zeros_like(z)
        return float(out) if out.ndim == 0 else out
    bounds = beta * (axis.levels[:-1] + axis.levels[1:]) / 2.0
    idx = np.searchsorted(bounds, z, side="right")
    out = axis.levels[idx]
    return float(out) if np.ndim(z) == 0 else out


@dataclass(frozen=True)
class SlicerTable:
    """Soft decision regions of one axis, rearranged for interval tests.

    Level i wins exactly on [lo[i], hi[i]) in u-space; levels with
    lo >= hi are dominated by the priors and unreachable.  The reachable
    intervals tile the real line in order of decreasing level, so a
    query reduces to locating u among ``breakpoints``.
    """

    axis: PamAxis
    quad: float  # B_n
    offset: float  # G_n (real axis) or H_n (imag axis)
    bias: np.ndarray  # (P,) b(p_i)' lam_axis
    lo: np.ndarray  # (P,)
    hi: np.ndarray  # (P,)
    reachable: np.ndarray  # (P,) bool
    sel_idx: np.ndarray  # (K,) level indices ordered by interval position
    breakpoints: np.ndarray  # (K-1,) ascending interval bounds

    @property
    def levels(self) -> np.ndarray:
        return self.axis.levels


def build_slicer_table(axis: PamAxis, quad: float, offset: float, lam_axis) -> SlicerTable:
    """Build soft decision boundaries for one axis.

    Pairwise boundaries are R(p_i, p_k) = quad*(p_i + p_k)
    - (b(p_i) - b(p_k))' lam / (p_i - p_k); the closed interval form in
    u-space absorbs the offset (G or H) so queries need no further
    arithmetic.  With zero priors the boundaries reduce to the scaled
    midpoints of the axis.
    """
    lam_axis = np.asarray(lam_axis, dtype=float)
    if lam_axis.shape != (axis.bits_per_level,):
        raise ValueError("prior length does not match axis bits")
    p = axis.size
    bias = axis.bits @ lam_axis if axis.bits_per_level else np.zeros(p)
    if p == 1:
        return SlicerTable(
            axis, quad, offset, bias,
            lo=np.array([-np.inf]), hi=np.array([np.inf]),
            reachable=np.ones(1, dtype=bool),
            sel_idx=np.zeros(1, dtype=np.intp),
            breakpoints=np.zeros(0),
        )
    lv = axis.levels
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (bias[:, None] - bias[None, :]) / (lv[:, None] - lv[None, :])
    np.fill_diagonal(ratio, 0.0)
    neg_r = -(quad * (lv[:, None] + lv[None, :]) - ratio)
    upper = np.triu(np.ones((p, p), dtype=bool), k=1)  # k > i
    lo = np.max(np.where(upper, neg_r, -np.inf), axis=1) - offset
    hi = np.min(np.where(upper.T, neg_r, np.inf), axis=1) - offset
    reachable = lo < hi
    sel = np.nonzero(reachable)[0]
    order = np.argsort(lo[sel], kind="stable")
    sel = sel[order]
    return SlicerTable(
        axis, quad, offset, bias, lo, hi, reachable,
        sel_idx=sel.astype(np.intp), breakpoints=lo[sel[1:]],
    )


def soft_slice(table: SlicerTable, u):
    """Level whose decision interval contains u (lo <= u < hi)."""
    u = np.asarray(u, dtype=float)
    idx = table.sel_idx[np.searchsorted(table.breakpoints, u, side="right")]
    out = table.axis.levels[idx]
    return float(out) if np.ndim(u) == 0 else out


def _axis_min(table: SlicerTable, u: np.ndarray, mode: str):
    """Per-axis minimum of B p^2 + (G + u) p - bias over the axis levels.

    Returns (levels, min values, bias at the minimizing level).  Both
    modes evaluate the identical float expression at the chosen level.
    """
    gu = table.offset + u
    if mode == "slicer":
        k = table.sel_idx[np.searchsorted(table.breakpoints, u, side="right")]
        p_hat = table.axis.levels[k]
        b_hat = table.bias[k]
        val = table.quad * p_hat * p_hat + gu * p_hat - b_hat
        return p_hat, val, b_hat
    lv = table.axis.levels
    metric = table.quad * lv * lv + gu[:, None] * lv - table.bias
    k = np.argmin(metric, axis=1)
    rows = np.arange(len(u))
    return lv[k], metric[rows, k], table.bias[k]


@dataclass(frozen=True)
class CandidateList:
    """Symbol vectors enumerated on one layer with sliced companions.

    ``symbols`` is (Q, N) in original layer order, row q holding the
    q-th enumerated point of ``layer`` (bit-lexicographic order) and the
    per-layer minimizers given it.  ``distances`` are absolute:
    ||y - Lx||^2 - b(x)'lam for L-based lists, ||ytilde - Hx||^2 -
    b(x)'lam after rescoring.  ``dropped_const`` (= |y|^2) is the term
    the expanded form drops; subtracting it recovers the relative form.
    """

    layer: int
    perm: tuple[int, ...]
    symbols: np.ndarray
    distances: np.ndarray
    prior_bias: np.ndarray
    dropped_const: float
    distance_mode: str  # "L" | "H"

    def __len__(self):
        return len(self.distances)


def _normalize_priors(priors, constellations):
    out = []
    for i, c in enumerate(constellations):
        lam = None if priors is None else priors[i]
        if lam is None:
            lam = np.zeros(c.bits_per_symbol)
        else:
            lam = np.asarray(lam, dtype=float)
            if lam.shape != (c.bits_per_symbol,):
                raise ValueError(f"layer {i}: expected {c.bits_per_symbol} priors")
        out.append(lam)
    return out


def detect_one_sided(
    d: PuncturedDecomposition,
    y: np.ndarray,
    constellations,
    priors=None,
    mode: str = "slicer",
) -> CandidateList:
    """Enumerate the detection layer and slice all others in parallel.

    ``y`` is the transformed observation W* ytilde; ``constellations``
    and ``priors`` are indexed by original layer.  ``mode`` selects the
    soft-boundary slicer or per-axis exhaustive minimization; the two
    must produce identical lists.
    """
    if mode not in ("slicer", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    n = d.n_layers
    if len(constellations) != n:
        raise ValueError("constellation count does not match decomposition")
    y = np.asarray(y, dtype=complex)
    if y.shape != (n,):
        raise ValueError("observation length does not match decomposition")
    lam_all = _normalize_priors(priors, constellations)
    cons = [constellations[p] for p in d.perm]
    lam = [lam_all[p] for p in d.perm]

    const = distance_constants(d.l, y)
    c0 = cons[0]
    pts = c0.points
    x1re = pts.real
    x1im = pts.imag
    bias0 = c0.point_bits @ lam[0]
    gbar = (
        const.enum_quad * (x1re * x1re + x1im * x1im)
        + const.enum_lin_re * x1re
        + const.enum_lin_im * x1im
        - bias0
    )
    total_bias = bias0.copy()

    q = len(pts)
    symbols = np.empty((q, n), dtype=complex)
    symbols[:, d.perm[0]] = pts
    for i in range(1, n):
        lam_re, lam_im = split_prior(cons[i], lam[i])
        t_re = build_slicer_table(
            cons[i].real_axis, const.slice_quad[i - 1], const.slice_lin_re[i - 1], lam_re
        )
        t_im = build_slicer_table(
            cons[i].imag_axis, const.slice_quad[i - 1], const.slice_lin_im[i - 1], lam_im
        )
        u_re = const.cross_re[i - 1] * x1re + const.cross_im[i - 1] * x1im
        u_im = const.cross_re[i - 1] * x1im - const.cross_im[i - 1] * x1re
        p_re, v_re, b_re = _axis_min(t_re, u_re, mode)
        p_im, v_im, b_im = _axis_min(t_im, u_im, mode)
        gbar += v_re + v_im
        total_bias += b_re + b_im
        symbols[:, d.perm[i]] = p_re + 1j * p_im

    yre = y.real
    yim = y.imag
    dropped = float(np.sum(yre * yre + yim * yim))
    return CandidateList(
        layer=d.layer,
        perm=d.perm,
        symbols=symbols,
        distances=gbar + dropped,
        prior_bias=total_bias,
        dropped_const=dropped,
        distance_mode="L",
    )


def detect_one_sided_batch(
    l: np.ndarray,
    y: np.ndarray,
    constellations,
    perm: tuple[int, ...],
) -> tuple[np.ndarray, np.ndarray]:
    """Zero-prior :func:`detect_one_sided` over stacked decompositions.

    ``l`` is (T, N, N), ``y`` (T, N); returns (symbols (T, Q, N),
    distances (T, Q)).  Mirrors the scalar path operation for operation
    so results match it bit for bit.
    """
    l = np.asarray(l, dtype=complex)
    y = np.asarray(y, dtype=complex)
    t, n, _ = l.shape
    cons = [constellations[p] for p in perm]

    alpha = l[:, 0, 0].real
    cre = l[:, 1:, 0].real
    cim = l[:, 1:, 0].imag
    beta = np.diagonal(l, axis1=1, axis2=2)[:, 1:].real
    yre = y.real
    yim = y.imag
    a_q = alpha * alpha + np.sum(cre * cre + cim * cim, axis=1)
    c_l = -2.0 * (alpha * yre[:, 0] + np.sum(cre * yre[:, 1:] + cim * yim[:, 1:], axis=1))
    d_l = -2.0 * (alpha * yim[:, 0] + np.sum(cre * yim[:, 1:] - cim * yre[:, 1:], axis=1))
    b_q = beta * beta
    e_c = 2.0 * beta * cre
    f_c = -2.0 * beta * cim
    g_c = -2.0 * beta * yre[:, 1:]
    h_c = -2.0 * beta * yim[:, 1:]

    pts = cons[0].points
    x1re = pts.real
    x1im = pts.imag
    q = len(pts)
    gbar = (
        a_q[:, None] * (x1re * x1re + x1im * x1im)[None, :]
        + c_l[:, None] * x1re[None, :]
        + d_l[:, None] * x1im[None, :]
        - np.zeros(q)
    )
    symbols = np.empty((t, q, n), dtype=complex)
    symbols[:, :, perm[0]] = pts[None, :]

    for i in range(1, n):
        bq = b_q[:, i - 1, None]
        u_re = e_c[:, i - 1, None] * x1re[None, :] + f_c[:, i - 1, None] * x1im[None, :]
        u_im = e_c[:, i - 1, None] * x1im[None, :] - f_c[:, i - 1, None] * x1re[None, :]
        parts = []
        for axis, u, off in (
            (cons[i].real_axis, u_re, g_c[:, i - 1, None]),
            (cons[i].imag_axis, u_im, h_c[:, i - 1, None]),
        ):
            if axis.size == 1:
                parts.append((np.zeros_like(u), np.zeros_like(u)))
                continue
            lv = axis.levels
            # zero-prior breakpoints: lo of each level, highest level first
            bp = -(bq * (lv[:-1] + lv[1:])[None, :]) - off
            idx = np.sum(bp[:, None, :] <= u[:, :, None], axis=2)
            p_hat = lv[::-1][idx]
            gu = off + u
            val = bq * p_hat * p_hat + gu * p_hat - 0.0
            parts.append((p_hat, val))
        (p_re, v_re), (p_im, v_im) = parts
        gbar += v_re + v_im
        symbols[:, :, perm[i]] = p_re + 1j * p_im

    dropped = np.sum(yre * yre + yim * yim, axis=1)
    return symbols, gbar + dropped[:, None]


def rescore_candidates(
    clist: CandidateList,
    h: np.ndarray,
    y_tilde: np.ndarray,
    quad_scale: float = 1.0,
) -> CandidateList:
    """Replace list distances with the channel-based metric.

    New distances are quad_scale * ||ytilde - Hx||^2 - b(x)'lam, using
    the prior bias recorded at list creation; entry order is preserved.
    """
    h = np.asarray(h, dtype=complex)
    y_tilde = np.asarray(y_tilde, dtype=complex)
    if h.shape[1] != clist.symbols.shape[1] or y_tilde.shape != (h.shape[0],):
        raise ValueError("channel/observation dimensions do not match the list")
    resid = y_tilde[None, :] - clist.symbols @ h.T
    quad = np.sum(resid.real * resid.real + resid.imag * resid.imag, axis=1)
    return CandidateList(
        layer=clist.layer,
        perm=clist.perm,
        symbols=clist.symbols,
        distances=quad_scale * quad - clist.prior_bias,
        prior_bias=clist.prior_bias,
        dropped_const=0.0,
        distance_mode="H",
    )
