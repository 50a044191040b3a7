"""QL triangularization and punctured (projection-based) decompositions.

``ql_decompose`` factors H = Q L with Q unitary and L lower triangular
with positive real diagonal, which makes the factorization unique.

``punctured_decompose`` produces W, L with W*H_perm = L where L is lower
triangular with every row n >= 2 zeroed except columns 1 and n, so all
layers decouple from the enumerated first layer.  Columns of W are unit
norm, which keeps the per-entry noise variance unchanged; W is not
unitary in general.  Columns of H are circularly shifted so the
requested detection layer comes first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, SingularChannelError

__all__ = [
    "QLDecomp",
    "PuncturedDecomposition",
    "ql_decompose",
    "ql_decompose_flipped",
    "punctured_decompose",
    "punctured_decompose_batch",
    "transform_observation",
]

SINGULAR_RTOL = 1e-10


@dataclass(frozen=True)
class QLDecomp:
    q: np.ndarray
    l: np.ndarray


@dataclass(frozen=True)
class PuncturedDecomposition:
    """Projection matrix, punctured triangular factor and layer bookkeeping.

    ``perm[i]`` is the original layer sitting at decomposition position i;
    ``layer == perm[0]`` is the enumerated detection layer.
    """

    w: np.ndarray
    l: np.ndarray
    layer: int
    perm: tuple[int, ...]

    @property
    def n_layers(self) -> int:
        return self.l.shape[0]


def ql_decompose(h: np.ndarray) -> QLDecomp:
    """Factor a square full-rank H as Q L (unitary x lower triangular)."""
    h = np.asarray(h, dtype=complex)
    n, m = h.shape
    if n != m:
        raise ValueError("ql_decompose expects a square matrix")
    # QR of the doubly flipped matrix gives QL of the original.
    qf, rf = np.linalg.qr(h[::-1, ::-1])
    q = qf[::-1, ::-1]
    l = rf[::-1, ::-1]
    diag = np.diagonal(l).copy()
    scale = np.linalg.norm(h)
    if np.any(np.abs(diag) <= SINGULAR_RTOL * max(scale, np.finfo(float).tiny)):
        raise SingularChannelError("channel matrix is numerically rank deficient")
    phase = diag / np.abs(diag)
    l = l * phase.conj()[:, None]
    q = q * phase[None, :]
    np.fill_diagonal(l, np.abs(diag))
    return QLDecomp(q, l)


def ql_decompose_flipped(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """2x2 factorization with the zero in the upper-left of the factor.

    Returns (Q', L') with L' = [[0, a'], [b', c']], a', b' real positive,
    so enumerating layer 2 decouples layer 1.  Equivalent to QL of the
    column-swapped matrix with the factor's columns swapped back.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise ValueError("ql_decompose_flipped expects a 2x2 matrix")
    qd = ql_decompose(h[:, ::-1])
    return qd.q, qd.l[:, ::-1]


def _puncture_sets(n: int) -> list[list[int]]:
    # Row 0 keeps only column 0; row i >= 1 keeps columns {0, i}.
    return [[j for j in range(1, n) if j != i] for i in range(n)]


def punctured_decompose(h: np.ndarray, layer: int) -> PuncturedDecomposition:
    """Decouple all layers from `layer` via orthogonal projections.

    Column n of W is the projection of (shifted) column n of H onto the
    complement of the columns to be punctured, normalized to unit length.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    if h.shape != (n, n) or not 2 <= n <= 4:
        raise ValueError("punctured_decompose expects a square 2x2..4x4 matrix")
    if not 0 <= layer < n:
        raise ValueError(f"layer {layer} out of range for {n} layers")
    perm = tuple((layer + i) % n for i in range(n))
    hp = h[:, perm]
    scale = np.linalg.norm(h)
    tiny = max(scale, np.finfo(float).tiny)

    w = np.empty_like(hp)
    norms = np.empty(n)
    for i, idx in enumerate(_puncture_sets(n)):
        hn = hp[:, i]
        if idx:
            hi = hp[:, idx]
            gram = hi.conj().T @ hi
            try:
                coef = np.linalg.solve(gram, hi.conj().T @ hn)
            except np.linalg.LinAlgError as exc:
                raise DegenerateChannelError("puncture set is rank deficient") from exc
            wt = hn - hi @ coef
        else:
            wt = hn
        # ||wt||^2 equals hn* P hn in exact arithmetic but stays accurate
        # under cancellation, keeping the W columns unit norm
        norm2 = float(np.real(wt.conj() @ wt))
        if norm2 <= (SINGULAR_RTOL * tiny) ** 2:
            raise DegenerateChannelError("projection collapsed a channel column")
        norms[i] = np.sqrt(norm2)
        w[:, i] = wt / norms[i]

    l = w.conj().T @ hp
    np.fill_diagonal(l, norms)
    return PuncturedDecomposition(w, l, layer, perm)


def punctured_decompose_batch(h: np.ndarray, layer: int) -> tuple[np.ndarray, np.ndarray]:
    """Batched :func:`punctured_decompose` over stacked channels.

    h has shape (T, N, N); returns (W, L) of the same shape.  Raises on
    any degenerate instance, like the scalar version.
    """
    h = np.asarray(h, dtype=complex)
    t, n, _ = h.shape
    perm = [(layer + i) % n for i in range(n)]
    hp = h[:, :, perm]
    tiny = np.maximum(np.linalg.norm(hp, axis=(1, 2)), np.finfo(float).tiny)

    w = np.empty_like(hp)
    norms = np.empty((t, n))
    for i, idx in enumerate(_puncture_sets(n)):
        hn = hp[:, :, i]
        if idx:
            hi = hp[:, :, idx]
            hi_h = hi.conj().transpose(0, 2, 1)
            gram = hi_h @ hi
            rhs = hi_h @ hn[:, :, None]
            coef = np.linalg.solve(gram, rhs)
            wt = hn - (hi @ coef)[:, :, 0]
        else:
            wt = hn
        norm2 = np.real(np.sum(wt.conj() * wt, axis=1))
        if np.any(norm2 <= (SINGULAR_RTOL * tiny) ** 2):
            raise DegenerateChannelError("projection collapsed a channel column")
        norms[:, i] = np.sqrt(norm2)
        w[:, :, i] = wt / norms[:, i, None]

    l = w.conj().transpose(0, 2, 1) @ hp
    l[:, np.arange(n), np.arange(n)] = norms
    return w, l


def transform_observation(d: PuncturedDecomposition, y_tilde: np.ndarray) -> np.ndarray:
    """Project the raw observation into decomposition coordinates: W* y."""
    y_tilde = np.asarray(y_tilde, dtype=complex)
    if y_tilde.shape != (d.w.shape[0],):
        raise ValueError("observation length does not match decomposition")
    return d.w.conj().T @ y_tilde
