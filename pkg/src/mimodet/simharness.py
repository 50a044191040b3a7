"""Monte-Carlo simulation engine: sweeps, LLR fidelity, batch experiments.

Conventions used by every experiment here:

- Per-layer constellations are scaled to unit average symbol energy, by
  folding the scale into the effective channel, so detectors always see
  integer-valued levels.
- With i.i.d. CN(0,1) channel entries the received signal power per
  antenna is the layer count N, so the dB axis reports
  SNR = N / sigma^2 per receive antenna (MU-MIMO experiments use the
  two-user total, 2 / sigma^2).
- Trial data comes from counter-based streams (:mod:`mimodet.rng`):
  sweeps derive one stream per (snr index, trial), batch experiments one
  per (snr index, chunk).  Either way results are independent of worker
  count and schedule, and accumulators reduce in fixed order, so a
  config + seed pins the CSV bytes.
- Per-trial draw order: channel, symbol indices (layer by layer),
  noise, priors.
- Output LLRs keep the unscaled-distance convention of
  :mod:`mimodet.llrpost`; scale by sigma^2/2 for true LLRs.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constellation import make_constellation
from .decomp import punctured_decompose, punctured_decompose_batch, transform_observation
from .detcore import detect_one_sided, detect_one_sided_batch, rescore_candidates
from .errors import ConfigError, ShadowOracleMismatch
from .hwmodel import FixedPointFormat, quantize
from .llrpost import DetectionResult, combine_lists, llr_two_sided
from .mumimo import MU_HYPOTHESIS_ORDERS, MuScenario, classify_interferer
from .oracle import ENUM_BUDGET, exhaustive_map
from .rng import CONTEXT_MUMIMO, CONTEXT_SWEEP, trial_rng

__all__ = [
    "SimConfig",
    "TrialStats",
    "FidelityPoint",
    "generate_channel",
    "detect_instance",
    "run_sweep",
    "llr_fidelity",
    "write_csv",
    "draw_uncoded_chunk",
    "ml_hard_batch",
    "wld_hard_batch",
    "uncoded_ver_point",
    "mu_classification_rates",
]

CONTEXT_BATCH = 1

_DETECTORS = ("map2", "wld", "oracle")
_SWEEP_CHUNK = 64
_CSV_COLUMNS = (
    "snr_db", "trials", "ser", "ber", "llr_mae", "llr_max",
    "detector", "distance_mode", "n_layers", "mods", "seed",
)


@dataclass(frozen=True)
class SimConfig:
    n_layers: int
    mods: tuple[int, ...]
    snr_db: tuple[float, ...]
    trials: int
    detector: str = "map2"
    distance_mode: str = "L"
    priors_mode: str = "zero"
    priors_sigma: float = 0.0
    quant: FixedPointFormat | None = None
    master_seed: int = 0
    out_path: str | None = None
    threads: int = 1
    shadow_oracle: bool = False
    shadow_rtol: float = 1e-6

    def validate(self) -> None:
        if not 2 <= self.n_layers <= 4:
            raise ConfigError("n_layers must be 2..4")
        if len(self.mods) != self.n_layers:
            raise ConfigError("need one modulation order per layer")
        try:
            for q in self.mods:
                make_constellation(q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not self.snr_db:
            raise ConfigError("empty SNR grid")
        if len(self.snr_db) >= 1 << 16:
            raise ConfigError("SNR grid too long")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.detector not in _DETECTORS:
            raise ConfigError(f"unknown detector {self.detector!r}")
        if self.detector == "map2" and self.n_layers != 2:
            raise ConfigError("detector=map2 requires 2 layers")
        if self.distance_mode not in ("L", "H"):
            raise ConfigError("distance_mode must be L or H")
        if self.distance_mode == "H" and self.detector != "wld":
            raise ConfigError("distance_mode=H applies to detector=wld only")
        if self.priors_mode not in ("zero", "random"):
            raise ConfigError("priors_mode must be zero or random")
        if self.priors_mode == "random" and self.priors_sigma <= 0:
            raise ConfigError("priors_mode=random needs priors_sigma > 0")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        total = int(np.prod(self.mods))
        if self.detector == "oracle" and total > ENUM_BUDGET:
            raise ConfigError(f"oracle enumeration {total} exceeds budget {ENUM_BUDGET}")
        if self.shadow_oracle:
            if self.detector == "oracle":
                raise ConfigError("shadow oracle is redundant with detector=oracle")
            if self.quant is not None:
                raise ConfigError("shadow oracle cannot run with quantization enabled")
            if self.detector == "wld" and self.distance_mode != "H":
                raise ConfigError("shadow oracle for wld needs distance_mode=H")
            if total > ENUM_BUDGET:
                raise ConfigError(f"shadow oracle enumeration {total} exceeds budget")


@dataclass(frozen=True)
class TrialStats:
    snr_db: float
    trials: int
    vector_errors: int
    symbol_errors: int
    bit_errors: int
    ser: float
    ber: float
    llr_mae: float  # nan unless an oracle ran alongside
    llr_max: float


@dataclass(frozen=True)
class FidelityPoint:
    snr_db: float
    trials: int
    llr_mae: float
    llr_max: float


def generate_channel(rng: np.random.Generator, n_tx: int, n_rx: int | None = None) -> np.ndarray:
    """i.i.d. CN(0,1) channel matrix, real part drawn before imaginary."""
    n_rx = n_tx if n_rx is None else n_rx
    re = rng.standard_normal((n_rx, n_tx))
    im = rng.standard_normal((n_rx, n_tx))
    return (re + 1j * im) * np.sqrt(0.5)


def _quantized_list(clist, fmt):
    return dataclasses.replace(clist, distances=quantize(clist.distances, fmt))


def detect_instance(
    h_eff: np.ndarray,
    y_tilde: np.ndarray,
    constellations,
    priors=None,
    detector: str = "map2",
    distance_mode: str = "L",
    quant: FixedPointFormat | None = None,
    budget: int = ENUM_BUDGET,
) -> DetectionResult:
    """Run one detector on one channel instance.

    ``h_eff`` already carries the unit-energy scaling.  Quantization, if
    requested, applies to the detector inputs (triangular factors,
    transformed observations, priors, and the rescoring channel) and to
    the candidate distances; the oracle detector ignores it.
    """
    n = len(constellations)
    if detector == "oracle":
        return exhaustive_map(h_eff, y_tilde, constellations, priors, budget=budget)

    def q(v):
        return quantize(v, quant) if quant is not None else v

    qpriors = None
    if priors is not None:
        qpriors = [None if lam is None else q(np.asarray(lam, dtype=float)) for lam in priors]

    sides = 2 if detector == "map2" else n
    lists = []
    for m in range(sides):
        d = punctured_decompose(h_eff, m)
        yt = transform_observation(d, y_tilde)
        dq = dataclasses.replace(d, l=q(d.l))
        clist = detect_one_sided(dq, q(yt), constellations, qpriors)
        if detector == "wld" and distance_mode == "H":
            clist = rescore_candidates(clist, q(h_eff), q(y_tilde))
        if quant is not None:
            clist = _quantized_list(clist, quant)
        lists.append(clist)
    if detector == "map2":
        # quantization perturbs the two sides differently, so the
        # minima-consistency check only applies to the float path
        rtol = None if quant is not None else 1e-9
        return llr_two_sided(lists[0], lists[1], constellations, min_match_rtol=rtol)
    return combine_lists(lists, constellations)


def _sigma2(snr_db: float, n_layers: int) -> float:
    return n_layers / 10.0 ** (snr_db / 10.0)


def _sweep_trial(cfg, cons, scales, snr_idx, snr_db, trial):
    rng = trial_rng(cfg.master_seed, snr_idx, trial, CONTEXT_SWEEP)
    n = cfg.n_layers
    h = generate_channel(rng, n)
    idx = [int(rng.integers(c.order)) for c in cons]
    x = np.array([c.points[i] for c, i in zip(cons, idx)])
    sigma2 = _sigma2(snr_db, n)
    noise = np.sqrt(sigma2 / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    h_eff = h * scales[None, :]
    y_tilde = h_eff @ x + noise
    priors = None
    if cfg.priors_mode == "random":
        priors = [rng.normal(0.0, cfg.priors_sigma, c.bits_per_symbol) for c in cons]

    res = detect_instance(
        h_eff, y_tilde, cons, priors,
        detector=cfg.detector, distance_mode=cfg.distance_mode, quant=cfg.quant,
    )

    llr_dev_sum = 0.0
    llr_dev_max = 0.0
    llr_count = 0
    if cfg.shadow_oracle:
        ora = exhaustive_map(h_eff, y_tilde, cons, priors)
        if cfg.detector == "map2":
            det_llr = np.concatenate(res.llr)
            ora_llr = np.concatenate(ora.llr)
            dev = np.abs(det_llr - ora_llr)
            tol = cfg.shadow_rtol * np.maximum(1.0, np.abs(ora_llr))
            if np.any(dev > tol) or not np.array_equal(res.hard, ora.hard):
                raise ShadowOracleMismatch(
                    "detector disagrees with exhaustive oracle",
                    record={
                        "snr_db": snr_db, "trial": trial, "seed": cfg.master_seed,
                        "detector": cfg.detector, "max_dev": float(dev.max()),
                    },
                )
            llr_dev_sum = float(dev.sum())
            llr_dev_max = float(dev.max())
            llr_count = len(dev)
        else:
            # candidate lists can only over-estimate the exact minimum
            if res.dmin < ora.dmin - cfg.shadow_rtol * max(1.0, abs(ora.dmin)):
                raise ShadowOracleMismatch(
                    "candidate-list minimum beats the exhaustive minimum",
                    record={"snr_db": snr_db, "trial": trial, "seed": cfg.master_seed},
                )

    sym_err = int(np.sum(res.hard != x))
    vec_err = int(sym_err > 0)
    bit_err = 0
    for i, c in enumerate(cons):
        bit_err += int(np.sum(c.bits_of_points(res.hard[i]) != c.point_bits[idx[i]]))
    return vec_err, sym_err, bit_err, llr_dev_sum, llr_dev_max, llr_count


def _reduce_chunks(run_chunk, n_trials, threads):
    """Run chunk jobs and fold their partials in fixed chunk order."""
    bounds = [(lo, min(lo + _SWEEP_CHUNK, n_trials)) for lo in range(0, n_trials, _SWEEP_CHUNK)]
    if threads <= 1:
        return [run_chunk(b) for b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_chunk, bounds))


def run_sweep(cfg: SimConfig) -> list[TrialStats]:
    """Full Monte-Carlo sweep over the configured SNR grid."""
    cfg.validate()
    cons = tuple(make_constellation(q) for q in cfg.mods)
    scales = np.array([c.unit_energy_scale for c in cons])
    q_total = sum(c.bits_per_symbol for c in cons)

    stats = []
    for snr_idx, snr_db in enumerate(cfg.snr_db):
        def run_chunk(bounds, _snr_idx=snr_idx, _snr_db=snr_db):
            acc = np.zeros(5)
            dev_max = 0.0
            for t in range(*bounds):
                v, s, b, dsum, dmax, dcnt = _sweep_trial(cfg, cons, scales, _snr_idx, _snr_db, t)
                acc += (v, s, b, dsum, dcnt)
                dev_max = max(dev_max, dmax)
            return acc, dev_max

        parts = _reduce_chunks(run_chunk, cfg.trials, cfg.threads)
        total = np.zeros(5)
        dev_max = 0.0
        for acc, dmax in parts:
            total += acc
            dev_max = max(dev_max, dmax)
        vec, sym, bit, dev_sum, dev_cnt = total
        stats.append(
            TrialStats(
                snr_db=snr_db,
                trials=cfg.trials,
                vector_errors=int(vec),
                symbol_errors=int(sym),
                bit_errors=int(bit),
                ser=sym / (cfg.trials * cfg.n_layers),
                ber=bit / (cfg.trials * q_total),
                llr_mae=(dev_sum / dev_cnt) if dev_cnt else float("nan"),
                llr_max=dev_max if dev_cnt else float("nan"),
            )
        )
    if cfg.out_path:
        write_csv(cfg.out_path, cfg, stats)
    return stats


def llr_fidelity(cfg: SimConfig) -> list[FidelityPoint]:
    """Mean/max deviation of detector LLRs from the float exhaustive oracle.

    Quantization (if configured) applies to the detector path only, so
    this measures the quantization-induced LLR degradation; without it
    the map2 detector must sit at numerical-noise level.
    """
    probe = dataclasses.replace(cfg, shadow_oracle=False, quant=None)
    probe.validate()
    if int(np.prod(cfg.mods)) > ENUM_BUDGET:
        raise ConfigError("oracle enumeration exceeds budget")
    if cfg.detector == "oracle":
        raise ConfigError("llr_fidelity needs a non-oracle detector")
    cons = tuple(make_constellation(q) for q in cfg.mods)
    scales = np.array([c.unit_energy_scale for c in cons])

    points = []
    for snr_idx, snr_db in enumerate(cfg.snr_db):
        def run_chunk(bounds, _snr_idx=snr_idx, _snr_db=snr_db):
            dev_sum = 0.0
            dev_max = 0.0
            count = 0
            for t in range(*bounds):
                rng = trial_rng(cfg.master_seed, _snr_idx, t, CONTEXT_SWEEP)
                n = cfg.n_layers
                h = generate_channel(rng, n)
                idx = [int(rng.integers(c.order)) for c in cons]
                x = np.array([c.points[i] for c, i in zip(cons, idx)])
                sigma2 = _sigma2(_snr_db, n)
                noise = np.sqrt(sigma2 / 2.0) * (
                    rng.standard_normal(n) + 1j * rng.standard_normal(n)
                )
                h_eff = h * scales[None, :]
                y_tilde = h_eff @ x + noise
                priors = None
                if cfg.priors_mode == "random":
                    priors = [rng.normal(0.0, cfg.priors_sigma, c.bits_per_symbol) for c in cons]
                det = detect_instance(
                    h_eff, y_tilde, cons, priors,
                    detector=cfg.detector, distance_mode=cfg.distance_mode, quant=cfg.quant,
                )
                ora = exhaustive_map(h_eff, y_tilde, cons, priors)
                dev = np.abs(np.concatenate(det.llr) - np.concatenate(ora.llr))
                dev_sum += float(dev.sum())
                dev_max = max(dev_max, float(dev.max()))
                count += len(dev)
            return dev_sum, dev_max, count

        parts = _reduce_chunks(run_chunk, cfg.trials, cfg.threads)
        dev_sum = sum(p[0] for p in parts)
        dev_max = max(p[1] for p in parts)
        count = sum(p[2] for p in parts)
        points.append(FidelityPoint(snr_db, cfg.trials, dev_sum / count, dev_max))
    return points


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_csv(path: str, cfg: SimConfig, stats: list[TrialStats]) -> None:
    lines = [",".join(_CSV_COLUMNS)]
    mods = "x".join(str(q) for q in cfg.mods)
    for st in stats:
        lines.append(",".join((
            _fmt(st.snr_db), str(st.trials), _fmt(st.ser), _fmt(st.ber),
            _fmt(st.llr_mae), _fmt(st.llr_max), cfg.detector, cfg.distance_mode,
            str(cfg.n_layers), mods, str(cfg.master_seed),
        )))
    with open(path, "w", newline="") as f:
        f.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Batched uncoded experiments (zero priors, hard decisions)


def draw_uncoded_chunk(master_seed, snr_idx, chunk_idx, snr_db, constellations, n_trials):
    """Draw one chunk of uncoded trials from its counter-based stream.

    Returns (h_eff, x, y_tilde) stacked over trials; draw order matches
    the per-trial sweeps (channel, symbols layer by layer, noise).
    """
    rng = trial_rng(master_seed, snr_idx, chunk_idx, CONTEXT_BATCH)
    n = len(constellations)
    scales = np.array([c.unit_energy_scale for c in constellations])
    re = rng.standard_normal((n_trials, n, n))
    im = rng.standard_normal((n_trials, n, n))
    h_eff = (re + 1j * im) * np.sqrt(0.5) * scales[None, None, :]
    x = np.empty((n_trials, n), dtype=complex)
    for i, c in enumerate(constellations):
        x[:, i] = c.points[rng.integers(c.order, size=n_trials)]
    sigma2 = _sigma2(snr_db, n)
    noise = np.sqrt(sigma2 / 2.0) * (
        rng.standard_normal((n_trials, n)) + 1j * rng.standard_normal((n_trials, n))
    )
    y_tilde = np.einsum("tij,tj->ti", h_eff, x) + noise
    return h_eff, x, y_tilde


def _slice_nearest_batch(axis, z, beta):
    """Nearest-level slicing of z (T, C) with per-trial scaling beta (T,)."""
    if axis.size == 1:
        return np.zeros_like(z)
    bounds = beta[:, None] * ((axis.levels[:-1] + axis.levels[1:]) / 2.0)[None, :]
    idx = np.sum(bounds[:, None, :] <= z[:, :, None], axis=2)
    return axis.levels[idx]


def ml_hard_batch(h_eff, y_tilde, constellations, chunk: int = 256) -> np.ndarray:
    """Exact zero-prior ML hard decisions over stacked trials.

    Enumerates the first N-1 layers against the triangular factor and
    slices the last, which is exact because slicing realizes the
    per-hypothesis minimum when priors are zero.
    """
    h_eff = np.asarray(h_eff, dtype=complex)
    y_tilde = np.asarray(y_tilde, dtype=complex)
    t, n, _ = h_eff.shape
    # batched QL via QR of the doubly flipped stack
    qf, rf = np.linalg.qr(h_eff[:, ::-1, ::-1])
    q = qf[:, ::-1, ::-1]
    l = rf[:, ::-1, ::-1]
    diag = np.diagonal(l, axis1=1, axis2=2)
    phase = diag / np.abs(diag)
    l = l * phase.conj()[:, :, None]
    q = q * phase[:, None, :]
    yt = np.einsum("tji,tj->ti", q.conj(), y_tilde)

    grids = np.meshgrid(*[c.points for c in constellations[:-1]], indexing="ij")
    xc = np.stack([g.reshape(-1) for g in grids], axis=1)  # (C, n-1)
    last = constellations[-1]
    out = np.empty((t, n), dtype=complex)
    for lo in range(0, t, chunk):
        hi = min(lo + chunk, t)
        lch = l[lo:hi]
        ych = yt[lo:hi]
        head = ych[:, None, : n - 1] - np.einsum("tij,cj->tci", lch[:, : n - 1, : n - 1], xc)
        d = np.sum(head.real * head.real + head.imag * head.imag, axis=2)
        z = ych[:, None, n - 1] - np.einsum("tj,cj->tc", lch[:, n - 1, : n - 1], xc)
        beta = lch[:, n - 1, n - 1].real
        xr = _slice_nearest_batch(last.real_axis, z.real, beta)
        xi = _slice_nearest_batch(last.imag_axis, z.imag, beta)
        d += (z.real - beta[:, None] * xr) ** 2 + (z.imag - beta[:, None] * xi) ** 2
        k = np.argmin(d, axis=1)
        rows = np.arange(hi - lo)
        out[lo:hi, : n - 1] = xc[k]
        out[lo:hi, n - 1] = xr[rows, k] + 1j * xi[rows, k]
    return out


def wld_hard_batch(h_eff, y_tilde, constellations, chunk: int = 2048) -> np.ndarray:
    """Hard decisions from channel-metric-rescored candidate lists.

    One punctured decomposition per layer, candidates rescored with the
    exact channel metric, overall argmin across the union (earlier
    detection layers win ties).
    """
    h_eff = np.asarray(h_eff, dtype=complex)
    y_tilde = np.asarray(y_tilde, dtype=complex)
    t, n, _ = h_eff.shape
    out = np.empty((t, n), dtype=complex)
    for lo in range(0, t, chunk):
        hi = min(lo + chunk, t)
        hch = h_eff[lo:hi]
        ych = y_tilde[lo:hi]
        best_d = None
        best_sym = None
        for m in range(n):
            w, l = punctured_decompose_batch(hch, m)
            yt = np.einsum("tji,tj->ti", w.conj(), ych)
            perm = tuple((m + i) % n for i in range(n))
            sym, _ = detect_one_sided_batch(l, yt, constellations, perm)
            resid = ych[:, None, :] - np.einsum("tij,tqj->tqi", hch, sym)
            dh = np.sum(resid.real * resid.real + resid.imag * resid.imag, axis=2)
            k = np.argmin(dh, axis=1)
            rows = np.arange(hi - lo)
            dmin = dh[rows, k]
            smin = sym[rows, k]
            if best_d is None:
                best_d, best_sym = dmin, smin
            else:
                upd = dmin < best_d
                best_d = np.where(upd, dmin, best_d)
                best_sym = np.where(upd[:, None], smin, best_sym)
        out[lo:hi] = best_sym
    return out


def uncoded_ver_point(
    master_seed: int,
    snr_idx: int,
    snr_db: float,
    mods,
    trials: int,
    detectors=("wld", "ml"),
    chunk: int = 2048,
    threads: int = 1,
) -> dict[str, float]:
    """Vector-error rates of batched detectors at one SNR point.

    Detectors run on identical trial data (paired comparison).  Returns
    detector name -> vector error rate.
    """
    cons = tuple(make_constellation(q) for q in mods)
    runners = {"wld": wld_hard_batch, "ml": ml_hard_batch}
    chunks = [(i, min(chunk, trials - i * chunk)) for i in range((trials + chunk - 1) // chunk)]

    def run_chunk(job):
        chunk_idx, size = job
        h_eff, x, y_tilde = draw_uncoded_chunk(master_seed, snr_idx, chunk_idx, snr_db, cons, size)
        errs = {}
        for name in detectors:
            hard = runners[name](h_eff, y_tilde, cons)
            errs[name] = int(np.sum(np.any(hard != x, axis=1)))
        return errs

    parts = _reduce_chunks_jobs(run_chunk, chunks, threads)
    return {name: sum(p[name] for p in parts) / trials for name in detectors}


def _reduce_chunks_jobs(run_chunk, jobs, threads):
    if threads <= 1:
        return [run_chunk(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run_chunk, jobs))


# ---------------------------------------------------------------------------
# MU-MIMO classification Monte-Carlo


def mu_classification_rates(
    master_seed: int,
    n_tones: int,
    desired_order: int,
    interferer_order: int,
    snr_db_grid,
    scenarios: int,
    hypothesis_orders=MU_HYPOTHESIS_ORDERS,
    threads: int = 1,
) -> list[float]:
    """Correct-classification rate per SNR point.

    Noise realizations are shared across SNR points (scaled common
    random numbers), which makes the rate-vs-SNR trend monotone up to
    per-scenario granularity.
    """
    des = make_constellation(desired_order)
    intf = make_constellation(interferer_order)
    snr_db_grid = list(snr_db_grid)

    def run_chunk(bounds):
        correct = np.zeros(len(snr_db_grid), dtype=int)
        for i in range(*bounds):
            rng = trial_rng(master_seed, 0, i, CONTEXT_MUMIMO)
            re = rng.standard_normal((n_tones, 2, 2))
            im = rng.standard_normal((n_tones, 2, 2))
            h = (re + 1j * im) * np.sqrt(0.5)
            x1 = des.points[rng.integers(des.order, size=n_tones)] * des.unit_energy_scale
            x2 = intf.points[rng.integers(intf.order, size=n_tones)] * intf.unit_energy_scale
            base = np.sqrt(0.5) * (
                rng.standard_normal((n_tones, 2)) + 1j * rng.standard_normal((n_tones, 2))
            )
            signal = h[:, :, 0] * x1[:, None] + h[:, :, 1] * x2[:, None]
            for s_idx, snr_db in enumerate(snr_db_grid):
                sigma2 = 2.0 / 10.0 ** (snr_db / 10.0)
                y = signal + np.sqrt(sigma2) * base
                scn = MuScenario.create(h, y, des, sigma2, hypothesis_orders)
                cls = classify_interferer(scn)
                correct[s_idx] += int(cls.chosen.order == interferer_order)
        return correct

    bounds = [(lo, min(lo + _SWEEP_CHUNK, scenarios)) for lo in range(0, scenarios, _SWEEP_CHUNK)]
    parts = _reduce_chunks_jobs(run_chunk, bounds, threads)
    totals = np.sum(parts, axis=0)
    return [c / scenarios for c in totals]
