import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mimodet import (
    PuncturedDecomposition,
    build_slicer_table,
    detect_one_sided,
    distance_constants,
    exhaustive_axis_argmin,
    hard_slice,
    make_constellation,
    punctured_decompose,
    rescore_candidates,
    soft_slice,
    transform_observation,
)
from mimodet.detcore import detect_one_sided_batch

RNG = np.random.default_rng


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def eye_decomp(l, layer=0):
    n = l.shape[0]
    perm = tuple((layer + i) % n for i in range(n))
    return PuncturedDecomposition(w=np.eye(n, dtype=complex), l=np.asarray(l, dtype=complex),
                                  layer=layer, perm=perm)


# --- constants -------------------------------------------------------------

def test_constants_trivial():
    l = np.array([[1, 0], [0, 1]], dtype=complex)
    k = distance_constants(l, np.zeros(2, dtype=complex))
    assert k.enum_quad == 1 and k.slice_quad[0] == 1
    assert k.enum_lin_re == 0 and k.enum_lin_im == 0
    assert k.cross_re[0] == 0 and k.cross_im[0] == 0
    assert k.slice_lin_re[0] == 0 and k.slice_lin_im[0] == 0


def test_constants_hand_example():
    l = np.array([[1, 0], [1 + 1j, 2]], dtype=complex)
    k = distance_constants(l, np.array([1.0, 2.0], dtype=complex))
    assert (k.enum_quad, k.enum_lin_re, k.enum_lin_im) == (3.0, -6.0, 4.0)
    assert (k.slice_quad[0], k.cross_re[0], k.cross_im[0]) == (4.0, 4.0, -4.0)
    assert (k.slice_lin_re[0], k.slice_lin_im[0]) == (-8.0, 0.0)


def test_constants_sum_degenerates():
    l = np.eye(4, dtype=complex)
    l[1, 0] = 0.5 - 0.25j
    k4 = distance_constants(l, np.zeros(4, dtype=complex))
    l2 = l[:2, :2]
    k2 = distance_constants(l2, np.zeros(2, dtype=complex))
    assert k4.enum_quad == k2.enum_quad


# --- hard slicing ----------------------------------------------------------

def test_hard_slice_examples():
    ax4 = make_constellation(16).real_axis
    assert hard_slice(ax4, 0.3, 1.0) == 1.0
    assert hard_slice(ax4, 0.0, 1.0) == 1.0  # boundary tie goes up
    ax16 = make_constellation(256).real_axis
    assert hard_slice(ax16, 31.0, 2.0) == 15.0
    assert hard_slice(ax16, -1e9, 2.0) == -15.0


def test_hard_slice_matches_nearest_point():
    rng = RNG(0)
    ax = make_constellation(64).real_axis
    for _ in range(2000):
        beta = rng.uniform(0.05, 4.0)
        z = rng.normal(0, 10)
        got = hard_slice(ax, z, beta)
        ref = ax.levels[np.argmin((z - beta * ax.levels) ** 2)]
        assert got == ref


# --- soft boundaries -------------------------------------------------------

def test_table_zero_priors_reduces_to_midpoints():
    ax = make_constellation(64).real_axis
    beta = 1.7
    tab = build_slicer_table(ax, beta * beta, -0.4, np.zeros(3))
    assert tab.reachable.all()
    # interval bounds in query space map back to the scaled midpoints
    mids = beta * beta * (ax.levels[:-1] + ax.levels[1:])
    assert np.allclose(np.sort(-tab.breakpoints - tab.offset), np.sort(mids))


def test_two_pam_scalar_map_slicer():
    ax = make_constellation(4).real_axis
    rng = RNG(1)
    for _ in range(500):
        beta = rng.uniform(0.1, 3.0)
        lam = rng.normal(0, 4, 1)
        g = rng.normal(0, 3)
        tab = build_slicer_table(ax, beta * beta, g, lam)
        z = rng.normal(0, 4)
        u = -2.0 * beta * z - g  # query formed from the residual
        want = 1.0 if 2 * beta * z + lam[0] > 0 else -1.0
        assert soft_slice(tab, u) == want


def test_strong_prior_still_picks_optimum():
    # prior of +10 on the single bit keeps +1 even for negative residuals
    ax = make_constellation(4).real_axis
    beta = 1.0
    tab = build_slicer_table(ax, 1.0, 0.0, np.array([10.0]))
    z = -2.0
    u = -2.0 * beta * z
    assert 2 * beta * z + 10.0 > 0
    assert soft_slice(tab, u) == 1.0


@pytest.mark.parametrize("order", [4, 16, 64, 256])
def test_soft_slice_matches_bruteforce(order):
    ax = make_constellation(order).real_axis
    rng = RNG(order)
    for _ in range(2000):
        quad = rng.uniform(0.01, 5)
        off = rng.normal(0, 5)
        lam = rng.normal(0, 3, ax.bits_per_level)
        tab = build_slicer_table(ax, quad, off, lam)
        u = rng.normal(0, 20)
        assert soft_slice(tab, u) == exhaustive_axis_argmin(ax, quad, off, u, lam)


def test_soft_slice_partition_covers_reals():
    ax = make_constellation(256).real_axis
    rng = RNG(9)
    for _ in range(50):
        lam = rng.normal(0, 5, 4)
        tab = build_slicer_table(ax, rng.uniform(0.1, 2), rng.normal(), lam)
        for u in rng.normal(0, 30, 200):
            inside = (tab.lo <= u) & (u < tab.hi)
            assert inside.sum() == 1
            assert soft_slice(tab, u) == ax.levels[np.argmax(inside)]


def test_dominated_levels_never_selected():
    ax = make_constellation(256).real_axis
    rng = RNG(11)
    saw_dominated = False
    for _ in range(300):
        lam = rng.normal(0, 8, 4)
        quad = rng.uniform(0.05, 0.5)
        tab = build_slicer_table(ax, quad, 0.0, lam)
        dominated = set(np.flatnonzero(~tab.reachable))
        saw_dominated = saw_dominated or bool(dominated)
        for u in rng.normal(0, 15, 50):
            lvl = exhaustive_axis_argmin(ax, quad, 0.0, u, lam)
            assert ax.levels.tolist().index(lvl) not in dominated
    assert saw_dominated  # strong priors must actually dominate sometimes


def test_soft_slice_zero_priors_equals_hard_slice():
    rng = RNG(12)
    for order in (4, 16, 64, 256):
        ax = make_constellation(order).real_axis
        for _ in range(300):
            beta = rng.uniform(0.1, 3.0)
            g = rng.normal(0, 2)
            tab = build_slicer_table(ax, beta * beta, g, np.zeros(ax.bits_per_level))
            z = rng.normal(0, 8)
            u = -2.0 * beta * z - g
            assert soft_slice(tab, u) == hard_slice(ax, z, beta)


# --- one-sided detection ---------------------------------------------------

def test_detect_bpsk_hand_case():
    cons = (make_constellation(2), make_constellation(2))
    d = eye_decomp(np.array([[1, 0], [1, 1]]))
    cl = detect_one_sided(d, np.array([1, 2], dtype=complex), cons)
    assert cl.distances.tolist() == [0.0, 8.0]
    assert cl.symbols[:, 0].tolist() == [1, -1]
    assert cl.symbols[:, 1].tolist() == [1, 1]
    assert cl.dropped_const == 5.0


def test_detect_zero_noise_transmitted_attains_minimum():
    rng = RNG(13)
    cons = tuple(make_constellation(q) for q in (16, 64, 4))
    for _ in range(50):
        h = crandn(rng, 3, 3)
        x = np.array([c.points[rng.integers(c.order)] for c in cons])
        for m in range(3):
            d = punctured_decompose(h, m)
            y = transform_observation(d, h @ x)
            cl = detect_one_sided(d, y, cons)
            i = np.flatnonzero(cl.symbols[:, m] == x[m])[0]
            assert np.allclose(cl.symbols[i], x)
            assert abs(cl.distances[i]) <= 1e-9 * max(1.0, np.sum(np.abs(y) ** 2))
            assert cl.distances.min() >= cl.distances[i] - 1e-9


def test_detect_matches_per_entry_bruteforce_with_priors():
    rng = RNG(14)
    cons = (make_constellation(64), make_constellation(64))
    q = 6
    for _ in range(30):
        h = crandn(rng, 2, 2)
        yt = crandn(rng, 2) * 3
        priors = [rng.normal(0, 2, q), rng.normal(0, 2, q)]
        d = punctured_decompose(h, 0)
        y = transform_observation(d, yt)
        cl = detect_one_sided(d, y, cons, priors)
        bias1 = cons[0].point_bits @ priors[0]
        bias2 = cons[1].point_bits @ priors[1]
        for i in (0, 17, 40, 63):
            x1 = cl.symbols[i, 0]
            vals = (
                np.abs(y[0] - d.l[0, 0] * x1) ** 2
                - bias1[i]
                + np.abs(y[1] - d.l[1, 0] * x1 - d.l[1, 1] * cons[1].points) ** 2
                - bias2
            )
            assert cl.distances[i] == pytest.approx(vals.min(), rel=1e-9)


def test_detect_mode_equivalence_bit_exact():
    rng = RNG(15)
    cons = tuple(make_constellation(q) for q in (16, 4, 64))
    for trial in range(40):
        h = crandn(rng, 3, 3)
        yt = crandn(rng, 3) * 2
        priors = [rng.normal(0, 2, c.bits_per_symbol) for c in cons]
        d = punctured_decompose(h, trial % 3)
        y = transform_observation(d, yt)
        a = detect_one_sided(d, y, cons, priors, mode="slicer")
        b = detect_one_sided(d, y, cons, priors, mode="exhaustive")
        assert np.array_equal(a.symbols, b.symbols)
        assert np.array_equal(a.distances, b.distances)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), scale=st.floats(0.25, 8.0))
def test_detect_scaling_invariance(seed, scale):
    rng = RNG(seed)
    cons = (make_constellation(16), make_constellation(16))
    h = crandn(rng, 2, 2)
    yt = crandn(rng, 2)
    d = punctured_decompose(h, 0)
    y = transform_observation(d, yt)
    base = detect_one_sided(d, y, cons)
    scaled_d = PuncturedDecomposition(w=d.w, l=d.l * scale, layer=d.layer, perm=d.perm)
    scaled = detect_one_sided(scaled_d, y * scale, cons)
    assert np.array_equal(base.symbols, scaled.symbols)
    assert np.allclose(scaled.distances, scale * scale * base.distances, rtol=1e-12)
    assert np.argmin(scaled.distances) == np.argmin(base.distances)


def test_detect_relative_form_bookkeeping():
    # absolute distance minus the dropped constant equals the expanded form
    rng = RNG(16)
    cons = (make_constellation(16), make_constellation(16))
    h = crandn(rng, 2, 2)
    yt = crandn(rng, 2)
    d = punctured_decompose(h, 0)
    y = transform_observation(d, yt)
    cl = detect_one_sided(d, y, cons)
    assert cl.dropped_const == pytest.approx(np.sum(np.abs(y) ** 2), rel=1e-12)
    direct = np.array([
        np.sum(np.abs(y - d.l @ cl.symbols[i]) ** 2) for i in range(len(cl))
    ])
    assert np.allclose(cl.distances, direct, rtol=1e-9)


def test_detect_input_validation():
    cons = (make_constellation(4), make_constellation(4))
    d = eye_decomp(np.eye(2))
    with pytest.raises(ValueError):
        detect_one_sided(d, np.zeros(3, dtype=complex), cons)
    with pytest.raises(ValueError):
        detect_one_sided(d, np.zeros(2, dtype=complex), cons, mode="fast")
    with pytest.raises(ValueError):
        detect_one_sided(d, np.zeros(2, dtype=complex), cons, priors=[np.zeros(3), None])


def test_batch_kernel_bit_exact_vs_scalar():
    rng = RNG(17)
    cons = tuple(make_constellation(q) for q in (64, 16, 4, 64))
    ls, ys = [], []
    for _ in range(20):
        h = crandn(rng, 4, 4)
        d = punctured_decompose(h, 1)
        ls.append(d.l)
        ys.append(transform_observation(d, crandn(rng, 4)))
    l = np.stack(ls)
    y = np.stack(ys)
    sym, dist = detect_one_sided_batch(l, y, cons, perm=(1, 2, 3, 0))
    for t in range(20):
        d = PuncturedDecomposition(w=np.eye(4, dtype=complex), l=l[t], layer=1, perm=(1, 2, 3, 0))
        cl = detect_one_sided(d, y[t], cons)
        assert np.array_equal(cl.symbols, sym[t])
        assert np.array_equal(cl.distances, dist[t])


# --- rescoring -------------------------------------------------------------

def test_rescore_two_layer_preserves_everything():
    rng = RNG(18)
    cons = (make_constellation(16), make_constellation(16))
    for _ in range(50):
        h = crandn(rng, 2, 2)
        yt = crandn(rng, 2)
        priors = [rng.normal(0, 2, 4), rng.normal(0, 2, 4)]
        d = punctured_decompose(h, 0)
        cl = detect_one_sided(d, transform_observation(d, yt), cons, priors)
        rs = rescore_candidates(cl, h, yt)
        # unitary case: channel metric equals the factored metric exactly
        assert np.allclose(rs.distances, cl.distances, rtol=1e-9, atol=1e-9)
        assert np.argmin(rs.distances) == np.argmin(cl.distances)
        assert rs.distance_mode == "H"


def test_rescore_zero_noise_hits_zero():
    rng = RNG(19)
    cons = (make_constellation(4),) * 3
    h = crandn(rng, 3, 3)
    x = np.array([c.points[2] for c in cons])
    yt = h @ x
    d = punctured_decompose(h, 0)
    cl = detect_one_sided(d, transform_observation(d, yt), cons)
    rs = rescore_candidates(cl, h, yt)
    i = np.flatnonzero(cl.symbols[:, 0] == x[0])[0]
    assert abs(rs.distances[i]) <= 1e-9 * np.sum(np.abs(yt) ** 2)


def test_rescore_matches_direct_channel_metric():
    rng = RNG(20)
    cons = tuple(make_constellation(q) for q in (16, 4, 16, 4))
    h = crandn(rng, 4, 4)
    yt = crandn(rng, 4) * 2
    priors = [rng.normal(0, 1.5, c.bits_per_symbol) for c in cons]
    d = punctured_decompose(h, 2)
    cl = detect_one_sided(d, transform_observation(d, yt), cons, priors)
    rs = rescore_candidates(cl, h, yt)
    for i in (0, 5, 11, 15):
        x = cl.symbols[i]
        bias = sum(
            float(c.bits_of_points(x[j]) @ priors[j]) for j, c in enumerate(cons)
        )
        ref = np.sum(np.abs(yt - h @ x) ** 2) - bias
        assert rs.distances[i] == pytest.approx(ref, rel=1e-9, abs=1e-9)
