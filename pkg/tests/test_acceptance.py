"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The heavy lattice
criteria (2, 4, 5, 9) dominate the runtime; the whole suite stays inside
a few minutes on two cores.
"""

import math
import time

import numpy as np
import pytest

from eggsum import (
    BlockSpec,
    CrossBetween,
    CrossWithin,
    DomainSpec,
    ExpansionKind,
    SelfAdjoint,
    Verdict,
    asymptotic_eigenvalue,
    brute_shell_sums,
    eigenvalue,
    eigenvalue_bulk,
    empirical_threshold,
    exact_ratio,
    expansion_value,
    log_norm,
    log_norm_omega1,
    mc_norm_oracle,
    module_threshold,
    predicted_threshold,
    reduce_group,
    verify_expansion,
)
from eggsum.summability import max_predicted_over_kinds
from eggsum.zetalab import critical_b, family_of

from helpers import (
    FAMILY_SHAPES,
    domain_with_all_kinds,
    random_domain,
    random_family_spec,
    with_offset_b,
)

DISK = DomainSpec.single_block([1.0])
BALL2 = DomainSpec.single_block([1.0, 1.0])
SELF = SelfAdjoint(0, 0)


def _record(num: int, label: str, ok: bool, detail: str) -> None:
    print(f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'}  {label}: {detail}")
    assert ok, f"criterion {num} failed: {detail}"


def test_criterion_01_disk_cutoff():
    t0 = time.time()
    th = empirical_threshold(DISK, SELF, 0.25, 1.0, tol=0.1, N=100_000)
    idx = np.arange(0, 10_001)[:, np.newaxis]
    mags = np.abs(eigenvalue_bulk(DISK, SELF, idx))
    i = idx[:, 0].astype(float)
    worst = float(np.max(np.abs(mags - 1.0 / ((i + 1.0) * (i + 2.0)))))
    elapsed = time.time() - t0
    ok = abs(th - 0.5) <= 0.1 and worst <= 1e-12 and elapsed < 10.0
    _record(
        1,
        "disk cut-off",
        ok,
        f"threshold={th:.4f} (want 0.5+-0.1), closed-form dev={worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_02_ball_cutoff():
    t0 = time.time()
    th_self = empirical_threshold(BALL2, SELF, 1.0, 3.5, tol=0.1, N=3000)
    th_cross = empirical_threshold(BALL2, CrossWithin(0, 0, 1), 1.0, 3.5, tol=0.1, N=3000)
    elapsed = time.time() - t0
    ok = 1.8 <= th_self <= 2.2 and 1.8 <= th_cross <= 2.2 and elapsed < 60.0
    _record(
        2,
        "ball cut-offs",
        ok,
        f"self={th_self:.4f}, cross={th_cross:.4f} (want [1.8,2.2]), {elapsed:.1f}s",
    )


def test_criterion_03_weak_pseudoconvexity():
    dom = DomainSpec.single_block([3.0, 1.0])
    pred_self = predicted_threshold(dom, SELF)
    pred_cross = predicted_threshold(dom, CrossWithin(0, 0, 1))
    th_self = empirical_threshold(dom, SELF, 1.5, 4.5, tol=0.1, N=3000)
    th_cross = empirical_threshold(dom, CrossWithin(0, 0, 1), 1.0, 3.5, tol=0.1, N=3000)
    ok = (
        pred_self == 3.0
        and pred_cross == 2.0
        and 2.7 <= th_self <= 3.3
        and 1.8 <= th_cross <= 2.2
    )
    _record(
        3,
        "boundary geometry shifts the cut-off",
        ok,
        f"self={th_self:.4f} (want [2.7,3.3] vs pred 3), cross={th_cross:.4f} (want [1.8,2.2] vs pred 2)",
    )


def test_criterion_04_outer_power_effect():
    t0 = time.time()
    dom = DomainSpec(
        blocks=(BlockSpec((1.0,), 2.0), BlockSpec((1.0,), 1.0), BlockSpec((1.0,), 1.0))
    )
    pred = predicted_threshold(dom, SELF)
    th = empirical_threshold(dom, SELF, 2.0, 6.5, tol=0.1, N=600)
    elapsed = time.time() - t0
    ok = pred == 4.0 and 3.6 <= th <= 4.4 and elapsed < 300.0
    _record(
        4,
        "outer power raises the self-commutator cut-off",
        ok,
        f"predicted={pred}, empirical={th:.4f} (want [3.6,4.4]), {elapsed:.1f}s",
    )


def test_criterion_05_cross_within_outer_power():
    dom = DomainSpec(blocks=(BlockSpec((1.0, 1.0), 4.0), BlockSpec((1.0,), 1.0)))
    pred = predicted_threshold(dom, CrossWithin(0, 0, 1))
    th = empirical_threshold(dom, CrossWithin(0, 0, 1), 2.0, 6.5, tol=0.1, N=600)
    ok = pred == 4.0 and 3.6 <= th <= 4.4
    _record(
        5,
        "cross-within cut-off with outer power",
        ok,
        f"predicted={pred}, empirical={th:.4f} (want [3.6,4.4])",
    )


def test_criterion_06_module_threshold_consistency():
    rng = np.random.default_rng(606)
    bad = 0
    for _ in range(100):
        dom = random_domain(rng, max_dim=5)
        if module_threshold(dom) != max_predicted_over_kinds(dom):
            bad += 1
    _record(
        6,
        "module cut-off equals the worst per-kind cut-off",
        bad == 0,
        f"{100 - bad}/100 random domains agree exactly",
    )


def test_criterion_07_norm_oracle():
    rng = np.random.default_rng(707)
    worst_sig = 0.0
    for trial in range(20):
        dom = random_domain(rng, max_dim=2)
        idx = [int(v) for v in rng.integers(0, 5, dom.dimension)]
        est, err = mc_norm_oracle(dom, idx, 10_000_000, seed=7000 + trial)
        sig = abs(est - math.exp(log_norm(dom, idx))) / err
        worst_sig = max(worst_sig, sig)
    spec_dev = 0.0
    for _ in range(200):
        m = int(rng.integers(1, 5))
        p = tuple(float(v) for v in np.round(rng.uniform(0.5, 4.0, m), 3))
        idx = [int(v) for v in rng.integers(0, 40, m)]
        spec_dev = max(
            spec_dev,
            abs(log_norm(DomainSpec.single_block(p, a=1.0), idx) - log_norm_omega1(p, idx)),
        )
    repar_dev = 0.0
    for _ in range(200):
        K = int(rng.integers(1, 4))
        ps = np.round(rng.uniform(0.5, 3.0, K), 3)
        As = np.round(rng.uniform(0.5, 3.0, K), 3)
        d1 = DomainSpec(blocks=tuple(BlockSpec((float(p),), float(a)) for p, a in zip(ps, As)))
        d2 = DomainSpec(blocks=tuple(BlockSpec((float(p * a),), 1.0) for p, a in zip(ps, As)))
        idx = [int(v) for v in rng.integers(0, 40, K)]
        repar_dev = max(repar_dev, abs(log_norm(d1, idx) - log_norm(d2, idx)))
    ok = worst_sig <= 4.0 and spec_dev <= 1e-12 and repar_dev <= 1e-12
    _record(
        7,
        "closed-form norms vs Monte-Carlo and structural identities",
        ok,
        f"worst {worst_sig:.2f} sigma over 20 domains; "
        f"specialization dev {spec_dev:.2e}, reparametrization dev {repar_dev:.2e}",
    )


def test_criterion_08_gamma_expansions():
    # exact_ratio carries ~3e-15 absolute noise (double precision); error
    # values at or below that floor are unresolvable, so ratio checks only
    # apply to pairs where both errors clear it
    floor = 4e-15
    rng = np.random.default_rng(7)
    xs = np.array([64.0 * 2**j for j in range(7)])
    lo, hi = 1.0, 0.0
    violations = 0
    checked = 0
    for _ in range(100):
        a, b = rng.uniform(0.2, 3.0, 2)
        kinds = [
            ExpansionKind("R1", a, b),
            ExpansionKind("R2", a),
            ExpansionKind("R3", a, b),
            ExpansionKind("R4", a),
            ExpansionKind("R5", a, b),
        ]
        for kind in kinds:
            errs = np.abs(
                np.asarray(exact_ratio(kind, xs)) - np.asarray(expansion_value(kind, xs, 2))
            )
            resolvable = (errs[1:] > floor) & (errs[:-1] > floor)
            assert resolvable.sum() >= 3, (kind, errs)
            ratios = errs[1:][resolvable] / errs[:-1][resolvable]
            lo, hi = min(lo, ratios.min()), max(hi, ratios.max())
            checked += 1
            if np.any(ratios > 1.0) or np.any(ratios < 1.0 / 16.0):
                violations += 1
    unit = ExpansionKind("R3", 1.0, 1.0)
    printed = verify_expansion(unit, 2, xs, use_printed_r3=True)
    composed = verify_expansion(unit, 2, xs)
    printed_fails = printed.decay_exponent <= 2.2 and composed.decay_exponent >= 2.8
    ok = violations == 0 and printed_fails
    _record(
        8,
        "order-2 truncation errors decay cubically",
        ok,
        f"error ratios in [{lo:.3f},{hi:.3f}] (band [1/16,1]), "
        f"{violations} violations of {checked} checks; "
        f"four-Gamma printed quadratic coefficient decays at exponent "
        f"{printed.decay_exponent:.2f} (composed {composed.decay_exponent:.2f}): "
        f"printed coefficient {composed.r3_coefficients['printed']:.0f} vs "
        f"composed {composed.r3_coefficients['composed']:.0f} at a=b=1",
    )


def test_criterion_09_zeta_verdict_suites():
    t0 = time.time()
    rng = np.random.default_rng(909)
    fails = []

    for trial in range(50):
        shape = FAMILY_SHAPES[trial % len(FAMILY_SHAPES)]
        spec = with_offset_b(random_family_spec(rng, shape), -0.5)
        rep = brute_shell_sums(spec, 5000)
        if rep.verdict is not Verdict.DIVERGES:
            fails.append(("necessity", shape, spec))

    for trial in range(50):
        shape = FAMILY_SHAPES[trial % len(FAMILY_SHAPES)]
        spec = with_offset_b(random_family_spec(rng, shape), 0.5)
        if not family_of(spec).sharp:
            fails.append(("side-condition", shape, spec))
            continue
        rep = brute_shell_sums(spec, 5000)
        if rep.verdict is not Verdict.CONVERGES:
            fails.append(("sufficiency", shape, spec))

    for trial in range(30):
        spec = random_family_spec(rng, "fresh-group")
        off = -0.5 if trial % 2 == 0 else 0.5
        full = with_offset_b(spec, off)
        red = reduce_group(full)
        if critical_b(red) != pytest.approx(critical_b(full), abs=1e-12):
            fails.append(("reduction-critical", spec, off))
            continue
        if brute_shell_sums(full, 5000).verdict is not brute_shell_sums(red, 5000).verdict:
            fails.append(("reduction-verdict", spec, off))

    elapsed = time.time() - t0
    ok = not fails and elapsed < 300.0
    _record(
        9,
        "zeta series verdict suites (50 + 50 + 30)",
        ok,
        f"{130 - len(fails)}/130 pass, {elapsed:.1f}s" + (f"; fails: {fails[:3]}" if fails else ""),
    )


def _ray_pattern(rng, dom, kind, d):
    for _ in range(64):
        v = rng.integers(1, 4, size=d).astype(float)
        if not isinstance(kind, CrossWithin) or dom.blocks[kind.block].a >= 1.0:
            return v
        blk = dom.blocks[kind.block]
        t_const = 1.0 / blk.a**2 - 1.0
        x = v[0] + v[1] + sum(v[j] / blk.p[j] for j in range(2, blk.size))
        pos = blk.size
        big_l = 0.0
        for b in dom.blocks[1:]:
            big_l += sum(v[pos + j] / (b.a * b.p[j]) for j in range(b.size))
            pos += b.size
        # stay away from the ray set where the a<1 cross asymptotic vanishes
        if abs(x - t_const * big_l) >= 0.25 * x:
            return v
    raise AssertionError("no admissible ray pattern found")


def test_criterion_10_ray_asymptotics():
    rng = np.random.default_rng(1010)
    worst = 0.0
    for _ in range(10):
        dom = domain_with_all_kinds(rng)
        d = dom.dimension
        for kind in (SELF, CrossWithin(0, 0, 1), CrossBetween(0, 0, 1, 0)):
            v = _ray_pattern(rng, dom, kind, d)
            ratios = []
            for t in (256, 512, 1024):
                idx = [int(t * x) for x in v]
                ratios.append(
                    abs(eigenvalue(dom, kind, idx)) / asymptotic_eigenvalue(dom, kind, idx)
                )
            worst = max(
                worst,
                abs(ratios[1] / ratios[0] - 1.0),
                abs(ratios[2] / ratios[1] - 1.0),
            )
    ok = worst <= 0.05
    _record(
        10,
        "eigenvalue/asymptotic ratio stability along rays",
        ok,
        f"worst drift {worst:.4f} under doubling at t >= 256 (budget 0.05)",
    )
