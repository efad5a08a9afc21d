"""Acceptance suite: one test per criterion, each printing a PASS line.

Heavy simulation results are cached and shared across criteria (the variant
ordering, ablation and scalability tests reuse each other's runs), so run
this file in one pytest session. `pytest -s tests/test_acceptance.py` shows
the per-criterion lines as they complete.
"""

import math
import time

import numpy as np
import pytest

from swarmsearch.acquisition import (
    AcquisitionConfig,
    AcquisitionContext,
    CandidatePath,
    PeerPlan,
    alpha_schedule,
    effective_penalty,
    explore_term,
    local_penalty,
)
from swarmsearch.field import Arena, case1_preset, case2_preset
from swarmsearch.gp import Dataset, GpHyperParams, GpModel, kernel, log_likelihood
from swarmsearch.harness import ExperimentConfig, execute_run
from swarmsearch.planner import PlannerConfig, WaypointPlanner

# ---------------------------------------------------------------------------
# shared run cache
# ---------------------------------------------------------------------------

_CACHE = {}


def get_run(case, variant="full", m=5, seed=0, penalty=True):
    key = (case, variant, m, seed, penalty)
    if key not in _CACHE:
        exp = ExperimentConfig(
            case=case,
            m=m,
            variant=variant,
            penalty_enabled=penalty,
            seeds=(seed,),
            final_snapshot=False,
        )
        _CACHE[key] = execute_run(exp, seed)
    return _CACHE[key]


def median(vals):
    return float(np.median(vals))


def report(num, text):
    print(f"\n[PASS] criterion {num}: {text}")


# ---------------------------------------------------------------------------
# 1. GP oracle equivalence
# ---------------------------------------------------------------------------


def naive_gp(X, y, hyper, xq):
    K = np.array([[kernel(a, b, hyper) for b in X] for a in X])
    A = K + hyper.noise_std**2 * np.eye(len(X))
    Ainv = np.linalg.inv(A)
    kq = np.array([kernel(a, xq, hyper) for a in X])
    mu = float(kq @ Ainv @ y)
    var = kernel(xq, xq, hyper) - float(kq @ Ainv @ kq)
    sign, logdet = np.linalg.slogdet(A)
    ll = float(-0.5 * y @ Ainv @ y - 0.5 * logdet - 0.5 * len(X) * np.log(2 * np.pi))
    return mu, math.sqrt(max(var, 0.0)), ll


def test_criterion_1_gp_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1001)
    for trial in range(50):
        n = int(rng.integers(1, 7))
        X = rng.uniform(-2, 2, size=(n, 2))
        y = rng.normal(size=n)
        hyper = GpHyperParams(
            float(rng.uniform(0.3, 2.0)),
            float(rng.uniform(0.3, 2.0)),
            float(rng.uniform(0.01, 0.3)),
        )
        ds = Dataset(np.arange(n, dtype=float), np.ones(n, dtype=int), X, y)
        model = GpModel(hyper, ds)
        ll_ref = None
        for xq in rng.uniform(-2, 2, size=(4, 2)):
            mu_ref, sd_ref, ll_ref = naive_gp(X, y, hyper, xq)
            mu = float(model.mean(xq[None, :])[0])
            sd = float(model.std(xq[None, :])[0])
            assert mu == pytest.approx(mu_ref, rel=1e-8, abs=1e-10)
            assert sd == pytest.approx(sd_ref, rel=1e-8, abs=1e-10)
        assert log_likelihood(ds, hyper) == pytest.approx(ll_ref, rel=1e-8)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(1, f"GP mean/std/log-likelihood match naive inversion on 50 datasets "
              f"(rel 1e-8) in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 2. acquisition unit suite
# ---------------------------------------------------------------------------


def test_criterion_2_acquisition_units():
    t0 = time.perf_counter()
    assert alpha_schedule(1.0, 3.0) == 0.5
    assert alpha_schedule(70.0, 100.0) == pytest.approx(0.9751, abs=1e-4)

    gamma = local_penalty((1.0, 1.0), (1.0, 1.0), 1.0, 0.2, 1.0, 20.0)
    assert gamma == 0.5

    hyp = GpHyperParams(0.8, 1.0, 0.05)
    rng = np.random.default_rng(1002)
    X = rng.uniform(0, 4, size=(3, 2))
    model = GpModel(hyp, Dataset(np.arange(3.0), np.ones(3), X, rng.uniform(0, 1, 3)))
    ctx_no_peers = AcquisitionContext(
        model, (1.0, 1.0), (), alpha=0.5, beta=50.0, signal_max=1.0,
        lipschitz=20.0, step_bound=1.0, x_star=(2.0, 2.0),
    )
    assert effective_penalty(ctx_no_peers, (1.5, 1.5)) == 1.0

    pos = np.array([1.2, 1.0])
    end = np.array([1.55, 1.3])
    peers = [PeerPlan((2.5, 2.5), rng.uniform(0, 4, size=(4, 2)))]
    ctx = AcquisitionContext(
        model, pos, peers, alpha=0.5, beta=50.0, signal_max=1.0,
        lipschitz=20.0, step_bound=1.0, x_star=(2.0, 2.0),
    )
    aug = model.augment(np.vstack([p.path_points for p in peers]))
    u = np.linspace(0.0, 1.0, 10_001)
    dense = np.trapezoid(aug.std(u[:, None] * end + (1 - u)[:, None] * pos), u)
    sigma = explore_term(ctx, CandidatePath(pos, end))
    assert sigma == pytest.approx(dense, rel=1e-3)

    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(2, f"alpha/penalty values exact, path integral within 1e-3 of dense "
              f"quadrature in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 3. planner constraint suite
# ---------------------------------------------------------------------------


def test_criterion_3_planner_constraints_and_brute_force():
    t0 = time.perf_counter()
    arena = Arena(0.0, 0.0, 4.0, 4.0)
    acq = AcquisitionConfig()
    rng = np.random.default_rng(1003)

    def scenario(n_obs, n_peers):
        X = arena.sample(rng, n_obs)
        data = Dataset(np.arange(n_obs, dtype=float), np.ones(n_obs, dtype=int),
                       X, rng.uniform(0, 1, n_obs))
        peers = [PeerPlan(arena.sample(rng, 1)[0], arena.sample(rng, int(rng.integers(0, 6))))
                 for _ in range(n_peers)]
        return arena.sample(rng, 1)[0], data, peers

    full = WaypointPlanner(PlannerConfig(speed=0.2, horizon=5.0), acq, arena, 1.0, 20.0, 100.0)
    sync = WaypointPlanner(
        PlannerConfig(speed=0.2, horizon=5.0, variant="sync"), acq, arena, 1.0, 20.0, 100.0
    )
    n_calls = 1000
    for trial in range(n_calls):
        planner = sync if trial % 3 == 2 else full
        pose, data, peers = scenario(int(rng.integers(2, 10)), int(rng.integers(0, 4)))
        res = planner.plan(pose, data, peers, t_now=float(rng.uniform(0, 100)),
                           seed_key=(1003, trial))
        step = float(np.linalg.norm(res.waypoint - pose))
        assert step <= 0.2 * 5.0 + 1e-9
        assert arena.contains(res.waypoint)
        if planner is sync and not res.sync_clipped:
            assert abs(step - 1.0) <= 1e-6

    # brute force comparison on 20 small scenarios
    worst = 0.0
    for trial in range(20):
        pose, data, peers = scenario(int(rng.integers(3, 8)), int(rng.integers(0, 3)))
        res = full.plan(pose, data, peers, t_now=float(rng.uniform(0, 100)),
                        seed_key=(2003, trial))
        model = full.fit_model(data, None)
        ctx = AcquisitionContext(
            model, pose, peers, alpha=res.alpha, beta=acq.beta, signal_max=1.0,
            lipschitz=20.0, step_bound=1.0,
            x_star=res.x_star if res.x_star is not None else pose,
        )
        radii = np.linspace(0.0, 1.0, 101)
        angles = np.linspace(0.0, 2 * math.pi, 101)
        rr, aa = np.meshgrid(radii, angles)
        pts = arena.clip(pose + np.column_stack([(rr * np.cos(aa)).ravel(),
                                                 (rr * np.sin(aa)).ravel()]))
        worst = max(worst, float(ctx.value_batch(pts).max()) - res.acq_value)
    assert worst <= 1e-3
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    report(3, f"{n_calls} planning calls satisfied the motion constraint; brute-force "
              f"gap {worst:.2e} <= 1e-3 on 20 scenarios; {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 4. case-1 end to end
# ---------------------------------------------------------------------------


def test_criterion_4_case1_end_to_end():
    t0 = time.perf_counter()
    runs = [get_run("case1", seed=s) for s in range(10)]
    assert all(r.termination == "source_found" for r in runs)
    assert all(r.t_achieved < 100.0 for r in runs)
    med_tau = median([r.tau for r in runs])
    med_rmse = median([r.mapping_rmse for r in runs])
    assert 0.0 <= med_tau <= 1.5
    assert med_rmse < 0.05
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    report(4, f"case1 m=5: 10/10 found before t_max; median tau {med_tau:.3f} in "
              f"[0, 1.5]; median mapping error {med_rmse:.4f} < 0.05; {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 5. variant ordering
# ---------------------------------------------------------------------------


def test_criterion_5_variant_ordering():
    t0 = time.perf_counter()
    seeds = range(5)
    lines = []
    for case in ("case1", "case2"):
        full = [get_run(case, "full", seed=s) for s in seeds]
        expl = [get_run(case, "explorative", seed=s) for s in seeds]
        exh = get_run(case, "exhaustive", seed=0)
        tau_full = median([r.tau for r in full])
        tau_expl = median([r.tau for r in expl])
        rmse_full = median([r.mapping_rmse for r in full])
        rmse_expl = median([r.mapping_rmse for r in expl])
        assert tau_expl > tau_full, f"{case}: explorative should be slower"
        assert rmse_expl <= rmse_full, f"{case}: explorative should map at least as well"
        assert exh.tau >= 5.0 * tau_full, f"{case}: exhaustive should be >= 5x slower"
        lines.append(
            f"{case}: tau full/expl/exh = {tau_full:.2f}/{tau_expl:.2f}/{exh.tau:.2f}, "
            f"rmse full/expl = {rmse_full:.3f}/{rmse_expl:.3f}"
        )
    elapsed = time.perf_counter() - t0
    assert elapsed < 1200.0
    report(5, "; ".join(lines) + f"; {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 6. penalty ablation
# ---------------------------------------------------------------------------


def test_criterion_6_penalty_ablation():
    t0 = time.perf_counter()
    seeds = range(5)
    on = [get_run("case2", "full", seed=s, penalty=True) for s in seeds]
    off = [get_run("case2", "full", seed=s, penalty=False) for s in seeds]
    tau_on = median([r.tau for r in on])
    tau_off = median([r.tau for r in off])
    assert tau_off >= tau_on
    elapsed = time.perf_counter() - t0
    assert elapsed < 900.0
    report(6, f"case2 penalty ablation: tau without penalty {tau_off:.2f} >= "
              f"with penalty {tau_on:.2f}; {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 7. scalability trend
# ---------------------------------------------------------------------------


def test_criterion_7_scalability_trend():
    t0 = time.perf_counter()
    seeds = range(5)
    m_list = [2, 5, 10, 20]
    med_tau, med_rmse, mean_plan = {}, {}, {}
    for m in m_list:
        runs = [get_run("case2", "full", m=m, seed=s) for s in seeds]
        med_tau[m] = median([r.tau for r in runs])
        med_rmse[m] = median([r.mapping_rmse for r in runs])
        mean_plan[m] = float(np.mean([np.mean(r.plan_times) for r in runs]))
    for a, b in zip(m_list, m_list[1:]):
        assert med_rmse[b] < med_rmse[a], f"mapping error should drop from m={a} to m={b}"
    assert med_tau[20] < med_tau[2]
    # wall-clock comparison: allow 5% measurement jitter on non-decreasing
    for a, b in zip(m_list, m_list[1:]):
        assert mean_plan[b] >= 0.95 * mean_plan[a]
    assert mean_plan[20] > mean_plan[2]
    elapsed = time.perf_counter() - t0
    assert elapsed < 1800.0
    report(7, f"case2 sweep: rmse {[round(med_rmse[m], 4) for m in m_list]} strictly "
              f"decreasing; tau(20)={med_tau[20]:.2f} < tau(2)={med_tau[2]:.2f}; "
              f"plan time {[round(mean_plan[m] * 1e3) for m in m_list]} ms "
              f"non-decreasing; {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 8. determinism
# ---------------------------------------------------------------------------


def test_criterion_8_determinism():
    a = get_run("case1", seed=3)
    exp = ExperimentConfig(case="case1", m=5, seeds=(3,), final_snapshot=False)
    b = execute_run(exp, 3)
    assert a.event_log_text() == b.event_log_text()
    report(8, "identical config+seed reproduces a byte-identical event log")


# ---------------------------------------------------------------------------
# 9. invariant property suites
# ---------------------------------------------------------------------------


def test_criterion_9_invariant_suites():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1009)

    # GP variance monotonicity: adding a record never raises posterior std
    for _ in range(1000):
        n = int(rng.integers(1, 8))
        hyper = GpHyperParams(float(rng.uniform(0.3, 1.5)), 1.0, float(rng.uniform(0.0, 0.2)))
        X = rng.uniform(0, 3, size=(n, 2))
        ds = Dataset(np.arange(n, dtype=float), np.ones(n, dtype=int), X, rng.normal(size=n))
        probe = rng.uniform(0, 3, size=(1, 2))
        base = GpModel(hyper, ds).std(probe)[0]
        extra = Dataset([99.0], [2], rng.uniform(0, 3, size=(1, 2)), [0.0])
        grown = GpModel(hyper, ds.merge(extra)).std(probe)[0]
        assert grown <= base + 1e-9

    # penalty monotone in distance
    for _ in range(1000):
        d1, d2 = np.sort(rng.uniform(0, 3, size=2))
        mu = float(rng.uniform(0, 1))
        sig = float(rng.uniform(0.01, 0.5))
        g1 = local_penalty((d1, 0.0), (0.0, 0.0), mu, sig, 1.0, 20.0)
        g2 = local_penalty((d2, 0.0), (0.0, 0.0), mu, sig, 1.0, 20.0)
        assert g2 >= g1

    # engine invariants harvested from cached missions
    speed_checks = 0
    knowledge_checks = 0
    clairvoyance_checks = 0
    case_speed = {"case1": 0.1, "case2": 0.2}
    for (case, variant, m, seed, penalty), res in list(_CACHE.items()):
        if variant == "exhaustive":
            continue
        rows = {}
        for t, rid, x, y, _v in res.trajectories:
            rows.setdefault(rid, []).append((t, x, y))
        for rs in rows.values():
            rs.sort()
            for (ta, xa, ya), (tb, xb, yb) in zip(rs, rs[1:]):
                if tb > ta:
                    assert math.hypot(xb - xa, yb - ya) / (tb - ta) <= case_speed[case] + 1e-9
                    speed_checks += 1
        sizes = {}
        for e in res.event_log:
            if e["event"] == "plan" and e["alpha"] is not None:
                assert e["n_data"] >= sizes.get(e["robot"], -1)
                sizes[e["robot"]] = e["n_data"]
                knowledge_checks += 1
            elif e["event"] == "deliver" and e["t_obs_max"] is not None:
                assert e["t_obs_max"] <= e["sent_t"] + 1e-9
                clairvoyance_checks += 1
    assert speed_checks >= 1000
    assert knowledge_checks >= 1000
    assert clairvoyance_checks >= 1000
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    report(9, f"variance/penalty monotonicity 1000 trials each; speed bound "
              f"({speed_checks}), knowledge growth ({knowledge_checks}), "
              f"no-clairvoyance ({clairvoyance_checks}) hold on all cached runs; "
              f"{elapsed:.0f}s")
