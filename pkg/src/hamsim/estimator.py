"""Monte Carlo observable estimation for compiled randomized plans.

Estimators draw whole batches of plan randomness from streams derived as
(seed, stream labels, variant, chunk), evolve all sampled trajectories of
a batch segment-by-segment with rows grouped by drawn operator, and
simulate shot readout binomially from exact expectations. Reduction order
is fixed by variant and chunk index, so reports are bit-identical for any
worker count. The exhaustive *_exact functions replace each random draw by
a weighted enumeration; they are the unbiasedness oracles for the sampled
paths.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from math import ceil, comb, sqrt

import numpy as np

from ._pauli import pauli_action
from ._rng import derived_rng
from .compiler import (
    CorrectionTerm,
    GatePlan,
    TimeOp,
    _beta_weights,
    correction_terms,
    randomized_trotter_plan,
    trotter_plan,
)
from .errors import BudgetOverflow, CombinatorialCap
from .hamiltonian import HamiltonianModel, tau
from .statevector import (
    Observable,
    expectation,
    prepare_plus_input,
    run_plan,
)

# Stream labels separating the independent sampling contexts under one seed.
_STREAM_BASELINE = 0
_STREAM_BUCKET = 1
_STREAM_ALL_ORDER = 2
_STREAM_TROTTER = 3
_SUB_PLAN = 0
_SUB_SHOT = 1

ENUMERATION_CAP = 10**6
_BATCH_CHUNK = 1 << 15


def _worker_count(explicit: int | None) -> int:
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("HAMSIM_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _map_indexed(fn, count: int, threads: int) -> list:
    """fn(i) for i in range(count), order-preserving, optionally threaded."""
    if threads <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


@dataclass(frozen=True)
class EstimatorConfig:
    """Budgets, seed, and readout selection for one estimation run.

    observable may be an axes string or an Observable; only its axes are
    used, the ancilla-X flag is chosen by context (corrections measure the
    ancilla-dressed operator, baselines measure the system operator).
    bucket_samples/bucket_shots override counts per n_vec; the multiplier
    map scales the defaults instead.
    """

    n_segments: int
    order: int = 1
    n_sample_0: int = 100
    n_shot_0: int = 100
    seed: int = 42
    observable: object | None = None
    system_zero: bool = False
    bucket_samples: dict = field(default_factory=dict)
    bucket_shots: dict = field(default_factory=dict)
    bucket_sample_multiplier: dict = field(default_factory=dict)
    circuit_cap: int = 10**7
    threads: int | None = None

    def __post_init__(self):
        if self.n_segments < 1:
            raise ValueError("segment count must be >= 1")
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.order > self.n_segments:
            raise ValueError("order must not exceed the segment count")
        if self.n_sample_0 < 1 or self.n_shot_0 < 1:
            raise ValueError("sample and shot counts must be >= 1")

    def observable_axes(self, model: HamiltonianModel) -> str:
        obs = self.observable
        if obs is None:
            return "Z" + "I" * (model.n_qubits - 1)
        axes = obs.axes if isinstance(obs, Observable) else str(obs)
        if len(axes) != model.n_qubits:
            raise ValueError("observable width does not match the model")
        return axes.upper()

    def n_sample(self, n_vec: tuple) -> int:
        if n_vec in self.bucket_samples:
            return max(1, int(self.bucket_samples[n_vec]))
        mult = self.bucket_sample_multiplier.get(n_vec, 1.0)
        return max(1, ceil(self.n_sample_0 * mult))

    def n_shot(self, n_vec: tuple) -> int:
        if n_vec in self.bucket_shots:
            return max(1, int(self.bucket_shots[n_vec]))
        return self.n_shot_0


@dataclass
class EstimateReport:
    """Estimate with its decomposition: value = baseline + sum of buckets."""

    method: str
    value: float
    baseline: float
    bucket_values: dict
    stderr: float
    plan_count: int
    shot_count: int
    seed: int
    budgets: dict
    exact_reference: float | None = None

    def to_json_dict(self) -> dict:
        out = {
            "method": self.method,
            "value": self.value,
            "baseline": self.baseline,
            "buckets": {
                ",".join(map(str, key)): val for key, val in self.bucket_values.items()
            },
            "stderr": self.stderr,
            "plan_count": self.plan_count,
            "shot_count": self.shot_count,
            "seeds": {"master": self.seed},
            "budgets": self.budgets,
        }
        if self.exact_reference is not None:
            out["exact_reference"] = self.exact_reference
        return out


# ---------------------------------------------------------------------------
# Batched trajectory engine shared by the sampled estimators.

class _BatchContext:
    """Precomputed Pauli actions and the initial ancilla-extended state."""

    def __init__(self, model: HamiltonianModel, observable_axes: str, system_zero: bool):
        n = model.n_qubits
        self.model = model
        self.half = 1 << n
        self.signs = [term.sign for term in model.terms]
        self.sys_actions = [pauli_action(term.axes, width=n) for term in model.terms]
        # time ops act on the system inside both ancilla blocks at once
        self.full_actions = [
            pauli_action(term.axes, width=n + 1, start=1) for term in model.terms
        ]
        self.obs_action = pauli_action(observable_axes, width=n)
        self.init = prepare_plus_input(n, system_zero=system_zero).amplitudes

    def fresh(self, m: int) -> np.ndarray:
        return np.tile(self.init, (m, 1))

    def rotate_rows(self, states, rows, ell0: int, tau_angle: float) -> None:
        """e^{i sign tau P} on the full register for the given rows."""
        theta = self.signs[ell0] * tau_angle
        sub = states[rows]
        states[rows] = np.cos(theta) * sub + 1j * np.sin(theta) * self.full_actions[
            ell0
        ].apply(sub)

    def swift_rows(self, states, rows, ell0: int, b: int) -> None:
        """One swift-operator variant on the given rows."""
        half = self.half
        action = self.sys_actions[ell0]
        sign = self.signs[ell0]
        sub = states[rows]
        if b == 0:
            sub[:, half:] = 1j * sign * action.apply(sub[:, half:])
        else:
            sub[:, :half] = sign * action.apply(sub[:, :half])
            sub[:, half:] = -1j * sub[:, half:]
        states[rows] = sub

    def expectations(self, states, ancilla_x: bool) -> np.ndarray:
        half = self.half
        lower, upper = states[:, :half], states[:, half:]
        q_low = self.obs_action.apply(lower)
        q_up = self.obs_action.apply(upper)
        if ancilla_x:
            vals = np.einsum("ij,ij->i", lower.conj(), q_up)
            vals = vals + np.einsum("ij,ij->i", upper.conj(), q_low)
        else:
            vals = np.einsum("ij,ij->i", lower.conj(), q_low)
            vals = vals + np.einsum("ij,ij->i", upper.conj(), q_up)
        return vals.real


def _shot_means(vals: np.ndarray, n_shot: int, rng) -> np.ndarray:
    """Binomial readout: per-row mean of n_shot simulated +/-1 outcomes."""
    p_plus = np.clip(0.5 * (1.0 + vals), 0.0, 1.0)
    hits = rng.binomial(n_shot, p_plus)
    return 2.0 * hits / n_shot - 1.0


def _chunk_sizes(total: int):
    start = 0
    idx = 0
    while start < total:
        size = min(_BATCH_CHUNK, total - start)
        yield idx, size
        start += size
        idx += 1


def _qdrift_chunk(ctx: _BatchContext, tau_angle, n_segments, m, n_shot, rng):
    model = ctx.model
    states = ctx.fresh(m)
    ells = rng.choice(model.n_terms, size=(m, n_segments), p=model.probs)
    for seg in range(n_segments):
        col = ells[:, seg]
        for ell0 in range(model.n_terms):
            rows = np.flatnonzero(col == ell0)
            if rows.size:
                ctx.rotate_rows(states, rows, ell0, tau_angle)
    return _shot_means(ctx.expectations(states, ancilla_x=False), n_shot, rng)


def _variant_chunk(
    ctx: _BatchContext, tau_angle, n_segments, term, s_vec, b_vecs, m, n_shot, rng
):
    """One chunk of sampled correction circuits for a fixed (s, b) variant.

    Draw order is fixed: block positions, filler indices per segment, then
    per-part indices, then shots. Positions are uniform sorted k-subsets;
    part j draws iid indices when s_j = 0 and one shared index when s_j = 1.
    """
    model = ctx.model
    k = term.k
    states = ctx.fresh(m)
    sigma = np.sort(np.argsort(rng.random((m, n_segments)), axis=1)[:, :k], axis=1)
    seg_ells = rng.choice(model.n_terms, size=(m, n_segments), p=model.probs)
    part_ells = []
    for s, n_j in zip(s_vec, term.n_vec):
        if s == 0:
            part_ells.append(rng.choice(model.n_terms, size=(m, n_j), p=model.probs))
        else:
            one = rng.choice(model.n_terms, size=(m, 1), p=model.probs)
            part_ells.append(np.repeat(one, n_j, axis=1))
    for seg in range(n_segments):
        is_block = np.zeros(m, dtype=bool)
        for j in range(k):
            rows_j = np.flatnonzero(sigma[:, j] == seg)
            if not rows_j.size:
                continue
            is_block[rows_j] = True
            for step, b in enumerate(b_vecs[j]):
                draws = part_ells[j][rows_j, step]
                for ell0 in range(model.n_terms):
                    rows = rows_j[draws == ell0]
                    if rows.size:
                        ctx.swift_rows(states, rows, ell0, b)
        filler_rows = np.flatnonzero(~is_block)
        if filler_rows.size:
            col = seg_ells[filler_rows, seg]
            for ell0 in range(model.n_terms):
                rows = filler_rows[col == ell0]
                if rows.size:
                    ctx.rotate_rows(states, rows, ell0, tau_angle)
    return _shot_means(ctx.expectations(states, ancilla_x=True), n_shot, rng)


def _pooled_stats(chunks) -> tuple[float, float, int]:
    """(mean, variance of the mean, count) over per-chunk value arrays."""
    total = 0.0
    total_sq = 0.0
    count = 0
    for vals in chunks:
        total += float(vals.sum())
        total_sq += float((vals**2).sum())
        count += vals.size
    mean = total / count
    if count > 1:
        var = max(total_sq - count * mean**2, 0.0) / (count - 1)
        return mean, var / count, count
    return mean, 0.0, count


def estimate_qdrift(model: HamiltonianModel, t: float, config: EstimatorConfig) -> EstimateReport:
    """Sampled product-of-segments baseline estimate of Tr(Q U(rho)).

    The ancilla stays idle; the system observable is read with n_shot_0
    simulated shots per sampled plan.
    """
    ctx = _BatchContext(model, config.observable_axes(model), config.system_zero)
    tau_angle = tau(model, t, config.n_segments)
    n = config.n_sample_0

    def one_chunk(args):
        idx, size = args
        rng = derived_rng(config.seed, _STREAM_BASELINE, idx)
        return _qdrift_chunk(ctx, tau_angle, config.n_segments, size, config.n_shot_0, rng)

    baseline, var, count = _pooled_stats(map(one_chunk, _chunk_sizes(n)))
    return EstimateReport(
        method="QDRIFT",
        value=baseline,
        baseline=baseline,
        bucket_values={},
        stderr=sqrt(var),
        plan_count=count,
        shot_count=count * config.n_shot_0,
        seed=config.seed,
        budgets={"baseline": {"n_sample": n, "n_shot": config.n_shot_0}},
    )


def _eval_correction_stats(
    model: HamiltonianModel, t: float, term: CorrectionTerm, config: EstimatorConfig
):
    """(value, variance, plan_count, shot_count) for one correction bucket.

    Every (s, b) variant is evaluated with its own derived stream; variants
    may run on worker threads, and the signed reduction follows variant
    order regardless of thread count.
    """
    n_sample = config.n_sample(term.n_vec)
    n_shot = config.n_shot(term.n_vec)
    total_circuits = term.n_variants * n_sample
    if total_circuits > config.circuit_cap:
        raise BudgetOverflow(
            f"bucket {term.n_vec} needs {total_circuits} circuits, cap {config.circuit_cap}"
        )
    ctx = _BatchContext(model, config.observable_axes(model), config.system_zero)
    tau_angle = tau(model, t, config.n_segments)
    variants = [
        (s_vec, b_vecs)
        for s_vec in term.sign_vectors()
        for b_vecs in term.b_vector_sets()
    ]

    def one_variant(vid: int):
        s_vec, b_vecs = variants[vid]

        def one_chunk(args):
            idx, size = args
            rng = derived_rng(
                config.seed, _STREAM_BUCKET, term.k, term.xi, *term.n_vec, vid, idx
            )
            return _variant_chunk(
                ctx, tau_angle, config.n_segments, term, s_vec, b_vecs, size, n_shot, rng
            )

        return _pooled_stats(map(one_chunk, _chunk_sizes(n_sample)))

    results = _map_indexed(one_variant, len(variants), _worker_count(config.threads))
    signed_sum = 0.0
    var_sum = 0.0
    for (s_vec, _), (mean, var, _) in zip(variants, results):
        sign = -1.0 if sum(s_vec) % 2 else 1.0
        signed_sum += sign * mean
        var_sum += var
    value = term.coeff * signed_sum
    variance = term.coeff**2 * var_sum
    return value, variance, total_circuits, total_circuits * n_shot


def eval_correction(
    model: HamiltonianModel, t: float, term: CorrectionTerm, config: EstimatorConfig
) -> float:
    """Sampled bucket estimate: coeff times the signed sum over all (s, b)
    combinations of averaged ancilla-dressed expectations; unbiased for the
    bucket's contribution to the order-K correction."""
    value, _, _, _ = _eval_correction_stats(model, t, term, config)
    return value


def estimate_qswift(model: HamiltonianModel, t: float, config: EstimatorConfig) -> EstimateReport:
    """Order-K estimate: sampled baseline plus every correction bucket."""
    base = estimate_qdrift(model, t, config)
    buckets = {}
    budgets = dict(base.budgets)
    var_total = base.stderr**2
    plan_count = base.plan_count
    shot_count = base.shot_count
    for term in correction_terms(model, t, config.n_segments, config.order):
        value, variance, plans, shots = _eval_correction_stats(model, t, term, config)
        buckets[term.n_vec] = value
        var_total += variance
        plan_count += plans
        shot_count += shots
        budgets[",".join(map(str, term.n_vec))] = {
            "n_sample": config.n_sample(term.n_vec),
            "n_shot": config.n_shot(term.n_vec),
            "coeff": term.coeff,
        }
    return EstimateReport(
        method=f"QSWIFT{config.order}" if config.order > 1 else "QDRIFT",
        value=base.baseline + sum(buckets.values()),
        baseline=base.baseline,
        bucket_values=buckets,
        stderr=sqrt(var_total),
        plan_count=plan_count,
        shot_count=shot_count,
        seed=config.seed,
        budgets=budgets,
    )


def estimate_trotter(
    model: HamiltonianModel,
    t: float,
    r: int,
    order: int,
    randomized: bool,
    config: EstimatorConfig,
) -> float:
    """Product-formula estimate; deterministic plans pool all shots on one plan."""
    axes = config.observable_axes(model)
    obs = Observable(axes=axes, with_ancilla_x=False)

    def run_value(plan, n_shots, shot_rng) -> float:
        state = prepare_plus_input(model.n_qubits, system_zero=config.system_zero)
        state = run_plan(state, plan, model)
        val = expectation(state, obs)
        return float(_shot_means(np.array([val]), n_shots, shot_rng)[0])

    if not randomized:
        plan = trotter_plan(model, t, r, order)
        return run_value(
            plan,
            config.n_shot_0 * config.n_sample_0,
            derived_rng(config.seed, _STREAM_TROTTER, 0, _SUB_SHOT),
        )

    def one(i: int) -> float:
        plan = randomized_trotter_plan(
            model, t, r, order, derived_rng(config.seed, _STREAM_TROTTER, i, _SUB_PLAN)
        )
        return run_value(
            plan, config.n_shot_0, derived_rng(config.seed, _STREAM_TROTTER, i, _SUB_SHOT)
        )

    vals = _map_indexed(one, config.n_sample_0, _worker_count(config.threads))
    return float(np.mean(vals))


# ---------------------------------------------------------------------------
# Exhaustive enumeration: every random draw replaced by its weighted sum.

def _index_products(model: HamiltonianModel, count: int):
    """(indices, weight) over all length-`count` iid importance draws."""
    probs = model.probs
    for ells in product(range(1, model.n_terms + 1), repeat=count):
        weight = float(np.prod([probs[e - 1] for e in ells])) if count else 1.0
        yield ells, weight


def _block_index_draws(model: HamiltonianModel, s: int, n_j: int):
    """(ell_vec, weight) over the support of P_s^(n): iid products for s=0,
    one shared index for s=1."""
    probs = model.probs
    if s == 0:
        yield from _index_products(model, n_j)
    else:
        for ell in range(1, model.n_terms + 1):
            yield (ell,) * n_j, float(probs[ell - 1])


def exact_qdrift_value(
    model: HamiltonianModel,
    t: float,
    n_segments: int,
    observable_axes: str | None = None,
    system_zero: bool = False,
) -> float:
    """Baseline value with all plans enumerated by their probabilities."""
    if model.n_terms**n_segments > ENUMERATION_CAP:
        raise CombinatorialCap(
            f"{model.n_terms}^{n_segments} plans exceed {ENUMERATION_CAP}"
        )
    axes = observable_axes or ("Z" + "I" * (model.n_qubits - 1))
    obs = Observable(axes=axes, with_ancilla_x=False)
    tau_angle = tau(model, t, n_segments)
    total = 0.0
    for ells, weight in _index_products(model, n_segments):
        ops = tuple(TimeOp(e, model.term(e).sign * tau_angle) for e in ells)
        plan = GatePlan(ops=ops, n_segments=n_segments, method_tag="QDRIFT")
        state = prepare_plus_input(model.n_qubits, system_zero=system_zero)
        state = run_plan(state, plan, model)
        total += weight * expectation(state, obs)
    return total


def eval_correction_exact(
    model: HamiltonianModel,
    t: float,
    n_segments: int,
    term: CorrectionTerm,
    observable_axes: str | None = None,
    system_zero: bool = False,
) -> float:
    """Bucket value with sigma, index, and filler draws fully enumerated.

    Expectations are exact (no shot simulation), so this equals the bucket's
    dense-oracle value up to floating-point error.
    """
    from .compiler import build_swift_plan

    axes = observable_axes or ("Z" + "I" * (model.n_qubits - 1))
    obs = Observable(axes=axes, with_ancilla_x=True)
    k = term.k
    n_slots = comb(n_segments, k)
    size_est = (
        term.n_variants
        * n_slots
        * model.n_terms ** (n_segments - k)
        * model.n_terms ** sum(term.n_vec)
    )
    if size_est > ENUMERATION_CAP:
        raise CombinatorialCap(f"exhaustive bucket would enumerate ~{size_est} circuits")
    total = 0.0
    for s_vec in term.sign_vectors():
        sign = -1.0 if sum(s_vec) % 2 else 1.0
        block_draws = [list(_block_index_draws(model, s, n_j))
                       for s, n_j in zip(s_vec, term.n_vec)]
        for b_vecs in term.b_vector_sets():
            acc = 0.0
            for sigma in combinations(range(n_segments), k):
                for choice in product(*block_draws):
                    ell_vecs = tuple(c[0] for c in choice)
                    w_blocks = float(np.prod([c[1] for c in choice]))
                    for fillers, w_fill in _index_products(model, n_segments - k):
                        plan = build_swift_plan(
                            model, t, n_segments, term,
                            s_vec, b_vecs, sigma, ell_vecs, fillers,
                        )
                        state = prepare_plus_input(
                            model.n_qubits, system_zero=system_zero
                        )
                        state = run_plan(state, plan, model)
                        acc += w_blocks * w_fill * expectation(state, obs)
            total += sign * acc / n_slots
    return term.coeff * total


def exact_qswift_value(
    model: HamiltonianModel,
    t: float,
    n_segments: int,
    order: int,
    observable_axes: str | None = None,
    system_zero: bool = False,
) -> float:
    """Exhaustive order-K value: enumerated baseline plus enumerated buckets."""
    total = exact_qdrift_value(model, t, n_segments, observable_axes, system_zero)
    for term in correction_terms(model, t, n_segments, order):
        total += eval_correction_exact(
            model, t, n_segments, term, observable_axes, system_zero
        )
    return total


# ---------------------------------------------------------------------------
# All-order estimator (zero systematic error), batched over trajectories.

@dataclass(frozen=True)
class AllOrderResult:
    value: float
    stderr: float
    b_power: float
    n_sample: int


def all_order_stats(
    model: HamiltonianModel,
    t: float,
    n_segments: int,
    n_sample: int,
    rng_seed,
    observable_axes: str | None = None,
    system_zero: bool = False,
) -> AllOrderResult:
    """Mean and standard error of the rescaled signed estimator.

    Each segment draws a plain time operator with probability 1/B or a
    swift block of size n with probability beta(n)/B; trajectory signs
    track the s draws and the mean is rescaled by B^N. Expectations are
    read exactly per trajectory.
    """
    if n_sample < 1 or n_segments < 1:
        raise ValueError("need n_sample >= 1 and N >= 1")
    if not isinstance(rng_seed, (int, np.integer)):
        raise TypeError("all-order sampling derives per-chunk streams, pass an int seed")
    n = model.n_qubits
    axes = observable_axes or ("Z" + "I" * (n - 1))
    ctx = _BatchContext(model, axes, system_zero)
    tau_angle = tau(model, t, n_segments)
    b_norm, block_ns, block_weights = _beta_weights(tau_angle)
    cat_probs = np.array([1.0 / b_norm] + list(block_weights))
    cat_probs[0] += 1.0 - cat_probs.sum()
    probs = model.probs

    acc = 0.0
    acc_sq = 0.0
    for chunk_idx, m in _chunk_sizes(n_sample):
        rng = derived_rng(int(rng_seed), _STREAM_ALL_ORDER, chunk_idx)
        states = ctx.fresh(m)
        signs = np.ones(m)
        for _seg in range(n_segments):
            cats = rng.choice(len(cat_probs), size=m, p=cat_probs)
            time_rows = np.flatnonzero(cats == 0)
            if time_rows.size:
                ells = rng.choice(model.n_terms, size=time_rows.size, p=probs)
                for ell0 in range(model.n_terms):
                    rows = time_rows[ells == ell0]
                    if rows.size:
                        ctx.rotate_rows(states, rows, ell0, tau_angle)
            for cat_id, block_n in enumerate(block_ns, start=1):
                rows_blk = np.flatnonzero(cats == cat_id)
                if not rows_blk.size:
                    continue
                s_draw = rng.integers(0, 2, size=rows_blk.size)
                b_draw = rng.integers(0, 2, size=(rows_blk.size, block_n))
                ell_iid = rng.choice(model.n_terms, size=(rows_blk.size, block_n), p=probs)
                ell_one = rng.choice(model.n_terms, size=rows_blk.size, p=probs)
                ell_draw = np.where(s_draw[:, None] == 1, ell_one[:, None], ell_iid)
                signs[rows_blk] *= 1.0 - 2.0 * s_draw
                for step in range(block_n):
                    for ell0 in range(model.n_terms):
                        for b in (0, 1):
                            mask = (ell_draw[:, step] == ell0) & (b_draw[:, step] == b)
                            if mask.any():
                                ctx.swift_rows(states, rows_blk[mask], ell0, b)
        weighted = signs * ctx.expectations(states, ancilla_x=True)
        acc += float(weighted.sum())
        acc_sq += float((weighted**2).sum())

    b_power = b_norm**n_segments
    mean = acc / n_sample
    if n_sample > 1:
        var = max(acc_sq - n_sample * mean**2, 0.0) / (n_sample - 1)
        stderr = b_power * sqrt(var / n_sample)
    else:
        stderr = 0.0
    return AllOrderResult(
        value=b_power * mean, stderr=stderr, b_power=b_power, n_sample=n_sample
    )


def estimate_all_order(
    model: HamiltonianModel, t: float, n_segments: int, n_sample: int, rng_seed
) -> float:
    """Zero-systematic-error estimate of Tr(Q U(rho)); see all_order_stats."""
    return all_order_stats(model, t, n_segments, n_sample, rng_seed).value


# ---------------------------------------------------------------------------
# Sampling-budget planner.

@dataclass(frozen=True)
class BudgetRow:
    label: str
    k: int
    coeff: float
    n_sample: int
    circuits: int


@dataclass(frozen=True)
class BudgetTable:
    rows: tuple
    n_total: int
    epsilon_total: float
    epsilon_per_term: float

    def to_json_dict(self) -> dict:
        return {
            "epsilon_total": self.epsilon_total,
            "epsilon_per_term": self.epsilon_per_term,
            "rows": [
                {
                    "bucket": row.label,
                    "k": row.k,
                    "coeff": row.coeff,
                    "n_sample": row.n_sample,
                    "circuits": row.circuits,
                }
                for row in self.rows
            ],
            "n_total": self.n_total,
        }

    def to_text(self) -> str:
        lines = [f"{'bucket':>10} {'k':>3} {'coeff':>14} {'n_sample':>12} {'circuits':>14}"]
        for row in self.rows:
            lines.append(
                f"{row.label:>10} {row.k:>3} {row.coeff:>14.6g} "
                f"{row.n_sample:>12} {row.circuits:>14}"
            )
        lines.append(f"total circuits: {self.n_total}")
        return "\n".join(lines)


def plan_budget(
    model: HamiltonianModel, t: float, n_segments: int, order: int, epsilon_total: float
) -> BudgetTable:
    """Variance-balanced budgets: the statistical error target splits evenly
    across the baseline and every bucket, each bucket pays for its 2^(xi+k)
    sign/branch combinations, and sample counts scale with coeff^2."""
    if epsilon_total <= 0:
        raise ValueError("epsilon must be positive")
    terms = correction_terms(model, t, n_segments, order)
    eps = epsilon_total / sqrt(order + 1)
    n_sample_0 = ceil(1.0 / eps**2)
    rows = [BudgetRow(label="baseline", k=0, coeff=1.0,
                      n_sample=n_sample_0, circuits=n_sample_0)]
    total = n_sample_0
    for term in terms:
        variants = term.n_variants
        n_samp = max(1, ceil(term.coeff**2 * variants / eps**2))
        circuits = variants * n_samp
        rows.append(
            BudgetRow(
                label=",".join(map(str, term.n_vec)),
                k=term.k,
                coeff=term.coeff,
                n_sample=n_samp,
                circuits=circuits,
            )
        )
        total += circuits
    return BudgetTable(
        rows=tuple(rows),
        n_total=total,
        epsilon_total=epsilon_total,
        epsilon_per_term=eps,
    )
