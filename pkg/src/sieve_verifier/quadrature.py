"""Monte Carlo evaluation of declared integrals, plus a grid oracle.

Sampling is sequential conditional: t₁ uniform on its fixed range, then t₂
uniform on [lo₂(t₁), hi₂(t₁)], and so on, accumulating the product of
interval lengths as the density weight.  Points failing a `require` clause
(or meeting an empty interval, which legitimately happens when e.g.
min(t₁, ½(1−t₁)) < 1/35) contribute zero.  The estimator is the weighted
mean of integrand values over all samples.

Error bars come from block means: the sample budget is split into `blocks`
equal blocks, block k drawing from a Philox stream seeded by
SeedSequence(seed, spawn_key=(k,)).  Blocks are embarrassingly parallel and
the reduction runs in block order, so a result is bit-reproducible for fixed
(seed, blocks, n_samples) at any thread count.  All per-sample arithmetic is
elementwise numpy (no BLAS reductions), which keeps block internals exact
as well.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import regions
from .buchstab import BuchstabTable, omega_lower, omega_simple_upper, omega_upper
from .dsl import IntegralSpec, Requirement, VarDecl

GENERATOR_NAME = "philox4x64"

DEFAULT_BLOCKS = 1024
MIN_SAMPLES = 10_000
MIN_BLOCKS = 16


class IntegrandError(RuntimeError):
    """NaN from the integrand; names the offending point."""


@dataclass(frozen=True)
class IntegralEstimate:
    spec_name: str
    mean: float
    std_error: float
    n_samples: int
    n_feasible: int
    seed: int
    empty_region: bool = False


def _factor_value(kind: str, u, table: BuchstabTable, clamp: bool):
    if kind == "omega_exact":
        return table.eval(u)
    if kind == "omega_lower":
        return omega_lower(u, clamp)
    if kind == "omega_upper":
        return omega_upper(u, clamp)
    return omega_simple_upper(u)


def _uniform(rng, n: int, stratify: bool):
    if not stratify:
        return rng.uniform(size=n)
    # one stratum per point, jittered: latin stratification of this coordinate
    return (rng.permutation(n) + rng.uniform(size=n)) / n


def _eval_args(args, env, size: int):
    cols = []
    for a in args:
        c = np.asarray(a.eval(env), dtype=float)
        if c.ndim == 0:
            c = np.full(size, float(c))
        cols.append(c)
    return cols


def _run_block(
    spec: IntegralSpec,
    table: BuchstabTable,
    block_size: int,
    seed_seq: np.random.SeedSequence,
    stratify: bool,
    semantics: str,
    clamp: bool,
):
    rng = np.random.Generator(np.random.Philox(seed_seq))
    env: dict = {}
    weight = np.ones(block_size)
    var_stage = 0

    for stmt in spec.statements:
        n_alive = weight.shape[0]
        if n_alive == 0:
            break
        if isinstance(stmt, VarDecl):
            lo = np.asarray(stmt.lower.eval(env), dtype=float)
            hi = np.asarray(stmt.upper.eval(env), dtype=float)
            if lo.ndim == 0:
                lo = np.full(n_alive, float(lo))
            if hi.ndim == 0:
                hi = np.full(n_alive, float(hi))
            u = _uniform(rng, n_alive, stratify and var_stage < 2)
            length = hi - lo
            ok = length > 0.0
            t = lo + u * length
            if not ok.all():
                env = {k: v[ok] for k, v in env.items()}
                weight = weight[ok]
                t = t[ok]
                length = length[ok]
            weight = weight * length
            env[stmt.name] = t
            var_stage += 1
        else:
            hit = np.zeros(n_alive, dtype=bool)
            for lit in stmt.literals:
                idx = np.flatnonzero(~hit)
                if idx.size == 0:
                    break
                sub = {k: v[idx] for k, v in env.items()}
                cols = _eval_args(lit.args, sub, idx.size)
                val = regions.eval_atom_vec(lit.atom, cols, semantics)
                hit[idx] = ~val if lit.negated else val
            if not hit.all():
                env = {k: v[hit] for k, v in env.items()}
                weight = weight[hit]

    n_feasible = weight.shape[0]
    if n_feasible == 0:
        return 0.0, 0
    vals = weight
    for kind, expr in spec.factors:
        u = np.asarray(expr.eval(env), dtype=float)
        vals = vals * _factor_value(kind, u, table, clamp)
    for expr, k in spec.measure:
        base = np.asarray(expr.eval(env), dtype=float)
        vals = vals / (base if k == 1 else base * base)
    bad = np.isnan(vals)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        point = tuple(float(env[v.name][i]) for v in spec.variables)
        raise IntegrandError(f"integrand is NaN at {point} in {spec.name}")
    return float(np.sum(vals)), n_feasible


def estimate(
    spec: IntegralSpec,
    table: BuchstabTable,
    n_samples: int,
    seed: int,
    blocks: int = DEFAULT_BLOCKS,
    threads: int | None = None,
    stratify: bool = False,
    semantics: str = regions.EMPTY,
    clamp: bool = True,
) -> IntegralEstimate:
    """Estimate one integral; bit-reproducible for fixed (seed, blocks, n)."""
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}")
    if blocks < MIN_BLOCKS:
        raise ValueError(f"blocks must be >= {MIN_BLOCKS}")
    if n_samples % blocks != 0:
        raise ValueError("blocks must divide n_samples")
    block_size = n_samples // blocks
    seqs = [np.random.SeedSequence(entropy=seed, spawn_key=(k,)) for k in range(blocks)]

    def work(k: int):
        return _run_block(spec, table, block_size, seqs[k], stratify, semantics, clamp)

    if threads is not None and threads <= 1:
        results = [work(k) for k in range(blocks)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(blocks)))

    block_means = np.array([s / block_size for s, _ in results])
    n_feasible = int(sum(f for _, f in results))
    mean = float(np.mean(block_means))
    if blocks > 1:
        std_error = float(np.std(block_means, ddof=1) / math.sqrt(blocks))
    else:
        std_error = 0.0
    return IntegralEstimate(
        spec_name=spec.name,
        mean=mean,
        std_error=std_error,
        n_samples=n_samples,
        n_feasible=n_feasible,
        seed=seed,
        empty_region=n_feasible == 0,
    )


GRID_MAX_DIM = 3
GRID_MIN_POINTS = 500
_GRID_CHUNK = 1 << 20


def grid_estimate(
    spec: IntegralSpec,
    table: BuchstabTable,
    points_per_axis: int,
    semantics: str = regions.EMPTY,
    clamp: bool = True,
) -> float:
    """Deterministic midpoint rule on the conditionally-mapped grid.

    Supports dimension ≤ 3 only; used as an oracle for the Monte Carlo path.
    """
    d = spec.dimension
    if d > GRID_MAX_DIM:
        raise ValueError(f"grid oracle supports dimension <= {GRID_MAX_DIM}")
    if points_per_axis < GRID_MIN_POINTS:
        raise ValueError(f"points_per_axis must be >= {GRID_MIN_POINTS}")

    p = points_per_axis
    total_cells = p**d
    cell_fraction = 1.0 / total_cells
    acc = 0.0
    var_decls = spec.variables

    for start in range(0, total_cells, _GRID_CHUNK):
        stop = min(start + _GRID_CHUNK, total_cells)
        flat = np.arange(start, stop, dtype=np.int64)
        # unit-cube midpoints, axis 0 slowest
        unit = []
        rem = flat
        for k in range(d - 1, -1, -1):
            unit.insert(0, ((rem % p) + 0.5) / p)
            rem = rem // p
        env: dict = {}
        weight = np.ones(flat.shape[0])
        alive = np.ones(flat.shape[0], dtype=bool)
        stage = 0
        for stmt in spec.statements:
            if isinstance(stmt, VarDecl):
                lo = np.broadcast_to(
                    np.asarray(stmt.lower.eval(env), dtype=float), weight.shape
                )
                hi = np.broadcast_to(
                    np.asarray(stmt.upper.eval(env), dtype=float), weight.shape
                )
                length = hi - lo
                ok = length > 0.0
                t = lo + unit[stage][alive] * np.maximum(length, 0.0)
                if not ok.all():
                    alive[alive] = ok
                    env = {k_: v[ok] for k_, v in env.items()}
                    weight = weight[ok]
                    t = t[ok]
                    length = length[ok]
                weight = weight * length
                env[stmt.name] = t
                stage += 1
            else:
                n_alive = weight.shape[0]
                if n_alive == 0:
                    break
                hit = np.zeros(n_alive, dtype=bool)
                for lit in stmt.literals:
                    idx = np.flatnonzero(~hit)
                    if idx.size == 0:
                        break
                    sub = {k_: v[idx] for k_, v in env.items()}
                    cols = _eval_args(lit.args, sub, idx.size)
                    val = regions.eval_atom_vec(lit.atom, cols, semantics)
                    hit[idx] = ~val if lit.negated else val
                if not hit.all():
                    alive[alive] = hit
                    env = {k_: v[hit] for k_, v in env.items()}
                    weight = weight[hit]
        if weight.shape[0] == 0:
            continue
        vals = weight
        for kind, expr in spec.factors:
            u = np.asarray(expr.eval(env), dtype=float)
            vals = vals * _factor_value(kind, u, table, clamp)
        for expr, k_ in spec.measure:
            base = np.asarray(expr.eval(env), dtype=float)
            vals = vals / (base if k_ == 1 else base * base)
        acc += float(np.sum(vals))
    return acc * cell_fraction
