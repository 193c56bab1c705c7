"""Kinetic Monte Carlo for the reservoir exclusion chain at large n.

The dynamics is sampled exactly in law with a single dominating exponential
clock of rate n^2 (n - 2) + 2 n^2: each event picks uniformly among the n-2
exchange edges and the two boundary slots.  A boundary event resamples the
site to Bernoulli(rho), which reproduces the birth/death rates rho n^2 into
a hole and (1-rho) n^2 out of a particle; with state-independent event rates
no thinning is needed.  Replicas own independent counter-based RNG streams
spawned from the master seed, so statistics are reproducible bit-for-bit for
a fixed (seed, replica count, worker count).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .exact_chain import Configuration
from .product_measures import statistic_lattice_law
from .profiles import ProfileSpec
from .spectral import HeatSolution, eigenfunction

__all__ = [
    "SimConfig", "OccupationStats", "TVLowerBound", "sample_initial",
    "simulate_to", "estimate_occupation", "tv_lower_bound_statistic",
    "event_rate", "resampling_rate_matrix", "empirical_state_counts",
]

_EVENT_CHUNK = 1 << 22


@dataclass(frozen=True)
class SimConfig:
    """Replica-simulation parameters."""

    n: int
    rho: float
    profile: ProfileSpec
    horizon: float
    replicas: int
    seed: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("simulation needs n >= 3 (two distinct boundary sites)")
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0,1), got {self.rho}")
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if self.replicas < 1:
            raise ValueError("need at least one replica")


def event_rate(n: int) -> float:
    """Total event rate n^2 (n-2) + 2 n^2 of the dominating clock."""
    return float(n * n) * (n - 2) + 2.0 * float(n * n)


@njit(cache=True, nogil=True)
def _apply_events(bits, events, uniforms, rho, n_edges):  # pragma: no cover
    j = 0
    last = bits.shape[0] - 1
    for k in range(events.shape[0]):
        e = events[k]
        if e < n_edges:
            tmp = bits[e]
            bits[e] = bits[e + 1]
            bits[e + 1] = tmp
        else:
            site = 0 if e == n_edges else last
            bits[site] = 1 if uniforms[j] < rho else 0
            j += 1


def _evolve_bits(bits: np.ndarray, n: int, rho: float, duration: float,
                 rng: np.random.Generator) -> int:
    """Advance one replica by `duration`; returns the number of events."""
    n_edges = n - 2
    n_slots = n_edges + 2
    total = int(rng.poisson(event_rate(n) * duration))
    remaining = total
    while remaining > 0:
        m = min(remaining, _EVENT_CHUNK)
        events = rng.integers(0, n_slots, size=m, dtype=np.int64)
        uniforms = rng.random(int(np.count_nonzero(events >= n_edges)))
        _apply_events(bits, events, uniforms, rho, n_edges)
        remaining -= m
    return total


def sample_initial(profile: ProfileSpec, n: int, seed) -> Configuration:
    """Independent Bernoulli(u0(x/n)) occupancies; reproducible under seed."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = profile.evaluate(np.arange(1, n) / n)
    bits = (rng.random(n - 1) < u).astype(np.uint8)
    return Configuration(bits)


def simulate_to(config0: Configuration, simcfg: SimConfig, t: float,
                rng=None) -> Configuration:
    """Exact-in-law sample of the chain at time t from the given start."""
    if t < 0 or t > simcfg.horizon:
        raise ValueError(f"time {t} outside [0, horizon={simcfg.horizon}]")
    if config0.sites != simcfg.n - 1:
        raise ValueError("configuration size does not match the lattice")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(simcfg.seed))
    out = config0.copy()
    if t > 0:
        _evolve_bits(out.bits, simcfg.n, simcfg.rho, t, rng)
    return out


@dataclass(frozen=True)
class OccupationStats:
    """Replica statistics of the occupation field at one time."""

    site_mean: np.ndarray       # E[eta(x)] estimate per bulk site
    site_var: np.ndarray        # sample variance per site
    site_se: np.ndarray         # standard error of the site means
    edge_omega_mean: np.ndarray  # mean of omega_x omega_{x+1} per bulk edge
    edge_omega_se: np.ndarray
    replicas: int
    total_events: int
    expected_events: float


def _replica_blocks(replicas: int, workers: int) -> list[range]:
    splits = np.array_split(np.arange(replicas), max(1, min(workers, replicas)))
    return [range(int(s[0]), int(s[-1]) + 1) for s in splits if s.size]


def estimate_occupation(simcfg: SimConfig, t: float,
                        workers: int = 1) -> OccupationStats:
    """Per-site occupation means/variances and per-edge omega products.

    omega is centred against the spectral density field at time t.  Replicas
    are partitioned into contiguous blocks per worker and the block partial
    sums are merged in block order, which keeps the reduction deterministic.
    """
    if simcfg.replicas < 100:
        raise ValueError("occupation statistics need at least 100 replicas")
    n, rho = simcfg.n, simcfg.rho
    m = n - 1
    sol = HeatSolution.from_profile(simcfg.profile, n)
    u = sol.field_at(t).bulk
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("spectral density field left (0,1); omega undefined")
    denom = u * (1.0 - u)
    children = np.random.SeedSequence(simcfg.seed).spawn(simcfg.replicas)

    def run_block(block: range):
        occ = np.zeros(m)
        w_sum = np.zeros(m - 1)
        w_sq = np.zeros(m - 1)
        events = 0
        for r in block:
            rng = np.random.default_rng(children[r])
            bits = sample_initial(simcfg.profile, n, rng).bits
            events += _evolve_bits(bits, n, rho, t, rng)
            occ += bits
            om = (bits - u) / denom
            prod = om[:-1] * om[1:]
            w_sum += prod
            w_sq += prod * prod
        return occ, w_sum, w_sq, events

    blocks = _replica_blocks(simcfg.replicas, workers)
    if len(blocks) == 1:
        results = [run_block(blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            results = list(pool.map(run_block, blocks))

    occ = sum(r[0] for r in results)
    w_sum = sum(r[1] for r in results)
    w_sq = sum(r[2] for r in results)
    events = sum(r[3] for r in results)

    reps = simcfg.replicas
    mean = occ / reps
    var = mean * (1.0 - mean) * reps / max(reps - 1, 1)
    se = np.sqrt(var / reps)
    w_mean = w_sum / reps
    w_var = np.maximum(w_sq / reps - w_mean ** 2, 0.0) * reps / max(reps - 1, 1)
    w_se = np.sqrt(w_var / reps)
    return OccupationStats(site_mean=mean, site_var=var, site_se=se,
                           edge_omega_mean=w_mean, edge_omega_se=w_se,
                           replicas=reps, total_events=events,
                           expected_events=event_rate(n) * t * reps)


@dataclass(frozen=True)
class TVLowerBound:
    """Histogram distance of a distinguishing statistic.

    This is an *estimated, non-rigorous* lower-bound proxy for the distance
    to the stationary state: the L1/2 histogram distance between the
    empirical law of the mode-ell0 statistic and its exact stationary law,
    with a first-order bin-count bias correction subtracted.
    """

    estimate: float
    se: float
    bins: int
    widened: bool
    rigorous: bool = False


def tv_lower_bound_statistic(simcfg: SimConfig, t: float, ell0: int,
                             bins: int | None = None,
                             workers: int = 1) -> TVLowerBound:
    """Distinguishing-statistic histogram distance at time t (non-rigorous).

    The statistic is S(eta) = n^{-1/2} sum_x phi_ell0(x) (eta(x) - rho); its
    stationary law is computed exactly by lattice convolution, the law under
    the evolved chain empirically over replicas.
    """
    if simcfg.replicas < 1000:
        raise ValueError("statistic lower bound needs at least 1000 replicas")
    n, rho = simcfg.n, simcfg.rho
    coeffs = eigenfunction(n, ell0, np.arange(1, n)) / math.sqrt(n)
    ref = statistic_lattice_law(coeffs, rho)
    children = np.random.SeedSequence(simcfg.seed).spawn(simcfg.replicas)

    def run_block(block: range):
        vals = np.empty(len(block))
        for i, r in enumerate(block):
            rng = np.random.default_rng(children[r])
            bits = sample_initial(simcfg.profile, n, rng).bits
            _evolve_bits(bits, n, rho, t, rng)
            vals[i] = float(np.dot(coeffs, bits - rho))
        return vals

    blocks = _replica_blocks(simcfg.replicas, workers)
    if len(blocks) == 1:
        samples = run_block(blocks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            samples = np.concatenate(list(pool.map(run_block, blocks)))

    reps = simcfg.replicas
    ref_vals = ref.values()
    cdf = np.cumsum(ref.pmf)
    q25 = float(ref_vals[np.searchsorted(cdf, 0.25)])
    q75 = float(ref_vals[np.searchsorted(cdf, 0.75)])
    iqr = max(q75 - q25, 1e-12)

    widened = False
    if bins is None:
        width = 2.0 * iqr / reps ** (1.0 / 3.0)   # Freedman-Diaconis
        lo = min(float(samples.min()), float(ref_vals[0])) - width
        hi = max(float(samples.max()), float(ref_vals[-1])) + width
        bins = max(int(math.ceil((hi - lo) / width)), 4)
    else:
        lo = min(float(samples.min()), float(ref_vals[0]))
        hi = max(float(samples.max()), float(ref_vals[-1]))
        span = hi - lo
        lo, hi = lo - 1e-9 * span - 1e-12, hi + 1e-9 * span + 1e-12

    while True:
        edges = np.linspace(lo, hi, bins + 1)
        emp, _ = np.histogram(samples, bins=edges)
        p_hat = emp / reps
        q_ref, _ = np.histogram(ref_vals, bins=edges, weights=ref.pmf)
        occupied = int(np.count_nonzero((emp > 0) | (q_ref > 0)))
        if reps / max(occupied, 1) >= 20 or bins <= 4:
            break
        bins = max(bins // 2, 4)
        widened = True

    raw = 0.5 * float(np.abs(p_hat - q_ref).sum())
    bias = 0.5 * float(np.sqrt(2.0 * q_ref * (1.0 - q_ref) / (math.pi * reps)).sum())
    estimate = max(raw - bias, 0.0)
    signs = 0.5 * np.sign(p_hat - q_ref)
    se = math.sqrt(max(0.25 - float(np.dot(p_hat, signs)) ** 2, 0.0) / reps)
    return TVLowerBound(estimate=estimate, se=se, bins=bins, widened=widened)


def resampling_rate_matrix(n: int, rho: float) -> np.ndarray:
    """Rate matrix induced by the resampling event loop (dense, small n).

    Events: each edge swaps at rate n^2; each boundary slot resamples its
    site to Bernoulli(rho) at rate n^2, so the state actually changes at
    rate rho n^2 from a hole and (1-rho) n^2 from a particle.  Used to prove
    equivalence with the generator's rates entry by entry.
    """
    m = n - 1
    if m > 16:
        raise ValueError("dense rate matrix is for small n only")
    size = 1 << m
    speed = float(n * n)
    q = np.zeros((size, size))
    for i in range(size):
        bits = [(i >> x) & 1 for x in range(m)]
        for x in range(m - 1):           # edge between sites x+1, x+2
            if bits[x] != bits[x + 1]:
                j = i ^ ((1 << x) | (1 << (x + 1)))
                q[i, j] += speed
        for x in (0, m - 1):             # boundary slots resample
            j = i ^ (1 << x)
            q[i, j] += speed * (rho if bits[x] == 0 else 1.0 - rho)
    np.fill_diagonal(q, -q.sum(axis=1))
    return q


def empirical_state_counts(simcfg: SimConfig, t: float,
                           workers: int = 1) -> np.ndarray:
    """Histogram of simulate_to outcomes over the full state space (small n)."""
    m = simcfg.n - 1
    if m > 16:
        raise ValueError("state histogram is for small n only")
    children = np.random.SeedSequence(simcfg.seed).spawn(simcfg.replicas)
    weights = 1 << np.arange(m, dtype=np.int64)

    def run_block(block: range):
        counts = np.zeros(1 << m, dtype=np.int64)
        for r in block:
            rng = np.random.default_rng(children[r])
            bits = sample_initial(simcfg.profile, simcfg.n, rng).bits
            _evolve_bits(bits, simcfg.n, simcfg.rho, t, rng)
            counts[int(np.dot(bits, weights))] += 1
        return counts

    blocks = _replica_blocks(simcfg.replicas, workers)
    if len(blocks) == 1:
        return run_block(blocks[0])
    with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
        return sum(pool.map(run_block, blocks))
