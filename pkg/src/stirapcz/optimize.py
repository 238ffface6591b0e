"""Robust pulse optimization: scalar cost functions over (t1, t2, omega),
a genetic minimizer, and a two-objective non-dominated (NSGA-II style)
front search.

Costs are always evaluated decay-free on a fixed symmetric detuning-error
grid, which keeps them deterministic.  An integrator failure marks the
genome with a large sentinel cost so selection discards it.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .constants import TWO_PI
from .dynamics import ErrorSample, IntegratorError, IntegratorOptions
from .pulses import PulseParams

COST_SENTINEL = 1e3

# search box for (t1, t2, omega) in us; t1 < t2 enforced by rejection
DEFAULT_BOUNDS = ((0.2, 1.2), (0.5, 1.5), (0.05, 0.4))


@dataclass(frozen=True)
class CostSpec:
    """Cost-function selection and its detuning-error grid.

    kind "to" is the plain ideal infidelity; "der" adds the squared
    fidelity spread over the grid; "der_i" instead adds the squared
    deviation of the weighted grid-average fidelity from one.  fidelity
    picks the gate reading used inside the cost: "phase" (default; the
    truth table alone cannot see the conditional phase) or "paper"
    (quarter sum of root return fidelities).

    The truth-table reading is blind to the conditional phase, so a pulse
    that does nothing scores perfectly; phase_window (rad) guards against
    that degeneracy by rejecting genomes whose error-free phi11 strays
    further than the window from pi."""

    kind: str
    eps0: float = TWO_PI * 0.8
    n: int = 9
    weights: str = "gaussian"
    sigma_fraction: float = 0.5
    fidelity: str = "phase"
    phase_window: float | None = None

    def __post_init__(self):
        if self.kind not in ("to", "der", "der_i"):
            raise ValueError("unknown cost kind %r" % (self.kind,))
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError("grid size must be odd and >= 3")
        if self.eps0 <= 0:
            raise ValueError("eps0 must be positive")
        if self.weights not in ("gaussian", "uniform"):
            raise ValueError("unknown weight profile %r" % (self.weights,))
        if self.fidelity not in ("phase", "paper"):
            raise ValueError("unknown fidelity reading %r" % (self.fidelity,))

    def grid(self):
        """Symmetric error grid, always containing 0."""
        return np.linspace(-self.eps0, self.eps0, self.n)

    def weight_vector(self):
        """Normalized grid weights (sum to one)."""
        if self.weights == "uniform":
            return np.full(self.n, 1.0 / self.n)
        sigma = self.sigma_fraction * self.eps0
        w = np.exp(-0.5 * (self.grid() / sigma) ** 2)
        return w / w.sum()


@dataclass(frozen=True)
class GAOptions:
    population: int = 64
    generations: int = 60
    tournament: int = 3
    crossover_rate: float = 0.9
    mutation_rate: float = 0.15
    mutation_sigma_frac: float = 0.05
    elitism: int = 2
    seed: int = 0
    bounds: tuple = DEFAULT_BOUNDS

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be >= 4")
        for lo, hi in self.bounds:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError("bounds must be finite with lo < hi")


@dataclass(frozen=True)
class ParetoPoint:
    objectives: tuple
    params: PulseParams


def _result(p, eps, opts):
    return metrics.gate_result(p, ErrorSample(eps_delta=float(eps)),
                               None, opts, compute_phase=True)


def _fidelity(p, eps, spec, opts):
    res = _result(p, eps, opts)
    return res.fidelity_phase if spec.fidelity == "phase" \
        else res.fidelity_paper


def _grid_eval(spec, p, opts):
    """(grid fidelities, error-free phi11); one integration per point."""
    fids = np.empty(spec.n)
    phi11 = None
    for k, eps in enumerate(spec.grid()):
        res = _result(p, eps, opts)
        fids[k] = res.fidelity_phase if spec.fidelity == "phase" \
            else res.fidelity_paper
        if k == spec.n // 2:
            phi11 = res.phi11
    return fids, phi11


def _phase_ok(spec, phi11):
    return spec.phase_window is None \
        or abs(phi11 - math.pi) <= spec.phase_window


def grid_fidelities(spec, p, opts=IntegratorOptions()):
    """Gate fidelity at every grid point; raises IntegratorError on
    failure anywhere on the grid."""
    return _grid_eval(spec, p, opts)[0]


def cost_from_grid(spec, fids):
    """Scalar cost from precomputed grid fidelities."""
    f0 = fids[spec.n // 2]
    if spec.kind == "to":
        return 1.0 - f0
    if spec.kind == "der":
        return (1.0 - f0) ** 2 + (fids.max() - fids.min()) ** 2
    fbar = float(spec.weight_vector() @ fids)
    return (1.0 - f0) ** 2 + (1.0 - fbar) ** 2


def eval_cost(spec, p, opts=IntegratorOptions()):
    """Cost of one pulse; COST_SENTINEL when the integration fails or the
    genome violates the conditional-phase window."""
    try:
        if spec.kind == "to":
            res = _result(p, 0.0, opts)
            if not _phase_ok(spec, res.phi11):
                return COST_SENTINEL
            return 1.0 - (res.fidelity_phase if spec.fidelity == "phase"
                          else res.fidelity_paper)
        fids, phi11 = _grid_eval(spec, p, opts)
        if not _phase_ok(spec, phi11):
            return COST_SENTINEL
        return float(cost_from_grid(spec, fids))
    except IntegratorError:
        return COST_SENTINEL


def eval_objectives(spec, p, opts=IntegratorOptions()):
    """Objective pair (J1, J2) for the two-objective search.

    J1 = 1 - F(0); J2 = F_max - F_min for kind der, 1 - weighted average
    for kind der_i."""
    if spec.kind == "to":
        raise ValueError("the two-objective search needs kind der or der_i")
    try:
        fids, phi11 = _grid_eval(spec, p, opts)
        if not _phase_ok(spec, phi11):
            return COST_SENTINEL, COST_SENTINEL
    except IntegratorError:
        return COST_SENTINEL, COST_SENTINEL
    j1 = 1.0 - fids[spec.n // 2]
    if spec.kind == "der":
        j2 = fids.max() - fids.min()
    else:
        j2 = 1.0 - float(spec.weight_vector() @ fids)
    return float(j1), float(j2)


def _params(genome, template):
    t1, t2, omega = genome
    return PulseParams(t1=float(t1), t2=float(t2), omega=float(omega),
                       omega_p_max=template.omega_p_max,
                       omega_c_max=template.omega_c_max,
                       delta0=template.delta0, blockade=template.blockade)


def _random_genome(rng, bounds):
    while True:
        g = np.array([rng.uniform(lo, hi) for lo, hi in bounds])
        if g[0] < g[1]:
            return g


def _mutate(genome, rng, opts):
    spans = np.array([hi - lo for lo, hi in opts.bounds])
    for _ in range(100):
        g = genome.copy()
        mask = rng.uniform(size=g.size) < opts.mutation_rate
        g[mask] += rng.normal(0.0, opts.mutation_sigma_frac
                              * spans[mask])
        g = np.clip(g, [lo for lo, _ in opts.bounds],
                    [hi for _, hi in opts.bounds])
        if g[0] < g[1]:
            return g
    return genome  # keep parent if mutation keeps violating t1 < t2


def _blend(a, b, rng, opts):
    if rng.uniform() >= opts.crossover_rate:
        return a.copy()
    for _ in range(100):
        u = rng.uniform(size=a.size)
        g = u * a + (1.0 - u) * b
        if g[0] < g[1]:
            return g
    return a.copy()


def _tournament(costs, rng, k):
    idx = rng.integers(0, len(costs), size=k)
    return idx[np.argmin(np.take(costs, idx))]


class _Memo:
    """Per-run cache so elites and repeated genomes are never re-solved."""

    def __init__(self, fn):
        self.fn = fn
        self.table = {}

    def __call__(self, genome):
        key = tuple(np.round(genome, 12))
        if key not in self.table:
            self.table[key] = self.fn(genome)
        return self.table[key]


def _initial_population(rng, opts, initial):
    pop = [np.asarray(g, float) for g in (initial or [])][:opts.population]
    while len(pop) < opts.population:
        pop.append(_random_genome(rng, opts.bounds))
    return pop


def ga_minimize(spec, opts=GAOptions(), template=None,
                integrator=IntegratorOptions(), initial=None):
    """Genetic minimization of a CostSpec over the (t1, t2, omega) box.

    Returns (best PulseParams, best cost, history) where history holds one
    (generation, best_cost, mean_cost, best_genome) entry per generation.
    initial optionally seeds the first population with known genomes
    (warm start); the rest is random.  Deterministic for a given
    (spec, opts, initial)."""
    template = template or PulseParams.preset("to")
    rng = np.random.default_rng(opts.seed)
    cost = _Memo(lambda g: eval_cost(spec, _params(g, template), integrator))

    pop = _initial_population(rng, opts, initial)
    history = []
    best_genome, best_cost = None, float("inf")
    for gen in range(opts.generations):
        costs = np.array([cost(g) for g in pop])
        order = np.argsort(costs)
        if costs[order[0]] < best_cost:
            best_cost = float(costs[order[0]])
            best_genome = pop[order[0]].copy()
        finite = costs[costs < COST_SENTINEL]
        mean = float(finite.mean()) if finite.size else COST_SENTINEL
        history.append((gen, best_cost, mean, best_genome.copy()))

        nxt = [pop[i].copy() for i in order[:opts.elitism]]
        while len(nxt) < opts.population:
            a = pop[_tournament(costs, rng, opts.tournament)]
            b = pop[_tournament(costs, rng, opts.tournament)]
            nxt.append(_mutate(_blend(a, b, rng, opts), rng, opts))
        pop = nxt
    return _params(best_genome, template), best_cost, history


def _nondominated(objs):
    """Indices of the non-dominated points of an (m, 2) objective array."""
    keep = []
    for i, (a1, a2) in enumerate(objs):
        dominated = False
        for j, (b1, b2) in enumerate(objs):
            if j != i and b1 <= a1 and b2 <= a2 and (b1 < a1 or b2 < a2):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


def _fast_fronts(objs):
    """Non-dominated sorting: list of fronts, each a list of indices."""
    n = len(objs)
    dominates = [[] for _ in range(n)]
    count = np.zeros(n, dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = objs[i], objs[j]
            if a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1]):
                dominates[i].append(j)
                count[j] += 1
            elif b[0] <= a[0] and b[1] <= a[1] and (b[0] < a[0]
                                                    or b[1] < a[1]):
                dominates[j].append(i)
                count[i] += 1
    fronts = [[i for i in range(n) if count[i] == 0]]
    while fronts[-1]:
        nxt = []
        for i in fronts[-1]:
            for j in dominates[i]:
                count[j] -= 1
                if count[j] == 0:
                    nxt.append(j)
        fronts.append(nxt)
    return fronts[:-1]


def _crowding(objs, front):
    dist = {i: 0.0 for i in front}
    for k in range(2):
        ordered = sorted(front, key=lambda i: objs[i][k])
        span = objs[ordered[-1]][k] - objs[ordered[0]][k]
        dist[ordered[0]] = dist[ordered[-1]] = float("inf")
        if span <= 0:
            continue
        for a, i, b in zip(ordered, ordered[1:], ordered[2:]):
            dist[i] += (objs[b][k] - objs[a][k]) / span
    return dist


def pareto_front(spec, opts=GAOptions(), template=None,
                 integrator=IntegratorOptions(), initial=None):
    """Two-objective evolutionary search returning the non-dominated front
    of every genome ever evaluated.

    The selection machinery is NSGA-II: non-dominated sorting plus
    crowding-distance tournaments.  initial optionally warm-starts part of
    the first population.  Returns ParetoPoints sorted by J1."""
    template = template or PulseParams.preset("to")
    rng = np.random.default_rng(opts.seed)
    evaluate = _Memo(lambda g: eval_objectives(spec, _params(g, template),
                                               integrator))

    pop = _initial_population(rng, opts, initial)
    archive = {}
    for _ in range(opts.generations):
        objs = [evaluate(g) for g in pop]
        for g, o in zip(pop, objs):
            if o[0] < COST_SENTINEL:
                archive[tuple(np.round(g, 12))] = o
        fronts = _fast_fronts(objs)
        rank = np.empty(len(pop), dtype=int)
        crowd = np.empty(len(pop))
        for r, front in enumerate(fronts):
            cd = _crowding(objs, front)
            for i in front:
                rank[i] = r
                crowd[i] = cd[i]

        def better(i, j):
            if rank[i] != rank[j]:
                return i if rank[i] < rank[j] else j
            return i if crowd[i] >= crowd[j] else j

        elite = sorted(range(len(pop)),
                       key=lambda i: (rank[i], -crowd[i]))[:opts.elitism]
        nxt = [pop[i].copy() for i in elite]
        while len(nxt) < opts.population:
            i = better(rng.integers(len(pop)), rng.integers(len(pop)))
            j = better(rng.integers(len(pop)), rng.integers(len(pop)))
            nxt.append(_mutate(_blend(pop[i], pop[j], rng, opts), rng, opts))
        pop = nxt

    keys = list(archive)
    objs = [archive[k] for k in keys]
    front = _nondominated(objs)
    points = [ParetoPoint(objs[i], _params(np.array(keys[i]), template))
              for i in front]
    points.sort(key=lambda pt: pt.objectives[0])
    # drop duplicate objective pairs so the front ordering is strict
    out = []
    for pt in points:
        if not out or pt.objectives != out[-1].objectives:
            out.append(pt)
    return out


def dominance_audit(points):
    """True when no returned point dominates another (brute force)."""
    objs = [pt.objectives for pt in points]
    return len(_nondominated(objs)) == len(objs)


def write_history_csv(path, history):
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["generation", "best_cost", "mean_cost",
                     "best_t1", "best_t2", "best_omega"])
        for gen, best, mean, genome in history:
            wr.writerow([gen, f"{best:.9e}", f"{mean:.9e}",
                         f"{genome[0]:.6f}", f"{genome[1]:.6f}",
                         f"{genome[2]:.6f}"])


def write_pareto_csv(path, points):
    with open(path, "w", newline="") as f:
        wr = csv.writer(f)
        wr.writerow(["J1", "J2", "t1", "t2", "omega"])
        for pt in points:
            p = pt.params
            wr.writerow([f"{pt.objectives[0]:.9e}",
                         f"{pt.objectives[1]:.9e}",
                         f"{p.t1:.6f}", f"{p.t2:.6f}", f"{p.omega:.6f}"])
