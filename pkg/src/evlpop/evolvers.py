"""End-of-window population updates for one ensemble.

Three evolvers share the same contract: they take one ensemble (and, for PSO,
its swarm memory) and return a population of the same size, label and radius.
An ensemble never reads or writes another ensemble's members.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


__all__ = [
    "EvolverKind",
    "EvolverConfig",
    "ParticleState",
    "SwarmState",
    "init_swarm",
    "ga_update",
    "pso_update",
    "static_update",
    "tournament_select",
    "roulette_select",
    "fixed_point_crossover",
]


class EvolverKind(str, Enum):
    GA = "ga"
    PSO = "pso"
    STATIC = "static"


@dataclass(frozen=True)
class EvolverConfig:
    """Hyperparameters for the evolvers.

    ``None`` for ``ga_mutation_prob``, ``ga_mutation_sigma`` and ``pso_vmax``
    means "derive from the data": ``1/D``, ``radius/2`` and ``2*radius``.

    ``pso_memory_decay`` scales the remembered pbest/gbest fitness before each
    refresh, and ``pso_reset_fitness`` zeroes a particle's fitness once it has
    moved.  ``1.0`` and ``False`` give the canonical swarm, which keeps chasing
    positions that were good before the stream drifted.
    """

    kind: EvolverKind = EvolverKind.GA
    ga_mutation_prob: float = None
    ga_mutation_sigma: float = None
    ga_selection: str = "tournament"
    ga_elitism: bool = False
    pso_inertia: float = 0.72
    pso_cognitive: float = 1.49
    pso_social: float = 1.49
    pso_vmax: float = None
    pso_memory_decay: float = 0.5
    pso_reset_fitness: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", EvolverKind(self.kind))
        if self.ga_mutation_prob is not None and not 0.0 <= self.ga_mutation_prob <= 1.0:
            raise ValueError("ga_mutation_prob must lie in [0, 1]")
        if self.ga_mutation_sigma is not None and not self.ga_mutation_sigma > 0:
            raise ValueError("ga_mutation_sigma must be positive")
        if self.pso_vmax is not None and not self.pso_vmax > 0:
            raise ValueError("pso_vmax must be positive")
        if not 0.0 <= self.pso_memory_decay <= 1.0:
            raise ValueError("pso_memory_decay must lie in [0, 1]")
        if self.ga_selection not in ("tournament", "roulette"):
            raise ValueError("ga_selection must be 'tournament' or 'roulette'")

    def resolved(self, dim, radius):
        """Copy with every data-dependent default filled in."""
        return replace(
            self,
            ga_mutation_prob=1.0 / dim if self.ga_mutation_prob is None else self.ga_mutation_prob,
            ga_mutation_sigma=radius / 2 if self.ga_mutation_sigma is None else self.ga_mutation_sigma,
            pso_vmax=2 * radius if self.pso_vmax is None else self.pso_vmax,
        )

    def to_dict(self):
        d = dict(self.__dict__)
        d["kind"] = self.kind.value
        return d


def _shared_radius(ensemble):
    return float(ensemble.radii[0])


# --------------------------------------------------------------------------- GA


def tournament_select(fitness, n_select, rng):
    """Indices of ``n_select`` winners of 2-way tournaments.

    Both contestants are drawn uniformly with replacement; equal fitness is
    settled by a fair coin.
    """
    fitness = np.asarray(fitness)
    pairs = rng.integers(0, len(fitness), size=(n_select, 2))
    coin = rng.random(n_select) < 0.5
    a, b = pairs[:, 0], pairs[:, 1]
    fa, fb = fitness[a], fitness[b]
    return np.where(fa > fb, a, np.where(fb > fa, b, np.where(coin, a, b)))


def roulette_select(fitness, n_select, rng):
    """Fitness-proportional selection; uniform when every fitness is zero."""
    fitness = np.asarray(fitness, dtype=float)
    total = fitness.sum()
    p = fitness / total if total > 0 else None
    return rng.choice(len(fitness), size=n_select, p=p)


def fixed_point_crossover(a, b, cut):
    """Swap the coordinate suffixes of ``a`` and ``b`` from index ``cut`` on."""
    child_a = np.concatenate([a[:cut], b[cut:]])
    child_b = np.concatenate([b[:cut], a[cut:]])
    return child_a, child_b


def ga_update(ensemble, config, rng):
    """One generation of selection, fixed-point crossover and mutation.

    Parameters
    ----------
    ensemble : Ensemble
        Subpopulation whose fitness reflects the window just classified.
    config : EvolverConfig
    rng : numpy.random.Generator

    Returns
    -------
    Ensemble
        Children only (generational replacement), fitness reset to zero.  With
        ``config.ga_elitism`` the fittest parent survives unchanged in slot 0.
    """
    n = len(ensemble)
    if n == 0:
        raise ValueError("cannot evolve an empty ensemble")
    dim = ensemble.dim
    cfg = config.resolved(dim, _shared_radius(ensemble))

    if cfg.ga_selection == "roulette":
        chosen = roulette_select(ensemble.fitness, n, rng)
    else:
        chosen = tournament_select(ensemble.fitness, n, rng)
    parents = ensemble.centres[chosen]

    children = parents.copy()
    for i in range(0, n - 1, 2):
        if dim > 1:
            cut = int(rng.integers(1, dim))
            children[i], children[i + 1] = fixed_point_crossover(parents[i], parents[i + 1], cut)

    mask = rng.random((n, dim)) < cfg.ga_mutation_prob
    noise = rng.normal(0.0, cfg.ga_mutation_sigma, size=(n, dim))
    children += np.where(mask, noise, 0.0)

    if cfg.ga_elitism:
        children[0] = ensemble.centres[int(np.argmax(ensemble.fitness))]
    return ensemble.with_centres(children, fitness=np.zeros(n))


# -------------------------------------------------------------------------- PSO


@dataclass
class ParticleState:
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float


@dataclass
class SwarmState:
    """Velocity and best-position memory for one class's swarm.

    Per-particle state is stored row-wise in the arrays; :meth:`particle`
    returns a copy of one row as a :class:`ParticleState`.
    """

    velocities: np.ndarray
    pbest_positions: np.ndarray
    pbest_fitness: np.ndarray
    gbest_position: np.ndarray
    gbest_fitness: float

    def __len__(self):
        return self.velocities.shape[0]

    def particle(self, i):
        return ParticleState(
            self.velocities[i].copy(), self.pbest_positions[i].copy(), float(self.pbest_fitness[i])
        )

    @classmethod
    def from_particles(cls, particles, gbest_position, gbest_fitness):
        return cls(
            np.array([p.velocity for p in particles], dtype=float),
            np.array([p.pbest_position for p in particles], dtype=float),
            np.array([p.pbest_fitness for p in particles], dtype=float),
            np.asarray(gbest_position, dtype=float),
            float(gbest_fitness),
        )

    def copy(self):
        return SwarmState(
            self.velocities.copy(), self.pbest_positions.copy(), self.pbest_fitness.copy(),
            self.gbest_position.copy(), self.gbest_fitness,
        )


def init_swarm(ensemble):
    """Swarm at rest, every particle remembering its current position."""
    fitness = ensemble.fitness.copy()
    best = int(np.argmax(fitness))
    return SwarmState(
        np.zeros_like(ensemble.centres),
        ensemble.centres.copy(),
        fitness,
        ensemble.centres[best].copy(),
        float(fitness[best]),
    )


def pso_update(ensemble, swarm, config, rng):
    """Refresh the best-position memory, then move every particle.

    Per dimension the velocity becomes
    ``w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)``, clamped to ``+-vmax``,
    with fresh uniform ``r1``, ``r2`` per particle and dimension.  Before the
    refresh, remembered fitness is multiplied by ``pso_memory_decay``.  Moved
    particles restart at zero fitness when ``pso_reset_fitness`` is set;
    otherwise fitness is left untouched.

    Returns
    -------
    (Ensemble, SwarmState)
    """
    n, dim = ensemble.centres.shape
    if len(swarm) != n:
        raise ValueError(f"swarm has {len(swarm)} particles for {n} classifiers")
    if swarm.velocities.shape[1] != dim or swarm.gbest_position.shape != (dim,):
        raise ValueError("swarm dimension does not match the ensemble")
    cfg = config.resolved(dim, _shared_radius(ensemble))
    swarm = swarm.copy()
    x = ensemble.centres
    fitness = ensemble.fitness
    if cfg.pso_memory_decay != 1.0:
        swarm.pbest_fitness *= cfg.pso_memory_decay
        swarm.gbest_fitness *= cfg.pso_memory_decay

    improved = fitness > swarm.pbest_fitness
    swarm.pbest_positions[improved] = x[improved]
    swarm.pbest_fitness[improved] = fitness[improved]
    best = int(np.argmax(swarm.pbest_fitness))
    if swarm.pbest_fitness[best] > swarm.gbest_fitness:
        swarm.gbest_fitness = float(swarm.pbest_fitness[best])
        swarm.gbest_position = swarm.pbest_positions[best].copy()

    r1 = rng.random((n, dim))
    r2 = rng.random((n, dim))
    v = (
        cfg.pso_inertia * swarm.velocities
        + cfg.pso_cognitive * r1 * (swarm.pbest_positions - x)
        + cfg.pso_social * r2 * (swarm.gbest_position[None, :] - x)
    )
    np.clip(v, -cfg.pso_vmax, cfg.pso_vmax, out=v)
    swarm.velocities = v
    new_fitness = np.zeros(n) if cfg.pso_reset_fitness else None
    return ensemble.with_centres(x + v, fitness=new_fitness), swarm


# ----------------------------------------------------------------------- static


def static_update(ensemble):
    """Identity update used as the non-adaptive baseline."""
    return ensemble
