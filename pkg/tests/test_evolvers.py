import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evlpop.core import Ensemble, Model, classify_window
from evlpop.evolvers import (
    EvolverConfig,
    SwarmState,
    fixed_point_crossover,
    ga_update,
    init_swarm,
    pso_update,
    roulette_select,
    static_update,
    tournament_select,
)

NO_MUTATION = EvolverConfig(kind="ga", ga_mutation_prob=0.0)
CANONICAL_PSO = EvolverConfig(kind="pso", pso_memory_decay=1.0, pso_reset_fitness=False)


class OnesRng:
    """Stand-in generator whose uniform draws are all 1."""

    def random(self, size):
        return np.ones(size)


def random_ensemble(rng, n=None, dim=None, label="A", radius=1.0):
    n = n or int(rng.integers(1, 12))
    dim = dim or int(rng.integers(1, 5))
    return Ensemble(label, rng.normal(size=(n, dim)), radius,
                    rng.integers(0, 20, size=n).astype(float))


# ---------------------------------------------------------------- GA


def test_crossover_outcomes_match_enumeration():
    a, b = np.array([0.0, 0.0]), np.array([2.0, 2.0])
    expected = set()
    for cut in range(1, 2):
        expected.add(tuple(np.r_[a[:cut], b[cut:]]))
        expected.add(tuple(np.r_[b[:cut], a[cut:]]))
    assert expected == {(0.0, 2.0), (2.0, 0.0)}

    seen = set()
    rng = np.random.default_rng(0)
    for _ in range(50):
        e = Ensemble("A", [a, b], 1.0, [1.0, 1.0])
        children = ga_update(e, NO_MUTATION, rng).centres
        for c in children:
            seen.add(tuple(c))
    assert seen <= expected | {(0.0, 0.0), (2.0, 2.0)}
    assert expected <= seen


def test_fixed_point_crossover_swaps_suffix():
    a, b = np.arange(4.0), -np.arange(4.0)
    ca, cb = fixed_point_crossover(a, b, 2)
    assert ca.tolist() == [0, 1, -2, -3]
    assert cb.tolist() == [0, -1, 2, 3]


def test_single_member_without_mutation_is_identity(rng):
    e = Ensemble("A", [[1.5, -2.0, 3.0]], 1.0, [4.0])
    child = ga_update(e, NO_MUTATION, rng)
    assert np.array_equal(child.centres, e.centres)
    assert child.fitness.tolist() == [0.0]


def test_ga_deterministic_under_seed():
    e = Ensemble("A", np.random.default_rng(1).normal(size=(9, 3)), 1.0, np.ones(9))
    a = ga_update(e, EvolverConfig(), np.random.default_rng(5))
    b = ga_update(e, EvolverConfig(), np.random.default_rng(5))
    assert a.state_bytes() == b.state_bytes()


def test_tournament_win_frequency_is_three_quarters():
    # P(win) = P(drawn twice) + P(drawn once) * 1 = 1/4 + 1/2.
    exact = sum(
        (1.0 if 0 in pair else 0.0) for pair in itertools.product([0, 1], repeat=2)
    ) / 4
    assert exact == 0.75
    chosen = tournament_select(np.array([10.0, 0.0]), 10_000, np.random.default_rng(0))
    assert abs(np.mean(chosen == 0) - exact) <= 0.02


def test_tournament_ties_are_fair():
    chosen = tournament_select(np.array([3.0, 3.0]), 20_000, np.random.default_rng(1))
    assert abs(np.mean(chosen == 0) - 0.5) < 0.02


def test_roulette_is_proportional_and_uniform_on_zero():
    rng = np.random.default_rng(2)
    picks = roulette_select(np.array([3.0, 1.0]), 20_000, rng)
    assert abs(np.mean(picks == 0) - 0.75) < 0.02
    picks = roulette_select(np.zeros(4), 20_000, rng)
    assert abs(np.mean(picks == 2) - 0.25) < 0.02


def test_elitism_keeps_the_fittest_centre(rng):
    e = Ensemble("A", rng.normal(size=(6, 2)), 1.0, [0, 0, 9, 0, 0, 0])
    child = ga_update(e, EvolverConfig(ga_elitism=True), rng)
    assert np.array_equal(child.centres[0], e.centres[2])


def test_mutation_rate_one_perturbs_every_coordinate(rng):
    e = Ensemble("A", np.zeros((8, 3)), 1.0, np.ones(8))
    child = ga_update(e, EvolverConfig(ga_mutation_prob=1.0, ga_mutation_sigma=0.1), rng)
    assert np.all(child.centres != 0.0)


def test_ga_rejects_empty(rng):
    with pytest.raises(ValueError):
        ga_update(Ensemble("A", np.zeros((0, 2)), 1.0), EvolverConfig(), rng)


# ---------------------------------------------------------------- PSO


def test_particle_at_its_bests_with_no_velocity_stays_put(rng):
    e = Ensemble("A", [[1.0, 2.0]], 1.0, [0.0])
    swarm = init_swarm(e)
    moved, swarm = pso_update(e, swarm, EvolverConfig(kind="pso"), rng)
    assert np.array_equal(moved.centres, e.centres)
    assert np.array_equal(swarm.velocities, [[0.0, 0.0]])


def _hand_swarm():
    return SwarmState(
        velocities=np.zeros((1, 2)),
        pbest_positions=np.array([[1.0, 0.0]]),
        pbest_fitness=np.array([5.0]),
        gbest_position=np.array([0.0, 1.0]),
        gbest_fitness=5.0,
    )


@pytest.mark.parametrize("vmax, expected", [(100.0, [1.0, 1.0]), (0.5, [0.5, 0.5])])
def test_velocity_formula_and_clamp(vmax, expected):
    # v' = 1*0 + 1*1*((1,0)-(0,0)) + 1*1*((0,1)-(0,0)) = (1,1), then clamp.
    x, v = np.zeros(2), np.zeros(2)
    pbest, gbest = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    oracle = np.clip(1.0 * v + 1.0 * (pbest - x) + 1.0 * (gbest - x), -vmax, vmax)
    assert oracle.tolist() == expected

    cfg = EvolverConfig(kind="pso", pso_inertia=1.0, pso_cognitive=1.0, pso_social=1.0,
                        pso_vmax=vmax)
    e = Ensemble("A", [x], 1.0, [0.0])
    moved, swarm = pso_update(e, _hand_swarm(), cfg, OnesRng())
    assert swarm.velocities[0].tolist() == expected
    assert moved.centres[0].tolist() == expected


def test_pbest_and_gbest_refresh_before_moving():
    e = Ensemble("A", [[0.0, 0.0], [3.0, 3.0]], 1.0, [2.0, 9.0])
    swarm = init_swarm(Ensemble("A", [[0.0, 0.0], [3.0, 3.0]], 1.0, [4.0, 1.0]))
    _, swarm = pso_update(e, swarm, CANONICAL_PSO, np.random.default_rng(0))
    assert swarm.pbest_fitness.tolist() == [4.0, 9.0]
    assert swarm.gbest_fitness == 9.0
    assert swarm.gbest_position.tolist() == [3.0, 3.0]


def test_gbest_tie_keeps_incumbent():
    e = Ensemble("A", [[0.0], [5.0]], 1.0, [3.0, 3.0])
    swarm = SwarmState(np.zeros((2, 1)), np.array([[0.0], [5.0]]), np.array([0.0, 0.0]),
                       np.array([7.0]), 3.0)
    _, swarm = pso_update(e, swarm, CANONICAL_PSO, np.random.default_rng(0))
    assert swarm.gbest_position.tolist() == [7.0]


def test_canonical_memory_is_monotone(rng):
    e = random_ensemble(rng, n=6, dim=2)
    swarm = init_swarm(e)
    prev_p, prev_g = swarm.pbest_fitness.copy(), swarm.gbest_fitness
    for _ in range(30):
        e = e.with_centres(e.centres, fitness=rng.integers(0, 30, size=6).astype(float))
        e, swarm = pso_update(e, swarm, CANONICAL_PSO, rng)
        assert np.all(swarm.pbest_fitness >= prev_p)
        assert swarm.gbest_fitness >= prev_g
        assert swarm.gbest_fitness >= swarm.pbest_fitness.max()
        prev_p, prev_g = swarm.pbest_fitness.copy(), swarm.gbest_fitness


def test_fading_memory_keeps_gbest_on_top(rng):
    e = random_ensemble(rng, n=5, dim=3)
    swarm = init_swarm(e)
    for _ in range(20):
        e = e.with_centres(e.centres, fitness=rng.integers(0, 30, size=5).astype(float))
        e, swarm = pso_update(e, swarm, EvolverConfig(kind="pso"), rng)
        assert swarm.gbest_fitness >= swarm.pbest_fitness.max()
        assert np.all(np.abs(swarm.velocities) <= 2.0)


def test_velocity_clamped_every_step(rng):
    cfg = EvolverConfig(kind="pso", pso_vmax=0.3, pso_inertia=1.5, pso_cognitive=3, pso_social=3)
    e = random_ensemble(rng, n=8, dim=4)
    swarm = init_swarm(e)
    for _ in range(25):
        e = e.with_centres(e.centres * 2, fitness=rng.integers(0, 9, size=8).astype(float))
        e, swarm = pso_update(e, swarm, cfg, rng)
        assert np.all(np.abs(swarm.velocities) <= 0.3)


def test_canonical_pso_leaves_fitness_alone(rng):
    e = random_ensemble(rng, n=4, dim=2)
    moved, _ = pso_update(e, init_swarm(e), CANONICAL_PSO, rng)
    assert np.array_equal(moved.fitness, e.fitness)
    moved, _ = pso_update(e, init_swarm(e), EvolverConfig(kind="pso"), rng)
    assert np.all(moved.fitness == 0)


def test_pso_rejects_mismatched_swarm(rng):
    e = random_ensemble(rng, n=4, dim=2)
    other = init_swarm(random_ensemble(rng, n=3, dim=2))
    with pytest.raises(ValueError):
        pso_update(e, other, EvolverConfig(kind="pso"), rng)
    wrong_dim = init_swarm(random_ensemble(rng, n=4, dim=3))
    with pytest.raises(ValueError):
        pso_update(e, wrong_dim, EvolverConfig(kind="pso"), rng)


def test_particle_view(rng):
    e = random_ensemble(rng, n=3, dim=2)
    swarm = init_swarm(e)
    p = swarm.particle(1)
    assert np.array_equal(p.pbest_position, e.centres[1])
    rebuilt = SwarmState.from_particles([swarm.particle(i) for i in range(3)],
                                        swarm.gbest_position, swarm.gbest_fitness)
    assert np.array_equal(rebuilt.pbest_positions, swarm.pbest_positions)


# ---------------------------------------------------------------- static


def test_static_is_identity_even_after_many_calls(rng):
    e = random_ensemble(rng)
    before = e.state_bytes()
    out = e
    for _ in range(1000):
        out = static_update(out)
    assert out.state_bytes() == before


def test_static_predictions_unchanged(rng):
    e = Ensemble("A", rng.normal(size=(5, 2)), 1.0)
    f = Ensemble("B", rng.normal(3, 1, size=(5, 2)), 1.0)
    X = rng.normal(1, 2, size=(40, 2))
    before, _, _ = classify_window(Model([e.copy(), f.copy()], 5, 1.0), X)
    after, _, _ = classify_window(Model([static_update(e), static_update(f)], 5, 1.0), X)
    assert np.array_equal(before, after)


# ---------------------------------------------------------------- shared invariants


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["ga", "pso", "static"]))
def test_size_label_radius_conserved(seed, kind):
    rng = np.random.default_rng(seed)
    e = random_ensemble(rng, radius=0.7)
    cfg = EvolverConfig(kind=kind)
    if kind == "ga":
        out = ga_update(e, cfg, rng)
    elif kind == "pso":
        out, _ = pso_update(e, init_swarm(e), cfg, rng)
    else:
        out = static_update(e)
    assert len(out) == len(e)
    assert out.label == e.label
    assert np.all(out.radii == 0.7)
    assert np.all(out.fitness >= 0)


def test_updating_one_ensemble_leaves_others_untouched(rng):
    a = random_ensemble(rng, n=6, dim=2, label="A")
    b = random_ensemble(rng, n=6, dim=2, label="B")
    checksum = b.state_bytes()
    ga_update(a, EvolverConfig(), rng)
    pso_update(a, init_swarm(a), EvolverConfig(kind="pso"), rng)
    assert b.state_bytes() == checksum


def test_config_validation():
    with pytest.raises(ValueError):
        EvolverConfig(ga_mutation_prob=1.5)
    with pytest.raises(ValueError):
        EvolverConfig(ga_mutation_sigma=0)
    with pytest.raises(ValueError):
        EvolverConfig(pso_vmax=-1)
    with pytest.raises(ValueError):
        EvolverConfig(kind="ant")
    resolved = EvolverConfig().resolved(dim=4, radius=2.0)
    assert (resolved.ga_mutation_prob, resolved.ga_mutation_sigma, resolved.pso_vmax) == (
        0.25, 1.0, 4.0)
