"""scikit-learn estimator wrapping the evolving micro-classifier ensembles."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_points, check_positive_float, check_positive_int, make_seed_sequence
from .core import Mode, classify_window, decay_fitness, initialize_model
from .evolvers import EvolverConfig, EvolverKind, ga_update, init_swarm, pso_update, static_update
from .metrics import macro_f1

__all__ = ["EvolvingEnsembleClassifier"]


class EvolvingEnsembleClassifier(ClassifierMixin, BaseEstimator):
    """Per-class micro-classifier ensembles adapted to drift without labels.

    ``fit`` is the only step that sees labels.  Afterwards, each call to
    :meth:`partial_fit` or :meth:`predict_window` treats its input as one
    tumbling window: the points are classified (updating fitness), every
    ensemble is evolved, and fitness decays by one.

    Parameters
    ----------
    n_agents : int, default=20
        Micro-classifiers per class.
    radius : float, default=1.0
        Radius shared by every micro-classifier.
    evolver : {"ga", "pso", "static"}, default="ga"
    mode : {"abstain", "force"}, default="abstain"
        Whether points outside every sphere are left unlabelled or given the
        label of the nearest centre.
    ga_mutation_prob, ga_mutation_sigma, ga_selection, ga_elitism
        GA settings; ``None`` picks ``1/D`` and ``radius/2``.
    pso_inertia, pso_cognitive, pso_social, pso_vmax
        PSO settings; ``pso_vmax=None`` picks ``2*radius``.
    pso_memory_decay, pso_reset_fitness
        Drift handling for the swarm memory; ``1.0`` and ``False`` give the
        canonical PSO.
    random_state : int, SeedSequence or None

    Attributes
    ----------
    model_ : Model
    classes_ : ndarray
    swarms_ : list of SwarmState or None
    """

    def __init__(
        self,
        n_agents=20,
        radius=1.0,
        evolver="ga",
        mode="abstain",
        ga_mutation_prob=None,
        ga_mutation_sigma=None,
        ga_selection="tournament",
        ga_elitism=False,
        pso_inertia=0.72,
        pso_cognitive=1.49,
        pso_social=1.49,
        pso_vmax=None,
        pso_memory_decay=0.5,
        pso_reset_fitness=True,
        random_state=None,
    ):
        self.n_agents = n_agents
        self.radius = radius
        self.evolver = evolver
        self.mode = mode
        self.ga_mutation_prob = ga_mutation_prob
        self.ga_mutation_sigma = ga_mutation_sigma
        self.ga_selection = ga_selection
        self.ga_elitism = ga_elitism
        self.pso_inertia = pso_inertia
        self.pso_cognitive = pso_cognitive
        self.pso_social = pso_social
        self.pso_vmax = pso_vmax
        self.pso_memory_decay = pso_memory_decay
        self.pso_reset_fitness = pso_reset_fitness
        self.random_state = random_state

    def evolver_config(self):
        return EvolverConfig(
            kind=self.evolver,
            ga_mutation_prob=self.ga_mutation_prob,
            ga_mutation_sigma=self.ga_mutation_sigma,
            ga_selection=self.ga_selection,
            ga_elitism=self.ga_elitism,
            pso_inertia=self.pso_inertia,
            pso_cognitive=self.pso_cognitive,
            pso_social=self.pso_social,
            pso_vmax=self.pso_vmax,
            pso_memory_decay=self.pso_memory_decay,
            pso_reset_fitness=self.pso_reset_fitness,
        )

    def fit(self, X, y):
        n_agents = check_positive_int(self.n_agents, "n_agents")
        radius = check_positive_float(self.radius, "radius")
        self.mode_ = Mode(self.mode)
        self.evolver_config_ = self.evolver_config()
        X = check_points(X)
        y = np.asarray(y)
        if y.ndim != 1 or len(y) != len(X):
            raise ValueError("y must be 1-D with one label per row of X")

        seeds = make_seed_sequence(self.random_state).spawn(2)
        init_rng = np.random.default_rng(seeds[0])
        self.model_ = initialize_model(X, y, n_agents, radius, init_rng)
        self.classes_ = np.array(self.model_.labels)
        self.n_features_in_ = X.shape[1]
        # One generator per ensemble so each class evolves on its own stream.
        self.rngs_ = [np.random.default_rng(s) for s in seeds[1].spawn(len(self.classes_))]
        if self.evolver_config_.kind is EvolverKind.PSO:
            self.swarms_ = [init_swarm(e) for e in self.model_.ensembles]
        else:
            self.swarms_ = None
        self.n_windows_ = 0
        return self

    def _decode(self, codes):
        out = np.empty(len(codes), dtype=object)
        known = codes >= 0
        out[known] = self.classes_[codes[known]]
        out[~known] = None
        return out

    def predict(self, X):
        """Labels for ``X`` without touching fitness; ``None`` = unrecognised."""
        check_is_fitted(self, "model_")
        X = check_points(X, dim=self.n_features_in_)
        codes, _, _ = classify_window(self.model_.copy(), X, self.mode_)
        return self._decode(codes)

    def predict_codes(self, X):
        """Like :meth:`predict` but returns indices into ``classes_`` (-1 = none)."""
        check_is_fitted(self, "model_")
        X = check_points(X, dim=self.n_features_in_)
        codes, _, _ = classify_window(self.model_.copy(), X, self.mode_)
        return codes

    def classify_window(self, X):
        """Classify one window with fitness side effects, without evolving.

        Returns ``(codes, confidence, recognisers)``.
        """
        check_is_fitted(self, "model_")
        X = check_points(X, dim=self.n_features_in_)
        return classify_window(self.model_, X, self.mode_)

    def evolve(self):
        """Apply the evolver to every ensemble, then decay fitness."""
        check_is_fitted(self, "model_")
        cfg = self.evolver_config_
        model = self.model_
        for k, ens in enumerate(model.ensembles):
            if cfg.kind is EvolverKind.GA:
                model.ensembles[k] = ga_update(ens, cfg, self.rngs_[k])
            elif cfg.kind is EvolverKind.PSO:
                model.ensembles[k], self.swarms_[k] = pso_update(
                    ens, self.swarms_[k], cfg, self.rngs_[k]
                )
            else:
                model.ensembles[k] = static_update(ens)
        decay_fitness(model)
        self.n_windows_ += 1
        return self

    def predict_window(self, X):
        """Process one unlabelled window and return its predictions."""
        codes, _, _ = self.classify_window(X)
        self.evolve()
        return self._decode(codes)

    def partial_fit(self, X, y=None):
        """Adapt to one unlabelled window.  ``y`` is ignored."""
        self.predict_window(X)
        return self

    def score(self, X, y, sample_weight=None):
        """Macro-F1 of side-effect-free predictions on ``X``."""
        return macro_f1(list(y), list(self.predict(X)), list(self.classes_))
