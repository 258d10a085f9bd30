"""Evolving micro-classifier ensembles for streams with extreme verification latency."""

from .core import (
    Ensemble,
    MicroClassifier,
    Mode,
    Model,
    Prediction,
    classify,
    classify_window,
    decay_fitness,
    initialize_model,
    pad_subpopulation,
)
from .datagen import ANALOG_STREAMS, DriftSpec, generate, load_csv_stream
from .estimator import EvolvingEnsembleClassifier
from .evolvers import EvolverConfig, SwarmState, ga_update, init_swarm, pso_update, static_update
from .experiment import BatchReport, ExperimentSpec, emit_report, run_experiment
from .metrics import macro_f1, timed, wilcoxon_signed_rank
from .stream import RunConfig, RunReport, run_stream

__version__ = "0.1.0"

__all__ = [
    "ANALOG_STREAMS",
    "BatchReport",
    "DriftSpec",
    "Ensemble",
    "EvolverConfig",
    "EvolvingEnsembleClassifier",
    "ExperimentSpec",
    "MicroClassifier",
    "Mode",
    "Model",
    "Prediction",
    "RunConfig",
    "RunReport",
    "SwarmState",
    "classify",
    "classify_window",
    "decay_fitness",
    "emit_report",
    "ga_update",
    "generate",
    "init_swarm",
    "initialize_model",
    "load_csv_stream",
    "macro_f1",
    "pad_subpopulation",
    "pso_update",
    "run_experiment",
    "run_stream",
    "static_update",
    "timed",
    "wilcoxon_signed_rank",
]
