"""Phosphene brightness models: spectral, exponential and baseline."""

import json

from ._phosphene import (
    Dataset,
    DegenerateVarianceError,
    FitError,
    dft,
    mse,
    pearson_r,
)
from . import _phosphene

__all__ = [
    "Dataset",
    "DegenerateVarianceError",
    "FitError",
    "dft",
    "evaluate",
    "fit",
    "load_dataset",
    "mse",
    "pearson_r",
    "predict",
    "sweep",
]


def load_dataset(path):
    return Dataset.load(str(path))


def fit(dataset, model, m=2, mode="descriptive", subject=None, freq=None, dur=None, seed=0, restarts=8):
    """Fit records as dicts: one per trial (descriptive) or one overall (predictive)."""
    return json.loads(_phosphene.fit(dataset, model, m, mode, subject, freq, dur, seed, restarts))


def predict(record, freq, dur, n, t0=0.0, dt=0.25):
    return _phosphene.predict(json.dumps(record), freq, dur, t0, dt, n)


def evaluate(dataset, model, protocol="subject", m=2, seed=0, restarts=8, threads=0):
    return json.loads(_phosphene.evaluate(dataset, model, protocol, m, seed, restarts, threads))


def sweep(dataset, m_min=1, m_max=8, seed=0, threads=0):
    return json.loads(_phosphene.sweep(dataset, m_min, m_max, seed, threads))
