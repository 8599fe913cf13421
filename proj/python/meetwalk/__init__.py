"""Expected meeting times of random walkers on directed graphs."""

import numpy as np

from . import _core
from ._core import (
    BudgetError,
    IoError,
    MeetingTimes,
    NumericalError,
    ValidationError,
    ctmc_hitting_times,
    decompose,
    equal_neighbor_matrix,
    generate,
    hitting_times,
    rate_matrix,
    stationary_distribution,
)

__all__ = [
    "BudgetError",
    "IoError",
    "MeetingTimes",
    "NumericalError",
    "ValidationError",
    "classify",
    "ctmc_hitting_times",
    "decompose",
    "equal_neighbor_matrix",
    "generate",
    "hitting_times",
    "mean_meeting_time",
    "meeting_times",
    "rate_matrix",
    "simulate",
    "stationary_distribution",
]


def _chains(x):
    # one matrix or a list of matrices
    if isinstance(x, np.ndarray) and x.ndim == 2:
        return [x]
    return list(x)


def meeting_times(pursuers, evaders, *, ctmc=False, **options):
    """Meeting times for every start tuple; `values[i, j, ...]` is indexed
    pursuers first, 0-based, with inf where no meeting is certain."""
    return _core.meeting_times(_chains(pursuers), _chains(evaders), ctmc=ctmc, **options)


def mean_meeting_time(pursuers, evaders):
    return _core.mean_meeting_time(_chains(pursuers), _chains(evaders))


def classify(pursuers, evaders, **options):
    return _core.classify(_chains(pursuers), _chains(evaders), **options)


def simulate(pursuers, evaders, start, **options):
    return _core.simulate(_chains(pursuers), _chains(evaders), list(start), **options)
