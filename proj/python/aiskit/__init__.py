"""Artificial immune systems toolkit.

Thin Python surface over the C++ core: affinity measures, immune-network
concentration dynamics, clonal expansion, negative-selection detector
generation and monitoring, and the immune-network recommender.
"""

from ._core import (
    ConfigError,
    GenerationError,
    ParseError,
    clone_count,
    euclidean_distance,
    generate_detectors,
    hamming_score,
    hypermutate_bits,
    longest_contiguous,
    monitor_bits,
    pearson,
    recommend,
    simulate,
)

__all__ = [
    "ConfigError",
    "GenerationError",
    "ParseError",
    "clone_count",
    "euclidean_distance",
    "generate_detectors",
    "hamming_score",
    "hypermutate_bits",
    "longest_contiguous",
    "monitor_bits",
    "pearson",
    "recommend",
    "simulate",
]

__version__ = "0.1.0"
