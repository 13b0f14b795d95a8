"""Corpora, audits, sweeps, persistence and the command-line interface."""

from .audit import (
    RegressionLock,
    SweepRecord,
    audit,
    summarize_roots,
    sweep_cyclic,
    sweep_roots,
)
from .corpus import CorpusSpec, generate_corpus, parse_function
from .pythag import orthogonal_pairs, pythag_audit

__all__ = [
    "CorpusSpec",
    "RegressionLock",
    "SweepRecord",
    "audit",
    "generate_corpus",
    "orthogonal_pairs",
    "parse_function",
    "pythag_audit",
    "summarize_roots",
    "sweep_cyclic",
    "sweep_roots",
]
