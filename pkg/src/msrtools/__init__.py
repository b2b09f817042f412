"""Maximal strip recovery: exact and approximate solvers, gadget reductions,
canonical forms and desk-scale checks."""

from .approx import approximate, run_approximation
from .canonical import canonicalize, canonicalize_msr2, canonicalize_msr3, check_canonical
from .exact import ExactConfig, ExactTimeout, solve_exact
from .harness import check_source, lemma_check
from .model import InputError, Instance, ObjectiveSpec, Solution, Strip, evaluate, verify
from .reductions import (
    embed_source_solution,
    extract_source_solution,
    reduce_ddm_msr,
    reduce_mis_msr3,
    reduce_mis_msr4,
    reduce_sat_msr2,
)

__all__ = [
    "Instance",
    "Strip",
    "Solution",
    "ObjectiveSpec",
    "InputError",
    "evaluate",
    "verify",
    "solve_exact",
    "ExactConfig",
    "ExactTimeout",
    "approximate",
    "run_approximation",
    "reduce_mis_msr4",
    "reduce_mis_msr3",
    "reduce_sat_msr2",
    "reduce_ddm_msr",
    "embed_source_solution",
    "extract_source_solution",
    "canonicalize",
    "canonicalize_msr2",
    "canonicalize_msr3",
    "check_canonical",
    "lemma_check",
    "check_source",
]
