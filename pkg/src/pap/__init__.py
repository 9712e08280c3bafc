"""Abduction with penalization over function-free normal logic programs."""

from .abduction import (
    PAP,
    Abducer,
    Solution,
    TranslatedProgram,
    brute_force_admissible,
    brute_force_opt,
    enumerate_admissible,
    extract_solution,
    is_admissible,
    is_consistent,
    is_necessary,
    is_optimal,
    is_relevant,
    optimal_cost,
    solve_optimal,
    solve_optimal_greedy,
    translate_pap,
    validate_pap,
)
from .errors import InconsistentError, PapError, ParseError
from .grounder import GroundProgram, check_safety, ground
from .parser import parse_atom, parse_hypotheses, parse_observations, parse_program, parse_rule
from .stable import (
    enumerate_stable_models,
    is_stable,
    is_stratified,
    least_model,
    reduct,
    stratified_model,
)
from .syntax import Atom, Literal, Program, Rule, Var, WeakConstraint, is_model, literal_true, rule_satisfied
from .weak import CandidateModel, best_models, objective

__all__ = [name for name in dir() if not name.startswith("_")]
