"""Finite possibilistic state spaces, their effects, symmetries and tensor products."""

from .determination import BOT, NO, YES, Det, det_bar, det_bullet, det_join, det_leq, det_meet
from .effects import Effect, EffectSpace, build_effects, check_axioms, effect_eval, max_effects
from .io import emit_dot, load_fixture, parse_space_file, serialize_space
from .ortho import basis_sublattice, bracket, ortho_basis_greedy, validate_star
from .space import (
    CycleDetected,
    NoBottom,
    NotALattice,
    ParseError,
    StateSpace,
    build_space,
    check_state_axioms,
    is_distributive,
    quasi_antipodal,
)
from .symmetry import ChuMap, chu_map, derive_effect_map, tensor_symmetries, verify_symmetry
from .tensor_basic import BasicTensor, enumerate_tensor, leq_pure, tensor_leq
from .tensor_canonical import bifilter_closure, compare_with_basic, fraser_leq

__all__ = [
    "BOT", "NO", "YES", "Det", "det_bar", "det_bullet", "det_join", "det_leq", "det_meet",
    "Effect", "EffectSpace", "build_effects", "check_axioms", "effect_eval", "max_effects",
    "emit_dot", "load_fixture", "parse_space_file", "serialize_space",
    "basis_sublattice", "bracket", "ortho_basis_greedy", "validate_star",
    "CycleDetected", "NoBottom", "NotALattice", "ParseError", "StateSpace", "build_space",
    "check_state_axioms", "is_distributive", "quasi_antipodal",
    "ChuMap", "chu_map", "derive_effect_map", "tensor_symmetries", "verify_symmetry",
    "BasicTensor", "enumerate_tensor", "leq_pure", "tensor_leq",
    "bifilter_closure", "compare_with_basic", "fraser_leq",
]
