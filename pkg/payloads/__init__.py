from typing import Dict, Type

from runtime import BsfProgram
from .problems import (LinearSystem, LeastSquaresProblem, ProblemError, largest_eigenvalue,
                       random_diagonally_dominant, random_least_squares)
from .jacobi import JacobiProgram, JacobiState, jacobi_program, residual_norm
from .gradient_descent import GradientDescentProgram, DescentState, gradient_descent_program
from .synthetic import SyntheticProgram, SyntheticState, synthetic_program

PAYLOAD_REGISTRY: Dict[str, Type[BsfProgram]] = {
    'jacobi': JacobiProgram,
    'gd': GradientDescentProgram,
    'synthetic': SyntheticProgram,
}


def build_payload(name: str, **options) -> BsfProgram:
    """Build a registered payload program from CLI-style options

    Options left as None fall back to the payload's own defaults.
    """
    program_class = PAYLOAD_REGISTRY.get(name)
    if program_class is None:
        raise ProblemError(f"Unknown payload {name!r}; choose from {', '.join(sorted(PAYLOAD_REGISTRY))}")
    return program_class.from_options(**{k: v for k, v in options.items() if v is not None})


__all__ = [
    'LinearSystem',
    'LeastSquaresProblem',
    'ProblemError',
    'largest_eigenvalue',
    'random_diagonally_dominant',
    'random_least_squares',
    'JacobiProgram',
    'JacobiState',
    'jacobi_program',
    'residual_norm',
    'GradientDescentProgram',
    'DescentState',
    'gradient_descent_program',
    'SyntheticProgram',
    'SyntheticState',
    'synthetic_program',
    'PAYLOAD_REGISTRY',
    'build_payload',
]
