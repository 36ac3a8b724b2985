from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from runtime import BsfProgram, WorkerSlice
from .problems import LeastSquaresProblem, ProblemError, random_least_squares

DEFAULT_TOL = 1e-8
DEFAULT_SIZE = 32
ROWS_PER_COLUMN = 4


@dataclass(frozen=True)
class DescentState:
    x: np.ndarray
    grad_norm: float
    converged: bool
    objectives: Tuple[float, ...] = ()
    iterations: int = 0


class GradientDescentProgram(BsfProgram):
    """Fixed-step gradient descent on a dense least-squares problem

    Workers return the partial gradient and partial objective of their row
    block at the ordered point; the master sums them in rank order and
    steps unless the gradient is already below tolerance.
    """

    def __init__(self, problem: LeastSquaresProblem, tol: float = DEFAULT_TOL):
        if not tol > 0:
            raise ProblemError(f"tol must be positive, got {tol}")
        super().__init__(tol=tol, m=problem.A.shape[0], n=problem.A.shape[1])
        self.problem = problem
        self.tol = tol
        self.name = 'GradientDescent'

    def init(self):
        x = self.problem.x0.copy()
        grad_norm = float(np.linalg.norm(self.problem.gradient(x)))
        state = DescentState(x=x, grad_norm=grad_norm, converged=grad_norm < self.tol)
        return state, (self.problem.A, self.problem.b)

    def n_items(self, data) -> int:
        return data[1].shape[0]

    def slice_data(self, data, offset: int, length: int):
        A, b = data
        rows = slice(offset, offset + length)
        return A[rows].copy(), b[rows].copy()

    def make_order(self, state: DescentState) -> np.ndarray:
        return state.x

    def worker_step(self, order: np.ndarray, data_slice: WorkerSlice, worker: int):
        A_rows, b_rows = data_slice.data
        r = A_rows @ order - b_rows
        return A_rows.T @ r, 0.5 * float(r @ r)

    def reduce(self, results: List[Tuple[np.ndarray, float]], state: DescentState) -> DescentState:
        grad = np.zeros_like(state.x)
        objective = 0.0
        for partial_grad, partial_obj in results:
            grad = grad + partial_grad
            objective += partial_obj
        grad_norm = float(np.linalg.norm(grad))
        converged = grad_norm < self.tol
        x = state.x if converged else state.x - self.problem.step_size * grad
        return DescentState(x=x, grad_norm=grad_norm, converged=converged,
                            objectives=state.objectives + (objective,),
                            iterations=state.iterations + 1)

    def exit_condition(self, state: DescentState) -> bool:
        return state.converged

    def finalize(self, state: DescentState) -> Dict[str, Any]:
        return {
            'x': state.x,
            'grad_norm': state.grad_norm,
            'objective_history': list(state.objectives),
            'iterations': state.iterations,
        }

    @classmethod
    def from_options(cls, seed: int = 0, size: int = DEFAULT_SIZE, problem: str = None,
                     tol: float = None, **_) -> 'GradientDescentProgram':
        if problem:
            lsq = LeastSquaresProblem.from_file(problem)
        else:
            lsq = random_least_squares(ROWS_PER_COLUMN * size, size, seed)
        return cls(lsq, DEFAULT_TOL if tol is None else tol)


def gradient_descent_program(problem: LeastSquaresProblem,
                             tol: float = DEFAULT_TOL) -> GradientDescentProgram:
    return GradientDescentProgram(problem, tol)
