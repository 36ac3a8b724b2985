from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from runtime import BsfProgram, WorkerSlice
from .problems import LinearSystem, ProblemError, random_diagonally_dominant

DEFAULT_TOL = 1e-10
DEFAULT_SIZE = 64


def residual_norm(A: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    """||Ax - b||_inf"""
    if b.size == 0:
        return 0.0
    return float(np.max(np.abs(A @ x - b)))


@dataclass(frozen=True)
class JacobiState:
    x: np.ndarray
    residual: float
    history: Tuple[float, ...]
    iterations: int = 0


class JacobiProgram(BsfProgram):
    """Jacobi iteration; each worker updates the components of its row block"""

    def __init__(self, system: LinearSystem, tol: float = DEFAULT_TOL):
        if not tol > 0:
            raise ProblemError(f"tol must be positive, got {tol}")
        system.check_diagonally_dominant()
        super().__init__(tol=tol, n=system.n)
        self.system = system
        self.tol = tol

    def init(self):
        A, b = self.system.A, self.system.b
        x = self.system.x0.copy()
        r = residual_norm(A, b, x)
        return JacobiState(x=x, residual=r, history=(r,)), (A, b, np.diagonal(A).copy())

    def n_items(self, data) -> int:
        return data[1].shape[0]

    def slice_data(self, data, offset: int, length: int):
        A, b, diag = data
        rows = slice(offset, offset + length)
        return A[rows].copy(), b[rows].copy(), diag[rows].copy()

    def make_order(self, state: JacobiState) -> np.ndarray:
        return state.x

    def worker_step(self, order: np.ndarray, data_slice: WorkerSlice, worker: int) -> np.ndarray:
        A_rows, b_rows, diag = data_slice.data
        own = order[data_slice.offset:data_slice.offset + data_slice.length]
        # x_i <- (b_i - sum_{j != i} a_ij x_j) / a_ii
        return (b_rows - A_rows @ order + diag * own) / diag

    def reduce(self, results: List[np.ndarray], state: JacobiState) -> JacobiState:
        x = np.concatenate(results)
        r = residual_norm(self.system.A, self.system.b, x)
        return JacobiState(x=x, residual=r, history=state.history + (r,),
                           iterations=state.iterations + 1)

    def exit_condition(self, state: JacobiState) -> bool:
        return state.residual < self.tol

    def finalize(self, state: JacobiState) -> Dict[str, Any]:
        return {
            'x': state.x,
            'residual': state.residual,
            'residual_history': list(state.history),
            'iterations': state.iterations,
        }

    @classmethod
    def from_options(cls, seed: int = 0, size: int = DEFAULT_SIZE, problem: str = None,
                     tol: float = None, **_) -> 'JacobiProgram':
        system = LinearSystem.from_file(problem) if problem else random_diagonally_dominant(size, seed)
        return cls(system, DEFAULT_TOL if tol is None else tol)


def jacobi_program(system: LinearSystem, tol: float = DEFAULT_TOL) -> JacobiProgram:
    return JacobiProgram(system, tol)
