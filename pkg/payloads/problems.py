from dataclasses import dataclass
from typing import Optional

import numpy as np

from runtime import read_dense_blocks


class ProblemError(ValueError):
    """Raised for problem data a payload cannot be built from"""


def _as_vector(value, name: str) -> np.ndarray:
    vector = np.asarray(value, dtype=float)
    if vector.ndim == 2 and 1 in vector.shape:
        vector = vector.reshape(-1)
    if vector.ndim != 1:
        raise ProblemError(f"{name} must be a vector, got shape {vector.shape}")
    return vector


@dataclass(frozen=True)
class LinearSystem:
    """Dense square system Ax = b with a starting point x0"""
    A: np.ndarray
    b: np.ndarray
    x0: Optional[np.ndarray] = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ProblemError(f"A must be a square matrix, got shape {A.shape}")
        b = _as_vector(self.b, 'b')
        if b.shape[0] != A.shape[0]:
            raise ProblemError(f"b has {b.shape[0]} entries for a {A.shape[0]}x{A.shape[0]} system")
        x0 = np.zeros(A.shape[0]) if self.x0 is None else _as_vector(self.x0, 'x0')
        if x0.shape[0] != A.shape[0]:
            raise ProblemError(f"x0 has {x0.shape[0]} entries for a {A.shape[0]}x{A.shape[0]} system")
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'x0', x0)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def check_diagonally_dominant(self) -> None:
        """Strict row diagonal dominance with a nonzero diagonal"""
        diag = np.abs(np.diagonal(self.A))
        if np.any(diag == 0):
            raise ProblemError(f"Zero diagonal entry in row {int(np.argmin(diag))}")
        off = np.abs(self.A).sum(axis=1) - diag
        weak = np.nonzero(diag <= off)[0]
        if weak.size:
            raise ProblemError(f"A is not strictly diagonally dominant (row {int(weak[0])})")

    def solve(self) -> np.ndarray:
        """Direct dense solution, used as the convergence oracle"""
        return np.linalg.solve(self.A, self.b)

    @classmethod
    def from_file(cls, path: str) -> 'LinearSystem':
        """Load A, b and an optional x0 stored as consecutive dense blocks"""
        blocks = read_dense_blocks(path)
        if len(blocks) not in (2, 3):
            raise ProblemError(f"{path}: expected blocks A, b [, x0], found {len(blocks)}")
        return cls(*blocks)


@dataclass(frozen=True)
class LeastSquaresProblem:
    """min 0.5 * ||Ax - b||^2 solved by fixed-step gradient descent"""
    A: np.ndarray
    b: np.ndarray
    step_size: float
    x0: Optional[np.ndarray] = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2:
            raise ProblemError(f"A must be a matrix, got shape {A.shape}")
        b = _as_vector(self.b, 'b')
        if b.shape[0] != A.shape[0]:
            raise ProblemError(f"b has {b.shape[0]} entries but A has {A.shape[0]} rows")
        x0 = np.zeros(A.shape[1]) if self.x0 is None else _as_vector(self.x0, 'x0')
        if x0.shape[0] != A.shape[1]:
            raise ProblemError(f"x0 has {x0.shape[0]} entries but A has {A.shape[1]} columns")
        if not np.isfinite(self.step_size) or self.step_size <= 0:
            raise ProblemError(f"step_size must be positive, got {self.step_size}")
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'x0', x0)
        object.__setattr__(self, 'step_size', float(self.step_size))

    def objective(self, x: np.ndarray) -> float:
        r = self.A @ x - self.b
        return 0.5 * float(r @ r)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.A.T @ (self.A @ x - self.b)

    def solve(self) -> np.ndarray:
        return np.linalg.lstsq(self.A, self.b, rcond=None)[0]

    @classmethod
    def with_safe_step(cls, A, b, x0=None, safety: float = 1.0,
                       power_iterations: int = 200, seed: int = 0) -> 'LeastSquaresProblem':
        """Pick step_size = safety / lambda_max(A^T A), requiring safety < 2"""
        if not 0 < safety < 2:
            raise ProblemError(f"safety must be in (0, 2), got {safety}")
        A = np.asarray(A, dtype=float)
        if A.ndim != 2:
            raise ProblemError(f"A must be a matrix, got shape {A.shape}")
        lam = largest_eigenvalue(A.T @ A, power_iterations, seed)
        if lam <= 0:
            raise ProblemError("A^T A has no positive eigenvalue: A is zero")
        return cls(A=A, b=b, step_size=safety / lam, x0=x0)

    @classmethod
    def from_file(cls, path: str, safety: float = 1.0) -> 'LeastSquaresProblem':
        blocks = read_dense_blocks(path)
        if len(blocks) not in (2, 3):
            raise ProblemError(f"{path}: expected blocks A, b [, x0], found {len(blocks)}")
        return cls.with_safe_step(*blocks, safety=safety)


def largest_eigenvalue(M: np.ndarray, iterations: int = 200, seed: int = 0) -> float:
    """Power iteration estimate of the dominant eigenvalue of a symmetric PSD matrix"""
    n = M.shape[0]
    if n == 0:
        return 0.0
    v = np.random.default_rng(seed).standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iterations):
        w = M @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v = w / norm
        lam = float(v @ (M @ v))
    return lam


def random_diagonally_dominant(n: int, seed: int = 0) -> LinearSystem:
    """Seeded random system dominant by rows and by columns"""
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1.0, 1.0, size=(n, n))
    np.fill_diagonal(A, 0.0)
    # column dominance as well keeps the Jacobi residual shrinking every sweep
    np.fill_diagonal(A, np.abs(A).sum(axis=1) + np.abs(A).sum(axis=0) + 1.0)
    b = rng.uniform(-1.0, 1.0, size=n)
    return LinearSystem(A=A, b=b)


def random_least_squares(m: int, n: int, seed: int = 0, safety: float = 1.0) -> LeastSquaresProblem:
    if m < n:
        raise ProblemError(f"Need at least as many rows as columns, got {m}x{n}")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    return LeastSquaresProblem.with_safe_step(A, b, safety=safety, seed=seed)
