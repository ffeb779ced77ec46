"""RBF-kernel support vector machines trained from scratch with SMO.

One generic solver handles both tasks.  It minimises

    0.5 * a^T (s s^T * K) a + lin^T a
    subject to 0 <= a <= C  and  s^T a = 0

by repeatedly optimising the maximally KKT-violating pair of variables:
the classification dual uses s = training labels and lin = -1; the
epsilon-insensitive regression dual doubles the variables with s = +1/-1
halves and lin = (epsilon -+ y).  The pair step, box clipping, stopping
rule (max violation <= tol), and the offset b = midpoint of the final
violation bounds follow the classical working-set formulation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ValidationError

DEFAULT_C = 1.0
DEFAULT_EPSILON = 0.1
DEFAULT_TOL = 1e-3
_BOUND_EPS = 1e-12


def resolve_gamma(gamma, n_features: int) -> float:
    """Resolve 'auto' to 1/n_features; numeric strings are accepted."""
    if gamma == "auto":
        if n_features <= 0:
            raise ArgumentError("cannot infer gamma without features")
        return 1.0 / n_features
    value = float(gamma)
    if value <= 0:
        raise ArgumentError("gamma must be positive")
    return value


def rbf_kernel(U: np.ndarray, V: np.ndarray, gamma: float) -> np.ndarray:
    """exp(-gamma * squared euclidean distance) for every row pair."""
    U = np.atleast_2d(np.asarray(U, dtype=np.float64))
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    sq = (
        np.sum(U * U, axis=1)[:, None]
        + np.sum(V * V, axis=1)[None, :]
        - 2.0 * (U @ V.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@dataclass
class SolverResult:
    alpha: np.ndarray
    b: float
    iterations: int
    kkt_gap: float
    converged: bool
    objective: float


def smo_solve(
    K: np.ndarray,
    signs: np.ndarray,
    lin: np.ndarray,
    C: float,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> SolverResult:
    """Generic SMO loop over a precomputed kernel matrix."""
    n = K.shape[0]
    if max_iter is None:
        max_iter = max(1_000_000, 200 * n)
    a = np.zeros(n)
    # crit[k] = -signs[k] * gradient[k]; the update below keeps it current.
    crit = -signs * lin
    iterations = 0
    gap = np.inf
    while True:
        up = ((signs > 0) & (a < C - _BOUND_EPS)) | ((signs < 0) & (a > _BOUND_EPS))
        low = ((signs > 0) & (a > _BOUND_EPS)) | ((signs < 0) & (a < C - _BOUND_EPS))
        if not up.any() or not low.any():
            gap = 0.0
            break
        i = int(np.argmax(np.where(up, crit, -np.inf)))
        j = int(np.argmin(np.where(low, crit, np.inf)))
        m, M = crit[i], crit[j]
        gap = m - M
        if gap <= tol:
            break
        if iterations >= max_iter:
            warnings.warn(
                f"SMO stopped after {max_iter} iterations with gap {gap:.3g}",
                RuntimeWarning,
                stacklevel=2,
            )
            break
        quad = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 1e-12)
        t = gap / quad
        t = min(t, (C - a[i]) if signs[i] > 0 else a[i])
        t = min(t, a[j] if signs[j] > 0 else (C - a[j]))
        a[i] = min(max(a[i] + signs[i] * t, 0.0), C)
        a[j] = min(max(a[j] - signs[j] * t, 0.0), C)
        crit -= t * (K[:, i] - K[:, j])
        iterations += 1
    # Offset from the final violation bounds; with no candidates on one
    # side the midpoint degenerates to the other side's bound.
    up = ((signs > 0) & (a < C - _BOUND_EPS)) | ((signs < 0) & (a > _BOUND_EPS))
    low = ((signs > 0) & (a > _BOUND_EPS)) | ((signs < 0) & (a < C - _BOUND_EPS))
    m = np.max(crit[up]) if up.any() else None
    M = np.min(crit[low]) if low.any() else None
    if m is None and M is None:
        b = 0.0
    elif m is None:
        b = float(M)
    elif M is None:
        b = float(m)
    else:
        b = float((m + M) / 2.0)
    grad = signs * (K @ (signs * a)) + lin
    objective = float(0.5 * a @ (grad - lin) + lin @ a)
    return SolverResult(a, b, iterations, float(max(gap, 0.0)), gap <= tol, objective)


@dataclass
class SvmModel:
    """A fitted classifier or regressor (task 'binary' or 'regression')."""

    task: str
    C: float
    gamma: float
    epsilon: float
    sv_x: np.ndarray
    sv_coef: np.ndarray
    b: float
    dual_objective: float
    kkt_gap: float
    iterations: int
    converged: bool
    # Full diagnostics for invariant checks; not serialised.
    alpha: np.ndarray | None = field(default=None, repr=False)
    signs: np.ndarray | None = field(default=None, repr=False)

    def decision(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if len(self.sv_coef) == 0:
            return np.full(X.shape[0], self.b)
        if X.shape[1] != self.sv_x.shape[1]:
            raise ArgumentError(
                f"model expects {self.sv_x.shape[1]} features, got {X.shape[1]}"
            )
        return rbf_kernel(X, self.sv_x, self.gamma) @ self.sv_coef + self.b

    def predict_labels(self, X: np.ndarray) -> np.ndarray:
        if self.task != "binary":
            raise ArgumentError("labels are only defined for the binary task")
        return np.where(self.decision(X) >= 0, 1, -1)

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "C": self.C,
            "gamma": self.gamma,
            "epsilon": self.epsilon,
            "b": self.b,
            "sv_x": self.sv_x.tolist(),
            "sv_coef": self.sv_coef.tolist(),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SvmModel":
        return cls(
            task=obj["task"],
            C=float(obj["C"]),
            gamma=float(obj["gamma"]),
            epsilon=float(obj["epsilon"]),
            sv_x=np.asarray(obj["sv_x"], dtype=np.float64).reshape(
                len(obj["sv_coef"]), -1
            ),
            sv_coef=np.asarray(obj["sv_coef"], dtype=np.float64),
            b=float(obj["b"]),
            dual_objective=float("nan"),
            kkt_gap=float("nan"),
            iterations=0,
            converged=True,
        )


def _check_matrix(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] == 0:
        raise ArgumentError("no training rows")
    if not np.all(np.isfinite(X)):
        raise ValidationError("non-finite feature values")
    return X


def svm_train(
    X: np.ndarray,
    y: np.ndarray,
    C: float = DEFAULT_C,
    gamma="auto",
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> SvmModel:
    """Fit a binary classifier; y must contain both +1 and -1."""
    X = _check_matrix(X)
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.shape[0] != X.shape[0]:
        raise ArgumentError("X and y row counts differ")
    classes = set(np.unique(y).tolist())
    if classes != {-1.0, 1.0}:
        raise ValidationError(f"labels must be -1/+1 with both present, got {sorted(classes)}")
    if C <= 0:
        raise ArgumentError("C must be positive")
    g = resolve_gamma(gamma, X.shape[1])
    K = rbf_kernel(X, X, g)
    res = smo_solve(K, y, -np.ones(len(y)), C, tol, max_iter)
    sv = res.alpha > _BOUND_EPS
    return SvmModel(
        task="binary",
        C=C,
        gamma=g,
        epsilon=0.0,
        sv_x=X[sv],
        sv_coef=(res.alpha * y)[sv],
        b=res.b,
        dual_objective=res.objective,
        kkt_gap=res.kkt_gap,
        iterations=res.iterations,
        converged=res.converged,
        alpha=res.alpha,
        signs=y,
    )


def svr_train(
    X: np.ndarray,
    y: np.ndarray,
    C: float = DEFAULT_C,
    gamma="auto",
    epsilon: float = DEFAULT_EPSILON,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
) -> SvmModel:
    """Fit an epsilon-insensitive regressor via the doubled-variable dual."""
    X = _check_matrix(X)
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.shape[0] != X.shape[0]:
        raise ArgumentError("X and y row counts differ")
    if not np.all(np.isfinite(y)):
        raise ValidationError("non-finite targets")
    if C <= 0:
        raise ArgumentError("C must be positive")
    if epsilon < 0:
        raise ArgumentError("epsilon must be non-negative")
    g = resolve_gamma(gamma, X.shape[1])
    n = X.shape[0]
    K = rbf_kernel(X, X, g)
    K2 = np.tile(K, (2, 2))
    signs = np.concatenate([np.ones(n), -np.ones(n)])
    lin = np.concatenate([epsilon - y, epsilon + y])
    res = smo_solve(K2, signs, lin, C, tol, max_iter)
    beta = res.alpha[:n] - res.alpha[n:]
    sv = np.abs(beta) > _BOUND_EPS
    return SvmModel(
        task="regression",
        C=C,
        gamma=g,
        epsilon=epsilon,
        sv_x=X[sv],
        sv_coef=beta[sv],
        b=res.b,
        dual_objective=res.objective,
        kkt_gap=res.kkt_gap,
        iterations=res.iterations,
        converged=res.converged,
        alpha=res.alpha,
        signs=signs,
    )
