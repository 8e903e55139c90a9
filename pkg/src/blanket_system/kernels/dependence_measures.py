"""
Kernel Dependence Measures

Conditional measures of the residual dependence of Y on X given X_S
(lower = more conditionally independent):

    M1 = tr(G_Y (G_XS + n*eps*I)^-1)
    M2 = tr(T G_Y T),  T = eps (G_XS + eps*I)^-1

and the unconditional HSIC, tr(G_X G_Y) / (n-1)^2 (larger = more
dependent). All Grams are centered. An EMPTY conditioning set (None)
stands for G_XS = 0, i.e. a kernel carrying no information.
"""

from enum import Enum
from typing import Iterable

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from blanket_system.errors import BlanketError, ErrorCode
from blanket_system.kernels.kernel_core import (
    GramMatrix,
    KernelSpec,
    centered_gram,
    gram_factor,
)
from blanket_system.schema import DataMatrix


class MeasureKind(str, Enum):
    M1 = "M1"
    M2 = "M2"
    HSIC = "HSIC"

    @property
    def is_conditional(self) -> bool:
        return self in (MeasureKind.M1, MeasureKind.M2)


def _check_centered(*grams: GramMatrix | None) -> int:
    sizes = set()
    for g in grams:
        if g is None:
            continue
        if not g.centered:
            raise BlanketError(ErrorCode.NOT_CENTERED, "measure requires centered Gram matrices")
        sizes.add(g.size)

    if len(sizes) > 1:
        raise BlanketError(ErrorCode.DIMENSION_MISMATCH, f"Gram sizes differ: {sorted(sizes)}")

    return sizes.pop()


def _check_epsilon(epsilon: float) -> None:
    if not (np.isfinite(epsilon) and epsilon > 0):
        raise BlanketError(ErrorCode.BAD_KERNEL, f"epsilon must be > 0, got {epsilon}")


def _ridge_cholesky(g_xs: GramMatrix, ridge: float):
    a = g_xs.entries + ridge * np.eye(g_xs.size)
    return cho_factor(a, lower=True)


def m1_from_factor(l_y: np.ndarray, g_xs: GramMatrix | None, epsilon: float) -> float:
    """
    M1 given a square-root factor of G_Y (G_Y = L L^T).

    tr(G_Y A^-1) = ||C^-1 L||_F^2 with A = C C^T the ridge Cholesky factor.
    """

    n = l_y.shape[0]
    ridge = n * epsilon

    if l_y.shape[1] == 0:
        return 0.0

    if g_xs is None:
        return float(np.sum(l_y ** 2) / ridge)

    c, lower = _ridge_cholesky(g_xs, ridge)
    w = solve_triangular(c, l_y, lower=lower)

    return float(np.sum(w ** 2))


def m2_from_factor(l_y: np.ndarray, g_xs: GramMatrix | None, epsilon: float) -> float:
    """
    M2 given a square-root factor of G_Y.

    tr(T G_Y T) = eps^2 ||B^-1 L||_F^2 with B = G_XS + eps*I.
    """

    if l_y.shape[1] == 0:
        return 0.0

    if g_xs is None:
        return float(np.sum(l_y ** 2))

    factor = _ridge_cholesky(g_xs, epsilon)
    w = cho_solve(factor, l_y)

    return float(epsilon ** 2 * np.sum(w ** 2))


def m1(g_y: GramMatrix, g_xs: GramMatrix | None, epsilon: float = 1e-3) -> float:
    _check_centered(g_y, g_xs)
    _check_epsilon(epsilon)

    return m1_from_factor(gram_factor(g_y), g_xs, epsilon)


def m2(g_y: GramMatrix, g_xs: GramMatrix | None, epsilon: float = 1e-3) -> float:
    _check_centered(g_y, g_xs)
    _check_epsilon(epsilon)

    return m2_from_factor(gram_factor(g_y), g_xs, epsilon)


def hsic(g_x: GramMatrix | None, g_y: GramMatrix) -> float:
    """
    Biased HSIC estimate tr(G_X G_Y) / (n-1)^2 on centered Grams.
    An empty feature set scores 0.
    """

    n = _check_centered(g_x, g_y)

    if g_x is None:
        return 0.0

    return float(np.sum(g_x.entries * g_y.entries) / (n - 1) ** 2)


class TargetKernel:
    """
    Centered target Gram and its factor, computed once and reused for
    every conditioning set scored against the same target.
    """

    def __init__(self, data: DataMatrix, target: int, spec: KernelSpec):
        data.check_target(target)
        self.target = target
        self.gram = centered_gram(data, [target], spec)
        self.factor = gram_factor(self.gram)

    def score(
        self,
        kind: MeasureKind,
        data: DataMatrix,
        conditioning: Iterable[int],
        spec: KernelSpec,
    ) -> float:
        cols = sorted(set(int(c) for c in conditioning))

        if self.target in cols:
            raise BlanketError(
                ErrorCode.BAD_CONDITIONING,
                f"target {self.target} cannot be in the conditioning set"
            )

        g_xs = centered_gram(data, cols, spec) if cols else None

        if kind == MeasureKind.M1:
            return m1_from_factor(self.factor, g_xs, spec.epsilon)
        if kind == MeasureKind.M2:
            return m2_from_factor(self.factor, g_xs, spec.epsilon)
        if kind == MeasureKind.HSIC:
            return hsic(g_xs, self.gram)

        raise BlanketError(ErrorCode.BAD_MEASURE, f"unknown measure {kind}")


def evaluate(
    kind: MeasureKind,
    data: DataMatrix,
    target: int,
    conditioning: Iterable[int],
    spec: KernelSpec,
    target_spec: KernelSpec | None = None,
) -> float:
    """
    Compose Gram construction, centering and the selected measure.

    For HSIC the conditioning set is the candidate feature set X_S paired
    against Y. `target_spec` gives K_Y its own kernel; it defaults to
    `spec`. The ridge epsilon always comes from `spec`.
    """

    kind = MeasureKind(kind)
    target_kernel = TargetKernel(data, target, target_spec or spec)

    return target_kernel.score(kind, data, conditioning, spec)
