"""Truncated Fock-space representation of the su(1,1) generators.

Basis states |n, lambda>, n = 0 .. n_max.  J+ raises, J- lowers, and J3, N
are diagonal.  All operators have bandwidth one, so each is stored as a
single band.  Bands are kept in ``np.longdouble`` by default so that products
of ladder elements reproduce the commutation relations to ~1e-16 for the
basis sizes used here; float64 bands lose ~1e-12 to the rounding of the
square roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError


@dataclass(frozen=True)
class AlgebraParams:
    """Representation parameter ``lam`` (> -1/2) and deformation ``r`` (>= 1)."""

    lam: float
    r: int

    def __post_init__(self):
        if not self.lam > -0.5:
            raise DomainError(f"lambda must exceed -1/2, got {self.lam}")
        if int(self.r) != self.r or self.r < 1:
            raise DomainError(f"deformation r must be an integer >= 1, got {self.r}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "r", int(self.r))


def ladder_element(p: AlgebraParams, n: int) -> float:
    """<n|J+|n-1> = <n-1|J-|n> = sqrt(n (n + lambda - 1/2)); zero for n = 0."""
    if n <= 0:
        return 0.0
    return math.sqrt(n * (n + p.lam - 0.5))


def j3_eigenvalue(p: AlgebraParams, n: int) -> float:
    return n + p.lam / 2 + 0.25


def hamiltonian_eigenvalue(p: AlgebraParams, n: int) -> float:
    """Energy of |n, lambda> under H = 2 J3."""
    return 2 * n + p.lam + 0.5


RAISING = "raising"
LOWERING = "lowering"
DIAGONAL = "diagonal"


@dataclass(frozen=True)
class TruncatedOperator:
    """One band of a bandwidth-one operator on basis indices 0 .. dimension-1.

    For ``raising`` the band holds entries (n, n-1), for ``lowering`` entries
    (n-1, n), both indexed by n = 1 .. dimension-1.  ``diagonal`` holds (n, n).
    """

    kind: str
    band: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.band) + (0 if self.kind == DIAGONAL else 1)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec)
        if len(vec) != self.dimension:
            raise ShapeError(f"vector length {len(vec)} != operator dimension {self.dimension}")
        out = np.zeros(self.dimension, dtype=np.result_type(vec, self.band))
        if self.kind == DIAGONAL:
            out[:] = self.band * vec
        elif self.kind == RAISING:
            out[1:] = self.band * vec[:-1]
        else:
            out[:-1] = self.band * vec[1:]
        return out

    def to_dense(self) -> np.ndarray:
        d = self.dimension
        m = np.zeros((d, d), dtype=self.band.dtype)
        idx = np.arange(1, d)
        if self.kind == DIAGONAL:
            m[np.arange(d), np.arange(d)] = self.band
        elif self.kind == RAISING:
            m[idx, idx - 1] = self.band
        else:
            m[idx - 1, idx] = self.band
        return m

    def adjoint(self) -> "TruncatedOperator":
        flip = {RAISING: LOWERING, LOWERING: RAISING, DIAGONAL: DIAGONAL}
        return TruncatedOperator(flip[self.kind], self.band.copy())


@dataclass(frozen=True)
class TruncatedAlgebra:
    params: AlgebraParams
    n_max: int
    jp: TruncatedOperator
    jm: TruncatedOperator
    j3: TruncatedOperator
    number: TruncatedOperator


def build_truncated(p: AlgebraParams, n_max: int, dtype=np.longdouble) -> TruncatedAlgebra:
    if n_max < 2:
        raise ShapeError(f"n_max must be at least 2, got {n_max}")
    n = np.arange(1, n_max + 1, dtype=dtype)
    lam = dtype(p.lam)
    ladder = np.sqrt(n * (n + lam - dtype(0.5)))
    diag_n = np.arange(n_max + 1, dtype=dtype)
    j3 = diag_n + lam / 2 + dtype(0.25)
    return TruncatedAlgebra(
        params=p,
        n_max=n_max,
        jp=TruncatedOperator(RAISING, ladder),
        jm=TruncatedOperator(LOWERING, ladder.copy()),
        j3=TruncatedOperator(DIAGONAL, j3),
        number=TruncatedOperator(DIAGONAL, diag_n),
    )


def commutator_residuals(alg: TruncatedAlgebra) -> tuple[float, float]:
    """Max-abs entries of ([J+,J-] + 2 J3) and ([J3,J+] - J+) over columns n < n_max.

    The top column is excluded: truncation necessarily breaks the algebra there.
    """
    jp, jm, j3 = (op.to_dense() for op in (alg.jp, alg.jm, alg.j3))
    c1 = jp @ jm - jm @ jp + 2 * j3
    c2 = j3 @ jp - jp @ j3 - jp
    keep = slice(0, alg.n_max)
    return float(np.max(np.abs(c1[:, keep]))), float(np.max(np.abs(c2[:, keep])))
