"""Orthonormal graph spectral basis and vertex/band projector algebra.

The basis U diagonalizes the (symmetric) Laplacian; projecting a signal on
U's columns is the graph Fourier transform.  A vertex set S induces the
diagonal selector D, a frequency set F induces the band projector
B = U_F U_F^T; both are orthogonal projectors and everything downstream
(concentration, uncertainty, sampling) is built from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    ConvergenceFailureError,
    DimensionMismatchError,
    IndexOutOfRangeError,
)
from .graphs import Laplacian

SIGN_TOL = 1e-12


def index_set(indices, n: int) -> np.ndarray:
    """Normalize an iterable of 0-based ids into a sorted unique array.

    Raises IndexOutOfRangeError for ids outside [0, n).
    """
    arr = np.unique(np.asarray(list(indices), dtype=int))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise IndexOutOfRangeError(f"index outside [0, {n})")
    return arr


def complement_set(indices: np.ndarray, n: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[indices] = False
    return np.flatnonzero(mask)


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Orthonormal eigenvector matrix U with ascending eigenvalues xi.

    Column signs follow a fixed convention (first entry of magnitude
    above 1e-12 is positive) so repeated runs return identical bases.
    """

    U: np.ndarray
    xi: np.ndarray

    @property
    def n(self) -> int:
        return self.U.shape[0]


def eigendecompose(l: Laplacian) -> SpectralBasis:
    """Full symmetric eigendecomposition of a Laplacian.

    Eigenvalues ascend; each eigenvector's sign is normalized.  For
    degenerate eigenvalues any orthonormal basis of the eigenspace may be
    returned; downstream code only depends on the projectors, which are
    basis-invariant.
    """
    mat = np.asarray(l.matrix, dtype=float)
    mat = 0.5 * (mat + mat.T)
    try:
        xi, u = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailureError(str(exc)) from exc
    u = _fix_signs(u)
    return SpectralBasis(U=u, xi=xi)


def _fix_signs(u: np.ndarray) -> np.ndarray:
    u = u.copy()
    for col in range(u.shape[1]):
        nz = np.flatnonzero(np.abs(u[:, col]) > SIGN_TOL)
        if nz.size and u[nz[0], col] < 0:
            u[:, col] = -u[:, col]
    return u


def gft(basis: SpectralBasis, x: np.ndarray) -> np.ndarray:
    """Graph Fourier transform: coefficients of x in the basis columns."""
    x = np.asarray(x, dtype=float)
    if x.shape != (basis.n,):
        raise DimensionMismatchError(f"expected length {basis.n}, got {x.shape}")
    return basis.U.T @ x


def igft(basis: SpectralBasis, xhat: np.ndarray) -> np.ndarray:
    """Inverse transform: synthesize a vertex signal from coefficients."""
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape != (basis.n,):
        raise DimensionMismatchError(f"expected length {basis.n}, got {xhat.shape}")
    return basis.U @ xhat


@dataclass(frozen=True, eq=False)
class ProjectorPair:
    """Vertex projector D (set S) and band projector B (set F), with complements.

    Dense matrices are materialized lazily; the factored form U_F (columns
    of U indexed by F) is kept alongside since repeated small
    eigen-problems on U_F^T D U_F are much cheaper than n x n ones.
    """

    basis: SpectralBasis
    vertex_set: np.ndarray
    freq_set: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def d_indicator(self) -> np.ndarray:
        """0/1 vector with ones on the vertex set."""
        ind = np.zeros(self.n)
        ind[self.vertex_set] = 1.0
        return ind

    @cached_property
    def u_f(self) -> np.ndarray:
        return self.basis.U[:, self.freq_set]

    @cached_property
    def D(self) -> np.ndarray:
        return np.diag(self.d_indicator)

    @cached_property
    def Dbar(self) -> np.ndarray:
        return np.eye(self.n) - self.D

    @cached_property
    def B(self) -> np.ndarray:
        return self.u_f @ self.u_f.T

    @cached_property
    def Bbar(self) -> np.ndarray:
        return np.eye(self.n) - self.B

    def complement(self, vertex: bool = False, band: bool = False) -> "ProjectorPair":
        """Pair with the vertex and/or frequency set replaced by its complement."""
        s = complement_set(self.vertex_set, self.n) if vertex else self.vertex_set
        f = complement_set(self.freq_set, self.n) if band else self.freq_set
        return ProjectorPair(basis=self.basis, vertex_set=s, freq_set=f)

    def reduced_vertex_gram(self) -> np.ndarray:
        """|F| x |F| matrix U_F^T D U_F (shares BDB's nonzero spectrum)."""
        uf = self.u_f
        sel = uf[self.vertex_set, :]
        return sel.T @ sel


def make_projectors(basis: SpectralBasis, s, f) -> ProjectorPair:
    """Build the projector pair for vertex set s and frequency set f."""
    return ProjectorPair(
        basis=basis,
        vertex_set=index_set(s, basis.n),
        freq_set=index_set(f, basis.n),
    )
