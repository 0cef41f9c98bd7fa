"""Recovery of band-limited graph signals from vertex samples.

A band-limited signal is recoverable from its samples on S exactly when
no band-limited signal hides on the unsampled vertices, i.e. when
sigma_max(B Dbar) < 1.  Three interchangeable reconstructions are
provided (resolvent inverse, concentrated-basis expansion, generalized
frames) together with closed-form mean-square-error predictions for
i.i.d. observation noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    ConvergenceFailureError,
    DimensionMismatchError,
    FrameNotInvertibleError,
    MissingCoordinatesError,
    SamplingConditionViolatedError,
)
from .graphs import Graph, toroidal_distances
from .localization import ConcentratedBasis, max_singular_bd
from .spectral import ProjectorPair, SpectralBasis, index_set

SAMPLING_TOL = 1e-8
RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """A signal restricted to a vertex set (exact zeros elsewhere)."""

    values: np.ndarray
    sample_set: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        off = np.ones(vals.size, dtype=bool)
        off[self.sample_set] = False
        if np.any(vals[off] != 0.0):
            raise ValueError("values must vanish exactly off the sample set")
        object.__setattr__(self, "values", vals)


def sample_signal(x: np.ndarray, p: ProjectorPair) -> SampledSignal:
    """Observe a signal on the pair's vertex set: values = D x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (p.n,):
        raise DimensionMismatchError(f"expected length {p.n}")
    return SampledSignal(values=p.d_indicator * x, sample_set=p.vertex_set)


@dataclass(frozen=True, eq=False)
class FrameSpec:
    """Band-limited frame columns: column u (u in S) is the synthesis vector y_u."""

    Y: np.ndarray


@dataclass(frozen=True, eq=False)
class RecoveryReport:
    x_hat: np.ndarray
    relative_error: float | None
    predicted_mse: float
    condition: float


class GMatrix(NamedTuple):
    """Basis columns F sampled at vertices S, with its rank diagnostics."""

    matrix: np.ndarray
    sigma_min: float
    full_column_rank: bool


def check_sampling_condition(p: ProjectorPair, tol: float = SAMPLING_TOL) -> bool:
    """True iff sigma_max(B Dbar) <= 1 - tol.

    Equivalently the sampled basis columns keep full column rank, so the
    band subspace is identifiable from samples on S.
    """
    return max_singular_bd(p.complement(vertex=True)) <= 1.0 - tol


def g_matrix(basis: SpectralBasis, s, f) -> GMatrix:
    """Selected basis columns sampled at the selected vertices (|S| x |F|)."""
    s = index_set(s, basis.n)
    f = index_set(f, basis.n)
    if s.size == 0 or f.size == 0:
        raise ValueError("vertex and frequency sets must be nonempty")
    mat = basis.U[np.ix_(s, f)]
    svals = np.linalg.svd(mat, compute_uv=False)
    # fewer rows than columns cannot give full column rank
    sigma_min = float(svals.min()) if s.size >= f.size else 0.0
    return GMatrix(matrix=mat, sigma_min=sigma_min, full_column_rank=sigma_min > RANK_TOL)


def _apply_b(p: ProjectorPair, x: np.ndarray) -> np.ndarray:
    return p.u_f @ (p.u_f.T @ x)


def recover_inverse(
    xs: SampledSignal,
    p: ProjectorPair,
    method: str = "direct",
    max_iter: int = 20000,
    atol: float = 1e-13,
) -> np.ndarray:
    """Reconstruct by inverting I - Dbar B on the sampled signal.

    "direct" solves the dense system; "neumann" iterates
    x <- xs + Dbar B x, which converges because sigma_max(Dbar B) < 1
    under the sampling condition.
    """
    if not check_sampling_condition(p):
        raise SamplingConditionViolatedError("sigma_max(B Dbar) ~ 1: samples not sufficient")
    xs_vals = xs.values
    dbar = 1.0 - p.d_indicator
    if method == "direct":
        op = np.eye(p.n) - dbar[:, None] * p.B
        return np.linalg.solve(op, xs_vals)
    if method == "neumann":
        x = xs_vals.copy()
        for _ in range(max_iter):
            x_next = xs_vals + dbar * _apply_b(p, x)
            if np.max(np.abs(x_next - x)) <= atol:
                return x_next
            x = x_next
        raise ConvergenceFailureError("iteration cap reached before the fixed point")
    raise ValueError(f"unknown method {method!r}")


def recover_concentrated(xs: SampledSignal, cb: ConcentratedBasis) -> np.ndarray:
    """Expand the samples over the concentrated basis, reweighting by 1/sigma_i^2."""
    if cb.rank < cb.k:
        raise SamplingConditionViolatedError(
            f"only {cb.rank} of {cb.k} concentration eigenvalues are positive"
        )
    if cb.k == 0:
        return np.zeros(xs.values.size)
    coeff = (cb.psi.T @ xs.values) / cb.sigma_sq
    return cb.psi @ coeff


def make_frame(p: ProjectorPair, y: np.ndarray) -> FrameSpec:
    """Validate a frame matrix: columns band-limited, support inside S."""
    y = np.asarray(y, dtype=float)
    if y.shape != (p.n, p.n):
        raise DimensionMismatchError("frame matrix must be n x n")
    off = np.ones(p.n, dtype=bool)
    off[p.vertex_set] = False
    if np.any(y[:, off] != 0.0):
        raise ValueError("frame columns off the vertex set must be exactly zero")
    if np.max(np.abs(_apply_b(p, y) - y), initial=0.0) >= 1e-8:
        raise ValueError("frame columns must be band-limited")
    return FrameSpec(Y=y)


def canonical_frame(p: ProjectorPair) -> FrameSpec:
    """Frame of band-projected unit impulses on the sampled vertices.

    The columns are B delta_u for u in S (the band-limited normalization
    of Y = D); the induced frame operator is exactly B D B.
    """
    return FrameSpec(Y=p.B * p.d_indicator[None, :])


def local_set_frame(g: Graph, s, r1: float, p: ProjectorPair) -> FrameSpec:
    """Frame whose column at u spreads the sample over a toroidal ball.

    Column u (u in S) is the band projection of the indicator of all
    vertices within toroidal distance r1 of u; r1 = 0 reduces to the
    canonical frame.
    """
    if g.coordinates is None:
        raise MissingCoordinatesError("local-set frames need vertex coordinates")
    if r1 < 0:
        raise ValueError("r1 must be >= 0")
    s = index_set(s, g.n)
    dist = toroidal_distances(g.coordinates)
    y = np.zeros((g.n, g.n))
    for u in s:
        indicator = (dist[u] <= r1).astype(float)
        y[:, u] = p.u_f @ (p.u_f.T @ indicator)
    return FrameSpec(Y=y)


def _reduced_frame_operator(p: ProjectorPair, spec: FrameSpec) -> np.ndarray:
    """|F| x |F| reduction of B Y D B."""
    yd = spec.Y * p.d_indicator[None, :]
    return p.u_f.T @ yd @ p.u_f


class FrameAnalysis(NamedTuple):
    bounds: tuple[float, float]
    invertible: bool


def frame_analysis(p: ProjectorPair, spec: FrameSpec) -> FrameAnalysis:
    """Tightest frame bounds: extreme singular values of the reduced operator."""
    red = _reduced_frame_operator(p, spec)
    if red.size == 0:
        return FrameAnalysis(bounds=(0.0, 0.0), invertible=False)
    svals = np.linalg.svd(red, compute_uv=False)
    lo, hi = float(svals.min()), float(svals.max())
    return FrameAnalysis(bounds=(lo, hi), invertible=lo > RANK_TOL)


def recover_frame(xs: SampledSignal, p: ProjectorPair, spec: FrameSpec) -> np.ndarray:
    """Invert the frame operator on the band subspace to rebuild the signal."""
    analysis = frame_analysis(p, spec)
    if not analysis.invertible:
        raise FrameNotInvertibleError(
            f"frame lower bound {analysis.bounds[0]:.3e} below the rank threshold"
        )
    red = _reduced_frame_operator(p, spec)
    rhs = p.u_f.T @ (spec.Y @ xs.values)
    coeff = np.linalg.pinv(red, rcond=RANK_TOL) @ rhs
    return p.u_f @ coeff


def predicted_mse(cb: ConcentratedBasis, noise_var: float) -> float:
    """Expected squared recovery error under i.i.d. noise of given variance.

    For the concentrated-basis expansion this is
    noise_var * sum_i 1 / sigma_i^2 over the band's eigenvalues.
    """
    if noise_var < 0:
        raise ValueError("noise_var must be >= 0")
    if cb.rank < cb.k:
        raise SamplingConditionViolatedError("sampling condition fails: MSE diverges")
    if cb.k == 0:
        return 0.0
    return float(noise_var * np.sum(1.0 / cb.sigma_sq))


def predicted_mse_frame(p: ProjectorPair, spec: FrameSpec, noise_var: float) -> float:
    """Expected squared error of frame recovery under i.i.d. noise.

    The error operator maps noise n to T+ B Y D n on the band subspace;
    its squared Frobenius norm times the noise variance is the MSE.  For
    the canonical frame this collapses to noise_var * sum 1/sigma_i^2.
    """
    if noise_var < 0:
        raise ValueError("noise_var must be >= 0")
    analysis = frame_analysis(p, spec)
    if not analysis.invertible:
        raise FrameNotInvertibleError("frame operator singular on the band subspace")
    red = _reduced_frame_operator(p, spec)
    yd = spec.Y * p.d_indicator[None, :]
    err_op = np.linalg.pinv(red, rcond=RANK_TOL) @ (p.u_f.T @ yd)
    return float(noise_var * np.sum(err_op**2))


def recovery_condition(cb: ConcentratedBasis) -> float:
    """sigma_min / sigma_max of the sampled band operator, in [0, 1]."""
    if cb.k == 0 or cb.sigma_sq[0] <= 0.0:
        return 0.0
    return float(np.sqrt(cb.sigma_sq[-1] / cb.sigma_sq[0]))


def report_recovery(
    x_hat: np.ndarray,
    cb: ConcentratedBasis,
    noise_var: float = 0.0,
    truth: np.ndarray | None = None,
) -> RecoveryReport:
    """Bundle a reconstruction with its error and conditioning diagnostics."""
    rel = None
    if truth is not None:
        truth = np.asarray(truth, dtype=float)
        denom = np.linalg.norm(truth)
        rel = float(np.linalg.norm(x_hat - truth) / denom) if denom > 0 else float(np.linalg.norm(x_hat))
    mse = predicted_mse(cb, noise_var) if cb.rank == cb.k else float("inf")
    return RecoveryReport(
        x_hat=x_hat,
        relative_error=rel,
        predicted_mse=mse,
        condition=recovery_condition(cb),
    )
