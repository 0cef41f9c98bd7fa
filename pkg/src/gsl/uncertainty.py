"""Trade-off region for joint vertex/frequency energy concentration.

A unit-norm signal with energy fraction alpha^2 on a vertex set and
beta^2 on a frequency band must satisfy four arccos inequalities whose
right-hand sides are the largest singular values of the four
projector products (B or its complement) x (D or its complement).
The admissible pairs form a region whose corner curves are attained in
closed form by mixing a concentrated vector psi_1 with its restriction
D psi_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSigmaError
from .localization import ConcentratedBasis, concentrated_basis, max_singular_bd
from .spectral import ProjectorPair

GAMMA_MIN = 1e-6  # trade-off weight kept away from 0/1 where the closed forms degenerate


@dataclass(frozen=True)
class UncertaintyCorners:
    """sigma_max of B D, B Dbar, Bbar D and Bbar Dbar (each in [0, 1])."""

    s_bd: float
    s_bdc: float
    s_bcd: float
    s_bcdc: float


@dataclass(frozen=True, eq=False)
class ExtremalVector:
    """Unit-norm signal with measured concentrations on the region boundary."""

    f: np.ndarray
    alpha: float
    beta: float


class TradeoffPoint(NamedTuple):
    """Closed-form boundary point and mixing weights for one singular value."""

    alpha: float
    p: float
    q: float
    omega: float


def corners(p: ProjectorPair) -> UncertaintyCorners:
    """The four extreme singular values bounding the admissible region."""
    return UncertaintyCorners(
        s_bd=max_singular_bd(p),
        s_bdc=max_singular_bd(p.complement(vertex=True)),
        s_bcd=max_singular_bd(p.complement(band=True)),
        s_bcdc=max_singular_bd(p.complement(vertex=True, band=True)),
    )


def _acos(x: float) -> float:
    return math.acos(min(1.0, max(-1.0, x)))


def is_admissible(alpha: float, beta: float, c: UncertaintyCorners, slack: float = 1e-10) -> bool:
    """Whether (alpha, beta) is an attainable concentration pair.

    Checks the four arccos inequalities with a small nonnegative slack to
    absorb rounding on measured concentrations.
    """
    if not (0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0):
        raise ValueError("alpha and beta must lie in [0, 1]")
    a_c = _acos(alpha)
    b_c = _acos(beta)
    a_s = _acos(math.sqrt(max(0.0, 1.0 - alpha**2)))
    b_s = _acos(math.sqrt(max(0.0, 1.0 - beta**2)))
    return (
        a_c + b_c >= _acos(c.s_bd) - slack
        and a_s + b_c >= _acos(c.s_bdc) - slack
        and a_c + b_s >= _acos(c.s_bcd) - slack
        and a_s + b_s >= _acos(c.s_bcdc) - slack
    )


def boundary_beta(alpha: float, sigma_max: float) -> float:
    """Largest beta compatible with a given alpha and sigma_max.

    beta = alpha * sigma_max + sqrt((1 - alpha^2)(1 - sigma_max^2)),
    the equality curve of the first arccos constraint.
    """
    if not (0.0 <= alpha <= 1.0 and 0.0 <= sigma_max <= 1.0):
        raise ValueError("arguments must lie in [0, 1]")
    val = alpha * sigma_max + math.sqrt(max(0.0, (1.0 - alpha**2) * (1.0 - sigma_max**2)))
    return min(1.0, max(0.0, val))


def boundary_curves(c: UncertaintyCorners, alphas: np.ndarray) -> dict[str, np.ndarray]:
    """The four corner curves of the region over a grid of alpha values.

    Returns betas for the upper-right, upper-left, lower-right and
    lower-left equality curves.
    """
    alphas = np.asarray(alphas, dtype=float)
    a_comp = np.sqrt(np.clip(1.0 - alphas**2, 0.0, 1.0))
    upper_right = np.array([boundary_beta(a, c.s_bd) for a in alphas])
    upper_left = np.array([boundary_beta(a, c.s_bdc) for a in a_comp])
    t_lr = np.array([boundary_beta(a, c.s_bcd) for a in alphas])
    t_ll = np.array([boundary_beta(a, c.s_bcdc) for a in a_comp])
    lower_right = np.sqrt(np.clip(1.0 - t_lr**2, 0.0, 1.0))
    lower_left = np.sqrt(np.clip(1.0 - t_ll**2, 0.0, 1.0))
    return {
        "upper_right": upper_right,
        "upper_left": upper_left,
        "lower_right": lower_right,
        "lower_left": lower_left,
    }


def _mixing_weights(alpha: float, sigma: float) -> tuple[float, float]:
    p = math.sqrt((1.0 - alpha**2) / (1.0 - sigma**2))
    q = alpha / sigma - p
    return p, q


def extremal_vector(cb: ConcentratedBasis, p: ProjectorPair, alpha: float) -> ExtremalVector:
    """Unit vector attaining the upper-right boundary at the given alpha.

    Built as p * psi_1 + q * D psi_1 with the closed-form weights; its
    measured concentrations satisfy the boundary equation to rounding.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError("alpha must lie in [0, 1]")
    if cb.k == 0:
        raise DegenerateSigmaError("empty frequency set")
    sigma = math.sqrt(float(cb.sigma_sq[0]))
    if sigma >= 1.0 - 1e-10:
        raise DegenerateSigmaError("sigma_max ~ 1: boundary collapses to the corner")
    if sigma <= 1e-8:
        raise DegenerateSigmaError("sigma_max ~ 0: restriction D psi_1 vanishes")
    psi1 = cb.psi[:, 0]
    pw, qw = _mixing_weights(alpha, sigma)
    f = pw * psi1 + qw * (p.d_indicator * psi1)
    f = f / np.linalg.norm(f)
    a_meas = float(np.linalg.norm(p.d_indicator * f))
    b_meas = float(np.linalg.norm(p.u_f.T @ f))
    return ExtremalVector(f=f, alpha=a_meas, beta=b_meas)


def tradeoff_point(gamma: float, sigma: float) -> TradeoffPoint:
    """Boundary point selected by weighting band energy gamma vs vertex energy.

    For the i-th singular value sigma of B D, returns the alpha at which
    the line (1-gamma) a^2 + gamma b^2 = const touches the boundary
    curve, the mixing weights (p, q) of the attaining vector, and the
    eigenvalue omega of gamma B + (1-gamma) D it corresponds to.  The two
    algebraically equivalent omega expressions trade denominators p and
    q; the better-conditioned one is evaluated.
    """
    if not (GAMMA_MIN <= gamma <= 1.0 - GAMMA_MIN):
        raise ValueError(f"gamma must lie in [{GAMMA_MIN}, {1 - GAMMA_MIN}]")
    if not (0.0 < sigma < 1.0):
        raise DegenerateSigmaError("sigma must lie strictly inside (0, 1)")
    s2 = sigma**2
    disc = (1.0 - 2.0 * gamma) ** 2 - 4.0 * gamma * (gamma - 1.0) * s2
    alpha = math.sqrt(0.5 * ((2.0 * gamma * (s2 - 1.0) + 1.0) / math.sqrt(disc) + 1.0))
    alpha = min(1.0, alpha)
    p, q = _mixing_weights(alpha, sigma)
    if abs(q) >= abs(p):
        omega = (1.0 - gamma) * (1.0 + p / q)
    else:
        omega = gamma * (1.0 + s2 * q / p)
    return TradeoffPoint(alpha=alpha, p=p, q=q, omega=omega)


def extremal_dictionary(p: ProjectorPair, gamma: float) -> list[tuple[np.ndarray, float, float]]:
    """Orthonormal vectors spanning the top of the concentration trade-off.

    Returns (f_i, omega_i, alpha_i) for i = 1..K with K the numerical
    rank of B D: each f_i = p_i psi_i + q_i D psi_i is an eigenvector of
    gamma B + (1-gamma) D with eigenvalue omega_i.  A singular value at 1
    short-circuits to psi_i itself with omega_i = 1 (the vector is
    already perfectly localized in both domains).
    """
    if not (GAMMA_MIN <= gamma <= 1.0 - GAMMA_MIN):
        raise ValueError(f"gamma must lie in [{GAMMA_MIN}, {1 - GAMMA_MIN}]")
    cb = concentrated_basis(p)
    d_ind = p.d_indicator
    out: list[tuple[np.ndarray, float, float]] = []
    for i in range(cb.rank):
        sigma = math.sqrt(float(cb.sigma_sq[i]))
        psi = cb.psi[:, i]
        if sigma >= 1.0 - 1e-10:
            out.append((psi.copy(), 1.0, float(np.linalg.norm(d_ind * psi))))
            continue
        pt = tradeoff_point(gamma, sigma)
        f = pt.p * psi + pt.q * (d_ind * psi)
        f = f / np.linalg.norm(f)
        out.append((f, pt.omega, pt.alpha))
    return out
