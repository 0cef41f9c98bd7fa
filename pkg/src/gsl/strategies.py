"""Sampling-set selection strategies.

All methods operate on the |F| x n matrix whose columns are the
per-vertex slices of the selected basis rows; choosing sample vertices
is choosing columns.  Greedy scores are evaluated in batch over all
candidate columns; ties always break toward the lowest vertex id so
every method is deterministic and permutation-equivariant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import TooLargeError
from .spectral import SpectralBasis, index_set

RANK_TOL = 1e-10
_TIE_DIGITS = 12
_EXHAUSTIVE_GUARD = 10**6
_CHUNK = 100_000


class Method(str, Enum):
    MINPINV = "minpinv"
    MAXFRO = "maxfro"
    MAXVOL = "maxvol"
    MAXSIGMIN = "maxsigmin"
    RANDOM = "random"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True, eq=False)
class SelectionResult:
    sample_set: np.ndarray
    score_trace: np.ndarray
    method: Method


def u_tilde(basis: SpectralBasis, f) -> np.ndarray:
    """Rows of the transposed basis for the band F (|F| x n)."""
    f = index_set(f, basis.n)
    return basis.U[:, f].T


def _quantize(x: np.ndarray) -> np.ndarray:
    """Flatten float noise below ~1e-12 relative so near-ties break by id."""
    x = np.asarray(x, dtype=float)
    out = x.copy()
    finite = np.isfinite(x) & (x != 0.0)
    if np.any(finite):
        mag = 10.0 ** np.floor(np.log10(np.abs(x[finite])))
        out[finite] = np.round(x[finite] / mag, _TIE_DIGITS) * mag
    return out


def _batched_gram_eigs(ut: np.ndarray, current: list[int], candidates: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of the Gram of [current columns, candidate]."""
    k = len(current)
    n_cand = candidates.size
    cols = np.empty((n_cand, ut.shape[0], k + 1))
    if k:
        cols[:, :, :k] = ut[:, current]
    cols[:, :, k] = ut[:, candidates].T
    gram = np.einsum("cfi,cfj->cij", cols, cols)
    return np.linalg.eigvalsh(gram)


def _pick_lowest(ids: np.ndarray, keys: list[np.ndarray]) -> int:
    """Argmin over lexicographic keys, lowest id on ties."""
    order = np.lexsort(tuple(reversed([*keys, ids])))
    return int(ids[order[0]])


def _greedy(ut: np.ndarray, m: int, score_step, method: Method) -> SelectionResult:
    n = ut.shape[1]
    if not (1 <= m <= n):
        raise ValueError("need 1 <= m <= n")
    chosen: list[int] = []
    trace = np.empty(m)
    remaining = np.ones(n, dtype=bool)
    for step in range(m):
        cand = np.flatnonzero(remaining)
        lam = _batched_gram_eigs(ut, chosen, cand)
        keys, values = score_step(lam)
        pick = _pick_lowest(cand, keys)
        trace[step] = values[np.searchsorted(cand, pick)]
        chosen.append(pick)
        remaining[pick] = False
    return SelectionResult(
        sample_set=np.array(sorted(chosen)), score_trace=trace, method=method
    )


def _minpinv_keys(lam: np.ndarray, n_freq: int):
    k_top = min(lam.shape[1], n_freq)
    top = lam[:, -k_top:]
    rank = (lam > RANK_TOL).sum(axis=1)
    deficient = top[:, 0] <= RANK_TOL
    sums = np.sum(1.0 / np.clip(top, RANK_TOL, None), axis=1)
    sums[deficient] = np.inf
    # candidates that keep full numerical rank win; then the smaller sum
    return [-rank.astype(float), _quantize(sums)], sums


def select_minpinv(ut: np.ndarray, m: int) -> SelectionResult:
    """Greedy minimization of the inverse-spectrum sum of the sampled columns.

    At each step adds the column minimizing sum_i 1/sigma_i^2 of the
    augmented column set (the predicted recovery MSE under unit noise),
    preferring candidates that keep the set numerically full rank.
    """
    n_freq = ut.shape[0]
    return _greedy(ut, m, lambda lam: _minpinv_keys(lam, n_freq), Method.MINPINV)


def select_maxvol(ut: np.ndarray, m: int) -> SelectionResult:
    """Greedy maximization of the parallelepiped volume of the sampled columns.

    The squared volume is the product of the Gram eigenvalues (largest
    |F| of them once the set outgrows the band size); the first pick is
    the largest-norm column.
    """
    n_freq = ut.shape[0]

    def score(lam: np.ndarray):
        k_top = min(lam.shape[1], n_freq)
        vol = np.prod(np.clip(lam[:, -k_top:], 0.0, None), axis=1)
        return [_quantize(-vol)], vol

    return _greedy(ut, m, score, Method.MAXVOL)


def select_maxsigmin(ut: np.ndarray, m: int) -> SelectionResult:
    """Greedy maximization of the smallest useful singular value."""
    n_freq = ut.shape[0]

    def score(lam: np.ndarray):
        k_top = min(lam.shape[1], n_freq)
        smin = np.sqrt(np.clip(lam[:, -k_top], 0.0, None))
        return [_quantize(-smin)], smin

    return _greedy(ut, m, score, Method.MAXSIGMIN)


def select_maxfro(ut: np.ndarray, m: int) -> SelectionResult:
    """The m columns of largest norm (no interaction between picks)."""
    n = ut.shape[1]
    if not (1 <= m <= n):
        raise ValueError("need 1 <= m <= n")
    norms = np.sum(ut**2, axis=0)
    order = np.lexsort((np.arange(n), _quantize(-norms)))
    chosen = np.sort(order[:m])
    return SelectionResult(
        sample_set=chosen,
        score_trace=np.array([float(norms[chosen].sum())]),
        method=Method.MAXFRO,
    )


def select_random(n: int, m: int, seed: int) -> SelectionResult:
    """Uniform sample of m distinct vertices."""
    if not (0 <= m <= n):
        raise ValueError("need 0 <= m <= n")
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(n, size=m, replace=False))
    return SelectionResult(
        sample_set=chosen, score_trace=np.array([float("nan")]), method=Method.RANDOM
    )


def _exhaustive_scores(lam: np.ndarray, objective: Method, n_freq: int) -> np.ndarray:
    k_top = min(lam.shape[1], n_freq)
    top = np.clip(lam[:, -k_top:], 0.0, None)
    if objective == Method.MINPINV:
        deficient = top[:, 0] <= RANK_TOL
        val = np.sum(1.0 / np.clip(top, RANK_TOL, None), axis=1)
        val[deficient] = np.inf
        return val
    if objective == Method.MAXVOL:
        return -np.prod(top, axis=1)
    if objective == Method.MAXSIGMIN:
        return -np.sqrt(top[:, 0])
    raise ValueError(f"unsupported exhaustive objective {objective}")


def select_exhaustive(ut: np.ndarray, m: int, objective: Method | str) -> SelectionResult:
    """True optimum of the chosen objective over all size-m subsets.

    Guarded at 10^6 subsets; ties resolve to the lexicographically
    smallest subset.
    """
    objective = Method(objective)
    n = ut.shape[1]
    if not (1 <= m <= n):
        raise ValueError("need 1 <= m <= n")
    total = math.comb(n, m)
    if total > _EXHAUSTIVE_GUARD:
        raise TooLargeError(f"{total} subsets exceed the {_EXHAUSTIVE_GUARD} guard")
    best_score = np.inf
    best_subset: tuple[int, ...] | None = None
    combos = itertools.combinations(range(n), m)
    while True:
        chunk = list(itertools.islice(combos, _CHUNK))
        if not chunk:
            break
        idx = np.array(chunk)
        cols = ut.T[idx]  # (chunk, m, |F|)
        gram = cols @ cols.transpose(0, 2, 1)
        lam = np.linalg.eigvalsh(gram)
        scores = _quantize(_exhaustive_scores(lam, objective, ut.shape[0]))
        j = int(np.argmin(scores))  # argmin keeps the first (lex-smallest) tie
        if scores[j] < best_score:
            best_score = float(scores[j])
            best_subset = chunk[j]
    assert best_subset is not None
    signed = best_score if objective == Method.MINPINV else -best_score
    return SelectionResult(
        sample_set=np.array(best_subset),
        score_trace=np.array([signed]),
        method=Method.EXHAUSTIVE,
    )
