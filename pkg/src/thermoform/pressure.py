"""Partition sums, pressure brackets and the affinity dimension.

For a submultiplicative potential the sequence ``a_n = log sum_{|w|=n} Phi(w)``
is subadditive, so ``min_{n<=n_max} a_n / n`` is a certified upper bound for
the pressure. Lower bounds come from connector estimates: if every pair of
length-``n`` words admits a connector ``k`` of length exactly ``r`` with
``Phi(ikj) >= delta_r Phi(i) Phi(j)``, then ``a_{2n+r} >= 2 a_n + log delta_r``
and iterating the doubling gives ``P >= (a_n + log delta_r) / (n + r)``.
``delta_r`` is measured on a finite window, so these lower bounds are
heuristic unless the caller supplies a proven constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import InvalidInputError
from .multilinear import as_matrix, singular_values
from .potentials import (
    ConnectorEstimate,
    Potential,
    SingularValuePotential,
    _log_sv_function,
    connector_scan,
    estimate_quasimultiplicativity,
    word_products,
)
from .symbolic import check_budget


def partition_sum(p: Potential, n: int) -> float:
    """``a_n = log sum_{|w|=n} Phi(w)``, exact over all ``N**n`` words.

    Blocks are reduced in a fixed prefix order, so the result does not depend
    on how many threads produced them.
    """
    if n < 1:
        raise InvalidInputError("depth must be >= 1")
    partials = [logsumexp(block) for block in p.iter_log_values(n)]
    return float(logsumexp(partials)) if len(partials) > 1 else float(partials[0])


@dataclass(frozen=True)
class PressureEstimate:
    """Per-depth partition sums and a two-sided bracket for the pressure.

    ``upper`` is certified (Fekete). ``lower`` is heuristic unless
    ``lower_certified`` is set; ``None`` when no positive connector constant
    was found. ``point`` is ``a_n / n`` at the last depth, clipped into the
    bracket.
    """

    log_sums: tuple[float, ...]
    upper: float
    point: float
    lower: float | None
    lower_certified: bool
    connector_length: int | None
    log_delta: float | None
    kappa: float | None
    lower_kappa: float | None
    upper_sequence: tuple[float, ...]
    extrapolated: float | None = None
    flags: tuple[str, ...] = field(default=())

    @property
    def n_max(self) -> int:
        return len(self.log_sums)

    @property
    def width(self) -> float:
        return math.inf if self.lower is None else self.upper - self.lower

    def records(self) -> list[tuple[int, float, float, float]]:
        """``(n, a_n, a_n / n, upper so far)`` per depth."""
        return [
            (n, a, a / n, u)
            for n, (a, u) in enumerate(zip(self.log_sums, self.upper_sequence), start=1)
        ]


def _aitken(x: Sequence[float]) -> float | None:
    if len(x) < 3:
        return None
    x0, x1, x2 = x[-3:]
    denom = x2 - 2 * x1 + x0
    if abs(denom) < 1e-300:
        return x2
    return x2 - (x2 - x1) ** 2 / denom


def bracket_from_sums(
    log_sums: Sequence[float],
    connector_logdeltas: dict[int, float],
    *,
    certified: bool = False,
    kappa: float | None = None,
    quasi: ConnectorEstimate | None = None,
    extrapolate: bool = False,
) -> PressureEstimate:
    """Assemble a :class:`PressureEstimate` from ``a_1..a_n`` and connector constants.

    ``connector_logdeltas`` maps an exact connector length ``r`` to
    ``log delta_r``.
    """
    a = np.asarray(log_sums, dtype=float)
    n = np.arange(1, len(a) + 1)
    ratios = a / n
    upper_seq = np.minimum.accumulate(ratios)
    upper = float(upper_seq[-1])
    raw_point = float(ratios[-1])

    lower, best_r, best_logdelta = None, None, None
    for r, ld in sorted(connector_logdeltas.items()):
        if not np.isfinite(ld):
            continue
        cand = float(np.max((a + ld) / (n + r)))
        if lower is None or cand > lower:
            lower, best_r, best_logdelta = cand, r, ld

    lower_kappa = None
    if quasi is not None and kappa is not None and np.isfinite(quasi.log_delta):
        m = max(quasi.connector_lengths)
        c = quasi.log_delta - math.log(m + 1) - m * max(kappa, 0.0)
        lower_kappa = float(np.max((a + c) / (n + m)))

    flags = []
    if lower is not None and lower > upper:
        # both bound P; an excess is rounding or an over-optimistic window
        if lower - upper > 1e-12 * max(1.0, abs(upper)):
            flags.append("lower-bound-clamped: measured lower bound exceeded the upper bound")
        lower = upper
    point = min(raw_point, upper)
    if lower is not None:
        point = max(point, lower)
    if raw_point - upper > 1e-12 * max(1.0, abs(upper)):
        flags.append("point-clamped: a_n/n above the running minimum")
    if lower is None:
        flags.append("lower-bound-omitted: no positive connector constant")
    elif not certified:
        flags.append("lower-bound-heuristic: connector constant measured on a finite window")
    return PressureEstimate(
        log_sums=tuple(float(x) for x in a),
        upper=upper,
        point=point,
        lower=lower,
        lower_certified=certified and lower is not None,
        connector_length=best_r,
        log_delta=best_logdelta,
        kappa=kappa,
        lower_kappa=lower_kappa,
        upper_sequence=tuple(float(x) for x in upper_seq),
        extrapolated=_aitken(list(ratios)) if extrapolate else None,
        flags=tuple(flags),
    )


def pressure(
    p: Potential,
    n_max: int,
    m: int = 2,
    L: int = 3,
    delta: dict[int, float] | float | None = None,
    extrapolate: bool = False,
) -> PressureEstimate:
    """Bracket ``P(Phi)`` from exact partition sums up to depth ``n_max``.

    Parameters
    ----------
    m
        Largest connector length tried for the lower bound.
    L
        Window ``|i|, |j| <= L`` on which connector constants are measured.
    delta
        Proven connector constants. A float is taken as a constant for the
        empty connector (supermultiplicativity); a dict maps exact connector
        lengths to constants. Supplying it marks the lower bound certified and
        skips the measurement.
    """
    if n_max < 2:
        raise InvalidInputError("n_max must be >= 2")
    check_budget(p.alphabet_size**n_max, f"partition sum at depth {n_max}")
    log_sums = [partition_sum(p, n) for n in range(1, n_max + 1)]
    kappa = p.log_inverse_bound()
    if delta is not None:
        given = {0: delta} if not isinstance(delta, dict) else delta
        logdeltas = {r: math.log(v) if v > 0 else -math.inf for r, v in given.items()}
        return bracket_from_sums(log_sums, logdeltas, certified=True, kappa=kappa, extrapolate=extrapolate)
    logdeltas = {r: connector_scan(p, [r], L).log_delta for r in range(0, m + 1)}
    quasi = estimate_quasimultiplicativity(p, m, L) if kappa is not None else None
    return bracket_from_sums(log_sums, logdeltas, kappa=kappa, quasi=quasi, extrapolate=extrapolate)


# ---------------------------------------------------------------------------
# affinity dimension


@dataclass(frozen=True)
class DimensionResult:
    """Bisection outcome for ``P(Phi^s) = 0``.

    ``upper_certified`` means the certified upper pressure bound at ``s_hi`` is
    ``<= 0``, so the affinity dimension is at most ``s_hi``. The lower end is
    only ever heuristic.
    """

    s_lo: float
    s_hi: float
    point: float
    pressure_lo: PressureEstimate
    pressure_hi: PressureEstimate
    iterations: tuple[tuple[float, float], ...]
    capped: bool
    upper_certified: bool
    lower_heuristic_ok: bool

    @property
    def bracket(self) -> tuple[float, float]:
        return self.s_lo, self.s_hi


class _SingularValueTables:
    """Log singular values of every word product up to depth ``n_max``."""

    def __init__(self, gens: np.ndarray, n_max: int):
        N = gens.shape[0]
        check_budget(sum(N**n for n in range(1, n_max + 1)), "affinity dimension tables")
        self.tables = []
        for n in range(1, n_max + 1):
            mats, ls = word_products(gens, n)
            with np.errstate(divide="ignore"):
                svlog = np.log(np.linalg.svd(mats, compute_uv=False))
            self.tables.append((svlog, ls))

    def log_sums(self, s: float) -> list[float]:
        return [float(logsumexp(_log_sv_function(sv, ls, s))) for sv, ls in self.tables]


MAX_BISECTIONS = 64


def affinity_dimension(
    generators,
    n_max: int = 10,
    tol: float = 1e-6,
    m: int = 1,
    L: int = 2,
) -> DimensionResult:
    """Root of ``s -> P(Phi^s)`` by bisection on the depth-``n_max`` point estimate.

    The initial bracket is ``[0, 2d]``; ``P(Phi^0) = log N > 0`` and contraction
    makes the pressure negative at ``2d``.
    """
    gens = np.array([as_matrix(A) for A in generators])
    if gens.shape[0] < 2:
        raise InvalidInputError("need at least two generators")
    for i, A in enumerate(gens):
        if singular_values(A)[0] >= 1:
            raise InvalidInputError(f"generator {i + 1} is not contracting (sigma_1 >= 1)")
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    d = gens.shape[-1]
    tables = _SingularValueTables(gens, n_max)

    def point(s):
        return tables.log_sums(s)[-1] / n_max

    lo, hi = 0.0, 2.0 * d
    history = []
    capped = True
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            capped = False
            break
        mid = 0.5 * (lo + hi)
        value = point(mid)
        history.append((mid, value))
        if value > 0:
            lo = mid
        else:
            hi = mid
    else:
        capped = hi - lo > tol

    def estimate(s):
        pot = SingularValuePotential(gens, s)
        sums = tables.log_sums(s)
        logdeltas = {r: connector_scan(pot, [r], L).log_delta for r in range(0, m + 1)}
        return bracket_from_sums(sums, logdeltas, kappa=pot.log_inverse_bound())

    p_lo, p_hi = estimate(lo), estimate(hi)
    return DimensionResult(
        s_lo=lo,
        s_hi=hi,
        point=0.5 * (lo + hi),
        pressure_lo=p_lo,
        pressure_hi=p_hi,
        iterations=tuple(history),
        capped=capped,
        upper_certified=p_hi.upper <= 0,
        lower_heuristic_ok=p_lo.lower is not None and p_lo.lower >= 0,
    )
