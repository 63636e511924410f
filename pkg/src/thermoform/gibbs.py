"""Finite-depth Gibbs approximations and mixing diagnostics.

A depth-``n`` Gibbs table assigns each cylinder ``[w]``, ``|w| = n``, the mass
``Phi(w) / sum_{|u|=n} Phi(u)``. For the potentials handled here the
equilibrium state satisfies a Gibbs inequality, so these masses agree with the
true cylinder masses up to a bounded but unknown multiplicative constant.
Every quantity derived from a table is a "Gibbs-normalized approximation".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from . import symbolic
from .classes import SubspaceClass, classify, find_finite_orbit_classes
from .errors import InvalidInputError
from .potentials import (
    ConnectorEstimate,
    GeneralisedPotential,
    MatrixSystem,
    Potential,
    RestrictedPotential,
    connector_scan,
    word_products,
)
from .symbolic import Word, check_budget, word_budget


@dataclass(frozen=True, eq=False)
class GibbsTable:
    """Normalized cylinder weights at one depth, lexicographic word order."""

    depth: int
    alphabet_size: int
    log_weights: np.ndarray
    log_normalizer: float
    potential: Potential | None = None

    @classmethod
    def from_log_weights(cls, alphabet_size: int, depth: int, log_weights, potential=None) -> "GibbsTable":
        lw = np.asarray(log_weights, dtype=float)
        if lw.shape != (alphabet_size**depth,):
            raise InvalidInputError(f"need {alphabet_size**depth} weights, got {lw.shape}")
        return cls(depth, alphabet_size, lw, float(logsumexp(lw)), potential)

    @property
    def log_masses(self) -> np.ndarray:
        return self.log_weights - self.log_normalizer

    @property
    def masses(self) -> np.ndarray:
        return np.exp(self.log_masses)

    def mass(self, w) -> float:
        w = symbolic.as_word(w, self.alphabet_size)
        if len(w) > self.depth:
            raise InvalidInputError(f"cylinder of length {len(w)} deeper than the table ({self.depth})")
        block = self.masses.reshape(self.alphabet_size ** len(w), -1)
        return float(block[symbolic.lex_index(w) - 1].sum())

    def marginal(self, n: int) -> np.ndarray:
        """Masses of the length-``n`` prefix cylinders."""
        if not 1 <= n <= self.depth:
            raise InvalidInputError(f"marginal depth {n} outside 1..{self.depth}")
        return self.masses.reshape(self.alphabet_size**n, -1).sum(axis=1)

    def records(self):
        """``(word, log-weight, mass)`` for every cylinder."""
        masses = self.masses
        for k, w in enumerate(symbolic.enumerate_words(self.alphabet_size, self.depth)):
            yield str(w), float(self.log_weights[k]), float(masses[k])


def gibbs_table(p: Potential, n: int) -> GibbsTable:
    check_budget(p.alphabet_size**n, f"Gibbs table at depth {n}")
    return GibbsTable.from_log_weights(p.alphabet_size, n, p.log_values(n), p)


def entropy_estimate(t: GibbsTable) -> float:
    """``-(1/n) sum mu log mu`` over the table's cylinders."""
    mu = t.masses
    lm = t.log_masses
    nz = mu > 0
    return float(-np.sum(mu[nz] * lm[nz]) / t.depth)


@dataclass(frozen=True)
class ErgodicAverage:
    """``value = (1/n) sum mu log q`` with the variational residual ``h + value - a_n / n``.

    The residual refers to the table's own normalizer, so it vanishes
    identically when ``q`` is the potential that built the table.
    """

    value: float
    entropy: float
    residual: float


def ergodic_average(t: GibbsTable, q: Potential) -> ErgodicAverage:
    if q.alphabet_size != t.alphabet_size:
        raise InvalidInputError("potential and table use different alphabets")
    mu = t.masses
    value = float(np.dot(mu, q.log_values(t.depth)) / t.depth)
    h = entropy_estimate(t)
    return ErgodicAverage(value, h, h + value - t.log_normalizer / t.depth)


@dataclass(frozen=True)
class LyapunovSpectrum:
    """Table-averaged exponents ``(1/n) sum mu log sigma_i(A_w^(j))`` per factor.

    ``radius_exponents[j]`` replaces singular values by the spectral radius.
    """

    exponents: tuple[np.ndarray, ...]
    radius_exponents: tuple[float, ...]
    depth: int

    def top_gaps(self) -> tuple[float, ...]:
        return tuple(float(e[0] - e[1]) if len(e) > 1 else math.inf for e in self.exponents)


def lyapunov_spectrum(system: MatrixSystem, t: GibbsTable) -> LyapunovSpectrum:
    if system.alphabet_size != t.alphabet_size:
        raise InvalidInputError("system and table use different alphabets")
    mu = t.masses
    n = t.depth
    exps, radii = [], []
    for g in system.generators:
        mats, ls = word_products(g, n)
        sv = np.log(np.linalg.svd(mats, compute_uv=False)) + ls[:, None]
        rho = np.log(np.max(np.abs(np.linalg.eigvals(mats)), axis=-1)) + ls
        exps.append(mu @ sv / n)
        radii.append(float(mu @ rho / n))
    return LyapunovSpectrum(tuple(exps), tuple(radii), n)


def suggest_exterior_degrees(spectrum: LyapunovSpectrum, gap: float = 1e-3) -> tuple[int, ...]:
    """Per factor, the largest ``l`` with ``lambda_1 ~ ... ~ lambda_l`` (consecutive gaps below ``gap``)."""
    out = []
    for e in spectrum.exponents:
        ell = 1
        while ell < len(e) and e[ell - 1] - e[ell] < gap:
            ell += 1
        out.append(ell)
    return tuple(out)


# ---------------------------------------------------------------------------
# mixing


def psi_mixing_precondition(p: Potential, m: int, L: int) -> ConnectorEstimate:
    """``min_{|i|,|j|<=L} max_{|k|=m} Phi(ikj) / (Phi(i) Phi(j))`` with its minimising pair."""
    if m < 1:
        raise InvalidInputError("connector length must be >= 1")
    return connector_scan(p, [m], L)


@dataclass(frozen=True)
class MixingReport:
    """Largest ``|mu([i] & sigma^{-n-|i|}[j]) / (mu([i]) mu([j])) - 1|`` over ``|i|, |j| <= window``."""

    gap: int
    window: int
    deviation: float
    witness_i: Word
    witness_j: Word
    by_lengths: dict = field(default_factory=dict)


def _correlation_deviation(masses: np.ndarray, N: int, pad: int, li: int, gap: int, lj: int):
    joint = masses.reshape(N**pad, N**li, N**gap, N**lj, N**pad).sum(axis=(0, 2, 4))
    mi = joint.sum(axis=1)
    mj = joint.sum(axis=0)
    dev = np.abs(joint / (mi[:, None] * mj[None, :]) - 1.0)
    k = int(np.argmax(dev))
    return float(dev.flat[k]), divmod(k, N**lj)


def correlation_ratio_scan(p: Potential, gaps: Sequence[int], L: int,
                           pad: int | None = None) -> list[MixingReport]:
    """Correlation ratios across each gap, all three masses from one common table.

    The table has depth ``pad + |i| + n + |j| + pad``: the cylinders sit
    ``pad`` symbols away from both ends, where a finite-depth Gibbs table is
    closest to shift invariant. ``pad`` defaults to ``L + 1``. ``mu([j])`` is
    the marginal of the same table at the positions ``j`` occupies, so
    ``sum_j mu([i] & [j]) = mu([i])`` holds exactly.
    """
    if L < 1:
        raise InvalidInputError("window must be >= 1")
    pad = L + 1 if pad is None else int(pad)
    if pad < 0:
        raise InvalidInputError("pad must be >= 0")
    N = p.alphabet_size
    for n in gaps:
        if n < 0:
            raise InvalidInputError("gaps must be non-negative")
        check_budget(N ** (2 * L + n + 2 * pad), f"correlation scan at gap {n}")
    tables: dict[int, np.ndarray] = {}
    reports = []
    for n in gaps:
        best, wit, per = -1.0, None, {}
        for li in range(1, L + 1):
            for lj in range(1, L + 1):
                D = 2 * pad + li + n + lj
                if D not in tables:
                    tables[D] = gibbs_table(p, D).masses
                dev, (a, b) = _correlation_deviation(tables[D], N, pad, li, n, lj)
                per[(li, lj)] = dev
                if dev > best:
                    best = dev
                    wit = (symbolic.lex_inverse(a + 1, N, li), symbolic.lex_inverse(b + 1, N, lj))
        reports.append(MixingReport(int(n), L, best, wit[0], wit[1], per))
    return reports


def parity_profile(reports: Sequence[MixingReport], moduli: Sequence[int] = (2, 3, 4, 5, 6)) -> dict:
    """Mean deviation per residue class of the gap, for each modulus."""
    out = {}
    for q in moduli:
        groups: dict[int, list[float]] = {}
        for r in reports:
            groups.setdefault(r.gap % q, []).append(r.deviation)
        out[q] = {res: float(np.mean(v)) for res, v in sorted(groups.items())}
    return out


@dataclass(frozen=True)
class EpsilonIndependence:
    """Independence of the future partition from the past partition across a gap.

    ``full`` is the maximum over all past cells; ``swept`` is the least
    ``eps`` for which discarding past cells of total mass below ``eps`` brings
    the maximum under ``eps``.
    """

    full: float
    swept: float
    witness_past: Word
    witness_future: Word


def epsilon_independence(t: GibbsTable, split: tuple[int, int, int]) -> EpsilonIndependence:
    a, g, b = (int(x) for x in split)
    if a < 1 or b < 1 or g < 0 or a + g + b != t.depth:
        raise InvalidInputError(f"split {split} does not partition depth {t.depth}")
    N = t.alphabet_size
    joint = t.masses.reshape(N**a, N**g, N**b).sum(axis=1)
    mq = joint.sum(axis=1)
    mp = joint.sum(axis=0)
    live = mq > 0  # conditionals on null cells are undefined; they carry no mass
    dev = np.zeros_like(joint)
    dev[live] = np.abs(joint[live] / mq[live, None] - mp[None, :])
    per_cell = dev.max(axis=1)
    k = int(np.argmax(dev))
    q, p = divmod(k, N**b)
    full = float(dev.flat[k])

    order = np.argsort(per_cell, kind="stable")
    d_sorted = per_cell[order]
    cum = np.cumsum(mq[order])
    # keeping the k lowest-deviation cells works for eps in (d_k, d_{k+1}] once eps > 1 - mass
    swept = math.inf
    K = len(order)
    for k in range(1, K + 1):
        if k < K and d_sorted[k] == d_sorted[k - 1]:
            continue
        cand = max(float(d_sorted[k - 1]), 1.0 - float(cum[k - 1]))
        if k == K or cand < d_sorted[k]:
            swept = min(swept, cand)
    return EpsilonIndependence(
        full, max(swept, 0.0), symbolic.lex_inverse(q + 1, N, a), symbolic.lex_inverse(p + 1, N, b)
    )


# ---------------------------------------------------------------------------
# total ergodicity


@dataclass(frozen=True)
class DiagnosticConfig:
    cap: int = 256
    word_len: int = 2
    gaps: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    window: int = 2
    classes: tuple[SubspaceClass, ...] | None = None
    scan_budget: int = 2**20


@dataclass(frozen=True)
class TotalErgodicityReport:
    """Either ``"no obstruction found at configured depth"`` or a period obstruction.

    Absence of an obstruction is never a proof of total ergodicity.
    """

    verdict: str
    obstructions: tuple[tuple[SubspaceClass, int], ...]
    dims: tuple[int, ...] | None
    classes: tuple[SubspaceClass, ...]
    scan: tuple[MixingReport, ...]
    parity: dict

    @property
    def obstructed(self) -> bool:
        return bool(self.obstructions)


def minimal_orbit_dims(system: MatrixSystem, cap: int = 256, word_len: int = 2) -> tuple[int, ...]:
    """Per factor, the smallest dimension at which the seeded search finds a finite orbit."""
    dims = []
    for j, g in enumerate(system.generators):
        single = MatrixSystem.single(g)
        d = system.dims[j]
        for ell in range(1, d + 1):
            if len(find_finite_orbit_classes(single, (ell,), cap=cap, word_len=word_len)):
                dims.append(ell)
                break
        else:
            dims.append(d)
    return tuple(dims)


def total_ergodicity_diagnostic(system: MatrixSystem, config: DiagnosticConfig = DiagnosticConfig()) -> TotalErgodicityReport:
    """Look for period obstructions among finite-orbit classes, plus a correlation parity scan."""
    if config.classes is not None:
        classes = tuple(config.classes)
        dims = None
    else:
        dims = minimal_orbit_dims(system, config.cap, config.word_len)
        classes = tuple(find_finite_orbit_classes(system, dims, cap=config.cap, word_len=config.word_len))
    obstructions = []
    for c in classes:
        info = classify(c)
        if info.transitive and info.period and info.period > 1:
            obstructions.append((c, info.period))
    if config.classes is not None and len(classes) == 1:
        potential = RestrictedPotential(system, classes[0])
    else:
        potential = GeneralisedPotential(system)
    scan: tuple[MixingReport, ...] = ()
    if config.gaps:
        # shrink the padding until the widest table fits the scan budget
        N, widest = system.alphabet_size, 2 * config.window + max(config.gaps)
        pad = config.window + 1
        while pad > 0 and N ** (widest + 2 * pad) > min(config.scan_budget, word_budget()):
            pad -= 1
        scan = tuple(correlation_ratio_scan(potential, config.gaps, config.window, pad))
    parity = parity_profile(scan) if scan else {}
    if obstructions:
        c, n = max(obstructions, key=lambda item: item[1])
        verdict = f"period-{n} obstruction: class of size {len(c)} has period {n}"
    else:
        verdict = "no obstruction found at configured depth"
    return TotalErgodicityReport(verdict, tuple(obstructions), dims, classes, scan, parity)
