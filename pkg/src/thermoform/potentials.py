"""Potentials on finite words, evaluated in the log domain.

A :class:`MatrixSystem` holds ``k`` tuples of ``N`` invertible matrices with
exponents ``beta_j``. Products follow the right-multiplication convention
``A_w = A_{w_1} A_{w_2} ... A_{w_n}``.

Batched products are stored as a pair ``(mats, logscale)`` with
``A_w = exp(logscale) * mats`` and ``max|mats| == 1``, so word lengths far
beyond the double-precision range of the raw products are representable.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from . import symbolic
from .errors import InvalidInputError, PreconditionError, ResourceLimitError
from .multilinear import as_matrix, exterior_power, is_invertible
from .symbolic import Word, as_word, check_budget

#: Words per block when a length-n sum is split by prefix.
CHUNK_WORDS = 2**15


def thread_count() -> int:
    """Worker threads for prefix-partitioned folds (``THERMOFORM_THREADS``, 0 = auto)."""
    raw = os.environ.get("THERMOFORM_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


# ---------------------------------------------------------------------------
# batched products


def _normalize(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scale = np.max(np.abs(M), axis=(-2, -1))
    return M / scale[..., None, None], np.log(scale)


def word_products(gens: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Products ``A_w`` for all ``N**n`` words of length ``n`` in lexicographic order."""
    N, d, _ = gens.shape
    check_budget(N**n, f"products of length {n}")
    g, gls = _normalize(gens)
    mats, ls = g, gls
    for _ in range(n - 1):
        nxt = mats[:, None] @ g[None]
        nxt, s = _normalize(nxt)
        ls = ls[:, None] + gls[None, :] + s
        mats, ls = nxt.reshape(-1, d, d), ls.reshape(-1)
    return mats, ls


def word_product(gens: np.ndarray, symbols0: Sequence[int]) -> tuple[np.ndarray, float]:
    """Single product for a zero-based symbol sequence."""
    d = gens.shape[-1]
    mat = np.eye(d)
    ls = 0.0
    for s in symbols0:
        mat = mat @ gens[s]
        scale = np.max(np.abs(mat))
        mat = mat / scale
        ls += math.log(scale)
    return mat, ls


def _combine(prefix: tuple[np.ndarray, float], suffix: tuple[np.ndarray, np.ndarray]):
    pm, pls = prefix
    sm, sls = suffix
    mats, s = _normalize(pm @ sm)
    return mats, pls + sls + s


def _log_norms(mats: np.ndarray, ls: np.ndarray) -> np.ndarray:
    return ls + np.log(np.linalg.svd(mats, compute_uv=False)[..., 0])


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True, eq=False)
class MatrixSystem:
    """``k`` tuples of ``N`` invertible matrices with positive exponents.

    ``generators[j]`` has shape ``(N, d_j, d_j)``; ``generators[j][i - 1]`` is
    the matrix of symbol ``i`` in factor ``j``.
    """

    generators: tuple[np.ndarray, ...]
    betas: tuple[float, ...]
    name: str = ""

    def __post_init__(self):
        gens = []
        for j, tup in enumerate(self.generators):
            stack = np.array([as_matrix(A, f"factor {j + 1} symbol {i + 1}") for i, A in enumerate(tup)])
            if stack.ndim != 3:
                raise InvalidInputError(f"factor {j + 1}: generators must share one dimension")
            for i, A in enumerate(stack):
                if not is_invertible(A):
                    raise InvalidInputError(f"factor {j + 1} symbol {i + 1}: matrix is not invertible")
            stack.setflags(write=False)
            gens.append(stack)
        if not gens:
            raise InvalidInputError("a matrix system needs at least one factor")
        counts = {g.shape[0] for g in gens}
        if len(counts) != 1:
            raise InvalidInputError(f"factors disagree on the alphabet size: {sorted(counts)}")
        if gens[0].shape[0] < 2:
            raise InvalidInputError("alphabet size must be >= 2")
        betas = tuple(float(b) for b in self.betas)
        if len(betas) != len(gens):
            raise InvalidInputError(f"{len(gens)} factors but {len(betas)} exponents")
        if any(not b > 0 or not math.isfinite(b) for b in betas):
            raise InvalidInputError(f"exponents must be positive, got {betas}")
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "betas", betas)

    @classmethod
    def single(cls, matrices, beta: float = 1.0, name: str = "") -> "MatrixSystem":
        return cls((matrices,), (beta,), name)

    @property
    def alphabet_size(self) -> int:
        return self.generators[0].shape[0]

    @property
    def factor_count(self) -> int:
        return len(self.generators)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(g.shape[1] for g in self.generators)

    def product(self, w, factor: int | None = None):
        """``A_w`` for every factor (or just ``factor``, 0-based)."""
        w = as_word(w, self.alphabet_size)
        idx = w.as_array()
        factors = range(self.factor_count) if factor is None else [factor]
        out = []
        for j in factors:
            m, ls = word_product(self.generators[j], idx)
            out.append(m * math.exp(ls))
        return out if factor is None else out[0]

    def allclose(self, other: "MatrixSystem", atol: float = 0.0) -> bool:
        if self.dims != other.dims or self.alphabet_size != other.alphabet_size:
            return False
        if not np.allclose(self.betas, other.betas, rtol=0, atol=atol):
            return False
        return all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.generators, other.generators))

    def with_betas(self, betas) -> "MatrixSystem":
        return MatrixSystem(self.generators, tuple(betas), self.name)


# ---------------------------------------------------------------------------
# potentials


class Potential:
    """Log-domain potential ``w -> log Phi(w)`` on words over ``{1..N}``."""

    alphabet_size: int

    def log_evaluate(self, w) -> float:
        raise NotImplementedError

    def iter_log_values(self, n: int) -> Iterator[np.ndarray]:
        """Blocks of ``log Phi`` over all words of length ``n``, lexicographic."""
        N = self.alphabet_size
        check_budget(N**n, f"potential values at depth {n}")
        block = []
        for w in symbolic.enumerate_words(N, n):
            block.append(self.log_evaluate(w))
            if len(block) == CHUNK_WORDS:
                yield np.array(block)
                block = []
        if block:
            yield np.array(block)

    def log_values(self, n: int) -> np.ndarray:
        return np.concatenate(list(self.iter_log_values(n)))

    def log_inverse_bound(self) -> float | None:
        """``kappa`` with ``log Phi(wu) >= log Phi(w) - |u| * kappa``, if known."""
        return None


class _ProductPotential(Potential):
    """Shared machinery: the value is a function of the factor products ``A_w^(j)``."""

    factors: tuple[np.ndarray, ...]

    @property
    def alphabet_size(self) -> int:
        return self.factors[0].shape[0]

    def _log_from_products(self, prods: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
        raise NotImplementedError

    def log_evaluate(self, w) -> float:
        w = as_word(w, self.alphabet_size)
        idx = w.as_array()
        prods = []
        for g in self.factors:
            m, ls = word_product(g, idx)
            prods.append((m[None], np.array([ls])))
        return float(self._log_from_products(prods)[0])

    def iter_log_values(self, n: int) -> Iterator[np.ndarray]:
        N = self.alphabet_size
        if n < 1:
            raise InvalidInputError("depth must be >= 1")
        check_budget(N**n, f"potential values at depth {n}")
        p, s = symbolic.prefix_partition(N, n, CHUNK_WORDS)
        suffix = [word_products(g, s) for g in self.factors]
        if p == 0:
            yield self._log_from_products(suffix)
            return
        prefix = [word_products(g, p) for g in self.factors]

        def block(q: int) -> np.ndarray:
            prods = [_combine((pm[q], pls[q]), suf) for (pm, pls), suf in zip(prefix, suffix)]
            return self._log_from_products(prods)

        workers = min(thread_count(), N**p)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                yield from pool.map(block, range(N**p))
        else:
            for q in range(N**p):
                yield block(q)


class GeneralisedPotential(_ProductPotential):
    """``Phi(w) = prod_j ||A_w^(j)||^beta_j``."""

    def __init__(self, system: MatrixSystem):
        self.system = system
        self.factors = system.generators

    def _log_from_products(self, prods):
        return sum(b * _log_norms(m, ls) for b, (m, ls) in zip(self.system.betas, prods))

    def log_inverse_bound(self) -> float:
        inv = [np.linalg.inv(g) for g in self.system.generators]
        per_symbol = sum(
            b * np.log(np.linalg.svd(g, compute_uv=False)[:, 0]) for b, g in zip(self.system.betas, inv)
        )
        return float(np.max(per_symbol))

    def __repr__(self):
        return f"GeneralisedPotential({self.system.name or 'system'}, betas={self.system.betas})"


def _log_sv_function(sv_log: np.ndarray, ls: np.ndarray, s: float) -> np.ndarray:
    """``log phi^s`` from log singular values (non-increasing along the last axis)."""
    d = sv_log.shape[-1]
    if s == 0:
        return np.zeros(sv_log.shape[:-1])
    if s >= d:
        return (s / d) * np.sum(sv_log, axis=-1) + s * ls
    f = int(math.floor(s))
    out = np.sum(sv_log[..., :f], axis=-1)
    if s > f:
        out = out + (s - f) * sv_log[..., f]
    return out + s * ls


class SingularValuePotential(_ProductPotential):
    """Falconer's singular value function ``Phi^s(w) = phi^s(A_w)``."""

    def __init__(self, generators, s: float):
        if not s >= 0:
            raise InvalidInputError(f"s must be >= 0, got {s}")
        if isinstance(generators, MatrixSystem):
            if generators.factor_count != 1:
                raise InvalidInputError("singular value potential needs a single-factor system")
            generators = generators.generators[0]
        gens = np.array([as_matrix(A) for A in generators])
        for i, A in enumerate(gens):
            if not is_invertible(A):
                raise InvalidInputError(f"symbol {i + 1}: matrix is not invertible")
        self.generators = gens
        self.factors = (gens,)
        self.s = float(s)

    @property
    def dim(self) -> int:
        return self.generators.shape[-1]

    def _log_from_products(self, prods):
        (m, ls), = prods
        sv = np.linalg.svd(m, compute_uv=False)
        with np.errstate(divide="ignore"):
            return _log_sv_function(np.log(sv), ls, self.s)

    def log_inverse_bound(self) -> float:
        inv = np.linalg.inv(self.generators)
        sv = np.log(np.linalg.svd(inv, compute_uv=False))
        return float(np.max(_log_sv_function(sv, np.zeros(len(inv)), self.s)))

    def __repr__(self):
        return f"SingularValuePotential(s={self.s}, N={self.alphabet_size}, d={self.dim})"


class RestrictedPotential(_ProductPotential):
    """``Phi_W(w) = max over class members of prod_j ||A_w^(j)|_{W_j}||^beta_j``.

    ``subspace_class`` is anything with ``members`` (tuples of objects with an
    orthonormal ``basis``), normally a :class:`thermoform.classes.SubspaceClass`.
    """

    def __init__(self, system: MatrixSystem, subspace_class):
        self.system = system
        self.factors = system.generators
        self.subspace_class = subspace_class
        members = list(subspace_class.members)
        if not members:
            raise InvalidInputError("subspace class is empty")
        if getattr(subspace_class, "equivariant", True) is False:
            raise PreconditionError("restricted potentials need an equivariant class")
        for member in members:
            if len(member) != system.factor_count:
                raise InvalidInputError("class tuples do not match the number of factors")
            for j, W in enumerate(member):
                if W.basis.shape[0] != system.dims[j]:
                    raise InvalidInputError(
                        f"factor {j + 1}: subspace in R^{W.basis.shape[0]}, system acts on R^{system.dims[j]}"
                    )
        # bases[j] stacked over members: (M, d_j, l_j) when dimensions agree
        self._bases = [[member[j].basis for member in members] for j in range(system.factor_count)]

    def _log_from_products(self, prods):
        best = None
        for r in range(len(self._bases[0])):
            total = 0.0
            for j, (b, (m, ls)) in enumerate(zip(self.system.betas, prods)):
                B = self._bases[j][r]
                norms = np.linalg.svd(m @ B, compute_uv=False)[..., 0]
                total = total + b * (ls + np.log(norms))
            best = total if best is None else np.maximum(best, total)
        return best

    def log_inverse_bound(self) -> float:
        return GeneralisedPotential(self.system).log_inverse_bound()

    def __repr__(self):
        return f"RestrictedPotential({self.system.name or 'system'}, members={len(self._bases[0])})"


class ScalarWeights(_ProductPotential):
    """``Phi(w) = prod_t p_{w_t}``: a Bernoulli-type multiplicative potential."""

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or len(w) < 2:
            raise InvalidInputError("scalar weights need at least two symbols")
        if np.any(~(w > 0)) or not np.all(np.isfinite(w)):
            raise InvalidInputError("scalar weights must be positive and finite")
        self.weights = w
        self.factors = (w.reshape(-1, 1, 1),)

    def _log_from_products(self, prods):
        (m, ls), = prods
        return ls + np.log(np.abs(m[..., 0, 0]))

    def log_values(self, n: int) -> np.ndarray:
        # exact sums of logs, no product rounding
        N = self.alphabet_size
        check_budget(N**n, f"potential values at depth {n}")
        lw = np.log(self.weights)
        out = lw
        for _ in range(n - 1):
            out = (out[:, None] + lw[None, :]).reshape(-1)
        return out

    def iter_log_values(self, n: int):
        yield self.log_values(n)

    def log_evaluate(self, w) -> float:
        w = as_word(w, self.alphabet_size)
        return float(np.sum(np.log(self.weights)[w.as_array()]))

    def log_inverse_bound(self) -> float:
        return float(np.max(-np.log(self.weights)))

    def __repr__(self):
        return f"ScalarWeights({self.weights.tolist()})"


class CallablePotential(Potential):
    """Wrap an arbitrary ``Word -> log Phi`` function (testing, custom potentials)."""

    def __init__(self, alphabet_size: int, log_fn: Callable[[Word], float], name: str = "callable"):
        symbolic.Alphabet(alphabet_size)
        self.alphabet_size = alphabet_size
        self._fn = log_fn
        self.name = name

    def log_evaluate(self, w) -> float:
        return float(self._fn(as_word(w, self.alphabet_size)))

    def __repr__(self):
        return f"CallablePotential({self.name})"


# ---------------------------------------------------------------------------
# functional interface


def log_evaluate(p: Potential, w) -> float:
    return p.log_evaluate(w)


def log_evaluate_sv(generators, s: float, w) -> float:
    """``log phi^s(A_w)`` for a single tuple of generators."""
    return SingularValuePotential(generators, s).log_evaluate(w)


def log_evaluate_sv_exterior(generators, s: float, w) -> float:
    """The same quantity via norms of exterior powers (cross-check route).

    ``(1 + floor(s) - s) log||A^{floor s}|| + (s - floor(s)) log||A^{ceil s}||``
    for ``0 < s < d``; ``(s/d) log|det A|`` for ``s >= d``.
    """
    gens = np.array([as_matrix(A) for A in generators])
    w = as_word(w, len(gens))
    A = np.eye(gens.shape[-1])
    for i in w.as_array():
        A = A @ gens[i]
    d = A.shape[0]
    if s == 0:
        return 0.0
    if s >= d:
        return (s / d) * math.log(abs(np.linalg.det(A)))
    lo, hi = math.floor(s), math.ceil(s)

    def lognorm(k):
        if k == 0:
            return 0.0
        return math.log(np.linalg.svd(exterior_power(A, k), compute_uv=False)[0])

    if lo == hi:
        return lognorm(lo)
    return (1 + lo - s) * lognorm(lo) + (s - lo) * lognorm(hi)


def log_evaluate_restricted(system: MatrixSystem, subspace_class, w) -> float:
    return RestrictedPotential(system, subspace_class).log_evaluate(w)


# ---------------------------------------------------------------------------
# multiplicativity diagnostics


@dataclass(frozen=True)
class SubmultiplicativityReport:
    """Largest ``log Phi(ij) - log Phi(i) - log Phi(j)`` found."""

    max_excess: float
    witness: tuple[Word, Word] | None
    pairs_checked: int
    exhaustive: bool
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.max_excess <= self.tolerance


def _length_pairs(L: int, max_total: int | None):
    total = 2 * L if max_total is None else max_total
    for li in range(1, L + 1):
        for lj in range(1, L + 1):
            if li + lj <= total:
                yield li, lj


def check_submultiplicative(
    p: Potential,
    max_len: int,
    sample_count: int = 10_000,
    seed: int = 0,
    max_total: int | None = None,
    tol: float = 1e-9,
) -> SubmultiplicativityReport:
    """Scan pairs ``|i|, |j| <= max_len`` (and ``|i| + |j| <= max_total``).

    Exhaustive when every needed depth fits the word budget; otherwise falls
    back to ``sample_count`` random pairs and reports ``exhaustive=False``.
    """
    if max_len < 1:
        raise InvalidInputError("max_len must be >= 1")
    N = p.alphabet_size
    pairs = list(_length_pairs(max_len, max_total))
    try:
        for li, lj in pairs:
            check_budget(N ** (li + lj), "submultiplicativity scan")
    except ResourceLimitError:
        return _sampled_submultiplicative(p, pairs, sample_count, seed, tol)

    cache: dict[int, np.ndarray] = {}

    def vals(n):
        if n not in cache:
            cache[n] = p.log_values(n)
        return cache[n]

    best, witness, count = -np.inf, None, 0
    for li, lj in pairs:
        joint = vals(li + lj).reshape(N**li, N**lj)
        excess = joint - vals(li)[:, None] - vals(lj)[None, :]
        count += excess.size
        k = int(np.argmax(excess))
        if excess.flat[k] > best:
            a, b = divmod(k, N**lj)
            best = float(excess.flat[k])
            witness = (symbolic.lex_inverse(a + 1, N, li), symbolic.lex_inverse(b + 1, N, lj))
    return SubmultiplicativityReport(best, witness, count, True, tol)


def _sampled_submultiplicative(p, pairs, sample_count, seed, tol):
    rng = np.random.default_rng(seed)
    N = p.alphabet_size
    best, witness = -np.inf, None
    for t in range(sample_count):
        li, lj = pairs[rng.integers(len(pairs))]
        i = Word(tuple(rng.integers(1, N + 1, li)), N)
        j = Word(tuple(rng.integers(1, N + 1, lj)), N)
        excess = p.log_evaluate(i + j) - p.log_evaluate(i) - p.log_evaluate(j)
        if excess > best:
            best, witness = excess, (i, j)
    return SubmultiplicativityReport(float(best), witness, sample_count, False, tol)


@dataclass(frozen=True)
class ConnectorEstimate:
    """Result of a connector scan.

    ``log_delta = min_{i,j} max_k [log Phi(ikj) - log Phi(i) - log Phi(j)]`` over
    ``|i|, |j| <= window`` and connector lengths in ``connector_lengths``
    (length 0 is the empty connector). ``witness`` is the minimising pair and
    ``connector`` the best connector for it (``None`` when empty).
    """

    log_delta: float
    witness: tuple[Word, Word]
    connector: Word | None
    connector_lengths: tuple[int, ...]
    window: int

    @property
    def delta(self) -> float:
        return math.exp(self.log_delta)


def connector_scan(p: Potential, connector_lengths: Sequence[int], window: int) -> ConnectorEstimate:
    """Exhaustive ``min_{i,j} max_k Phi(ikj) / (Phi(i) Phi(j))`` in the log domain.

    Values ``Phi(ikj)`` for all ``(i, k, j)`` of given lengths are read off one
    lexicographic depth-``|i|+|k|+|j|`` table, reshaped to ``(N^|i|, N^|k|, N^|j|)``.
    """
    if window < 1:
        raise InvalidInputError("window must be >= 1")
    lengths = tuple(sorted(set(int(r) for r in connector_lengths)))
    if not lengths or lengths[0] < 0:
        raise InvalidInputError("connector lengths must be non-negative")
    N = p.alphabet_size
    deepest = 2 * window + lengths[-1]
    check_budget(N**deepest, f"connector scan to depth {deepest}")

    cache: dict[int, np.ndarray] = {}

    def vals(n):
        if n not in cache:
            cache[n] = p.log_values(n)
        return cache[n]

    best = np.inf
    witness = None
    for li in range(1, window + 1):
        for lj in range(1, window + 1):
            base = vals(li)[:, None] + vals(lj)[None, :]
            top = np.full(base.shape, -np.inf)
            arg_len = np.zeros(base.shape, dtype=int)
            arg_k = np.zeros(base.shape, dtype=np.intp)
            for r in lengths:
                if r == 0:
                    cand = vals(li + lj).reshape(N**li, N**lj)
                    kidx = np.zeros(base.shape, dtype=np.intp)
                else:
                    cube = vals(li + r + lj).reshape(N**li, N**r, N**lj)
                    kidx = np.argmax(cube, axis=1)
                    cand = np.take_along_axis(cube, kidx[:, None, :], axis=1)[:, 0, :]
                better = cand > top
                top = np.where(better, cand, top)
                arg_len = np.where(better, r, arg_len)
                arg_k = np.where(better, kidx, arg_k)
            ratio = top - base
            k = int(np.argmin(ratio))
            if ratio.flat[k] < best:
                a, b = divmod(k, N**lj)
                best = float(ratio.flat[k])
                r = int(arg_len.flat[k])
                conn = symbolic.lex_inverse(int(arg_k.flat[k]) + 1, N, r) if r > 0 else None
                witness = (
                    (symbolic.lex_inverse(a + 1, N, li), symbolic.lex_inverse(b + 1, N, lj)),
                    conn,
                )
    return ConnectorEstimate(best, witness[0], witness[1], lengths, window)


def estimate_quasimultiplicativity(p: Potential, m: int, L: int) -> ConnectorEstimate:
    """``delta_hat`` with connectors of every length ``0..m`` (empty word included)."""
    if m < 0 or L < 1:
        raise InvalidInputError("need m >= 0 and L >= 1")
    return connector_scan(p, range(0, m + 1), L)


# ---------------------------------------------------------------------------
# exterior-power reduction


def simple_top_reduction(system: MatrixSystem, ell: Sequence[int] | int) -> MatrixSystem:
    """Replace factor ``j`` by its ``ell_j``-th exterior power with exponent ``beta_j / ell_j``.

    A single integer applies to every factor.
    """
    if isinstance(ell, (int, np.integer)):
        ell = (int(ell),) * system.factor_count
    ell = tuple(int(e) for e in ell)
    if len(ell) != system.factor_count:
        raise InvalidInputError(f"need {system.factor_count} exterior degrees, got {len(ell)}")
    gens, betas = [], []
    for g, b, e, d in zip(system.generators, system.betas, ell, system.dims):
        if not 1 <= e <= d:
            raise InvalidInputError(f"exterior degree {e} outside 1..{d}")
        gens.append(exterior_power(g, e))
        betas.append(b / e)
    name = f"{system.name}^ell{ell}" if system.name else ""
    return MatrixSystem(tuple(gens), tuple(betas), name)
