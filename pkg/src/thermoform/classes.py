"""Finite-orbit subspace classes of matrix systems.

A subspace class is a finite set of ``k``-tuples of subspaces, one per factor.
It is equivariant when every symbol maps members to members, transitive when
its single-symbol adjacency graph is strongly connected, and primitive when the
adjacency matrix is primitive in the Perron-Frobenius sense.

Subspaces are compared by the largest principal angle (tolerance
``ANGLE_TOL``). The search for finite orbits is seeded and heuristic: it never
claims completeness.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, PreconditionError
from .multilinear import as_matrix, is_proximal, principal_angle_sine
from .potentials import MatrixSystem, word_product
from .symbolic import Word, enumerate_words_upto

ANGLE_TOL = 1e-8
DEFAULT_ORBIT_CAP = 256
_RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """A nonzero subspace of ``R^d`` stored by a canonical orthonormal basis ``(d, l)``."""

    basis: np.ndarray

    def __post_init__(self):
        B = canonical_basis(self.basis)
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @classmethod
    def span(cls, *vectors) -> "Subspace":
        return cls(np.column_stack([np.asarray(v, dtype=float) for v in vectors]))

    @classmethod
    def axis(cls, d: int, *axes: int) -> "Subspace":
        """Coordinate subspace spanned by 1-based axes."""
        return cls(np.eye(d)[:, [a - 1 for a in axes]])

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(np.eye(d))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def distance(self, other: "Subspace") -> float:
        return principal_angle_sine(self.basis, other.basis)

    def same_as(self, other: "Subspace", tol: float = ANGLE_TOL) -> bool:
        return self.dim == other.dim and self.distance(other) < tol

    def image(self, A: np.ndarray) -> "Subspace":
        return Subspace(A @ self.basis)

    def is_invariant(self, A: np.ndarray, tol: float = ANGLE_TOL) -> bool:
        return self.image(A).same_as(self, tol)

    def __repr__(self):
        if self.dim == 1:
            return f"Subspace(span {np.round(self.basis[:, 0], 6).tolist()})"
        return f"Subspace(dim {self.dim} in R^{self.ambient_dim})"


def canonical_basis(B) -> np.ndarray:
    """Canonical orthonormal basis of the column span of ``B``.

    Iterated to a fixed point, so ``canonical_basis`` is idempotent exactly.
    """
    C = _canonical_once(B)
    for _ in range(8):
        again = _canonical_once(C)
        if np.array_equal(again, C):
            break
        C = again
    return C


def _canonical_once(B) -> np.ndarray:
    """One canonicalization pass.

    The orthogonal projector is formed first, so the result depends only on
    the subspace: columns come from greedy Gram-Schmidt on the projector columns, and
    each column is oriented so its first entry above 1e-12 is positive.
    Entries are snapped to a 1e-13 grid, which makes the fixed-point
    iteration in :func:`canonical_basis` settle after a pass or two.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    if B.size == 0 or not np.all(np.isfinite(B)):
        raise InvalidInputError("subspace basis must be finite and nonempty")
    if B.shape[1] == 1:
        # the pivoted QR of a rank-one projector returns the unit vector up to sign
        norm = float(np.linalg.norm(B))
        if norm == 0.0:
            raise InvalidInputError("zero subspace")
        v = B[:, 0] / norm
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        if nz.size and v[nz[0]] < 0:
            v = -v
        return _snap(v[:, None])
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    rank = int(np.sum(s > _RANK_TOL * max(s[0], 1e-300)))
    if rank == 0:
        raise InvalidInputError("zero subspace")
    Q = U[:, :rank]
    R = Q @ Q.T  # projector; its columns span the subspace
    C = np.empty((B.shape[0], rank))
    for c in range(rank):
        # largest remaining column, near-ties going to the lowest index
        norms = np.linalg.norm(R, axis=0)
        pick = int(np.flatnonzero(norms >= norms.max() * (1 - 1e-9))[0])
        col = R[:, pick] / norms[pick]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            col = -col
        C[:, c] = col
        R = R - np.outer(col, col @ R)
    return _snap(C)


def _snap(C: np.ndarray) -> np.ndarray:
    C = np.round(C, 13)
    C[C == 0] = 0.0  # drop negative zeros
    return np.ascontiguousarray(C)


Member = tuple[Subspace, ...]


def _same_member(a: Member, b: Member, tol: float) -> bool:
    return all(x.same_as(y, tol) for x, y in zip(a, b))


def _projector_key(member: Member) -> np.ndarray:
    return np.concatenate([(W.basis @ W.basis.T).ravel() for W in member])


class _MemberIndex:
    """Member lookup that screens candidates by projector entries.

    An entry of ``P - P'`` never exceeds ``||P - P'||_2``, the sine of the
    largest principal angle, so the screen drops no true match; survivors are
    confirmed exactly.
    """

    def __init__(self, tol: float):
        self.tol = tol
        self.members: list[Member] = []
        self._keys = np.empty((0, 0))
        self._dims: list[tuple[int, ...]] = []

    def find(self, target: Member) -> int | None:
        if not self.members:
            return None
        key = _projector_key(target)
        if key.shape[0] != self._keys.shape[1]:
            return None
        close = np.flatnonzero(np.max(np.abs(self._keys[: len(self.members)] - key), axis=1) < self.tol)
        for r in close:
            if _same_member(self.members[r], target, self.tol):
                return int(r)
        return None

    def add(self, member: Member) -> int:
        key = _projector_key(member)
        n = len(self.members)
        if n == 0:
            self._keys = np.empty((8, key.shape[0]))
        elif n == self._keys.shape[0]:
            self._keys = np.vstack([self._keys, np.empty_like(self._keys)])
        self._keys[n] = key
        self.members.append(member)
        return n

    def __len__(self):
        return len(self.members)


def _image(member: Member, system: MatrixSystem, symbol0: int) -> Member:
    return tuple(W.image(g[symbol0]) for W, g in zip(member, system.generators))


# ---------------------------------------------------------------------------
# Perron-Frobenius combinatorics on 0-1 matrices


def strongly_connected_components(M: np.ndarray) -> list[list[int]]:
    """Tarjan's algorithm; components listed in order of their smallest vertex."""
    n = M.shape[0]
    adj = [np.flatnonzero(M[v]).tolist() for v in range(n)]
    index, low, on_stack = {}, {}, set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = itertools.count()

    def visit(v):
        index[v] = low[v] = next(counter)
        stack.append(v)
        on_stack.add(v)
        for w in adj[v]:
            if w not in index:
                visit(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            comps.append(sorted(comp))

    for v in range(n):
        if v not in index:
            visit(v)
    return sorted(comps)


def period(M: np.ndarray) -> int:
    """Index of imprimitivity of an irreducible 0-1 matrix (gcd of cycle lengths)."""
    n = M.shape[0]
    level = {0: 0}
    queue = deque([0])
    g = 0
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(M[u]):
            v = int(v)
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = math.gcd(g, level[u] + 1 - level[v])
    if len(level) != n:
        raise PreconditionError("period is defined for irreducible matrices only")
    return abs(g) if g else 0


def primitivity_exponent(M: np.ndarray) -> int | None:
    """Least ``t`` with ``M**t > 0``, searched up to Wielandt's bound ``(n-1)**2 + 1``."""
    n = M.shape[0]
    B = (M > 0).astype(np.int64)
    P = B.copy()
    for t in range(1, (n - 1) ** 2 + 2):
        if np.all(P > 0):
            return t
        P = ((P @ B) > 0).astype(np.int64)
    return None


# ---------------------------------------------------------------------------
# classes


@dataclass(frozen=True)
class Classification:
    equivariant: bool
    transitive: bool
    primitive: bool
    period: int | None
    exponent: int | None


@dataclass(frozen=True, eq=False)
class SubspaceClass:
    """Members plus the single-symbol transition table.

    ``transitions[r, i]`` is the index of the image of member ``r`` under symbol
    ``i + 1``, or ``-1`` if the image is not a member.
    """

    members: tuple[Member, ...]
    transitions: np.ndarray
    factor_dims: tuple[int, ...]
    tolerance: float = ANGLE_TOL

    @classmethod
    def from_members(cls, members: Iterable[Sequence[Subspace]], system: MatrixSystem,
                     tol: float = ANGLE_TOL) -> "SubspaceClass":
        index = _MemberIndex(tol)
        mems = index.members
        for m in members:
            m = tuple(m)
            if len(m) != system.factor_count:
                raise InvalidInputError("member tuples must have one subspace per factor")
            for W, d in zip(m, system.dims):
                if W.ambient_dim != d:
                    raise InvalidInputError(f"subspace in R^{W.ambient_dim} for a factor on R^{d}")
            if index.find(m) is not None:
                raise InvalidInputError("class members must be pairwise distinct")
            index.add(m)
        if not mems:
            raise InvalidInputError("a subspace class is nonempty")
        N = system.alphabet_size
        table = np.full((len(mems), N), -1, dtype=np.intp)
        for r, m in enumerate(mems):
            for i in range(N):
                c = index.find(_image(m, system, i))
                table[r, i] = -1 if c is None else c
        table.setflags(write=False)
        return cls(tuple(mems), table, system.dims, tol)

    def __len__(self):
        return len(self.members)

    @cached_property
    def adjacency(self) -> np.ndarray:
        n = len(self.members)
        M = np.zeros((n, n), dtype=np.int64)
        for r in range(n):
            for c in self.transitions[r]:
                if c >= 0:
                    M[r, c] = 1
        return M

    @property
    def equivariant(self) -> bool:
        return bool(np.all(self.transitions >= 0))

    @property
    def permuting(self) -> bool:
        """Every symbol acts as a bijection of the members.

        Invertible maps always permute a finite equivariant class; a class that
        fails this merged distinct subspaces within tolerance.
        """
        n = len(self.members)
        return self.equivariant and all(
            np.array_equal(np.sort(col), np.arange(n)) for col in self.transitions.T
        )

    @cached_property
    def classification(self) -> Classification:
        return classify(self)

    @property
    def transitive(self) -> bool:
        return self.classification.transitive

    @property
    def primitive(self) -> bool:
        return self.classification.primitive

    @property
    def period(self) -> int | None:
        return self.classification.period

    @cached_property
    def _index(self) -> _MemberIndex:
        index = _MemberIndex(self.tolerance)
        for m in self.members:
            index.add(m)
        return index

    def index_of(self, member: Sequence[Subspace]) -> int | None:
        return self._index.find(tuple(member))

    def same_members(self, other: "SubspaceClass") -> bool:
        if len(self) != len(other):
            return False
        return all(other.index_of(m) is not None for m in self.members)

    def sub_class(self, rows: Sequence[int], system: MatrixSystem) -> "SubspaceClass":
        return SubspaceClass.from_members([self.members[r] for r in rows], system, self.tolerance)

    def word_action(self, w: Word) -> np.ndarray:
        """Member permutation induced by ``A_w`` (``-1`` where it leaves the class)."""
        perm = np.arange(len(self.members))
        # A_w W = A_{w_1}( ... A_{w_n} W): apply the last symbol first
        for s in reversed(w.symbols):
            perm = np.where(perm >= 0, self.transitions[np.maximum(perm, 0), s - 1], -1)
        return perm

    def __repr__(self):
        return f"SubspaceClass(size={len(self)}, dims={self.factor_dims})"


def classify(cls: SubspaceClass) -> Classification:
    """Equivariance, transitivity, period and primitivity of a class."""
    if not cls.equivariant:
        return Classification(False, False, False, None, None)
    M = cls.adjacency
    comps = strongly_connected_components(M)
    transitive = len(comps) == 1
    if not transitive:
        return Classification(True, False, False, None, None)
    per = period(M)
    exponent = primitivity_exponent(M)
    primitive = per == 1 and exponent is not None
    return Classification(True, True, primitive, per, exponent if primitive else None)


@dataclass(frozen=True)
class OrbitOverflow:
    """Returned by :func:`orbit_of` when the closure exceeds ``cap`` members."""

    cap: int
    explored: int
    index: "_MemberIndex | None" = field(default=None, repr=False, compare=False)

    def __bool__(self):
        return False


def orbit_of(seed: Sequence[Subspace], system: MatrixSystem, cap: int = DEFAULT_ORBIT_CAP,
             tol: float = ANGLE_TOL) -> SubspaceClass | OrbitOverflow:
    """Breadth-first closure of ``seed`` under the symbol maps."""
    seed = tuple(seed)
    if len(seed) != system.factor_count:
        raise InvalidInputError("seed needs one subspace per factor")
    for W, d in zip(seed, system.dims):
        if W.ambient_dim != d:
            raise InvalidInputError(f"seed subspace in R^{W.ambient_dim} for a factor on R^{d}")
    N = system.alphabet_size
    index = _MemberIndex(tol)
    index.add(seed)
    members = index.members
    rows: list[list[int]] = []
    queue = deque([0])
    while queue:
        r = queue.popleft()
        row = []
        for i in range(N):
            img = _image(members[r], system, i)
            c = index.find(img)
            if c is None:
                if len(members) >= cap:
                    return OrbitOverflow(cap, len(members), index)
                c = index.add(img)
                queue.append(c)
            row.append(c)
        while len(rows) <= r:
            rows.append([])
        rows[r] = row
    table = np.array(rows, dtype=np.intp)
    table.setflags(write=False)
    return SubspaceClass(tuple(members), table, system.dims, tol)


# ---------------------------------------------------------------------------
# seeded finite-orbit search


def real_invariant_subspaces(A: np.ndarray, dim: int, limit: int = 64) -> list[Subspace]:
    """Sums of real eigenspaces of ``A`` (complex pairs contribute real planes) of a given dimension."""
    vals, vecs = np.linalg.eig(A)
    blocks: list[np.ndarray] = []
    used = np.zeros(len(vals), dtype=bool)
    scale = max(1.0, float(np.max(np.abs(vals))))
    for a in range(len(vals)):
        if used[a]:
            continue
        used[a] = True
        if abs(vals[a].imag) <= 1e-10 * scale:
            blocks.append(np.real(vecs[:, [a]]))
        else:
            for b in range(a + 1, len(vals)):
                if not used[b] and abs(vals[b] - np.conj(vals[a])) <= 1e-8 * scale:
                    used[b] = True
                    break
            v = vecs[:, a]
            blocks.append(np.column_stack([v.real, v.imag]))
    out: list[Subspace] = []
    for r in range(1, len(blocks) + 1):
        for combo in itertools.combinations(blocks, r):
            B = np.hstack(combo)
            if B.shape[1] != dim or np.linalg.matrix_rank(B, tol=1e-9) != dim:
                continue
            W = Subspace(B)
            if not any(W.same_as(U) for U in out):
                out.append(W)
            if len(out) >= limit:
                return out
    return out


def _coordinate_subspaces(d: int, dim: int) -> list[Subspace]:
    return [Subspace.axis(d, *[a + 1 for a in axes]) for axes in itertools.combinations(range(d), dim)]


def _factor_seeds(system: MatrixSystem, j: int, dim: int, word_len: int) -> list[Subspace]:
    d = system.dims[j]
    seeds = _coordinate_subspaces(d, dim)
    gens = system.generators[j]
    for w in enumerate_words_upto(system.alphabet_size, word_len):
        m, _ = word_product(gens, w.as_array())
        for W in real_invariant_subspaces(m, dim):
            if not any(W.same_as(U) for U in seeds):
                seeds.append(W)
    return seeds


@dataclass(frozen=True)
class ClassSearch:
    """Distinct finite orbits found from the seeds, plus their union.

    ``complete`` is always ``False``: seeds cannot certify that no other
    finite orbit exists.
    """

    classes: tuple[SubspaceClass, ...]
    union: SubspaceClass | None
    seeds_tried: int
    overflows: int
    spurious: int = 0
    complete: bool = False

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, i):
        return self.classes[i]


def find_finite_orbit_classes(
    system: MatrixSystem,
    target_dims: Sequence[int],
    cap: int = DEFAULT_ORBIT_CAP,
    word_len: int = 2,
    extra_seeds: Iterable[Sequence[Subspace]] = (),
    max_seeds: int = 4096,
) -> ClassSearch:
    """Seeded search for equivariant classes of subspaces of the given dimensions.

    Per-factor seeds are coordinate subspaces and real invariant subspaces of
    every product of length ``<= word_len``; tuple seeds are their Cartesian
    product (truncated at ``max_seeds``) plus ``extra_seeds``. Orbits that
    overflow ``cap`` are discarded, as are orbits on which some symbol fails
    to act bijectively (tolerance collapse near an attracting direction).
    Orbits contained in an already found
    orbit are dropped.
    """
    dims = tuple(int(x) for x in target_dims)
    if len(dims) != system.factor_count:
        raise InvalidInputError(f"need {system.factor_count} target dimensions")
    for l, d in zip(dims, system.dims):
        if not 1 <= l <= d:
            raise InvalidInputError(f"target dimension {l} outside 1..{d}")
    per_factor = [_factor_seeds(system, j, l, word_len) for j, l in enumerate(dims)]
    seeds = list(itertools.islice(itertools.product(*per_factor), max_seeds))
    seeds.extend(tuple(s) for s in extra_seeds)

    found: list[SubspaceClass] = []
    overflows = spurious = 0
    infinite: list[_MemberIndex] = []
    for seed in seeds:
        if any(c.index_of(seed) is not None for c in found):
            continue
        # the orbit of a point on an infinite orbit is infinite (the maps are invertible)
        if any(idx.find(seed) is not None for idx in infinite):
            overflows += 1
            continue
        orbit = orbit_of(seed, system, cap)
        if isinstance(orbit, OrbitOverflow):
            overflows += 1
            infinite.append(orbit.index)
            continue
        if not orbit.permuting:
            spurious += 1
            infinite.append(orbit._index)
            continue
        # a new orbit may swallow earlier ones (seed upstream of them)
        found = [c for c in found if not all(orbit.index_of(m) is not None for m in c.members)]
        found.append(orbit)

    union = None
    if found:
        index = _MemberIndex(ANGLE_TOL)
        for c in found:
            for m in c.members:
                if index.find(m) is None:
                    index.add(m)
        union = SubspaceClass.from_members(index.members, system)
    return ClassSearch(tuple(found), union, len(seeds), overflows, spurious)


def decompose_equivariant(cls: SubspaceClass, system: MatrixSystem) -> list[SubspaceClass]:
    """Split an equivariant class into its transitive pieces.

    Invertible maps permute a finite equivariant class, so every strongly
    connected component of the adjacency graph is closed and the components
    partition the class.
    """
    if not cls.equivariant:
        raise PreconditionError("decomposition needs an equivariant class")
    return [cls.sub_class(comp, system) for comp in strongly_connected_components(cls.adjacency)]


# ---------------------------------------------------------------------------
# irreducibility


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: str  # irreducible-certified | reducible-witness | undetermined
    witness: Subspace | None = None
    algebra_dim: int | None = None

    @property
    def irreducible(self) -> bool | None:
        if self.status == "irreducible-certified":
            return True
        if self.status == "reducible-witness":
            return False
        return None


def algebra_dimension(gens: np.ndarray, tol: float = 1e-9) -> int:
    """Dimension of the linear span of all products of the generators."""
    d = gens.shape[-1]
    basis: list[np.ndarray] = []

    def add(M):
        v = M.reshape(-1)
        v = v / np.linalg.norm(v)
        for b in basis:
            v = v - (b @ v) * b
        n = np.linalg.norm(v)
        if n > tol:
            basis.append(v / n)
            return True
        return False

    frontier = [g for g in gens if add(g)]
    while frontier and len(basis) < d * d:
        nxt = []
        for M in frontier:
            for g in gens:
                P = M @ g
                if add(P):
                    nxt.append(P)
        frontier = nxt
    return len(basis)


def invariant_closure(gens: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the smallest subspace containing ``v`` and invariant under all generators."""
    d = gens.shape[-1]
    Q = np.zeros((d, 0))
    frontier = [np.asarray(v, dtype=float).reshape(d, -1)]
    while frontier:
        nxt = []
        for block in frontier:
            for x in block.T:
                n0 = np.linalg.norm(x)
                x = x - Q @ (Q.T @ x)
                n = np.linalg.norm(x)
                if n > tol * n0:
                    x = x / n
                    Q = np.column_stack([Q, x])
                    nxt.append(gens @ x)  # (N, d)
                    if Q.shape[1] == d:
                        return Q
        frontier = [b.T for b in nxt]
    return Q


def is_irreducible(generators, word_len: int = 3) -> IrreducibilityVerdict:
    """Three-way irreducibility test over the reals.

    Full algebra span certifies irreducibility. Otherwise each real eigenvector
    (or real eigenplane) of each product of length ``<= word_len`` is closed
    under the generators; a proper closure is a reducing witness.
    """
    gens = np.array([as_matrix(A) for A in generators])
    d = gens.shape[-1]
    if d == 1:
        return IrreducibilityVerdict("irreducible-certified", None, 1)
    dim = algebra_dimension(gens)
    if dim == d * d:
        return IrreducibilityVerdict("irreducible-certified", None, dim)
    N = gens.shape[0]
    for w in enumerate_words_upto(N, word_len):
        m, _ = word_product(gens, w.as_array())
        for k in range(1, d):
            for W in real_invariant_subspaces(m, k):
                Q = invariant_closure(gens, W.basis)
                if Q.shape[1] < d:
                    return IrreducibilityVerdict("reducible-witness", Subspace(Q), dim)
    return IrreducibilityVerdict("undetermined", None, dim)


# ---------------------------------------------------------------------------
# proximal words


@dataclass(frozen=True)
class ProximalWordResult:
    word: Word | None
    depth: int
    gap_ratios: tuple[float, ...] = ()
    fixed_member: int | None = None

    @property
    def found(self) -> bool:
        return self.word is not None


def _restricted_matrix(A: np.ndarray, W: Subspace) -> np.ndarray:
    """Matrix of ``A|_W`` in the basis of ``W`` (``W`` assumed ``A``-invariant)."""
    return W.basis.T @ A @ W.basis


def find_simultaneous_proximal_word(
    system: MatrixSystem,
    subspace_class: SubspaceClass | None = None,
    max_len: int = 6,
    tol: float = 1e-8,
) -> ProximalWordResult:
    """First word in length-then-lexicographic order whose products are all proximal.

    With a class, a word is eligible only if it fixes some member, and
    proximality is tested for the restriction of each factor to that member.
    """
    if max_len < 1:
        raise InvalidInputError("max_len must be >= 1")
    for w in enumerate_words_upto(system.alphabet_size, max_len):
        mats = system.product(w)
        if subspace_class is None:
            targets = [(None, mats)]
        else:
            perm = subspace_class.word_action(w)
            fixed = np.flatnonzero(perm == np.arange(len(perm)))
            targets = [
                (int(r), [_restricted_matrix(A, W) for A, W in zip(mats, subspace_class.members[r])])
                for r in fixed
            ]
        for member, blocks in targets:
            reports = [is_proximal(B, tol) for B in blocks]
            if all(rep.proximal for rep in reports):
                return ProximalWordResult(w, len(w), tuple(r.gap_ratio for r in reports), member)
    return ProximalWordResult(None, max_len)


# ---------------------------------------------------------------------------
# cyclic splittings


@dataclass(frozen=True)
class CyclicSplitting:
    """``R^d = U_1 + ... + U_m`` with ``A_i U_j = U_{j+1 mod m}`` for every generator."""

    parts: tuple[Subspace, ...]

    @property
    def order(self) -> int:
        return len(self.parts)


def detect_cyclic_splitting(generators, max_parts: int | None = None,
                            cap: int = DEFAULT_ORBIT_CAP) -> CyclicSplitting | None:
    gens = np.array([as_matrix(A) for A in generators])
    d = gens.shape[-1]
    max_parts = d if max_parts is None else max_parts
    if max_parts < 2:
        raise InvalidInputError("max_parts must be >= 2")
    if gens.shape[0] < 2:
        gens = np.concatenate([gens, gens])
    system = MatrixSystem.single(gens)
    for m in range(2, min(max_parts, d) + 1):
        if d % m:
            continue
        search = find_finite_orbit_classes(system, (d // m,), cap=cap)
        for cls in search:
            if len(cls) != m:
                continue
            perms = cls.transitions
            if not np.all(perms == perms[:, [0]]):
                continue
            perm = perms[:, 0]
            order, r = [0], int(perm[0])
            while r != 0:
                order.append(r)
                r = int(perm[r])
            if len(order) != m:
                continue
            parts = tuple(cls.members[r][0] for r in order)
            stacked = np.hstack([U.basis for U in parts])
            if np.linalg.matrix_rank(stacked, tol=1e-9) != d:
                continue
            ok = all(
                parts[k].image(A).same_as(parts[(k + 1) % m])
                for A in gens for k in range(m)
            )
            if ok:
                return CyclicSplitting(parts)
    return None
