"""Reference systems with known facts.

``nottot`` is the pair of irreducible 2x2 tuples whose generalised matrix
potential has a unique but not totally ergodic equilibrium state;
``nottot-recoded`` is its 2-step recoding over four symbols. The remaining
entries have closed-form pressures or dimensions.

Random systems draw entries from ``numpy.random.default_rng(seed)`` (PCG64)
as independent standard normals, one ``d x d`` block per symbol, factor by
factor.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError
from .potentials import MatrixSystem
from .symbolic import check_budget, lex_inverse

#: Largest recoded alphabet :func:`recode_system` builds by default.
RECODE_ALPHABET_BUDGET = 4096


@dataclass(frozen=True)
class Fact:
    """A known property of a catalog entry, tagged with where it comes from."""

    statement: str
    value: object
    provenance: str  # PUBLISHED | TRIVIAL | DERIVED
    oracle: str = ""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    system: MatrixSystem
    facts: tuple[Fact, ...] = field(default=())
    params: dict = field(default_factory=dict)

    def fact(self, statement: str) -> Fact:
        for f in self.facts:
            if f.statement == statement:
                return f
        raise KeyError(statement)


def _nottot(alpha: float = 1.0, beta: float = 1.0) -> CatalogEntry:
    A = (np.array([[2.0, 0.0], [0.0, 1.0]]), np.array([[0.0, 1.0], [1.0, 0.0]]))
    B = (np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([[1.0, 0.0], [0.0, 2.0]]))
    system = MatrixSystem((A, B), (alpha, beta), "nottot")
    facts = (
        Fact("both tuples irreducible", True, "PUBLISHED"),
        Fact("finite-orbit class at dims (1,1)", "the four axis pairs", "PUBLISHED"),
        Fact("class transitive", True, "PUBLISHED"),
        Fact("class period", 2, "DERIVED", "gcd of return times of the 4x4 adjacency matrix"),
        Fact("first simultaneous proximal word", "1122", "DERIVED",
             "exhaustive search over all words of length <= 4"),
        Fact("log Phi(1) at alpha=beta=1", math.log(2.0), "DERIVED", "||diag(2,1)|| * ||swap||"),
        Fact("equilibrium state totally ergodic", False, "PUBLISHED"),
    )
    return CatalogEntry("nottot", system, facts, {"alpha": alpha, "beta": beta})


def _nottot_recoded(alpha: float = 1.0, beta: float = 1.0) -> CatalogEntry:
    I = np.eye(2)
    A = (np.diag([4.0, 1.0]), np.array([[0.0, 2.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [2.0, 0.0]]), I)
    B = (I, np.array([[0.0, 2.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [2.0, 0.0]]), np.diag([1.0, 4.0]))
    system = MatrixSystem((A, B), (alpha, beta), "nottot-recoded")
    facts = (
        Fact("transitive classes at dims (1,1)", 2, "PUBLISHED"),
        Fact("W1 = {(e1,e1),(e2,e2)} primitive exponent", 1, "DERIVED", "adjacency matrix is all ones"),
        Fact("W2 = {(e1,e2),(e2,e1)} primitive exponent", 1, "DERIVED", "adjacency matrix is all ones"),
        Fact("log Phi(1^n 4^n)", "2n log 4 at alpha=beta=1", "PUBLISHED"),
        Fact("log Phi_W1(1^n 4^n)", "n log 4 at alpha=beta=1", "PUBLISHED"),
        Fact("equals recode_system(nottot, 2)", True, "PUBLISHED"),
    )
    return CatalogEntry("nottot-recoded", system, facts, {"alpha": alpha, "beta": beta})


def _similarity(N: int = 3, r: float = 0.5, d: int = 2) -> CatalogEntry:
    N, d = int(N), int(d)
    if not 0 < r < 1:
        raise InvalidInputError("similarity ratio must lie in (0, 1)")
    system = MatrixSystem.single([r * np.eye(d)] * N, 1.0, f"similarity(N={N}, r={r:g}, d={d})")
    dim = math.log(N) / math.log(1 / r)
    facts = (Fact("affinity dimension", dim, "TRIVIAL", "P(Phi^s) = log N + s log r"),)
    return CatalogEntry("similarity", system, facts, {"N": N, "r": r, "d": d})


def _diagonal(N: int = 2, a: float = 0.5, b: float = 1 / 3) -> CatalogEntry:
    system = MatrixSystem.single([np.diag([a, b])] * int(N), 1.0, f"diagonal(N={N}, a={a:g}, b={b:g})")
    facts = ()
    if a > b and int(N) == 2 and abs(a - 0.5) < 1e-15:
        facts = (Fact("affinity dimension", 1.0, "TRIVIAL", "P(Phi^1) = log 2 + log(1/2) = 0"),)
    return CatalogEntry("diagonal", system, facts, {"N": int(N), "a": a, "b": b})


def _bernoulli(p=(0.5, 0.5)) -> CatalogEntry:
    p = tuple(float(x) for x in p)
    system = MatrixSystem.single([np.array([[x]]) for x in p], 1.0, f"bernoulli{p}")
    facts = (Fact("pressure", math.log(sum(p)), "TRIVIAL", "a_n = n log sum p"),)
    return CatalogEntry("bernoulli", system, facts, {"p": p})


def _rotation(N: int = 2, scale: float = 1.0) -> CatalogEntry:
    def rot(t):
        return scale * np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])

    angles = [1.0 + math.sqrt(2) * i for i in range(int(N))]
    system = MatrixSystem.single([rot(t) for t in angles], 1.0, f"rotation(N={N}, scale={scale:g})")
    facts = (Fact("simultaneous proximal word", None, "TRIVIAL", "conformal maps are never proximal"),)
    return CatalogEntry("rotation", system, facts, {"N": int(N), "scale": scale})


def _swap_cycle() -> CatalogEntry:
    A = (np.array([[0.0, 2.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [3.0, 0.0]]))
    system = MatrixSystem.single(A, 1.0, "swap-cycle")
    facts = (Fact("cyclic splitting", "(span e1, span e2)", "DERIVED", "both maps exchange the axes"),)
    return CatalogEntry("swap-cycle", system, facts, {})


def _random(N: int = 2, d: int = 2, seed: int = 0, k: int = 1, beta: float = 1.0) -> CatalogEntry:
    rng = np.random.default_rng(int(seed))
    tuples = [[rng.standard_normal((int(d), int(d))) for _ in range(int(N))] for _ in range(int(k))]
    system = MatrixSystem(tuple(tuples), (float(beta),) * int(k), f"random(N={N}, d={d}, seed={seed})")
    return CatalogEntry("random", system, (), {"N": int(N), "d": int(d), "seed": int(seed), "k": int(k)})


_BUILDERS = {
    "nottot": _nottot,
    "nottot-recoded": _nottot_recoded,
    "similarity": _similarity,
    "diagonal": _diagonal,
    "bernoulli": _bernoulli,
    "rotation": _rotation,
    "swap-cycle": _swap_cycle,
    "random": _random,
}


def names() -> list[str]:
    return list(_BUILDERS)


def _parse_value(text: str):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        return tuple(_parse_value(t) for t in text[1:-1].split(",") if t.strip())
    if "/" in text:
        return float(Fraction(text))
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_key(key: str) -> tuple[str, dict]:
    """Split ``"similarity(N=3, r=1/2, d=2)"`` into a name and keyword parameters."""
    m = re.fullmatch(r"\s*([\w-]+)\s*(?:\((.*)\))?\s*", key)
    if not m:
        raise InvalidInputError(f"bad catalog key {key!r}")
    name, body = m.group(1), m.group(2)
    params = {}
    if body:
        for item in re.split(r",(?![^()]*\))", body):
            if not item.strip():
                continue
            if "=" not in item:
                raise InvalidInputError(f"catalog parameter {item!r} needs name=value")
            k, v = item.split("=", 1)
            params[k.strip()] = _parse_value(v)
    return name, params


def build(name: str, **params) -> CatalogEntry:
    """Catalog entry by key; the key may carry parameters, e.g. ``"nottot(alpha=1, beta=2)"``."""
    key, parsed = parse_key(name)
    parsed.update(params)
    if key not in _BUILDERS:
        raise InvalidInputError(f"unknown catalog entry {key!r}; known: {', '.join(_BUILDERS)}")
    try:
        return _BUILDERS[key](**parsed)
    except TypeError as exc:
        raise InvalidInputError(f"bad parameters for {key}: {exc}") from exc


def recode_system(system: MatrixSystem, n: int, alphabet_budget: int = RECODE_ALPHABET_BUDGET) -> MatrixSystem:
    """The ``n``-step recoding: symbol ``i`` of the result is the product over the ``i``-th length-``n`` word."""
    if n < 1:
        raise InvalidInputError("block length must be >= 1")
    N = system.alphabet_size
    check_budget(N**n, f"recoding to alphabet {N}**{n}", alphabet_budget)
    gens = []
    for g in system.generators:
        stack = []
        for i in range(1, N**n + 1):
            P = np.eye(g.shape[-1])
            for s in lex_inverse(i, N, n).as_array():
                P = P @ g[s]
            stack.append(P)
        gens.append(np.array(stack))
    name = f"{system.name}/recoded{n}" if system.name else ""
    return MatrixSystem(tuple(gens), system.betas, name)
