"""Finite-depth thermodynamic formalism for matrix cocycles over full shifts."""

from .errors import (
    InvalidInputError,
    NumericalFailureError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    ThermoformError,
)
from .symbolic import Word, concat, enumerate_words, lex_index, lex_inverse, power, recode_word
from .potentials import (
    CallablePotential,
    GeneralisedPotential,
    MatrixSystem,
    RestrictedPotential,
    ScalarWeights,
    SingularValuePotential,
)
from .pressure import affinity_dimension, partition_sum, pressure
from .classes import Subspace, SubspaceClass, classify, decompose_equivariant, orbit_of
from .gibbs import gibbs_table
from .catalog import build, recode_system

__version__ = "0.1.0"
