import numpy as np
import pytest

from thermoform import GeneralisedPotential, InvalidInputError, catalog, recode_system
from thermoform.classes import is_irreducible
from thermoform.pressure import affinity_dimension
from thermoform.symbolic import enumerate_words, recode_word


def test_nottot_matrices(nottot):
    A, B = nottot.generators
    np.testing.assert_array_equal(A, [np.diag([2.0, 1.0]), [[0, 1], [1, 0]]])
    np.testing.assert_array_equal(B, [[[0, 1], [1, 0]], np.diag([1.0, 2.0])])


def test_recoded_matches_recode(nottot, recoded):
    assert recode_system(nottot, 2).allclose(recoded)
    np.testing.assert_array_equal(recoded.generators[0][0], np.diag([4.0, 1.0]))
    np.testing.assert_array_equal(recoded.generators[1][3], np.diag([1.0, 4.0]))
    assert recode_system(nottot, 1).allclose(nottot)


def test_recoded_parameters():
    a = catalog.build("nottot-recoded", alpha=1.0, beta=2.0).system
    b = recode_system(catalog.build("nottot", alpha=1.0, beta=2.0).system, 2)
    assert a.allclose(b) and a.betas == (1.0, 2.0)


def test_similarity_and_keys():
    s = catalog.build("similarity", N=3, r=0.5, d=2).system
    assert s.alphabet_size == 3
    np.testing.assert_array_equal(s.generators[0], [0.5 * np.eye(2)] * 3)
    name, params = catalog.parse_key("similarity(N=3, r=1/2, d=2)")
    assert name == "similarity" and params == {"N": 3, "r": 0.5, "d": 2}
    with pytest.raises(InvalidInputError):
        catalog.build("nope")


def test_recoding_commutes_with_potential(nottot):
    phi = GeneralisedPotential(nottot)
    psi = GeneralisedPotential(recode_system(nottot, 2))
    for n in (2, 4, 6, 8):
        for w in enumerate_words(2, n):
            assert abs(psi.log_evaluate(recode_word(w, 2)) - phi.log_evaluate(w)) <= 1e-12


def test_irreducible_pairs(nottot):
    assert all(is_irreducible(g).status == "irreducible-certified" for g in nottot.generators)


def test_dimension_invariant_under_recoding():
    gens = catalog.build("diagonal").system.generators[0]
    a = affinity_dimension(gens, n_max=8, tol=1e-6)
    b = affinity_dimension(recode_system(catalog.build("diagonal").system, 2).generators[0], n_max=4, tol=1e-6)
    assert abs(a.point - b.point) <= (a.s_hi - a.s_lo) + (b.s_hi - b.s_lo) + 1e-9


def test_every_entry_has_provenance():
    for name in catalog.names():
        for fact in catalog.build(name).facts:
            assert fact.provenance in ("PUBLISHED", "TRIVIAL", "DERIVED")
            if fact.provenance == "DERIVED":
                assert fact.oracle


def test_recode_budget(nottot):
    from thermoform import ResourceLimitError

    with pytest.raises(ResourceLimitError):
        recode_system(nottot, 13)
