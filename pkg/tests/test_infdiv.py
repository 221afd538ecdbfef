import random
from fractions import Fraction as F

import pytest

from freeprob.errors import StructuralError, ValidationError
from freeprob.freeness import free_product
from freeprob.functionals import MomentFunctional, moments_to_cumulants
from freeprob.infdiv import (
    check_infdiv,
    gram_matrix,
    is_psd,
    kappa_functional_checks,
    monomial_basis,
    psd_certificate,
)
from freeprob.models import (
    bernoulli,
    compound_free_poisson,
    free_poisson,
    semicircle,
    semicircle_family,
)


def test_monomial_basis_order():
    assert monomial_basis(2, 2) == (
        (1,),
        (2,),
        (1, 1),
        (1, 2),
        (2, 1),
        (2, 2),
    )
    with pytest.raises(ValidationError):
        monomial_basis(2, 0)


def test_gram_entries_pair_words_with_reversal():
    fam = semicircle_family([[F(1), F(1, 2)], [F(1, 2), F(1)]], 4)
    cf = moments_to_cumulants(fam)
    g = gram_matrix(cf, degree=2)
    words = g.words
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            assert g.entries[i][j] == cf.cumulant(u + v[::-1])
    assert g.dimension == 6
    with pytest.raises(ValidationError):
        gram_matrix(cf, degree=3)  # needs order 6
    with pytest.raises(ValidationError):
        gram_matrix(cf, k=5, degree=1)


def test_psd_certificate_known_matrices():
    assert psd_certificate([[F(0)]]).psd
    assert psd_certificate([[F(2)]]).psd
    assert not psd_certificate([[F(-1)]]).psd
    assert psd_certificate([[1, 1], [1, 1]]).rank == 1
    assert not psd_certificate([[1, 2], [2, 1]]).psd
    assert not psd_certificate([[0, 1], [1, 0]]).psd
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    cert = psd_certificate(ident)
    assert cert.psd and cert.rank == 3
    with pytest.raises(StructuralError):
        psd_certificate([[0, 1], [2, 0]])
    with pytest.raises(StructuralError):
        psd_certificate([[1, 2]])


def test_psd_certificate_witness_is_exact():
    rng = random.Random(5)
    for trial in range(20):
        d = rng.randint(2, 5)
        a = [[F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(d)] for _ in range(d)]
        # A^T A is always psd; subtracting on the diagonal can break it
        g = [
            [sum(a[k][i] * a[k][j] for k in range(d)) for j in range(d)]
            for i in range(d)
        ]
        if trial % 2:
            g[d - 1][d - 1] -= F(rng.randint(1, 4))
        cert = psd_certificate(g)
        if cert.psd:
            continue
        value = F(0)
        for i, vi in enumerate(cert.witness):
            for j, vj in enumerate(cert.witness):
                value += vi * g[i][j] * vj
        assert value == cert.witness_value
        assert value < 0


def test_psd_certificate_tolerance():
    g = [[F(1), F(0)], [F(0), F(-1, 1000)]]
    assert not psd_certificate(g).psd
    assert psd_certificate(g, tolerance=F(1, 100)).psd
    strict = psd_certificate(g, tolerance=F(1, 10000))
    assert not strict.psd
    assert strict.witness_value < -F(1, 10000)


def test_is_psd_accepts_gram_wrapper():
    cf = moments_to_cumulants(semicircle(2, 4))
    assert is_psd(gram_matrix(cf, degree=2))


def test_semicircle_passes():
    v = check_infdiv(semicircle(2, 8), degree=4)
    assert v.passed
    assert v.rank == 1  # only the linear monomial survives
    assert v.witness is None


def test_free_poisson_passes_with_rank_one_gram():
    v = check_infdiv(free_poisson(1, 1, 6), degree=3)
    assert v.passed
    assert v.rank == 1
    assert v.dimension == 3


def test_compound_free_poisson_passes():
    base = semicircle_family([[F(1), F(1, 2)], [F(1, 2), F(1)]], 4)
    law = compound_free_poisson(F(2), base)
    v = check_infdiv(law, degree=2)
    assert v.passed


def test_free_product_of_divisible_laws_passes():
    j = free_product(
        [free_poisson(1, 1, 4, name="x"), free_poisson(2, 1, 4, name="y")]
    )
    v = check_infdiv(j, degree=2)
    assert v.passed


def test_symmetric_bernoulli_fails_with_exact_witness():
    law = bernoulli(F(1, 2), 1, -1, 4)
    v = check_infdiv(law, degree=2)
    assert v.verdict == "FAIL"
    assert v.witness_value == -1
    assert v.witness == (("b b", F(1)),)
    # the witness really evaluates to its claimed form value
    cf = moments_to_cumulants(law)
    g = gram_matrix(cf, degree=2)
    coeffs = {w: c for w, c in v.witness}
    vec = []
    for u in g.words:
        name = " ".join(g.alphabet[c - 1] for c in u)
        vec.append(coeffs.get(name, F(0)))
    assert g.quadratic_form(vec) == -1


def test_biased_bernoulli_also_fails():
    v = check_infdiv(bernoulli(F(1, 3), 1, 0, 4), degree=2)
    assert v.verdict == "FAIL"
    assert v.witness_value < 0


def test_verdict_json_shape():
    v = check_infdiv(bernoulli(F(1, 2), 1, -1, 4), degree=2)
    d = v.to_json_dict()
    assert d["verdict"] == "FAIL"
    assert d["witness"]["form_value"] == "-1"
    v2 = check_infdiv(semicircle(2, 4), degree=2)
    assert v2.to_json_dict()["witness"] is None


def test_kappa_checks_on_tracial_law():
    cf = moments_to_cumulants(free_poisson(1, 1, 5))
    rep = kappa_functional_checks(cf)
    assert rep.passed and rep.moment_tracial


def test_kappa_checks_flag_nontracial_table():
    table = {
        (1,): F(0),
        (2,): F(0),
        (1, 1): F(1),
        (1, 2): F(1),
        (2, 1): F(0),
        (2, 2): F(1),
    }
    cf = moments_to_cumulants(MomentFunctional(("a", "b"), 2, table))
    rep = kappa_functional_checks(cf)
    assert not rep.passed
    assert not rep.moment_tracial
    assert rep.cyclic_violations
