import json
from pathlib import Path

import pytest

from qcong import forms, genus1
from qcong.errors import (AmbiguousModelError, EigenformSanityError,
                          NoModelFoundError, NonIntegralError,
                          PrecisionExceededError)
from qcong.genus1 import (ETA_NEWFORMS, GENUS1_LEVELS, SEED_LEVELS, WITNESSES,
                          WeierstrassModel, build_genus1_basis, check_eigenform,
                          check_witness_spec, curve_ap, find_model,
                          generator_pair, load_model, load_models,
                          newform_from_model, newform_series, parse_seed,
                          solve_xy, witness_series)

from helpers import brute_eta_quotient

# printed low-index expansions for the level-11 reduced basis
LEVEL11_TABLE = {
    2: {-2: 1, -1: 2, 1: 5, 2: 8, 3: 1, 4: 7, 5: -11},
    3: {-3: 1, -1: 1, 1: 2, 2: 2, 3: 16, 4: 16, 5: 18},
    4: {-4: 1, -1: -2, 1: 6, 2: 3, 3: 18, 4: -42},
    5: {-5: 1, -1: -1, 1: -14, 2: -16, 3: 34},
}


# -- newforms ---------------------------------------------------------------

def test_newform_11_prefix_vs_brute():
    f = newform_series(11, 8)
    assert dict(f.items()) == brute_eta_quotient([(1, 2), (11, 2)], 8)


def test_newform_11_multiplicativity_instance():
    f = newform_series(11, 8)
    assert f.coeff(6) == f.coeff(2) * f.coeff(3)
    assert (f.coeff(2), f.coeff(3), f.coeff(6)) == (-2, -1, 2)


def test_newform_rejects_non_genus_one_level():
    with pytest.raises(ValueError):
        newform_series(13, 10)


def test_all_eta_newforms_are_eigenforms():
    for N in ETA_NEWFORMS:
        f = newform_series(N, 202)
        assert check_eigenform(f, N, 201)


def test_seed_newforms_load_and_check():
    for N in SEED_LEVELS:
        f = newform_series(N, 201)
        assert f.coeff(1) == 1
        assert check_eigenform(f, N, 200)


def test_seed_precision_limit():
    with pytest.raises(PrecisionExceededError):
        newform_series(17, 10 ** 6)


def test_eigenform_check_catches_corruption():
    f = newform_series(11, 60)
    coeffs = [f.coeff(n) for n in range(1, 60)]
    coeffs[5] += 1  # breaks a_6 = a_2 a_3
    from qcong.series import LaurentSeries
    bad = LaurentSeries(coeffs, 1)
    with pytest.raises(EigenformSanityError):
        check_eigenform(bad, 11, 59)


def test_point_count_oracle_matches_eta_newform():
    f = newform_series(14, 60)
    g = newform_from_model(load_model(14), 14, 60)
    assert all(f.coeff(n) == g.coeff(n) for n in range(1, 60))


def test_curve_ap_good_and_bad_primes():
    model = load_model(11)
    # bad prime: multiplicative reduction contributes +-1
    assert curve_ap(model, 11) in (-1, 1)
    f = newform_series(11, 40)
    for p in (2, 3, 5, 7, 13, 17, 19, 23, 29, 31, 37):
        assert curve_ap(model, p) == f.coeff(p)


# -- models -----------------------------------------------------------------

def test_bundled_models_discriminant_support():
    for N, model in load_models().items():
        disc = model.discriminant
        assert disc != 0
        d = abs(disc)
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
            while d % p == 0:
                assert N % p == 0, (N, p)
                d //= p
        assert d == 1


def test_find_model_level11():
    f = newform_series(11, 60)
    model = find_model(f, level=11)
    assert model.as_tuple() == (0, -1, 1, -10, -20)


def test_find_model_level36_has_short_form():
    f = newform_series(36, 60)
    model = find_model(f, level=36)
    assert model.a1 == 0 and model.a3 == 0
    assert model == load_model(36)


def test_find_model_rejects_perturbed_newform():
    f = newform_series(11, 60)
    coeffs = [f.coeff(n) for n in range(1, 60)]
    coeffs[6] += 1
    from qcong.series import LaurentSeries
    with pytest.raises(NoModelFoundError):
        find_model(LaurentSeries(coeffs, 1), level=11)


def test_find_model_without_witness_level_reports_ambiguity():
    f = newform_series(11, 60)
    with pytest.raises(AmbiguousModelError) as exc:
        find_model(f)
    models = {m.as_tuple() for m in exc.value.models}
    assert (0, -1, 1, -10, -20) in models and len(models) > 1


def test_load_model_unknown_level():
    from qcong.errors import LevelUnavailableError
    with pytest.raises(LevelUnavailableError):
        load_model(13)


def test_integrality_alone_is_ambiguous_at_level11():
    # the isogenous curve (0,-1,1,0,0) also carries an integral coordinate
    # pair for the same newform, so the witness screen is what decides
    f = newform_series(11, 60)
    impostor = WeierstrassModel(0, -1, 1, 0, 0)
    pair = solve_xy(f, impostor, 45)
    pair.verify(f)
    assert not genus1._witness_membership(pair.x, pair.y, 11, 40)
    true_pair = solve_xy(f, load_model(11), 45)
    assert genus1._witness_membership(true_pair.x, true_pair.y, 11, 40)


# -- witnesses ---------------------------------------------------------------

def test_witness_specs_cover_all_levels_and_verify():
    assert set(WITNESSES) == set(GENUS1_LEVELS)
    for N, factors in WITNESSES.items():
        pole = check_witness_spec(N, factors)
        assert pole >= 2
        w = witness_series(N, 5)
        assert w.val == -pole


def test_witness_spec_rejects_bad_quotient():
    with pytest.raises(ValueError):
        check_witness_spec(11, ((1, -12), (11, 12)))  # pole at the wrong cusp


# -- coordinates -------------------------------------------------------------

def test_solve_xy_level11_prefix():
    pair = generator_pair(11, 40)
    x = pair.x
    assert x.coeff(-2) == 1
    assert x.coeff(-1) == 2
    assert [x.coeff(n) for n in range(1, 6)] == [5, 8, 1, 7, -11]
    assert pair.y.coeff(-3) == -1


def test_solve_xy_identities_replay():
    f = newform_series(11, 70)
    pair = solve_xy(f, load_model(11), 50)
    assert pair.verify(f)


def test_solve_xy_determinism_under_extension():
    p1 = solve_xy(newform_series(11, 45), load_model(11), 30)
    p2 = solve_xy(newform_series(11, 95), load_model(11), 80)
    assert p2.x.truncate(30) == p1.x
    assert p2.y.truncate(29) == p1.y


def test_solve_xy_rejects_wrong_model():
    f = newform_series(11, 60)
    with pytest.raises(NonIntegralError):
        solve_xy(f, WeierstrassModel(0, -1, 1, -10, -19), 40)


def test_solve_xy_all_levels_integral():
    for N in GENUS1_LEVELS:
        f = newform_series(N, 40)
        pair = solve_xy(f, load_model(N), 30)
        pair.verify(f)
        assert pair.x.coeff(-2) == 1 and pair.y.coeff(-3) == -1


# -- the reduced basis -------------------------------------------------------

def test_level11_basis_matches_printed_table():
    tb = build_genus1_basis(11, 5, 8)
    assert tb.element(0) == 1
    assert tb.element(1).is_zero()
    assert tb.coefficient(1, -1) == -1
    for m, terms in LEVEL11_TABLE.items():
        for n, c in terms.items():
            assert tb.coefficient(m, n) == c, (m, n)


def test_basis_shape_all_levels():
    for N in (11, 14, 27, 49):
        tb = build_genus1_basis(N, 8, 10)
        for m in range(2, 9):
            s = tb.element(m)
            assert s.coeff(-m) == 1
            for e in range(-m + 1, 1):
                if e != -1:
                    assert s.coeff(e) == 0, (N, m, e)


def test_basis_prefix_stability():
    small = build_genus1_basis(14, 6, 12)
    big = build_genus1_basis(14, 6, 40)
    for m in range(7):
        assert big.element(m).truncate(12) == small.element(m)


def test_polynomial_rows_in_reduced_generators():
    # the index-4 and index-5 elements as polynomials in the index-2/3 ones
    tb = build_genus1_basis(11, 5, 30)
    f2, f3, f4, f5 = (tb.element(m) for m in (2, 3, 4, 5))
    assert f4 == (f2 * f2 - 4 * f3 - 4 * f2 - 36).truncate(28)
    assert f5 == (f2 * f3 - 2 * f2 * f2 + f2 + 7 * f3 + 60).truncate(26)


def test_genus1_example_instance_level14():
    tb = build_genus1_basis(14, 6, 8)
    v = tb.coefficient(6, 1) + tb.coefficient(2, -1) * tb.coefficient(3, 1)
    assert v % 3 == 0


# -- seeds -------------------------------------------------------------------

def test_parse_seed_roundtrip(tmp_path):
    level, f = parse_seed(json.loads(
        genus1._data_file("seeds/newform_19.json").read_text()))
    assert level == 19 and f.coeff(1) == 1


def test_parse_seed_rejects_wrong_weight():
    with pytest.raises(ValueError):
        parse_seed({"level": 17, "weight": 4, "coefficients": ["1"]})


def test_parse_seed_rejects_bad_leading():
    with pytest.raises(ValueError):
        parse_seed({"level": 17, "weight": 2, "coefficients": ["2", "1"]})
