import json

import pytest

from qcong import bases, congruences, forms
from qcong.bases import Level1Harmonic
from qcong.congruences import (CongruenceReport, SUITE_ORDER, Violation,
                               mock_combination, run_suite)


# -- report plumbing ---------------------------------------------------------

def test_report_json_schema_and_decimal_strings():
    rep = run_suite("partition", {"nMax": 5})
    d = rep.to_dict()
    assert set(d) == {"suite", "params", "checked", "skipped", "violations",
                      "status", "millis"}
    assert d["status"] == "pass"
    rep2 = CongruenceReport("demo", {"a": 1}, 1, 0,
                            [Violation((("n", 3),), 11 ** 3, 7)], 5)
    v = rep2.to_dict()["violations"][0]
    assert v["modulus"] == "1331" and v["residue"] == "7"
    assert rep2.to_dict()["status"] == "fail"


def test_report_determinism_across_reruns_and_precision():
    a = run_suite("atkin11", {"aMax": 1, "bound": 150})
    b = run_suite("atkin11", {"aMax": 1, "bound": 150, "prec": 400})
    assert a.to_json(include_timing=False) == b.to_json(include_timing=False)


def test_unknown_suite_and_unknown_key_rejected():
    with pytest.raises(ValueError):
        run_suite("nope")
    with pytest.raises(ValueError):
        run_suite("partition", {"bound": 10})
    with pytest.raises(ValueError):
        run_suite("partition", {"nMax": -3})


# -- individual checkers at small grids ---------------------------------------

def test_partition_small_instances():
    assert forms.partition(4) % 5 == 0
    assert forms.partition(9) % 5 == 0
    rep = run_suite("partition", {"nMax": 0})
    assert rep.checked == 3 and rep.status == "pass"


def test_tau_checker_instances():
    rep = run_suite("tau", {"nMax": 30, "pMax": 5, "aMax": 1})
    assert rep.status == "pass"
    # the n = 2 congruence instance: tau(2) - sigma_11(2) = -3 * 691
    assert (forms.tau(2) - forms.sigma(11, 2)) == -3 * 691
    assert forms.tau(1) == forms.sigma(11, 1) == 1


def test_lehner_instances():
    j = forms.j_series(10)
    assert j.coeff(2) % 2 ** 11 == 0
    assert j.coeff(7) % 7 == 0
    rep = run_suite("lehner", {"bound": 1})
    assert rep.checked == 0  # vacuous below 2


def test_atkin_sharpness_detected():
    j = forms.j_series(125)
    assert j.coeff(11) % 11 == 0
    assert j.coeff(11) % 121 != 0
    assert j.coeff(121) % 121 == 0
    assert j.coeff(121) % (11 ** 3) != 0


def test_thm_b11_reduces_to_atkin_at_first_index():
    rep = run_suite("thm-b11", {"alphaMax": 1, "betaMax": 2, "mMax": 2, "nMax": 3})
    assert rep.status == "pass"
    tb = bases.build_j_basis(1, 122)
    j = forms.j_series(122)
    for n in (1, 2, 3):
        assert tb.coefficient(1, 11 * n) == j.coeff(11 * n)


def test_aj_first_instances():
    g7 = bases.build_genus0_basis(7, 1, 8)
    assert g7.coefficient(1, 7) % 7 == 0
    g2 = bases.build_genus0_basis(2, 1, 3)
    assert g2.coefficient(1, 2) % 2 ** 11 == 0
    rep = run_suite("aj", {"p": 3, "mMax": 2, "nMax": 4})
    assert rep.status == "pass" and rep.params["p"] == 3


def test_griffin_known_residues():
    j = forms.j_series(8)
    # index 1, argument 7: residue -7 modulo 49
    assert (j.coeff(7) + 7) % 49 == 0
    # index 1, argument 5: residue -25 modulo 125
    assert (j.coeff(5) + 25) % 125 == 0
    # gamma = 0 with mn = 3 mod 8, cleared half-integer branch
    assert (2 * j.coeff(3) - 1 * forms.sigma(1, 1) * forms.sigma(1, 3)) % 16 == 0


def test_griffin_every_branch_has_five_points():
    rep = run_suite("griffin")
    assert rep.status == "pass"
    assert len(rep.params["branches"]) == 14
    assert all(count >= 5 for count in rep.params["branches"].values())


def test_griffin_rejects_unsupported_prime():
    with pytest.raises(ValueError):
        run_suite("griffin", {"p": 13})


def test_thm_f11_small():
    from qcong.genus1 import build_genus1_basis
    rep = run_suite("thm-f11", {"betaMax": 1, "mMax": 6, "nMax": 6})
    assert rep.status == "pass"
    t11 = build_genus1_basis(11, 3, 123)
    assert t11.coefficient(2, 11) % 11 == 0
    assert t11.coefficient(3, 22) % 11 == 0
    assert t11.coefficient(2, 121) % 121 == 0


def test_thm_genus1_small_all_levels():
    rep = run_suite("thm-genus1", {"alphaMax": 1, "mMax": 3, "nMax": 3})
    assert rep.status == "pass"
    assert rep.checked > 0


def test_pplication_small():
    rep = run_suite("pplication", {"mMax": 2, "window": 30})
    assert rep.status == "pass" and rep.checked == 8


def test_mock_combination_examples():
    tb = bases.build_j_basis(2, 30)
    h = Level1Harmonic(tb)
    assert mock_combination(h, 11, 1, 1) == 0
    assert mock_combination(h, 2, 2, 1) == 2 * 196884
    assert mock_combination(h, 2, 1, 2) == -196884


def test_cor_c11_first_instance_consistent_with_atkin():
    tb = bases.build_j_basis(1, 122)
    h = Level1Harmonic(tb)
    # parameters (alpha, beta) = (0, 2): the combination collapses to -b(11 n)
    val = mock_combination(h, 11, 1, 11 ** 2)
    assert val == -tb.coefficient(1, 11)
    assert val % 11 == 0


def test_cor_c11_small_grid():
    rep = run_suite("cor-c11", {"mMax": 2, "nMax": 2})
    assert rep.status == "pass"
    # pairs (0,2), (0,3), (1,3) with m, n in {1, 2}
    assert rep.checked == 12


def test_skip_counting_is_exhaustive():
    rep = run_suite("thm-b11", {"alphaMax": 1, "betaMax": 2, "mMax": 2, "nMax": 2})
    # full rectangle 2*3*2*2 = 24; valid points have beta > alpha: 3 pairs -> 12
    assert rep.checked + rep.skipped == 24
    assert rep.checked == 12


def test_suite_registry_complete():
    assert SUITE_ORDER == ("partition", "tau", "lehner", "atkin11", "thm-b11",
                           "aj", "griffin", "thm-f11", "thm-genus1",
                           "pplication", "cor-c11")
