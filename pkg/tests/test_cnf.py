from fractions import Fraction

import pytest

from bdhyper.core import CapacityError, DomainError, ParseError
from bdhyper.cnf import (CnfFormula, all_sign_patterns, brute_force_sat,
                         format_dimacs, max_sat_fraction, min_unsat,
                         parse_dimacs, random_kc_formula, regularize,
                         sat_distance, to_exact_three, validate_kc)

PAIR = CnfFormula(3, ((1, 2, 3), (-1, -2, -3)))
SIGNS = all_sign_patterns(3)
CONTRA = CnfFormula(1, ((1,), (-1,)))


def test_validate_kc():
    assert validate_kc(PAIR, 3, 1)
    assert not validate_kc(CnfFormula(1, ((1,),)), 3, 1)
    assert validate_kc(SIGNS, 3, 4)


def test_brute_force_sat():
    assert brute_force_sat(CONTRA) is None
    assert brute_force_sat(CnfFormula(3, ((1, 2, 3),))) == (0, 0, 1)
    assert brute_force_sat(SIGNS) is None
    with pytest.raises(CapacityError):
        brute_force_sat(CnfFormula(30, ((1,),)), limit=20)


def test_max_sat():
    assert max_sat_fraction(CONTRA) == Fraction(1, 2)
    assert max_sat_fraction(PAIR) == 1
    assert max_sat_fraction(SIGNS) == Fraction(7, 8)
    assert sat_distance(SIGNS) == Fraction(1, 8)
    assert min_unsat(SIGNS) == 1


def test_bad_literals():
    with pytest.raises(DomainError):
        CnfFormula(2, ((1, 3),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, 1),))


def test_dimacs_round_trip():
    assert parse_dimacs(format_dimacs(SIGNS, ["x"])) == SIGNS
    with pytest.raises(ParseError):
        parse_dimacs("1 2 0\n")


def test_random_kc_is_regular_and_seeded():
    f = random_kc_formula(6, 2, 3)
    assert validate_kc(f, 3, 2)
    assert f == random_kc_formula(6, 2, 3)
    with pytest.raises(ValueError):
        random_kc_formula(4, 1, 0)


def test_exact_three_and_regularize():
    f = to_exact_three(CnfFormula(2, ((1,), (-1, 2), (1, -2, ))))
    assert all(len(cl) == 3 for cl in f.clauses)
    assert (brute_force_sat(f) is None) == (brute_force_sat(
        CnfFormula(2, ((1,), (-1, 2), (1, -2)))) is None)
    g, c = regularize(to_exact_three(PAIR))
    assert validate_kc(g, 3, c)
