import math

import pytest

from afasem.errors import EmptyArguments, IndexOutOfRange, ParseError
from afasem.relsem import Clause, Pred, Quant, QuantNP, parse_clause, reading_ok, render, retrieve, sv, systematicity_check

NPS = [QuantNP("every", "dog"), QuantNP("some", "cat"), QuantNP("a", "bird"), QuantNP("no", "fish")]


def test_two_readings_by_hand():
    clause = Clause("saw", NPS[:2])
    assert sv(clause).rendered() == [
        "(every x1 dog (some x2 cat (saw x1 x2)))",
        "(some x1 cat (every x2 dog (saw x2 x1)))",
    ]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_reading_counts(k):
    clause = Clause("r", NPS[:k])
    value = sv(clause)
    assert len(value) == len(set(value.rendered())) == math.factorial(k)
    assert all(reading_ok(r, clause) for r in value.readings)


def test_repeated_arguments_still_give_distinct_readings():
    clause = Clause("saw", [NPS[0], NPS[0]])
    assert len(sv(clause)) == 2


def test_retrieve_order():
    r = retrieve(Clause("saw", NPS[:2]), (1, 0))
    assert r == Quant("some", "x1", "cat", Quant("every", "x2", "dog", Pred("saw", ("x2", "x1"))))
    assert render(r) == "(some x1 cat (every x2 dog (saw x2 x1)))"


def test_reading_ok_rejects_bad_readings():
    clause = Clause("saw", NPS[:2])
    good = retrieve(clause, (0, 1))
    assert reading_ok(good, clause)
    assert not reading_ok(Pred("saw", ("x1", "x2")), clause)
    assert not reading_ok(Quant("every", "x1", "dog", Quant("some", "x1", "cat", Pred("saw", ("x1", "x1")))), clause)
    assert not reading_ok(Quant("some", "x1", "cat", Quant("every", "x2", "dog", Pred("saw", ("x1", "x2")))), clause)
    assert not reading_ok(retrieve(Clause("hit", NPS[:2]), (0, 1)), clause)


def test_systematicity():
    clause = Clause("gave", NPS[:3])
    for pos in range(3):
        assert systematicity_check(clause, pos, NPS[pos])
        assert systematicity_check(clause, pos, NPS[3])
    assert sv(clause) == sv(Clause("gave", list(NPS[:3])))
    assert hash(sv(clause)) == hash(sv(Clause("gave", NPS[:3])))
    assert sv(clause) != sv(Clause("gave", [NPS[1], NPS[0], NPS[2]]))
    with pytest.raises(IndexOutOfRange):
        systematicity_check(clause, 3, NPS[0])


def test_clause_validation():
    with pytest.raises(EmptyArguments):
        Clause("rain", [])
    with pytest.raises(ValueError):
        QuantNP("", "dog")


@pytest.mark.parametrize(
    "text, where",
    [
        ("{", "line 1 column 2"),
        ('{"pred": "saw"}', "clause"),
        ('{"pred": "", "args": []}', "clause.pred"),
        ('{"pred": "saw", "args": {}}', "clause.args"),
        ('{"pred": "saw", "args": [{"quant": "every"}]}', "clause.args[0]"),
        ('{"pred": "saw", "args": [{"quant": "every", "noun": ""}]}', "clause.args[0]"),
    ],
)
def test_parse_errors(text, where):
    with pytest.raises(ParseError) as info:
        parse_clause(text)
    assert info.value.location == where


def test_parse_empty_args():
    with pytest.raises(EmptyArguments):
        parse_clause('{"pred": "rain", "args": []}')
