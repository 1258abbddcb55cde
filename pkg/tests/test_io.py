import json

import pytest
from hypothesis import given, strategies as st
import random

from bihom.families import FIXTURE_BUILDERS, random_split_lie_twist
from bihom.io import (LoadError, algebra_to_dict, dumps_algebra, fixture_names, load_algebra,
                      load_fixture, loads_algebra)

GOOD = {
    "name": "tiny",
    "dimension": 2,
    "basis": ["h", "x"],
    "parity": [0, 1],
    "brackets": [{"left": 0, "right": 1, "result": {"1": "1/2"}},
                 {"left": "x", "right": "h", "result": {"x": "-1/2"}}],
    "phi": [["1", "0"], ["0", "2"]],
    "psi": [["1", "0"], ["0", "1"]],
    "H": [0],
}


def text(**changes):
    d = dict(GOOD)
    d.update(changes)
    return json.dumps(d, indent=1)


def test_load_good():
    a = loads_algebra(text())
    assert a.dim == 2 and a.parity == (0, 1) and a.H == (0,)
    assert a.product(1, 0)[1] == -a.product(0, 1)[1]


def test_missing_maps_default_to_identity():
    d = dict(GOOD)
    del d["phi"], d["psi"]
    a = loads_algebra(json.dumps(d))
    assert a.phi == a.psi


def test_e5_fixture_file():
    a = load_fixture("E5")
    assert a.dim == 5 and a.parity == (0, 0, 0, 1, 1) and a.basis_names == ("u1", "u2", "u3", "e1", "e2")


@pytest.mark.parametrize("name", sorted(FIXTURE_BUILDERS))
def test_fixture_files_match_builders(name):
    assert load_fixture(name) == FIXTURE_BUILDERS[name]()


def test_fixture_corpus_complete():
    assert fixture_names() == sorted(["E5", "E5z", "gl11", "gl11-twisted", "sl2-leibniz-twisted",
                                      "two-block", "abelian"])


@pytest.mark.parametrize("changes,field", [
    ({"parity": [0]}, "parity"),
    ({"parity": [0, 2]}, "parity"),
    ({"basis": ["h"]}, "basis"),
    ({"dimension": -1}, "dimension"),
    ({"brackets": [{"left": 0, "right": 0, "result": {"0": "1/0"}}]}, "brackets[0].result.0"),
    ({"brackets": [{"left": 0, "right": 0, "result": {"0": "0.5"}}]}, "brackets[0].result.0"),
    ({"brackets": [{"left": 0, "right": 7, "result": {}}]}, "brackets[0].right"),
    ({"brackets": [{"left": 0, "result": {}}]}, "brackets[0]"),
    ({"phi": [["1", "0"]]}, "phi"),
    ({"psi": [["1", "0"], ["0"]]}, "psi[1]"),
    ({"H": [5]}, "H"),
])
def test_structured_errors(changes, field):
    with pytest.raises(LoadError) as info:
        loads_algebra(text(**changes), "bad.json")
    assert info.value.field == field
    assert info.value.line is not None
    assert str(info.value).startswith("bad.json:")


def test_duplicate_product_rejected():
    dup = [{"left": 0, "right": 1, "result": {}}, {"left": "h", "right": "x", "result": {}}]
    with pytest.raises(LoadError):
        loads_algebra(text(brackets=dup))


def test_syntax_error_has_line():
    with pytest.raises(LoadError) as info:
        loads_algebra('{\n "dimension": 1,\n oops}')
    assert info.value.line == 3


def test_missing_file(tmp_path):
    with pytest.raises(LoadError):
        load_algebra(tmp_path / "nope.json")
    with pytest.raises(LoadError):
        load_fixture("nope")


@pytest.mark.parametrize("name", sorted(FIXTURE_BUILDERS))
def test_round_trip_fixtures(name):
    a = FIXTURE_BUILDERS[name]()
    b = loads_algebra(dumps_algebra(a))
    assert b == a and b.H == a.H and b.name == a.name
    assert dumps_algebra(b) == dumps_algebra(a)


@given(st.integers(0, 100_000))
def test_round_trip_random(seed):
    a = random_split_lie_twist(random.Random(seed))
    assert loads_algebra(dumps_algebra(a)) == a


def test_scalars_are_text():
    d = algebra_to_dict(FIXTURE_BUILDERS["sl2-leibniz-twisted"]())
    assert all(isinstance(x, str) for row in d["phi"] for x in row)
    assert "1/2" in [x for row in d["phi"] for x in row]
