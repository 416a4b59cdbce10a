"""
Test the theorem registry, instances and gap reports.
"""

import pytest

from operator_means import TheoremInstance
from operator_means.spectral import PosDefMatrix
from operator_means.theorems import known_ids, parse_theorem_ids, registry
from operator_means.utils import SpecSyntaxError, gen_posdef, make_rng


def test_registry():
    ids = known_ids()
    assert ids[:2] == ["AXM", "IDS"]
    assert ids[-1] == "AND"
    for theorem_id in ["T21", "R23", "C22", "C24", "R25", "T25", "C27", "R27", "T31", "E18", "T32", "R33"]:
        assert theorem_id in ids
    assert len(set(ids)) == len(ids)
    assert registry()["T25"].suite == "amgm"


def test_parse_theorem_ids():
    assert parse_theorem_ids("t21, T25") == ["T21", "T25"]
    assert parse_theorem_ids("T25,T25") == ["T25"]
    assert parse_theorem_ids(["C27", "R27"]) == ["C27", "R27"]
    assert parse_theorem_ids("all") == known_ids()
    assert parse_theorem_ids("") == []


def test_parse_theorem_ids_error():
    with pytest.raises(SpecSyntaxError) as e:
        parse_theorem_ids("T21,X99")
    assert e.value.position == 4
    assert "X99" in str(e.value)


def test_instance_signature():
    a, b = PosDefMatrix(4.0), PosDefMatrix(1.0)
    with pytest.raises(ValueError):
        TheoremInstance("T25", {"a": a, "b": b, "alpha": 0.5})
    with pytest.raises(ValueError):
        TheoremInstance("T25", {"a": a, "b": b, "alpha": 0.5, "beta": 0.5, "gamma": 0.5})
    with pytest.raises(ValueError):
        TheoremInstance("T99", {})


def test_evaluate_scalar():
    instance = TheoremInstance("T25", {"a": PosDefMatrix(4.0), "b": PosDefMatrix(1.0), "alpha": 0.5, "beta": 0.5})
    report = instance.evaluate()
    assert report.all_hold
    out = report.to_dict()
    assert out["theorem_id"] == "T25"
    assert out["params"] == {"alpha": 0.5, "beta": 0.5}
    assert len(out["links"]) == 4
    assert set(out["links"][0]) == {"gap", "scale", "holds", "expected"}
    assert out["inputs"]["a"]["rows"] == [[4.0]]
    assert len(out["terms"]) == 5


def test_terms_left_out_above_limit():
    rng = make_rng(60)
    a, b = gen_posdef(10, (0.1, 10.0), rng), gen_posdef(10, (0.1, 10.0), rng)
    report = TheoremInstance("T25", {"a": a, "b": b, "alpha": 0.3, "beta": 0.6}).evaluate()
    out = report.to_dict()
    assert "terms" not in out
    assert "inputs" not in out
    assert "terms" in report.to_dict(include_terms=True)


def test_function_params_are_described():
    params = {"f": "neg_power:0.5", "a": PosDefMatrix(4.0), "b": PosDefMatrix(1.0), "alpha": 0.5, "beta": 0.5}
    report = TheoremInstance("T21", params).evaluate()
    assert report.params["f"] == "neg_power:0.5"
    assert report.expected_hold
