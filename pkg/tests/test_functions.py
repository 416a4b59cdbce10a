"""
Test the function catalog and its class-dependent checks.
"""

import numpy as np
import pytest

from operator_means.functions import (
    EXP_NEG_MONOTONICITY_WITNESS,
    NO_CLASS,
    OM_DECREASING,
    OM_INCREASING,
    HypothesisError,
    ScalarFunctionSpec,
    evaluate,
    find_monotonicity_violation,
    lift,
    monotonicity_verdict,
    parse_function_list,
    require_class,
    scalar_log_convexity_gaps,
)
from operator_means.loewner import loewner_leq
from operator_means.spectral import DomainError, PosDefMatrix
from operator_means.utils import SpecSyntaxError, gen_posdef, gen_psd, make_rng


def test_parse():
    f = ScalarFunctionSpec.parse("neg_power:0.5")
    assert f.kind == "neg_power"
    assert f.params == (0.5,)
    assert f.klass == OM_DECREASING
    assert str(f) == "neg_power:0.5"

    g = ScalarFunctionSpec.parse("shifted_inverse:1:2")
    assert g.params == (1.0, 2.0)
    assert ScalarFunctionSpec.parse("log1p").klass == OM_INCREASING
    assert ScalarFunctionSpec.parse("exp_neg").klass == NO_CLASS


def test_parse_errors():
    with pytest.raises(SpecSyntaxError) as e:
        ScalarFunctionSpec.parse("cosh:1")
    assert e.value.position == 0

    with pytest.raises(SpecSyntaxError) as e:
        ScalarFunctionSpec.parse("shifted_inverse:1:x")
    assert e.value.position == len("shifted_inverse:1:")

    # out of range parameter
    with pytest.raises(SpecSyntaxError):
        ScalarFunctionSpec.parse("neg_power:2")
    # wrong number of parameters
    with pytest.raises(SpecSyntaxError):
        ScalarFunctionSpec.parse("power")


def test_parse_function_list():
    specs = parse_function_list("shifted_inverse:1:2, neg_power:0.5")
    assert [str(f) for f in specs] == ["shifted_inverse:1:2", "neg_power:0.5"]


def test_evaluate():
    assert evaluate(ScalarFunctionSpec.parse("neg_power:0.5"), 4.0) == pytest.approx(0.5)
    assert evaluate(ScalarFunctionSpec.parse("shifted_inverse:0:1"), 2.5) == pytest.approx(0.4)
    assert ScalarFunctionSpec.parse("power:0.5")(9.0) == pytest.approx(3.0)
    assert np.allclose(ScalarFunctionSpec.parse("exp_neg")(np.array([0.5, 1.0])), np.exp([-0.5, -1.0]))


def test_evaluate_domain():
    with pytest.raises(DomainError):
        evaluate(ScalarFunctionSpec.parse("log1p"), 0.0)
    with pytest.raises(DomainError):
        evaluate(ScalarFunctionSpec.parse("neg_power:0.5"), -1.0)


def test_lift_in_eigenbasis():
    a = PosDefMatrix([[2.0, 1.0], [1.0, 2.0]])
    out = lift("neg_power:0.5", a)
    assert isinstance(out, PosDefMatrix)
    assert np.allclose(np.linalg.eigvalsh(out.entries), [1 / np.sqrt(3), 1.0])
    # f(A) commutes with A
    assert np.allclose(out.entries @ a.entries, a.entries @ out.entries)


def test_require_class():
    f = ScalarFunctionSpec.parse("neg_power:1")
    assert require_class(f, OM_DECREASING) is f
    with pytest.raises(HypothesisError):
        require_class("exp_neg", OM_DECREASING)
    assert require_class("exp_neg", OM_DECREASING, bypass=True).kind == "exp_neg"


def test_scalar_log_convexity():
    for text in ["neg_power:0.25", "neg_power:1", "shifted_inverse:1:1"]:
        assert (scalar_log_convexity_gaps(text) >= -1e-12).all()
    # exp(-t) is log-linear, so the scalar shadow is tight
    assert np.allclose(scalar_log_convexity_gaps("exp_neg"), 0.0, atol=1e-12)
    # sqrt is log-concave
    assert (scalar_log_convexity_gaps("power:0.5") <= 1e-12).all()


def test_monotonicity_of_catalog():
    rng = make_rng(11)
    for text in ["neg_power:0.5", "shifted_inverse:1:1", "power:0.5", "log1p"]:
        for _ in range(20):
            a = gen_posdef(3, (0.1, 10.0), rng)
            b = PosDefMatrix(a.entries + gen_psd(3, rng).entries)
            assert monotonicity_verdict(text, a, b).holds


def test_exp_neg_witness():
    a, b = (PosDefMatrix(m) for m in EXP_NEG_MONOTONICITY_WITNESS)
    assert loewner_leq(a, b).holds
    verdict = monotonicity_verdict("exp_neg", a, b)
    assert not verdict.holds
    assert verdict.gap < -1e-3


def test_find_monotonicity_violation():
    found = find_monotonicity_violation("exp_neg", make_rng(5), trials=10000)
    assert found is not None
    a, b, verdict = found
    assert loewner_leq(a, b).holds
    assert verdict.normalized_gap <= -1e-4


def test_no_violation_for_operator_monotone():
    assert find_monotonicity_violation("power:0.5", make_rng(5), trials=50) is None
