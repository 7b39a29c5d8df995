import math

import pytest

from symtest.outcome import TestOutcome


def test_decision_labels():
    assert TestOutcome("JEL", 5.0, 0.05, True, 10, p_value=0.02).decision == "Reject H0"
    assert TestOutcome("JEL", 1.0, 0.05, False, 10, p_value=0.3).decision == "Accept H0"
    assert TestOutcome("CM", math.nan, 0.05, False, 10, inconclusive=True).decision == "Inconclusive"


def test_consistency():
    assert TestOutcome("JEL", 5.0, 0.05, True, 10, p_value=0.02).consistent()
    assert not TestOutcome("JEL", 5.0, 0.05, False, 10, p_value=0.02).consistent()
    assert TestOutcome("SCR", 0.3, 0.05, True, 10, critical_lower=-0.1, critical_upper=0.1).consistent()
    assert not TestOutcome("SCR", 0.1, 0.05, True, 10, critical_lower=-0.1, critical_upper=0.1).consistent()
    assert not TestOutcome("CM", math.nan, 0.05, True, 10, inconclusive=True).consistent()


def test_to_dict_maps_nonfinite_to_none():
    d = TestOutcome("CM", math.nan, 0.05, False, 10, inconclusive=True).to_dict()
    assert d["statistic"] is None and d["method"] == "CM"


@pytest.mark.parametrize("kw", [dict(method="XX"), dict(alpha=0.0)])
def test_validation(kw):
    args = dict(method="JEL", statistic=1.0, alpha=0.05, reject=False, n=10)
    args.update(kw)
    with pytest.raises(ValueError):
        TestOutcome(**args)
