import numpy as np
import pytest

from finmode import campaigns


@pytest.mark.parametrize("lemma", sorted(campaigns.CAMPAIGNS))
def test_small_campaigns_pass(lemma):
    res = campaigns.run(lemma, 40, seed=3)
    assert res.ok, res.summary()
    assert "PASS" in res.summary()


def test_run_argument_checks():
    with pytest.raises(KeyError):
        campaigns.run("no-such-lemma", 1)
    with pytest.raises(ValueError):
        campaigns.run("sip", 0)


def test_result_records_first_counterexample():
    r = campaigns.CampaignResult("x", 2)
    r.fail("first")
    r.fail("second")
    assert not r.ok and r.failures == 2 and r.counterexample == "first"
    assert "FAIL" in r.summary() and "first" in r.summary()


def test_triangle_oracle_octant():
    assert campaigns.triangle_area(*np.eye(3)) == pytest.approx(np.pi / 2)
    assert campaigns.fan_area(np.eye(3)) == pytest.approx(np.pi / 2)
