import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urlab.cli import fuzz_report
from urlab.fuzz import FuzzConfig, run_campaign, run_trial
from urlab.relations import Relation
from urlab.report import VerdictReport


def test_config_validation():
    with pytest.raises(ValueError):
        FuzzConfig(trials=0)
    with pytest.raises(ValueError):
        FuzzConfig(trials=1, max_dim=1)


def test_trial_is_reproducible():
    cfg = FuzzConfig(trials=5, seed=123)
    assert run_trial(cfg, 3) == run_trial(cfg, 3)
    assert run_trial(cfg, 3) != run_trial(cfg, 4)


def test_trial_independent_of_campaign_size():
    short, long = FuzzConfig(trials=5, seed=9), FuzzConfig(trials=50, seed=9)
    for t in range(5):
        assert run_trial(short, t) == run_trial(long, t)


def test_hermitian_trial_covers_all_relations():
    verdicts = [v for t in range(10) for v in run_trial(FuzzConfig(trials=10, seed=1, max_states=3), t)]
    assert {v.relation for v in verdicts} == set(Relation)


def test_nonhermitian_trial_skips_covariance_relations():
    verdicts = run_trial(FuzzConfig(trials=1, seed=1, nonhermitian=True, two_mode=False), 0)
    assert {v.relation for v in verdicts} <= {
        Relation.EUR1,
        Relation.EUR2,
        Relation.MINOR_SIGMA_KAPPA,
        Relation.MINOR_GRAM_SUPERADD,
    }


@given(st.integers(0, 2**31), st.booleans(), st.booleans())
@settings(max_examples=40, deadline=None)
def test_no_violations(seed, mixed, nonhermitian):
    result = run_campaign(FuzzConfig(trials=3, seed=seed, mixed=mixed, nonhermitian=nonhermitian))
    assert result.ok, result.violations


def test_threads_do_not_change_result():
    cfg = FuzzConfig(trials=25, seed=5, mixed=True)
    assert fuzz_report(cfg, jobs=1).to_json() == fuzz_report(cfg, jobs=3).to_json()


def test_report_round_trip():
    report = fuzz_report(FuzzConfig(trials=4, seed=2))
    text = report.to_json()
    assert VerdictReport.from_json(text) == report
    assert VerdictReport.from_json(text).to_json() == text
    assert text.endswith("\n")
    assert "jobs" not in report.parameters
