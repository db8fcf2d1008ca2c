import json
import math
import os
from pathlib import Path

import pytest

import slicing4meta as s4m

SCENARIOS = Path(os.environ.get("SLICING4META_SCENARIO_DIR", Path(__file__).parents[2] / "scenarios"))


def test_version():
    assert s4m.__version__ == "0.1.0"


def test_perception_and_mi():
    p = s4m.QoEParams()
    assert s4m.rendering_perception(20.0, 60.0, p) == pytest.approx(math.log(20.0))
    assert s4m.rendering_perception(100.0, 60.0, p) == pytest.approx(math.log(60.0))
    user = s4m.UserSession("u", 100.0, 0.001, 3, p)
    assert user.demand == 60.0
    r = s4m.meta_immersion(user, 20.0, p)
    expected = (1.0 - math.exp(-1.0)) * 0.999 * math.log(20.0)
    assert r.mi == pytest.approx(expected, rel=1e-12)


def test_domain_errors_raise():
    with pytest.raises(s4m.Error, match="DomainError"):
        s4m.objective_quality(100.0, 1.5)
    with pytest.raises(s4m.Error, match="EmptyUserSet"):
        s4m.even_allocation(100.0, [])


def test_mimax_not_worse_than_even():
    users = [s4m.UserSession(f"u{i}", rate, 0.0, n) for i, (rate, n) in enumerate([(50, 5), (400, 20), (100, 40)])]
    even = s4m.even_allocation(300.0, users)
    best = s4m.mi_max_allocation(300.0, users)
    assert sum(best) <= 300.0 + 1e-6
    assert s4m.allocation_objective(users, best) >= s4m.allocation_objective(users, even)


def test_pool_conservation():
    pool = s4m.Pool(s4m.ResourceVector(rendering=100.0))
    rid = pool.reserve(1, s4m.ResourceVector(rendering=60.0))
    with pytest.raises(s4m.Error, match="InsufficientResources"):
        pool.reserve(2, s4m.ResourceVector(rendering=50.0))
    assert pool.remaining().rendering == 40.0
    pool.release(rid)
    assert pool.conservation_holds()
    assert pool.snapshot()["remaining"]["rendering"] == 100.0


def test_sharing_rule():
    model = s4m.MaaSModel("r", s4m.ModelKind.TaaS, max_isolation_degree_for_sharing=s4m.IsolationDegree.Logical)
    assert s4m.may_share(model, s4m.IsolationDegree.None_, s4m.IsolationDegree.Logical)
    assert not s4m.may_share(model, s4m.IsolationDegree.Physical, s4m.IsolationDegree.None_)


def test_run_scenario_reuse():
    out = s4m.run_scenario((SCENARIOS / "duplicate_ar.json").read_text())
    assert out["summary"]["msis_created"] == 1
    assert out["summary"]["msis_reused"] == 1
    records = [json.loads(line) for line in out["trace_jsonl"].splitlines()]
    assert records[0]["event"] == "decision"


def test_run_is_deterministic():
    text = (SCENARIOS / "virtual_travel.json").read_text()
    assert s4m.run_scenario(text)["users_csv"] == s4m.run_scenario(text)["users_csv"]
    assert s4m.run_scenario(text, seed=5)["users_csv"] != s4m.run_scenario(text, seed=6)["users_csv"]


def test_invalid_scenario():
    with pytest.raises(s4m.Error, match="seed"):
        s4m.validate_scenario('{"catalog": [], "clusters": {}}')


def test_sweep():
    rows = s4m.run_sweep()
    assert len(rows) == 40
    csv = s4m.sweep_csv(rows)
    assert csv.splitlines()[0] == "n_users,rate_mbps,mean_mi,min_mi,max_mi"
    for i in range(0, 40, 4):
        means = [r.mean_mi for r in rows[i : i + 4]]
        assert means == sorted(means) and len(set(means)) == 4
