"""HTTP API workflow: stages, edits, invalidation, persistence."""

import json

import pytest
from fastapi.testclient import TestClient

from ethiplan.service import ServiceConfig, create_app, session_from_doc, session_to_doc
from ethiplan.service.session import SessionStore


@pytest.fixture()
def client(tmp_path):
    config = ServiceConfig(storage_dir=str(tmp_path / "sessions"))
    app = create_app(config)
    with TestClient(app) as c:
        c.storage_dir = str(tmp_path / "sessions")
        yield c


def create_example_session(client, example_id="av-hospital-emergency"):
    r = client.post("/api/v1/sessions", json={"example_id": example_id})
    assert r.status_code == 201, r.text
    return r.json()


def advance(client, sid, target):
    return client.post(f"/api/v1/sessions/{sid}/advance", json={"target": target})


def advance_to_planned(client, sid):
    for target in (
        "RulesGenerated",
        "RulesFinalized",
        "CodeGenerated",
        "CodeFinalized",
        "Planned",
    ):
        r = advance(client, sid, target)
        assert r.status_code == 200, (target, r.text)
    return r.json()


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}
    assert client.get("/api/v1/healthz").json() == {"status": "ok"}


def test_examples_catalog(client):
    data = client.get("/api/v1/examples").json()["examples"]
    domains = {e["domain_key"] for e in data}
    assert domains == {"autonomous-vehicles", "elderly-care", "firefighting-rescue"}
    for key in domains:
        assert sum(1 for e in data if e["domain_key"] == key) >= 2
    # stable across calls
    assert client.get("/api/v1/examples").json()["examples"] == data


def test_create_session_from_example(client):
    doc = create_example_session(client)
    assert doc["stage"] == "Draft"
    assert doc["inputs"]["example_id"] == "av-hospital-emergency"
    assert doc["inputs"]["principles"] == ["beneficence", "legality", "autonomy"]
    assert doc["rules"] is None


def test_create_session_requires_principles(client):
    r = client.post(
        "/api/v1/sessions",
        json={
            "inputs": {
                "domain_text": "(define (domain d) (:predicates (p)))",
                "problem_text": "(define (problem p) (:domain d) (:init) (:goal (and)))",
                "principles": [],
            }
        },
    )
    assert r.status_code == 422


def test_create_session_malformed_domain_cites_position(client):
    r = client.post(
        "/api/v1/sessions",
        json={
            "inputs": {
                "domain_text": "(define (domain broken)",
                "problem_text": "x",
                "principles": ["beneficence"],
            }
        },
    )
    assert r.status_code == 422
    body = r.json()
    assert body["code"] == "parse-error"
    assert body["line"] >= 1


def test_full_pipeline_stages_and_artifacts(client):
    doc = create_example_session(client)
    sid = doc["id"]

    doc = advance(client, sid, "RulesGenerated").json()
    assert doc["stage"] == "RulesGenerated"
    assert len(doc["rules"]) == 3
    assert doc["rules_attempts"] == 1
    assert all(r["status"] == "generated" for r in doc["rules"])
    assert doc["code"] is None

    doc = advance(client, sid, "RulesFinalized").json()
    doc = advance(client, sid, "CodeGenerated").json()
    assert doc["code_valid"] and "(:ethical-rules" in doc["code"]
    doc = advance(client, sid, "CodeFinalized").json()
    doc = advance(client, sid, "Planned").json()
    assert doc["stage"] == "Planned"
    comparison = doc["comparison"]
    assert comparison["baseline"]["status"] == "solved"
    assert comparison["ethical"]["status"] == "solved"
    # emergency: the ethical plan still takes the shortcut
    assert any("drive-shortcut" in s for s in comparison["ethical"]["steps"])


def test_advance_two_stages_at_once_rejected(client):
    sid = create_example_session(client)["id"]
    r = advance(client, sid, "RulesFinalized")
    assert r.status_code == 409
    assert r.json()["code"] == "stage-order"


def test_comparison_unavailable_before_planned(client):
    sid = create_example_session(client)["id"]
    r = client.get(f"/api/v1/sessions/{sid}/comparison")
    assert r.status_code == 404
    assert r.json()["code"] == "not-available"


def test_unknown_session_404(client):
    assert client.get("/api/v1/sessions/feedfacefeedface").status_code == 404


def test_rule_edit_invalidates_downstream(client):
    sid = create_example_session(client)["id"]
    advance_to_planned(client, sid)
    r = client.patch(
        f"/api/v1/sessions/{sid}/rules",
        json={"edits": [{"op": "remove", "rule_id": "keep-passenger-informed"}]},
    )
    assert r.status_code == 200
    doc = r.json()
    assert doc["stage"] == "RulesGenerated"
    assert doc["code"] is None
    assert doc["comparison"] is None
    assert len(doc["rules"]) == 2
    assert client.get(f"/api/v1/sessions/{sid}/comparison").status_code == 404


def test_add_rule_with_unknown_action_rejected_unchanged(client):
    sid = create_example_session(client)["id"]
    advance(client, sid, "RulesGenerated")
    before = client.get(f"/api/v1/sessions/{sid}").json()
    r = client.patch(
        f"/api/v1/sessions/{sid}/rules",
        json={
            "edits": [
                {
                    "op": "add",
                    "rule": {
                        "id": "fly-rule",
                        "action": "fly",
                        "features": [
                            {"name": "f", "polarity": "negative", "significance": 1}
                        ],
                    },
                }
            ]
        },
    )
    assert r.status_code == 422
    after = client.get(f"/api/v1/sessions/{sid}").json()
    assert after["rules"] == before["rules"]
    assert after["stage"] == before["stage"]


def test_set_significance_then_recompile_reflects_weight(client):
    sid = create_example_session(client, "av-leisure-trip")["id"]
    advance_to_planned(client, sid)
    before = json.loads(client.get(f"/api/v1/sessions/{sid}/comparison").read())

    r = client.patch(
        f"/api/v1/sessions/{sid}/rules",
        json={
            "edits": [
                {
                    "op": "set-significance",
                    "rule_id": "keep-passenger-informed",
                    "feature": "transparency",
                    "significance": 3,
                }
            ]
        },
    )
    assert r.status_code == 200
    doc = r.json()
    assert doc["stage"] == "RulesGenerated"
    for target in ("RulesFinalized", "CodeGenerated", "CodeFinalized", "Planned"):
        assert advance(client, sid, target).status_code == 200, target
    after = json.loads(client.get(f"/api/v1/sessions/{sid}/comparison").read())

    # baseline independence: rule edits never change the baseline plan
    assert after["baseline"] == before["baseline"]
    # the transparency feature now carries rank 3
    row = [
        r
        for r in after["tally"]["rows"]
        if r["rule_id"] == "keep-passenger-informed" and r["feature"] == "transparency"
    ][0]
    assert row["significance"] == 3


def test_code_replace_invalid_is_kept_but_blocks(client):
    sid = create_example_session(client)["id"]
    for target in ("RulesGenerated", "RulesFinalized", "CodeGenerated"):
        advance(client, sid, target)
    r = client.put(f"/api/v1/sessions/{sid}/code", json={"code": "(:ethical-rules (rule"})
    assert r.status_code == 200
    doc = r.json()
    assert doc["code_valid"] is False
    assert doc["code_findings"]
    blocked = advance(client, sid, "CodeFinalized")
    assert blocked.status_code == 422

    # restoring valid code unblocks
    good = "(:ethical-rules)\n"
    doc = client.put(f"/api/v1/sessions/{sid}/code", json={"code": good}).json()
    assert doc["code_valid"] is True
    assert advance(client, sid, "CodeFinalized").status_code == 200
    assert advance(client, sid, "Planned").status_code == 200


def test_persistence_roundtrip(client):
    sid = create_example_session(client)["id"]
    advance_to_planned(client, sid)
    doc = client.get(f"/api/v1/sessions/{sid}").json()
    store = SessionStore(client.storage_dir)
    reloaded = store.load(sid)
    assert session_to_doc(reloaded) == doc
    # a fresh store over the same directory (restart) sees the same state
    assert session_to_doc(SessionStore(client.storage_dir).load(sid)) == doc
    # structural round-trip through the codec
    assert session_to_doc(session_from_doc(doc)) == doc


def test_unsolvable_problem_reports_unsolvable_outcomes(client):
    domain_text = (
        "(define (domain dead) (:predicates (p) (q)) "
        "(:action a :parameters () :precondition (and (q)) :effect (and (p))))"
    )
    problem_text = (
        "(define (problem deadp) (:domain dead) (:init) (:goal (and (p))))"
    )
    r = client.post(
        "/api/v1/sessions",
        json={
            "inputs": {
                "domain_text": domain_text,
                "problem_text": problem_text,
                "principles": ["beneficence"],
            }
        },
    )
    sid = r.json()["id"]
    # mock provider returns its AV default, which cannot validate here;
    # skip generation by advancing with an empty code artifact instead
    r = advance(client, sid, "RulesGenerated")
    assert r.status_code == 422
    assert r.json()["code"] == "generation-failed"


def test_unsolvable_outcome_via_manager(tmp_path):
    from ethiplan.llm import ScriptedProvider
    from ethiplan.service import SessionManager, SessionInputs, ServiceConfig
    from ethiplan.llm.interchange import rules_to_document

    domain_text = (
        "(define (domain dead) (:predicates (p) (q)) "
        "(:action a :parameters () :precondition (and (q)) :effect (and (p))))"
    )
    problem_text = "(define (problem deadp) (:domain dead) (:init) (:goal (and (p))))"
    from ethiplan.ethics import EthicalFeature, EthicalRule

    rule = EthicalRule(
        id="quiet",
        trigger_action="a",
        features=(EthicalFeature("noise", "negative", 1),),
    )
    provider = ScriptedProvider(
        [f"```json\n{rules_to_document((rule,))}\n```", "(:ethical-rules (rule quiet :action a :features ((noise negative 1))))"]
    )
    config = ServiceConfig(storage_dir=str(tmp_path / "s"))
    manager = SessionManager(config, SessionStore(config.storage_dir), provider)
    session = manager.create_session(
        inputs=SessionInputs(
            domain_text=domain_text,
            problem_text=problem_text,
            principles=("beneficence",),
        )
    )
    for target in ("RulesGenerated", "RulesFinalized", "CodeGenerated", "CodeFinalized", "Planned"):
        session = manager.advance(session, target)
    assert session.stage == "Planned"
    assert session.comparison["baseline"]["status"] == "unsolvable"
    assert session.comparison["ethical"]["status"] == "unsolvable"
    assert session.comparison["identical"] is False


def test_busy_session_rejected_with_retry_advice(client, tmp_path):
    sid = create_example_session(client)["id"]
    lock = client.app.state.session_locks.setdefault(sid, __import__("threading").Lock())
    lock.acquire()
    try:
        r = advance(client, sid, "RulesGenerated")
        assert r.status_code == 409
        body = r.json()
        assert body["code"] == "busy"
        assert body["retry_after_ms"] > 0
    finally:
        lock.release()
    # once released the operation goes through
    assert advance(client, sid, "RulesGenerated").status_code == 200


def test_alignment_covers_each_step_once(client):
    sid = create_example_session(client, "eldercare-morning-medication")["id"]
    doc = advance_to_planned(client, sid)
    comparison = doc["comparison"]
    baseline_steps = comparison["baseline"]["steps"]
    ethical_steps = comparison["ethical"]["steps"]
    rows = comparison["alignment"]
    baseline_seen = [r["baseline_index"] for r in rows if r["baseline_index"] is not None]
    ethical_seen = [r["ethical_index"] for r in rows if r["ethical_index"] is not None]
    assert sorted(baseline_seen) == list(range(len(baseline_steps)))
    assert sorted(ethical_seen) == list(range(len(ethical_steps)))
    # penalty identity via API data
    ethical = comparison["ethical"]
    assert ethical["total_cost"] - ethical["base_cost"] == comparison["tally"]["penalty_total"]
