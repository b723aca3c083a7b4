import json

from selfext.serialize import dumps
from selfext.verify import CHECKS, Settings, verify_paper


def small(seed):
    return Settings(seed=seed, r3_instances=50, embedding_vectors=50, hb_instances=30, cw_instances=20)


def test_default_run_passes():
    rep = verify_paper(0)
    assert rep.status == "pass", [c for c in rep.checks if c.status != "pass"]
    assert [c.name for c in rep.checks] == sorted(CHECKS)
    r4 = next(c for c in rep.checks if c.name == "r4_lower_bound")
    assert "5/4" in r4.computed


def test_seeds_agree_on_statuses():
    a = verify_paper(1, small(1))
    b = verify_paper(2, small(2))
    assert [(c.name, c.status) for c in a.checks] == [(c.name, c.status) for c in b.checks]


def test_parallel_matches_sequential():
    only = ["r4_lower_bound", "r4_section_vertices", "banach_mazur_threshold"]
    seq = verify_paper(0, small(0), only=only)
    par = verify_paper(0, small(0), only=only, parallel=True)
    assert [(c.name, c.status, c.computed) for c in seq.checks] == [(c.name, c.status, c.computed) for c in par.checks]


def test_report_json_roundtrip():
    rep = verify_paper(0, small(0), only=["r4_hand_certificate"])
    text = dumps(rep.to_json())
    doc = json.loads(text)
    doc.pop("schema")
    assert dumps(doc) == text
    assert doc["checks"][0]["claim"]
