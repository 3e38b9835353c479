import json
import os

from akh import report as rp
from akh import verification as vf


def tiny_report():
    entries = [
        vf._check("d2", "mu-squared", "mu mu = 0", None, 0.0, 1e-12),
        vf._check("ak", "Lam-del", "[Lam, del] = -i delbar*", "k=1",
                  3e-12, 1e-11),
        vf._value("vanishing", "omega-gap", "sup defect", None, 1.5,
                  note="supremum over the torus"),
    ]
    return vf.VerificationReport("toy", "lie", ("d2", "ak", "vanishing"),
                                 entries, meta={"seed": 0})


def test_entry_dict_round_trip():
    e = tiny_report().entries[1]
    d = rp.entry_as_dict(e)
    assert d == {"suite": "ak", "identity": "Lam-del",
                 "statement": "[Lam, del] = -i delbar*", "block": "k=1",
                 "residual": 3e-12, "tolerance": 1e-11, "verdict": "pass",
                 "note": None}


def test_json_is_deterministic_and_complete():
    rep = tiny_report()
    text = rp.report_to_json(rep)
    assert text == rp.report_to_json(rep)
    assert text.endswith("\n")
    data = json.loads(text)
    assert data["model"] == "toy"
    assert data["ok"] is True
    assert data["counts"] == {"exact": 1, "pass": 1, "vacuous": 1}
    assert data["suites"] == ["d2", "ak", "vanishing"]
    assert len(data["entries"]) == 3
    assert data["entries"][2]["tolerance"] is None
    # nothing time- or host-dependent may enter the artifact
    assert "time" not in text and "host" not in text


def test_markdown_table_shape():
    text = rp.report_to_markdown(tiny_report())
    lines = text.splitlines()
    assert lines[0].startswith("# verification: toy")
    assert any(l.startswith("counts:") for l in lines)
    header = next(l for l in lines if l.startswith("| suite"))
    assert header.split("|")[1:-1] == [" suite ", " identity ", " block ",
                                       " residual ", " tolerance ",
                                       " verdict ", " note "]
    rows = [l for l in lines if l.startswith("|")][2:]
    assert len(rows) == 3
    # report-only tolerance renders as a dash, floats at 12 significant digits
    assert "| 1.5 | - | vacuous |" in rows[2]
    assert " 3e-12 | 1e-11 | pass |" in rows[1]


def test_atomic_write_replaces_and_leaves_no_droppings(tmp_path):
    target = tmp_path / "out.json"
    rp.write_text_atomic(str(target), "first\n")
    rp.write_text_atomic(str(target), "second\n")
    assert target.read_text() == "second\n"
    leftovers = [p for p in os.listdir(tmp_path) if p != "out.json"]
    assert leftovers == []
