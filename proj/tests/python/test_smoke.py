import os
import pathlib

import pytest

import apicompat

ROOT = pathlib.Path(os.environ.get("APICOMPAT_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
FIXTURES = ROOT / "fixtures"
DEVICE_IDS = "<android.view.InputDevice: int[] getDeviceIds()>"


def record(corpus, level, signature):
    return next(r for r in corpus[level] if r["signature"] == signature)


@pytest.fixture(scope="module")
def corpus():
    return apicompat.scan_corpus(FIXTURES / "mini-aosp", 15, 24)


def test_version():
    assert apicompat.__version__ == "0.1.0"


def test_extract_records():
    records = apicompat.extract_records(
        "package p; public class A { @Deprecated public int f(String s) { return 1; } }", 20, "p/A.java")
    assert [r["signature"] for r in records] == ["<p.A: int f(String)>"]
    assert records[0]["annotations"] == ["@Deprecated"]
    assert records[0]["level"] == 20


def test_diff_and_classify(corpus):
    diff = apicompat.diff_levels(corpus[15], corpus[16])
    assert "<android.view.InputDevice: boolean isVirtual()>" in diff["added"]
    old, new = record(corpus, 15, DEVICE_IDS), record(corpus, 16, DEVICE_IDS)
    report = apicompat.classify_change(old, new)
    assert {"Return Statement Changed", "Exception Handling Statement Changed"} <= set(report["change_types"])
    verdict = apicompat.detect_baseline(old, new)
    assert set(verdict["labels"]) == {"Return Value Alteration", "Exception Handling Modification"}


def test_prompt_matches_golden(corpus):
    old, new = record(corpus, 15, DEVICE_IDS), record(corpus, 16, DEVICE_IDS)
    golden = (FIXTURES / "prompts" / "getDeviceIds_cot.txt").read_text()
    assert apicompat.build_prompt(old, new) == golden


def test_ast_text():
    assert apicompat.to_ast_text("{}").splitlines()[0] == \
        "MethodDeclaration(method_body, [Statement({, []), Statement(}, [])])"


def test_parse_model_output():
    answer = apicompat.parse_model_output("CHANGE_TYPES: [No Change]\nVERDICT: [None]")
    assert answer["change_types"] == ["No Change"]
    assert answer["labels"] == []
    with pytest.raises(apicompat.Error, match="malformed-output"):
        apicompat.parse_model_output("The API changed a lot.")


def test_metrics():
    gold = [{"RVA"}, {"RVA", "EHM"}, {"EHM"}, set(), {"EHM"}, {"RVA"}]
    pred = [{"RVA"}, {"RVA", "EHM"}, {"EHM"}, {"EHM"}, set(), {"RVA"}]
    m = apicompat.compute_prf(pred, gold, ["RVA", "EHM"])
    assert m["macro"]["f1"] == pytest.approx(5 / 6, abs=1e-9)
    assert m["per_label"]["EHM"]["precision"] == pytest.approx(2 / 3, abs=1e-9)
    assert apicompat.accuracy_success_rate([{"a"}, set()], [{"a"}, {"b"}]) == pytest.approx((0.5, 0.5))
    rows = [[{"A"}, {"A"}], [{"A"}, {"B"}], [{"B"}, {"B"}], [{"C"}, {"C"}]]
    assert apicompat.krippendorff_alpha(rows, "nominal") == pytest.approx(2 / 3, abs=1e-9)


def test_pipeline_and_check_app(tmp_path):
    code, out, err = apicompat.run_cli("pipeline", "--corpus", FIXTURES / "mini-aosp", "--out", tmp_path)
    assert code == 0, err
    assert "total" in out
    issues = apicompat.check_app(FIXTURES / "guard-app", tmp_path / "kb")
    assert [i["line"] for i in issues] == [22, 33, 45]
    code, _, err = apicompat.run_cli("extract", "--corpus", tmp_path / "missing", "--out", tmp_path / "x")
    assert code == 1
    assert "corpus-not-found" in err
