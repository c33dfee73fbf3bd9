import json
import pathlib

import pytest

import code2api

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
EVAL = DATA / "eval"


def int_list_context():
    return json.loads((EVAL / "corpus.jsonl").read_text().splitlines()[0])


def test_version():
    assert code2api.__version__.count(".") == 2


def test_prompt_parts_and_ablation():
    full = code2api.render_prompt(int_list_context())
    assert full["rendered"].startswith(full["role_directive"])
    assert "Example five:" in full["examples"]
    assert full["token_estimate"] <= 3396
    bare = code2api.render_prompt(int_list_context(), use_cot=False, use_few_shot=False)
    assert full["cot"] not in bare["rendered"]
    assert "Example one:" not in bare["rendered"]
    assert bare["test_input"] == full["test_input"]


def test_prompt_over_budget():
    with pytest.raises(code2api.OverBudget):
        code2api.render_prompt(int_list_context(), budget=10)


def test_extract_and_compare():
    reply = json.loads((EVAL / "fixtures.json").read_text())["1"]
    api = code2api.extract_api(reply, "java", 1)
    assert api["answer_id"] == 1
    truth = (DATA / "int_list" / "complete_code.java").read_text()
    verdict = code2api.compare(truth, api["complete_source"], "java", 1)
    assert verdict == {"answer_id": 1, "params": "Equivalent", "returns": True,
                       "impl": "NeedsManual"}


def test_extract_error():
    with pytest.raises(code2api.ExtractError):
        code2api.extract_api("no code here", "java")


def test_parse_signature():
    sig = code2api.parse_signature(
        "def add(a: int, b: int) -> int:\n    return a + b\n", "python")
    assert sig["method_name"] == "add"
    assert [p["name"] for p in sig["parameters"]] == ["a", "b"]
    assert sig["return_statements"] == ["return a + b"]


def test_compile_source():
    ok = code2api.compile_source((DATA / "int_list" / "complete_code.java").read_text())
    assert ok["success"] and ok["diagnostics"] == []
    bad = code2api.compile_source((DATA / "remove_item" / "snippet.java").read_text())
    assert not bad["success"]
    assert bad["diagnostics"][0]["line"] == 1
    assert "List" in bad["diagnostics"][0]["message"]


def test_ingest(tmp_path):
    out = tmp_path / "corpus.jsonl"
    result = code2api.ingest(DATA / "corpus" / "fixture_dump.xml", "java", out=out)
    assert result["rows"] == 50
    assert len(result["contexts"]) == len(out.read_text().splitlines()) > 0


def test_run_benchmark(tmp_path):
    result = code2api.run_benchmark(EVAL / "corpus.jsonl", tmp_path, fixtures=EVAL / "fixtures.json",
                                    truth=EVAL / "truth.jsonl", manual=EVAL / "manual.jsonl",
                                    compile_check=True)
    m = result["metrics"]
    assert (m["total"], m["p_count"], m["r_count"], m["m_count"], m["pr_count"]) == (3, 2, 1, 1, 2)
    assert result["errors"] == 1
    assert result["compile"]["compiled"] == 2
    assert "| Code2API | 33.3% | 66.7% | 33.3% | 66.7% |" in result["markdown"]
    lines = pathlib.Path(result["records_path"]).read_text().splitlines()
    assert len(lines) == 1 + 3 + 1


def test_post_url_and_percent():
    assert code2api.parse_post_url(
        "https://stackoverflow.com/questions/10/how-to/11#11") == {"question_id": 10, "answer_id": 11}
    assert code2api.parse_post_url("https://example.com/questions/10") is None
    assert code2api.format_percent(0.65, 200) == "65.0%"
    assert code2api.format_percent(0.0, 0) == "n/a"
