from __future__ import annotations

import json

import pytest

from fibersum import catalog
from fibersum.cli import main
from fibersum.manifest import bundled_path, record_to_dict, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data(name: str) -> str:
    return str(bundled_path(name))


class TestCommands:
    @pytest.mark.parametrize("name", catalog.NAMES)
    def test_validate_catalog(self, capsys, name):
        code, out, _ = run(capsys, "validate", f"catalog:{name}")
        assert code == 0 and out.strip() == f"{name}: ok"

    def test_validate_file_with_violation(self, capsys, tmp_path):
        e = catalog.get("B")
        d = record_to_dict(e.record, e.named_classes)
        d["basic_classes"] = d["basic_classes"][:1]
        p = tmp_path / "bad.json"
        p.write_text(to_json(d))
        code, out, _ = run(capsys, "validate", str(p))
        assert code == 1
        assert "coefficient of -K" in out

    def test_series(self, capsys):
        code, out, _ = run(capsys, "series", "catalog:K3", "--w", "D")
        assert code == 0 and out.strip() == "(1/1) * exp((1/2)*Q)"

    def test_series_json(self, capsys):
        code, out, _ = run(capsys, "series", data("C.json"), "--w", "D", "--json")
        doc = json.loads(out)
        assert code == 0
        assert doc["lattice"]["generators"] == ["D", "Sigma", "K"]

    def test_transform_and_invert(self, capsys, tmp_path):
        code, out, _ = run(capsys, "transform", "catalog:B", "--w", "F", "--json")
        assert code == 0
        p = tmp_path / "dws.json"
        p.write_text(out)
        code, out, _ = run(capsys, "transform", "catalog:B", "--w", "F", "--invert", "--series", str(p))
        assert code == 0
        classes = json.loads(out)["basic_classes"]
        assert sorted(c["a"] for c in classes) == ["-1/4", "-1/4", "1/4", "1/4"]

    def test_invert_needs_series(self, capsys):
        code, _, err = run(capsys, "transform", "catalog:B", "--w", "F", "--invert")
        assert code == 2 and err.startswith("error[usage]")

    def test_glue(self, capsys):
        code, out, _ = run(capsys, "glue", "catalog:B", "catalog:B", "--match", data("match_B_B.json"),
                           "--w1", "F", "--w2", "F")
        assert code == 0
        assert out.strip() == ("(2/1) * exp((1/2)*Q + (-2/1)*D + (-2/1)*Sigma) + "
                               "(-2/1) * exp((1/2)*Q + (2/1)*D + (2/1)*Sigma)")

    def test_glue_via_b_agrees(self, capsys):
        _, direct, _ = run(capsys, "glue", "catalog:B", "catalog:B", "--match", data("match_B_B.json"),
                           "--w1", "F", "--w2", "F")
        code, via, _ = run(capsys, "glue", "--mode", "via-b", "catalog:C", "catalog:C",
                           "--match", data("match_capped_B_B.json"), "--w1", "D", "--w2", "D")
        assert code == 0 and via == direct

    def test_glue_record(self, capsys):
        code, out, _ = run(capsys, "glue", "catalog:C", "catalog:B", "--match", data("match_C_B.json"),
                           "--w1", "D", "--w2", "F", "--record", "--name", "C2")
        doc = json.loads(out)
        assert code == 0
        assert doc["name"] == "C2" and doc["b_plus"] == 15

    def test_glue_dws(self, capsys):
        code, out, _ = run(capsys, "glue", "catalog:K3", "catalog:B", "--match", data("match_K3_B.json"),
                           "--w1", "D", "--w2", "F", "--dws")
        assert code == 0 and out.strip() == "0"

    def test_expand(self, capsys):
        code, out, _ = run(capsys, "expand", "catalog:K3", "--w", "D", "--dws", "--along", "t:D,s:S-D",
                           "--degree", "2")
        assert code == 0
        assert out.splitlines() == ["variables: t s", "degree: 2", "1: -1/1", "t^1*s^1: 1/1"]

    def test_expand_series_file(self, capsys, tmp_path):
        _, out, _ = run(capsys, "series", "catalog:C", "--w", "D", "--json")
        p = tmp_path / "s.json"
        p.write_text(out)
        code, out, _ = run(capsys, "expand", str(p), "--along", "t:Sigma", "--degree", "1")
        assert code == 0 and "t^1: -8/1" in out

    def test_pair_v4_default(self, capsys):
        code, out, _ = run(capsys, "pair-v4")
        assert code == 0 and out.strip() == "-8/1"

    def test_pair_v4_custom(self, capsys):
        code, out, _ = run(capsys, "pair-v4", "--u", "1,0,0,0", "--v", "0,1,0,0")
        assert code == 0 and out.strip() == "8/1"

    def test_verify_l(self, capsys):
        code, out, _ = run(capsys, "verify-l")
        assert code == 0 and out.strip() == "-32"

    def test_catalog_list(self, capsys):
        code, out, _ = run(capsys, "catalog")
        assert code == 0 and out.split() == list(catalog.NAMES)

    @pytest.mark.parametrize("name", catalog.NAMES)
    def test_catalog_entry_is_bundled_file(self, capsys, name):
        code, out, _ = run(capsys, "catalog", name)
        assert code == 0 and out == bundled_path(f"{name}.json").read_text()

    def test_deterministic(self, capsys):
        args = ("transform", "catalog:B", "--w", "F+E1+E2")
        assert run(capsys, *args) == run(capsys, *args)


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ("bogus",),
        (),
        ("series", "catalog:B"),
        ("catalog", "T4"),
        ("series", "catalog:T4", "--w", "F"),
        ("expand", "catalog:B", "--w", "F", "--along", "t:F", "--degree", "-1"),
        ("expand", "catalog:B", "--w", "F", "--along", "F"),
        ("pair-v4", "--u", "1,2"),
    ])
    def test_usage(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2
        assert err.startswith("error[usage]: ") and err.count("\n") == 1

    @pytest.mark.parametrize("argv", [
        ("series", "catalog:B", "--w", "Z"),
        ("series", "missing.json", "--w", "F"),
        ("pair-v4", "--u", "a,b,c,d"),
        ("expand", "catalog:B", "--w", "F", "--along", "t:F+Q"),
    ])
    def test_parse(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 3 and err.startswith("error[parse]: ")

    def test_math_error(self, capsys):
        code, _, err = run(capsys, "transform", "catalog:B", "--w", "S")
        assert code == 1 and err.startswith("error[math]: ")

    def test_validation_error(self, capsys, tmp_path):
        e = catalog.get("B")
        d = record_to_dict(e.record, e.named_classes)
        d["basic_classes"] = d["basic_classes"][:1]
        p = tmp_path / "bad.json"
        p.write_text(to_json(d))
        code, _, err = run(capsys, "series", str(p), "--w", "F")
        assert code == 1 and err.startswith("error[validation]: ")

    def test_bad_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("[1,")
        code, _, err = run(capsys, "validate", str(p))
        assert code == 3 and "line 1" in err


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper")
    lines = out.splitlines()
    assert len(lines) == 11
    assert lines[-1].endswith("checks passed")
    passed = sum(line.startswith("[PASS]") for line in lines[:-1])
    assert code == (0 if passed == 10 else 1)
