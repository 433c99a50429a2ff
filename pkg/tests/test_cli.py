"""Command-line surface: every subcommand, exit codes, JSON error payloads,
byte determinism."""

from __future__ import annotations

import json

import numpy as np

from qbiperm import algebra as al
from qbiperm import linalg as la
from qbiperm.cli import run


def invoke(argv, capsys):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_pure_circuit(self, goldens, capsys):
        code, out, _ = invoke(["eval", str(goldens / "qft3.qc")], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["rows"] == 8 and payload["cols"] == 8

    def test_channel_circuit_with_out(self, goldens, capsys, tmp_path):
        target = tmp_path / "coin.json"
        code, out, _ = invoke(["eval", str(goldens / "coin.qc"), "--out", str(target)], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["dom"] == [1] and payload["cod"] == [1, 1]
        assert json.loads(target.read_text()) == payload

    def test_echo_channel_json(self, goldens, capsys):
        code, out, _ = invoke(["eval", str(goldens / "ampdamp.json")], capsys)
        assert code == 0
        assert json.loads(out)["picture"] == "schrodinger"


class TestCompare:
    def test_equal_circuits(self, goldens, capsys):
        code, out, _ = invoke(
            ["compare", str(goldens / "qft3.qc"), str(goldens / "qft3.qc")], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["equal"] is True and payload["distance"] == 0.0

    def test_distinct_channels(self, goldens, capsys, tmp_path):
        ident = tmp_path / "ident.json"
        ident.write_text(json.dumps(al.channel_to_json(al.identity_channel((2,)))))
        code, out, _ = invoke(["compare", str(goldens / "ampdamp.json"), str(ident)], capsys)
        assert code == 0
        assert json.loads(out)["equal"] is False

    def test_tol_flag_and_env(self, goldens, capsys, monkeypatch, tmp_path):
        ident = tmp_path / "ident.json"
        ident.write_text(json.dumps(al.channel_to_json(al.identity_channel((2,)))))
        monkeypatch.setenv("QBIPERM_TOL", "1e3")
        code, out, _ = invoke(["compare", str(goldens / "ampdamp.json"), str(ident)], capsys)
        assert json.loads(out)["equal"] is True  # env loosened
        code, out, _ = invoke(
            ["compare", str(goldens / "ampdamp.json"), str(ident), "--tol", "1e-9"], capsys
        )
        assert json.loads(out)["equal"] is False  # flag wins over env


class TestDilate:
    def test_amplitude_damping(self, goldens, capsys):
        code, out, _ = invoke(["dilate", str(goldens / "ampdamp.json")], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["q"] == 4 and payload["sbar"] == [2]

    def test_normalform_picture_control(self, goldens, capsys):
        code, out, _ = invoke(
            ["normalform", str(goldens / "ampdamp.json"), "--picture", "heisenberg"], capsys
        )
        assert code == 0
        assert json.loads(out)["picture"] == "heisenberg"

    def test_single_component_prints_plain_form(self, goldens, capsys):
        code, out, _ = invoke(["dilate", str(goldens / "coin.qc")], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["p"] == 1 and payload["picture"] == "schrodinger"

    def test_multi_block_components(self, capsys, tmp_path):
        k0 = np.array([[1.0], [0.0]], dtype=complex)
        k1 = np.array([[0.0], [1.0]], dtype=complex)
        encode = al.copair(al.embed_E(k0), al.embed_E(k1))  # dom [1,1]
        path = tmp_path / "encode.json"
        path.write_text(json.dumps(al.channel_to_json(encode)))
        code, out, _ = invoke(["dilate", str(path)], capsys)
        assert code == 0
        payload = json.loads(out)
        assert len(payload["components"]) == 2
        assert all(c["p"] == 1 for c in payload["components"])


class TestComponents:
    def test_census(self, capsys):
        code, out, _ = invoke(["components", "--dom", "1,1", "--cod", "2"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == 3
        assert [c["real_dimension"] for c in payload["components"]] == [0, 2, 0]


class TestDistance:
    def test_self_distance(self, goldens, capsys):
        code, out, _ = invoke(
            ["distance", str(goldens / "ampdamp.json"), str(goldens / "ampdamp.json")], capsys
        )
        assert code == 0
        assert json.loads(out)["distance"] == 0.0


class TestLift:
    def test_default_target_reproduces_channel(self, goldens, capsys):
        code, out, _ = invoke(["lift", str(goldens / "ampdamp.json")], capsys)
        assert code == 0
        lifted = al.channel_from_json(json.loads(out))
        original = al.channel_from_json(json.loads((goldens / "ampdamp.json").read_text()))
        from qbiperm.normalform import channel_equal

        eq, dist = channel_equal(lifted, original, tol=1e-8)
        assert eq, dist

    def test_terminal_target(self, goldens, capsys):
        code, out, _ = invoke(
            ["lift", str(goldens / "ampdamp.json"), "--target", "terminal_category"], capsys
        )
        assert code == 0
        assert json.loads(out) == {"object": "*", "morphism": "*"}

    def test_isometry_target_on_circuit(self, goldens, capsys):
        code, out, _ = invoke(
            ["lift", str(goldens / "qft3.qc"), "--target", "isometry"], capsys
        )
        assert code == 0
        mat = la.matrix_from_json(json.loads(out))
        assert mat.shape == (8, 8)


class TestSelftest:
    def test_runs_green_and_deterministic(self, capsys):
        code1, out1, _ = invoke(["selftest", "--seed", "3"], capsys)
        code2, out2, _ = invoke(["selftest", "--seed", "3"], capsys)
        assert code1 == code2 == 0
        assert out1 == out2
        assert json.loads(out1)["passed"] is True


class TestErrors:
    def test_domain_error_exit_1(self, capsys, tmp_path):
        swap = al.gamma_times_pure(2, 2)
        bad = al.Channel((2,), (2,), [[swap]], validate=False)
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(al.channel_to_json(bad)))
        code, out, err = invoke(["eval", str(path)], capsys)
        assert code == 1
        assert json.loads(err)["kind"] == "not-cp"

    def test_syntax_error_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.qc"
        path.write_text("H ;;")
        code, _, err = invoke(["eval", str(path)], capsys)
        assert code == 2
        assert json.loads(err)["kind"] == "syntax-error"

    def test_usage_error_exit_2(self, capsys):
        code, _, err = invoke(["compare", "only-one.qc"], capsys)
        assert code == 2
        assert json.loads(err)["kind"] == "usage-error"

    def test_missing_file(self, capsys):
        code, _, err = invoke(["eval", "nope.qc"], capsys)
        assert code == 2
        assert json.loads(err)["kind"] == "usage-error"

    def test_type_error_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.qc"
        path.write_text("H ; id[3]")
        code, _, err = invoke(["eval", str(path)], capsys)
        assert code == 2
        assert json.loads(err)["kind"] == "type-error"
