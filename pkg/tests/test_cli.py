import json

import pytest

from tableqa.cli import main


class TestIngest:
    def test_workspace_layout(self, cli_workspace):
        tables = list((cli_workspace / "tables").iterdir())
        assert len(tables) >= 40
        assert (cli_workspace / "table_kinds.txt").exists()

    def test_transposed_table_written(self, cli_workspace):
        text = (cli_workspace / "tables" / "whoopi-goldberg.csv").read_text()
        assert text.splitlines()[0].startswith("spouse,born")

    def test_ingest_with_trained_model(self, cli_workspace, fixtures_dir,
                                       tmp_path, capsys):
        fx = str(fixtures_dir)
        ws2 = tmp_path / "ws2"
        code = main(["ingest", "--tables", f"{fx}/tables",
                     "--table-type-model",
                     str(cli_workspace / "models" / "table-type.model"),
                     "--workspace", str(ws2)])
        assert code == 0
        assert "ingested" in capsys.readouterr().out

    def test_ingest_requires_kind_source(self, fixtures_dir, tmp_path, capsys):
        code = main(["ingest", "--tables", f"{fixtures_dir}/tables",
                     "--workspace", str(tmp_path / "ws3")])
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestTrain:
    def test_models_written(self, cli_workspace):
        for task in ("table-type", "column-type", "select", "where"):
            assert (cli_workspace / "models" / f"{task}.model").exists()

    def test_same_seed_byte_identical(self, cli_workspace, fixtures_dir,
                                      tmp_path):
        fx = str(fixtures_dir)
        out1 = tmp_path / "a.model"
        out2 = tmp_path / "b.model"
        for out in (out1, out2):
            assert main(["train", "--task", "select",
                         "--workspace", str(cli_workspace),
                         "--manifest", f"{fx}/manifest.txt",
                         "--embeddings", f"{fx}/pipeline.vec",
                         "--seed", "7", "--epochs", "40",
                         "--out", str(out)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_different_seed_differs(self, cli_workspace, fixtures_dir, tmp_path):
        fx = str(fixtures_dir)
        out1 = tmp_path / "s1.model"
        out2 = tmp_path / "s2.model"
        for seed, out in ((1, out1), (2, out2)):
            assert main(["train", "--task", "column-type",
                         "--workspace", str(cli_workspace),
                         "--labels", f"{fx}/column_labels.txt",
                         "--seed", str(seed), "--epochs", "20",
                         "--out", str(out)]) == 0
        assert out1.read_bytes() != out2.read_bytes()

    def test_missing_inputs_is_validation_error(self, cli_workspace, capsys):
        code = main(["train", "--task", "select",
                     "--workspace", str(cli_workspace)])
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestRetrieve:
    def test_ranks_gold_table_first(self, cli_workspace, capsys):
        code = main(["retrieve", "--workspace", str(cli_workspace),
                     "--question", "What is the capital of Louisiana?",
                     "--sim", "cosine", "--k", "3"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].split()[1] == "state-capitals"


class TestAsk:
    def test_husband_question_golden_scope(self, cli_workspace, fixtures_dir,
                                           capsys):
        fx = str(fixtures_dir)
        code = main(["ask", "Who is the husband of Whoopi Goldberg?",
                     "--workspace", str(cli_workspace),
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--manifest", f"{fx}/manifest.txt",
                     "--scope", "golden"])
        assert code == 0
        out = capsys.readouterr().out
        assert "Lyle Trachtenberg" in out
        assert 'SELECT "spouse" FROM "whoopi-goldberg"' in out
        assert "gold: match" in out

    def test_full_pipeline_with_retrieval(self, cli_workspace, fixtures_dir,
                                          capsys):
        fx = str(fixtures_dir)
        code = main(["ask", "What is the capital of Louisiana?",
                     "--workspace", str(cli_workspace),
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--manifest", f"{fx}/manifest.txt",
                     "--scope", "all", "--sim", "cosine"])
        assert code == 0
        out = capsys.readouterr().out
        assert "table: state-capitals" in out
        assert "Baton Rouge" in out
        assert "gold: match" in out

    def test_golden_scope_needs_manifest_question(self, cli_workspace,
                                                  fixtures_dir, capsys):
        fx = str(fixtures_dir)
        code = main(["ask", "Entirely novel question?",
                     "--workspace", str(cli_workspace),
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--manifest", f"{fx}/manifest.txt",
                     "--scope", "golden"])
        assert code == 1

    def test_repl(self, cli_workspace, fixtures_dir, capsys, monkeypatch):
        import io

        fx = str(fixtures_dir)
        monkeypatch.setattr(
            "sys.stdin",
            io.StringIO("What is the capital of Texas?\n\n"),
        )
        code = main(["ask", "--repl",
                     "--workspace", str(cli_workspace),
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--manifest", f"{fx}/manifest.txt",
                     "--scope", "golden"])
        assert code == 0
        assert "Austin" in capsys.readouterr().out


class TestEval:
    def test_select_json(self, cli_workspace, fixtures_dir, capsys):
        fx = str(fixtures_dir)
        code = main(["eval", "--task", "select",
                     "--workspace", str(cli_workspace),
                     "--manifest", f"{fx}/manifest.txt",
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--split", "train", "--format", "json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["task"] == "select"
        assert set(payload["confusion"]) == {"tp", "fp", "fn", "tn"}
        assert 0.0 <= payload["accuracy"] <= 1.0

    def test_table_type_text(self, cli_workspace, fixtures_dir, capsys):
        fx = str(fixtures_dir)
        code = main(["eval", "--task", "table-type",
                     "--workspace", str(cli_workspace),
                     "--tables", f"{fx}/tables", "--kinds",
                     f"{fx}/table_types.txt"])
        assert code == 0
        assert "accuracy" in capsys.readouterr().out

    def test_retrieval_json(self, cli_workspace, fixtures_dir, capsys):
        fx = str(fixtures_dir)
        code = main(["eval", "--task", "retrieval",
                     "--workspace", str(cli_workspace),
                     "--manifest", f"{fx}/manifest.txt",
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--format", "json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert "p@1" in payload["cosine"]["p_at_k"]


class TestReports:
    def test_eval_writes_workspace_report(self, cli_workspace, fixtures_dir,
                                          capsys):
        fx = str(fixtures_dir)
        assert main(["eval", "--task", "where",
                     "--workspace", str(cli_workspace),
                     "--manifest", f"{fx}/manifest.txt",
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--split", "train"]) == 0
        capsys.readouterr()
        saved = cli_workspace / "reports" / "where-train.json"
        assert saved.exists()
        payload = json.loads(saved.read_text())
        assert payload["task"] == "where"


class TestPipelineEval:
    def test_json_grid(self, cli_workspace, fixtures_dir, capsys):
        fx = str(fixtures_dir)
        code = main(["pipeline-eval", "--workspace", str(cli_workspace),
                     "--manifest", f"{fx}/manifest.txt",
                     "--embeddings", f"{fx}/pipeline.vec",
                     "--split", "dev", "--format", "json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        for scope in ("golden", "individual", "all"):
            for mode in ("wordmatch", "embedding"):
                assert "f1" in payload[scope][mode]


class TestUsageErrors:
    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["definitely-not-a-command"])
        assert exc.value.code == 2

    def test_no_arguments_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
