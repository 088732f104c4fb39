import csv
import json

import pytest

from shoprank.cli import (
    ConfigError,
    PipelineConfig,
    build_parser,
    main,
    parse_gains,
    resolve_config,
)
from shoprank.evaluation import GainMap

from mock_remote import MockScoreServer

PRODUCT_HEADER = [
    "product_id", "product_locale", "product_title", "product_description",
    "product_bullet_point", "product_brand", "product_color_name",
]
JUDGMENT_HEADER = ["query_id", "query", "query_locale", "product_id", "esci_label"]


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


@pytest.fixture
def corpus(tmp_path):
    products = tmp_path / "products.csv"
    judgments = tmp_path / "judgments.csv"
    write_csv(products, PRODUCT_HEADER, [
        ["B1", "us", "red running shoe", "<p>Lightweight &amp; breathable</p>",
         "mesh upper", "Acme", "red"],
        ["B2", "us", "blue wool hat", "", "", "Contoso", "blue"],
        ["B3", "us", "red shoe laces", "", "", "", ""],
        ["B4", "es", "zapato rojo", "", "", "", ""],
    ])
    write_csv(judgments, JUDGMENT_HEADER, [
        ["q1", "red shoe", "us", "B1", "Exact"],
        ["q1", "red shoe", "us", "B3", "Substitute"],
        ["q1", "red shoe", "us", "B2", "Irrelevant"],
        ["q2", "wool hat", "us", "B2", "Exact"],
        ["q2", "wool hat", "us", "B1", "Irrelevant"],
        ["q3", "zapato", "es", "B4", "Exact"],
        ["q4", "red laces", "us", "B1", "Exact"],
        ["q4", "red laces", "us", "B3", "Irrelevant"],
    ])
    return {"products": str(products), "judgments": str(judgments), "dir": tmp_path}


def rank_args(corpus, out_dir, *extra):
    return [
        "rank", "--products", corpus["products"], "--judgments", corpus["judgments"],
        "--out-dir", str(out_dir), *extra,
    ]


class TestParseGains:
    def test_string_form(self):
        gains = parse_gains("E=1.0,S=0.5,C=0.25,I=0.0")
        assert gains == GainMap(exact=1.0, substitute=0.5, complement=0.25, irrelevant=0.0)

    def test_partial_override_keeps_defaults(self):
        gains = parse_gains("S=0.2")
        assert gains.substitute == 0.2
        assert gains.exact == 1.0
        assert gains.complement == 0.01

    def test_dict_form_with_full_names(self):
        gains = parse_gains({"Exact": 2.0, "irrelevant": 0})
        assert gains.exact == 2.0
        assert gains.irrelevant == 0.0

    def test_keys_case_insensitive(self):
        assert parse_gains("e=0.9").exact == 0.9

    def test_gain_map_passthrough(self):
        gains = GainMap()
        assert parse_gains(gains) is gains

    @pytest.mark.parametrize("raw", ["X=1.0", "E:1.0", "E=abc", 42])
    def test_rejects_malformed(self, raw):
        with pytest.raises(ConfigError):
            parse_gains(raw)

    def test_rejects_disordered_result(self):
        with pytest.raises(ConfigError):
            parse_gains("I=5.0")


class TestPipelineConfig:
    @pytest.mark.parametrize("field", ["batch_size", "max_in_flight", "max_units", "k"])
    def test_rejects_non_positive(self, field):
        with pytest.raises(ConfigError):
            PipelineConfig(**{field: 0})

    def test_rejects_negative_retries(self):
        with pytest.raises(ConfigError):
            PipelineConfig(retries=-1)

    def test_rejects_unknown_scorer(self):
        with pytest.raises(ConfigError):
            PipelineConfig(scorer="oracle")


class TestResolveConfig:
    def parse(self, *argv):
        return build_parser().parse_args(["rank", *argv])

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("SHOPRANK_ENDPOINT", raising=False)
        config = resolve_config(self.parse())
        assert config.scorer == "lexical"
        assert config.batch_size == 16
        assert config.k == 20
        assert config.endpoint is None

    def test_flag_beats_file(self, tmp_path):
        config_file = tmp_path / "shoprank.toml"
        config_file.write_text('k = 5\nrun_tag = "filetag"\n')
        config = resolve_config(self.parse("--config", str(config_file), "--k", "7"))
        assert config.k == 7
        assert config.run_tag == "filetag"

    def test_file_beats_env_for_endpoint(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SHOPRANK_ENDPOINT", "http://env:1")
        config_file = tmp_path / "shoprank.toml"
        config_file.write_text('endpoint = "http://file:2"\n')
        assert resolve_config(self.parse("--config", str(config_file))).endpoint == "http://file:2"
        assert resolve_config(self.parse()).endpoint == "http://env:1"
        assert resolve_config(
            self.parse("--config", str(config_file), "--endpoint", "http://flag:3")
        ).endpoint == "http://flag:3"

    def test_gains_from_toml_table(self, tmp_path):
        config_file = tmp_path / "shoprank.toml"
        config_file.write_text("[gains]\nE = 1.0\nS = 0.4\n")
        assert resolve_config(self.parse("--config", str(config_file))).gains.substitute == 0.4

    def test_missing_config_file(self):
        with pytest.raises(ConfigError, match="not found"):
            resolve_config(self.parse("--config", "/nonexistent/shoprank.toml"))

    def test_invalid_toml(self, tmp_path):
        config_file = tmp_path / "shoprank.toml"
        config_file.write_text("k = [unclosed\n")
        with pytest.raises(ConfigError, match="TOML"):
            resolve_config(self.parse("--config", str(config_file)))


class TestValidateCommand:
    def test_clean_catalog_exits_zero(self, corpus, capsys):
        assert main(["validate", "--products", corpus["products"],
                     "--judgments", corpus["judgments"]]) == 0
        assert capsys.readouterr().out.strip()

    def test_dangling_judgment_exits_one(self, corpus, tmp_path, capsys):
        bad = tmp_path / "dangling.csv"
        write_csv(bad, JUDGMENT_HEADER, [["q9", "ghost", "us", "B9", "Exact"]])
        assert main(["validate", "--products", corpus["products"],
                     "--judgments", str(bad)]) == 1
        assert "B9" in capsys.readouterr().out


class TestRankCommand:
    def test_writes_run_and_submission(self, corpus, tmp_path):
        out_dir = tmp_path / "out"
        assert main(rank_args(corpus, out_dir)) == 0
        run_text = (out_dir / "run.trec").read_text()
        q1_products = [line.split()[2] for line in run_text.splitlines()
                       if line.startswith("q1 ")]
        assert q1_products == ["B1", "B3", "B2"]
        submission = (out_dir / "submission.csv").read_text()
        assert submission.splitlines()[0] == "query_id,product_id"

    def test_deterministic_across_runs(self, corpus, tmp_path):
        first = tmp_path / "a"
        second = tmp_path / "b"
        main(rank_args(corpus, first))
        main(rank_args(corpus, second))
        for name in ("run.trec", "submission.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_locale_filter(self, corpus, tmp_path):
        out_dir = tmp_path / "out"
        assert main(rank_args(corpus, out_dir, "--locale", "es")) == 0
        lines = (out_dir / "run.trec").read_text().splitlines()
        assert [line.split()[0] for line in lines] == ["q3"]

    def test_no_queries_writes_empty_run(self, corpus, tmp_path):
        out_dir = tmp_path / "out"
        assert main(rank_args(corpus, out_dir, "--locale", "jp")) == 0
        assert (out_dir / "run.trec").read_text() == ""

    def test_custom_run_tag(self, corpus, tmp_path):
        out_dir = tmp_path / "out"
        main(rank_args(corpus, out_dir, "--run-tag", "mytag"))
        first_line = (out_dir / "run.trec").read_text().splitlines()[0]
        assert first_line.endswith(" mytag")

    def test_remote_scorer_against_live_server(self, corpus, tmp_path):
        out_dir = tmp_path / "out"
        with MockScoreServer() as server:
            code = main(rank_args(corpus, out_dir, "--scorer", "remote",
                                  "--endpoint", server.url))
        assert code == 0
        assert (out_dir / "run.trec").read_text()

    def test_endpoint_from_environment(self, corpus, tmp_path, monkeypatch):
        out_dir = tmp_path / "out"
        with MockScoreServer() as server:
            monkeypatch.setenv("SHOPRANK_ENDPOINT", server.url)
            code = main(rank_args(corpus, out_dir, "--scorer", "remote"))
        assert code == 0

    def test_unavailable_scorer_exits_two(self, corpus, tmp_path, capsys):
        down = lambda request: {"status": 503, "body": b"down"}
        with MockScoreServer(script=down) as server:
            code = main(rank_args(corpus, tmp_path / "out", "--scorer", "remote",
                                  "--endpoint", server.url, "--retries", "0"))
        assert code == 2
        assert "ScorerUnavailable" in capsys.readouterr().err

    def test_remote_without_endpoint_exits_one(self, corpus, tmp_path, monkeypatch, capsys):
        monkeypatch.delenv("SHOPRANK_ENDPOINT", raising=False)
        code = main(rank_args(corpus, tmp_path / "out", "--scorer", "remote"))
        assert code == 1
        assert "--endpoint" in capsys.readouterr().err


class TestEvaluateCommand:
    def evaluate(self, corpus, out_dir, *extra):
        return main([
            "evaluate", str(out_dir / "run.trec"), "--judgments", corpus["judgments"],
            "--out-dir", str(out_dir), *extra,
        ])

    def test_prints_macro_and_writes_report(self, corpus, tmp_path, capsys):
        out_dir = tmp_path / "out"
        main(rank_args(corpus, out_dir))
        capsys.readouterr()
        assert self.evaluate(corpus, out_dir) == 0
        out = capsys.readouterr().out
        assert out.startswith("nDCG@20 ")
        macro = float(out.split()[1])
        assert 0.0 <= macro <= 1.0
        report = json.loads((out_dir / "eval.json").read_text())
        assert report["macro_mean"] == pytest.approx(macro, abs=1e-6)
        assert set(report["per_query"]) == {"q1", "q2", "q3", "q4"}

    def test_k_flag_changes_header(self, corpus, tmp_path, capsys):
        out_dir = tmp_path / "out"
        main(rank_args(corpus, out_dir))
        capsys.readouterr()
        self.evaluate(corpus, out_dir, "--k", "2")
        assert capsys.readouterr().out.startswith("nDCG@2 ")

    def test_gains_flag_changes_scores(self, corpus, tmp_path, capsys):
        out_dir = tmp_path / "out"
        main(rank_args(corpus, out_dir))
        capsys.readouterr()
        self.evaluate(corpus, out_dir)
        default_macro = capsys.readouterr().out.split()[1]
        self.evaluate(corpus, out_dir, "--gains", "E=1.0,S=1.0,C=1.0,I=1.0")
        flat_macro = capsys.readouterr().out.split()[1]
        assert flat_macro == "1.000000"
        assert default_macro != flat_macro

    def test_missing_run_file_exits_one(self, corpus, tmp_path, capsys):
        code = main(["evaluate", str(tmp_path / "missing.trec"),
                     "--judgments", corpus["judgments"]])
        assert code == 1
        assert capsys.readouterr().err.strip()


class TestExportTrainCommand:
    def test_prints_count_and_writes_jsonl(self, corpus, tmp_path, capsys):
        out_dir = tmp_path / "out"
        code = main(["export-train", "--products", corpus["products"],
                     "--judgments", corpus["judgments"], "--out-dir", str(out_dir)])
        assert code == 0
        assert capsys.readouterr().out.strip() == "8"
        rows = [json.loads(line)
                for line in (out_dir / "train.jsonl").read_text().splitlines()]
        assert len(rows) == 8
        assert {row["source_task"] for row in rows} == {"task1"}

    def test_second_task_merged(self, corpus, tmp_path, capsys):
        extra = tmp_path / "task2.csv"
        write_csv(extra, JUDGMENT_HEADER, [["t1", "laces", "us", "B3", "Exact"]])
        out_dir = tmp_path / "out"
        main(["export-train", "--products", corpus["products"],
              "--judgments", corpus["judgments"], "--judgments-task2", str(extra),
              "--out-dir", str(out_dir)])
        assert capsys.readouterr().out.strip() == "9"
        rows = [json.loads(line)
                for line in (out_dir / "train.jsonl").read_text().splitlines()]
        assert sum(1 for row in rows if row["source_task"] == "task2") == 1


class TestErrorReporting:
    def test_missing_required_flag(self, corpus, capsys):
        assert main(["rank", "--judgments", corpus["judgments"]]) == 1
        assert "--products" in capsys.readouterr().err

    def test_malformed_csv_exits_one(self, corpus, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("query_id,query\nq1,red shoe\n")
        code = main(["rank", "--products", corpus["products"],
                     "--judgments", str(bad)])
        assert code == 1
        assert "MissingColumn" in capsys.readouterr().err

    def test_missing_input_file_exits_one(self, corpus, tmp_path, capsys):
        code = main(["rank", "--products", str(tmp_path / "nope.csv"),
                     "--judgments", corpus["judgments"]])
        assert code == 1
        assert "FileNotFoundError" in capsys.readouterr().err

    def test_bad_gains_flag(self, corpus, capsys):
        code = main(["evaluate", "run.trec", "--judgments", corpus["judgments"],
                     "--gains", "E=abc"])
        assert code == 1
        assert "ConfigError" in capsys.readouterr().err

    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--help"])
        assert excinfo.value.code == 0
        assert "export-train" in capsys.readouterr().out
