"""Configuration loading/validation and the CSV/manifest writers."""

import csv
import hashlib
import json
import math

import numpy as np
import pytest

from regenboot.config import (DEFAULT_N_LIST, ExperimentConfig, config_from_dict,
                              load_config)
from regenboot.errors import ConfigError
from regenboot.tables import (RunManifest, format_cell, sha256_file, write_csv,
                              write_manifest)


class TestConfigDefaults:
    def test_empty_dict_gives_defaults(self):
        cfg = config_from_dict({})
        assert cfg == ExperimentConfig()
        assert cfg.n_list == DEFAULT_N_LIST
        assert cfg.level == 0.95
        assert cfg.method == "both"

    def test_defaults_validate(self):
        ExperimentConfig().validate()

    def test_round_trip_through_json(self):
        cfg = ExperimentConfig()
        reloaded = config_from_dict(json.loads(json.dumps(cfg.to_dict())))
        assert reloaded == cfg

    def test_partial_dict_fills_rest(self):
        cfg = config_from_dict({"n": 50, "level": 0.9})
        assert cfg.n == 50
        assert cfg.level == 0.9
        assert cfg.chains == ExperimentConfig().chains

    def test_zero_horizon_is_allowed(self):
        # a zero-step simulation is meaningful: just the start state
        assert config_from_dict({"n": 0}).n == 0

    def test_methods_property(self):
        assert config_from_dict({"method": "both"}).methods == ("rbb", "rgb")
        assert config_from_dict({"method": "rbb"}).methods == ("rbb",)
        assert config_from_dict({"method": "rgb"}).methods == ("rgb",)


class TestConfigValidation:
    @pytest.mark.parametrize("key,value", [
        ("n", -1), ("n", True), ("n", 2.5),
        ("n_list", []), ("n_list", [0]), ("n_list", [1000, -5]), ("n_list", 7),
        ("chains", 0), ("chains", True),
        ("boot_reps", 0),
        ("workers", 0),
        ("level", 1.5), ("level", 0.0), ("level", True), ("level", "high"),
        ("beta", 1.2), ("beta", 0.0),
        ("l_const", 0.0), ("l_const", -1.0),
        ("master_seed", -1), ("master_seed", 2 ** 64), ("master_seed", True),
        ("method", "jackknife"),
        ("f", "cube"),
        ("max_moment", 7), ("max_moment", -1),
        ("include_normal", "yes"),
        ("studentize", "weird"),
        ("figures", "yes"),
    ])
    def test_bad_value_names_the_field(self, key, value):
        with pytest.raises(ConfigError, match=key):
            config_from_dict({key: value})

    def test_unknown_keys_listed_sorted(self):
        with pytest.raises(ConfigError, match="lvl, seed"):
            config_from_dict({"seed": 3, "lvl": 0.9})

    def test_top_level_must_be_object(self):
        with pytest.raises(ConfigError, match="object"):
            config_from_dict([1, 2, 3])


class TestConfigFile:
    def test_load_happy_path(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"n": 123, "method": "rgb"}', encoding="utf-8")
        cfg = load_config(path)
        assert cfg.n == 123 and cfg.method == "rgb"

    def test_parse_error_carries_line_info(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "n": 5,\n}', encoding="utf-8")
        with pytest.raises(ConfigError, match="line 3"):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.json")

    def test_validation_error_names_source_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"zzz": 1}', encoding="utf-8")
        with pytest.raises(ConfigError, match="zzz"):
            load_config(path)


class TestFormatCell:
    def test_integers_verbatim(self):
        assert format_cell(3) == "3"
        assert format_cell(-40) == "-40"
        assert format_cell(np.int64(7)) == "7"

    def test_booleans_lowercase(self):
        assert format_cell(True) == "true"
        assert format_cell(np.bool_(False)) == "false"

    def test_floats_round_trip(self):
        for v in (0.1, 1.0 / 3.0, math.pi, 1e-17, -2.5e300, 0.0):
            assert float(format_cell(v)) == v
        assert format_cell(np.float64(0.25)) == "0.25"

    def test_strings_escaped(self):
        assert format_cell("plain") == "plain"
        assert format_cell("a,b") == '"a,b"'
        assert format_cell('say "hi"') == '"say ""hi"""'

    def test_unsupported_type(self):
        with pytest.raises(TypeError, match="complex"):
            format_cell(1 + 2j)


class TestWriteCsv:
    def test_header_only_for_empty_rows(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv(path, ["a", "b"], [])
        assert path.read_bytes() == b"a,b\n"

    def test_lf_endings_no_cr(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(path, ["x"], [(1,), (2,)])
        data = path.read_bytes()
        assert b"\r" not in data
        assert data == b"x\n1\n2\n"

    def test_floats_round_trip_through_file(self, tmp_path):
        values = [0.1, 1.0 / 3.0, math.pi, 1e-300, -7.25]
        path = tmp_path / "f.csv"
        write_csv(path, ["v"], [(v,) for v in values])
        with open(path, newline="", encoding="utf-8") as fh:
            got = [float(row["v"]) for row in csv.DictReader(fh)]
        assert got == values

    def test_quoting_survives_csv_reader(self, tmp_path):
        path = tmp_path / "q.csv"
        write_csv(path, ["name,with,commas", "note"],
                  [("a,b", 'line\nbreak and "quote"')])
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["name,with,commas", "note"]
        assert rows[1] == ["a,b", 'line\nbreak and "quote"']

    def test_generator_rows(self, tmp_path):
        path = tmp_path / "g.csv"
        write_csv(path, ["i"], ((i,) for i in range(3)))
        assert path.read_text(encoding="utf-8") == "i\n0\n1\n2\n"

    def test_io_error_names_path(self, tmp_path):
        with pytest.raises(OSError, match="writing"):
            write_csv(tmp_path, ["a"], [])


class TestManifest:
    def make(self):
        return RunManifest(master_seed=7, experiment="demo", config={"n": 5},
                           tool_version="0.1.0", started_at="2024-01-01T00:00:00+00:00")

    def test_output_hash_matches_file(self, tmp_path):
        data = tmp_path / "data.csv"
        write_csv(data, ["v"], [(0.1,)])
        manifest = self.make()
        manifest.add_output(data)
        rec = manifest.outputs[0]
        assert rec["name"] == "data.csv"
        assert rec["sha256"] == hashlib.sha256(data.read_bytes()).hexdigest()
        assert rec["sha256"] == sha256_file(data)

    def test_write_is_atomic_and_parses(self, tmp_path):
        manifest = self.make()
        manifest.finished_at = "2024-01-01T00:00:05+00:00"
        path = tmp_path / "manifest.json"
        write_manifest(path, manifest)
        assert not (tmp_path / "manifest.json.tmp").exists()
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["master_seed"] == 7
        assert payload["experiment"] == "demo"
        assert payload["config"] == {"n": 5}
        assert payload["started_at"] and payload["finished_at"]

    def test_extra_section_only_when_present(self, tmp_path):
        path = tmp_path / "m.json"
        write_manifest(path, self.make())
        assert "extra" not in json.loads(path.read_text(encoding="utf-8"))
        manifest = self.make()
        manifest.extra = {"ks": 0.1}
        write_manifest(path, manifest)
        assert json.loads(path.read_text(encoding="utf-8"))["extra"] == {"ks": 0.1}

    def test_timestamps_live_only_in_manifest(self, tmp_path):
        # the data file written alongside carries nothing time-dependent
        data = tmp_path / "data.csv"
        write_csv(data, ["v"], [(1,)])
        assert data.read_bytes() == b"v\n1\n"
