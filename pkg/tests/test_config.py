# tests/test_config.py
import json

import pytest

from pntap.cli import build_parser
from pntap.config import RunConfig, build_config_from_args, load_config_file, merge_config
from pntap.errors import DomainError


def test_defaults_validate():
    cfg = merge_config()
    assert cfg.format == "json"
    assert cfg.seed == 42
    assert cfg.settings().t_cap == cfg.t_cap


def test_flags_override_file():
    cfg = merge_config({"seed": 1, "q_cap": 50}, {"seed": 7, "q_cap": None})
    assert cfg.seed == 7
    assert cfg.q_cap == 50
    assert cfg.settings().q_cap == 50


def test_nested_eval_settings():
    cfg = merge_config({"eval": {"euler_maclaurin_terms": 80}})
    assert cfg.eval.euler_maclaurin_terms == 80
    assert cfg.eval.bernoulli_order == 30


def test_invalid_values():
    with pytest.raises(DomainError):
        merge_config(overrides={"format": "xml"})
    with pytest.raises(DomainError):
        merge_config(overrides={"q_cap": 0})
    with pytest.raises(DomainError):
        merge_config({"eval": {"target_abs_error": 1e-16}})


def test_config_file_rejects_unknown_keys(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"seed": 3, "colour": "red"}))
    with pytest.raises(DomainError):
        load_config_file(str(p))
    p.write_text(json.dumps({"eval": {"nope": 1}}))
    with pytest.raises(DomainError):
        load_config_file(str(p))


def test_public_drops_machine_fields():
    pub = RunConfig(threads=8, out="x.json").public()
    for k in ("threads", "out", "quiet", "log_level", "cache_dir"):
        assert k not in pub
    assert pub["eval"]["t_cap"] == 200.0


def test_config_from_parsed_args(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"seed": 3, "q_cap": 77, "format": "csv"}))
    args = build_parser().parse_args(["aconst", "powersum", "--config", str(p), "--seed", "9"])
    cfg = build_config_from_args(args)
    assert (cfg.seed, cfg.q_cap, cfg.format) == (9, 77, "csv")
