import pytest

from contourgraph.config import Config, load_config, parse_config
from contourgraph.errors import ConfigError


class TestParsing:
    def test_defaults_without_file(self):
        cfg = Config()
        assert cfg.get_float("vectorize.threshold") == 0.5
        assert cfg.budget_seconds() == 2.0
        assert cfg.classes() == ["1", "2", "3", "6", "7", "9"]

    def test_comments_and_blanks_ignored(self):
        cfg = parse_config("# top\n\nbudget_ms = 500 # trailing\n")
        assert cfg.budget_seconds() == 0.5

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config("vectorize.thresold = 0.5\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("just some words\n")

    def test_dynamic_concept_keys(self):
        cfg = parse_config("concept.3_1 = 0, 1, 2\nconcept.9_2 = 4,5\n")
        assert cfg.concept_groups() == {"3_1": [0, 1, 2], "9_2": [4, 5]}

    def test_bad_concept_indices(self):
        cfg = parse_config("concept.3_1 = a,b\n")
        with pytest.raises(ConfigError):
            cfg.concept_groups()


class TestSections:
    def test_reduction_settings(self):
        cfg = parse_config("reduction.endpoint_sim_threshold = 0.35\nreduction.max_simple_paths = 8\n")
        st = cfg.reduction_settings()
        assert st.endpoint_sim_threshold == 0.35
        assert st.max_simple_paths == 8
        assert st.w_pos == 0.7

    def test_cost_config_with_attr_weights(self):
        cfg = parse_config("ged.edge_insert_cost = 0.2\nged.attr_weight.length = 2.0\n")
        cost = cfg.cost_config()
        assert cost.edge_insert_cost == 0.2
        assert cost.weight("length") == 2.0
        assert cost.weight("angle") == 0.5

    def test_shipped_config_parses(self):
        cfg = load_config("configs/synth.cfg")
        assert set(cfg.concept_groups()) == {
            "1_1", "1_2", "2_1", "2_2", "3_1", "6_1", "7_1", "9_1"
        }
        assert cfg.cost_config().infinity == 1e9
