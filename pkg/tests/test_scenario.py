"""Scenario schema: parsing, validation, canonical round trip."""

import json

import pytest

from affineswarm import (
    ConfigError,
    ScenarioError,
    load_default_scenario,
    parse_scenario,
    scenario_sha256,
    serialize_scenario,
)
from affineswarm.scenario import default_scenario_text


class TestDefaultScenario:
    def test_parses_with_expected_layout(self):
        s = load_default_scenario()
        assert s.name == "default"
        assert s.config.z == 1.0
        assert s.config.leader_ids == ("cf1", "cf5", "cf6")
        assert s.config.follower_ids == ("cf2", "cf3", "cf4")
        by_id = {a.id: (a.x, a.y) for a in s.config.agents}
        assert by_id == {
            "cf1": (0.0, 0.75),
            "cf2": (0.0, 0.25),
            "cf3": (-0.25, -0.25),
            "cf4": (0.25, -0.25),
            "cf5": (-0.5, -0.75),
            "cf6": (0.5, -0.75),
        }

    def test_schedule_shape(self):
        s = load_default_scenario()
        assert len(s.schedule.phases) == 3
        assert s.schedule.t_start == 0.0
        assert s.schedule.t_end == 30.0
        assert s.schedule.translation.end == (4.0, 0.0)
        assert s.params.duration == 40.0
        assert s.corridor is not None
        assert s.corridor.width == 1.2

    def test_safety_parameters(self):
        s = load_default_scenario()
        assert s.safety.agent_radius == 0.065
        assert s.safety.delta_budget == 0.01


class TestRoundTrip:
    def test_parse_serialize_parse_is_identity(self):
        s = load_default_scenario()
        again = parse_scenario(serialize_scenario(s))
        assert again == s

    def test_hash_is_stable(self):
        s1 = load_default_scenario()
        s2 = parse_scenario(default_scenario_text())
        assert scenario_sha256(s1) == scenario_sha256(s2)
        assert scenario_sha256(parse_scenario(serialize_scenario(s1))) == scenario_sha256(s1)


def minimal_doc():
    return json.loads(default_scenario_text())


class TestParseErrors:
    def test_empty_document_lists_required_sections(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario("{}")
        message = str(exc.value)
        for section in ("agents", "graph", "phases"):
            assert section in message

    def test_syntax_error_carries_line_number(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario('{\n  "agents": [,]\n}', source="bad.json")
        assert exc.value.errors[0].startswith("bad.json:2:")

    def test_unknown_top_level_key_rejected(self):
        doc = minimal_doc()
        doc["frobnicate"] = 1
        with pytest.raises(ScenarioError, match="frobnicate"):
            parse_scenario(json.dumps(doc))

    def test_unknown_nested_key_rejected(self):
        doc = minimal_doc()
        doc["phases"][0]["start"]["lambda3"] = 1.0
        with pytest.raises(ScenarioError, match="lambda3"):
            parse_scenario(json.dumps(doc))

    def test_four_leaders_is_config_error(self):
        doc = minimal_doc()
        for agent in doc["agents"]:
            if agent["id"] == "cf2":
                agent["role"] = "leader"
        with pytest.raises(ConfigError, match="role-count"):
            parse_scenario(json.dumps(doc))

    def test_bad_role_rejected(self):
        doc = minimal_doc()
        doc["agents"][0]["role"] = "captain"
        with pytest.raises(ScenarioError, match="role"):
            parse_scenario(json.dumps(doc))

    def test_non_contiguous_phases_rejected(self):
        doc = minimal_doc()
        doc["phases"][1]["t0"] = 11.0
        with pytest.raises(ScenarioError, match="phases"):
            parse_scenario(json.dumps(doc))

    def test_errors_accumulate(self):
        doc = minimal_doc()
        doc["agents"][0].pop("x")
        doc["corridor"]["width"] = "wide"
        doc["extra"] = {}
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(json.dumps(doc))
        assert len(exc.value.errors) >= 3

    def test_degenerate_graph_rejected(self):
        # A triple containing both cf2 and cf5 is collinear with cf3.
        doc = minimal_doc()
        doc["graph"]["cf3"] = ["cf2", "cf4", "cf5"]
        with pytest.raises(ConfigError, match="containment"):
            parse_scenario(json.dumps(doc))

    def test_non_numeric_coordinate_rejected(self):
        doc = minimal_doc()
        doc["agents"][2]["x"] = "left"
        with pytest.raises(ScenarioError, match="number"):
            parse_scenario(json.dumps(doc))

    def test_sim_section_validation(self):
        doc = minimal_doc()
        doc["sim"]["dt"] = 0.003  # not an integer divisor of the period
        with pytest.raises(ScenarioError, match="integer multiple"):
            parse_scenario(json.dumps(doc))
