"""Report assembly, canonical JSON, and the enumeration cache."""

import json
import math
from fractions import Fraction

import pytest

from coxinv.building import ThicknessVector
from coxinv.cache import (cached_layer_counts, load_layers, store_layers)
from coxinv.report import (build_report, decode_json_value,
                           encode_json_value, report_from_json,
                           report_to_json, report_to_text)


@pytest.fixture(scope="module")
def pentagon_report(pentagon):
    q = ThicknessVector.constant(pentagon, 2)
    return build_report(pentagon, thickness=q, depth=8)


class TestEncoding:
    def test_infinity_tokens(self):
        x = {"a": math.inf, "b": [-math.inf, 1.5], "c": "plain"}
        enc = encode_json_value(x)
        assert enc == {"a": "Infinity", "b": ["-Infinity", 1.5], "c": "plain"}
        assert decode_json_value(enc) == x

    def test_fraction_rendering(self):
        assert encode_json_value(Fraction(3, 2)) == "3/2"
        assert encode_json_value(Fraction(4, 2)) == "2"

    def test_round_trip_is_identity_on_reports(self, pentagon_report):
        j = report_to_json(pentagon_report)
        assert report_from_json(j) == pentagon_report
        # canonical form: re-serializing parsed JSON gives the same bytes
        assert json.dumps(json.loads(j), sort_keys=True,
                          separators=(",", ":")) == j


class TestReportContent:
    def test_sections_present(self, pentagon_report):
        for key in ("system", "classification", "nerve", "type_pm", "vcd",
                    "bestvina", "hyperbolic", "growth", "building",
                    "confdim", "parameters"):
            assert key in pentagon_report

    def test_headline_values(self, pentagon_report):
        r = pentagon_report
        assert r["system"]["right_angled"] is True
        assert r["vcd"]["value"] == 2
        assert r["type_pm"]["is_pm"] is True
        assert r["hyperbolic"]["verdict"] is True
        assert r["confdim"]["fuchsian"] is True
        assert r["confdim"]["lower"] == r["confdim"]["upper"]
        e = math.log((3 + math.sqrt(5)) / 2) / math.log(2)
        assert abs(r["building"]["exponents"]["p_cohom"] - (1 + 1 / e)) < 1e-6
        assert r["growth"]["layer_sizes"][:5] == [1, 5, 15, 40, 105]

    def test_no_timings_by_default(self, pentagon_report):
        assert "timings" not in pentagon_report

    def test_timings_on_request(self, pentagon):
        q = ThicknessVector.constant(pentagon, 2)
        r = build_report(pentagon, thickness=q, depth=6, timings=True)
        assert "timings" in r and r["timings"]

    def test_determinism_in_process(self, pentagon, pentagon_report):
        q = ThicknessVector.constant(pentagon, 2)
        again = build_report(pentagon, thickness=q, depth=8)
        assert report_to_json(again) == report_to_json(pentagon_report)

    def test_affine_building_has_infinity_token(self, triangle_333):
        q = ThicknessVector.constant(triangle_333, 2)
        r = build_report(triangle_333, thickness=q, depth=6)
        j = report_to_json(r)
        assert '"Infinity"' in j
        assert report_from_json(j)["building"]["exponents"]["p_cohom"] == math.inf
        assert r["confdim"]["error"]["type"] == "NotHyperbolic"

    def test_commuting_pair_witness_in_report(self, square_product):
        q = ThicknessVector.constant(square_product, 2)
        r = build_report(square_product, thickness=q, depth=6)
        assert r["hyperbolic"]["verdict"] is False
        w = r["hyperbolic"]["witness"]
        assert w["kind"] == "CommutingInfinitePair"
        assert w["first"] == [0, 2] and w["second"] == [1, 3]

    def test_no_thickness_skips_building(self, a2):
        r = build_report(a2, depth=6)
        assert r["building"] is None and r["confdim"] is None
        assert r["classification"]["order"] == 6
        assert r["growth"]["rate"]["exact"] is True

    def test_text_rendering(self, pentagon_report):
        txt = report_to_text(pentagon_report)
        assert "vcd_R: 2" in txt
        assert "confdim: 1.7202100449769393 (exact, FuchsianExact)" in txt
        assert "hyperbolic: yes" in txt
        assert txt.endswith("\n")


class TestCache:
    def test_miss_on_empty(self, tmp_path, pentagon):
        assert load_layers(tmp_path, pentagon.digest(), 4) is None

    def test_store_and_slice(self, tmp_path):
        layers = [{(0,): 1}, {(1,): 3}, {(2,): 5}, {(3,): 9}]
        store_layers(tmp_path, "d1", 3, layers, "bfs")
        got, method = load_layers(tmp_path, "d1", 2)
        assert method == "bfs"
        assert got == layers[:3]
        assert load_layers(tmp_path, "d1", 5) is None    # too shallow
        assert load_layers(tmp_path, "other", 2) is None

    def test_deepest_record_wins(self, tmp_path):
        store_layers(tmp_path, "d1", 1, [{(0,): 1}, {(1,): 3}], "bfs")
        store_layers(tmp_path, "d1", 2,
                     [{(0,): 1}, {(1,): 3}, {(2,): 5}], "recurrence")
        got, method = load_layers(tmp_path, "d1", 1)
        assert len(got) == 2 and method == "recurrence"

    def test_corrupt_lines_skipped(self, tmp_path):
        store_layers(tmp_path, "d1", 1, [{(0,): 1}, {(1,): 3}], "bfs")
        path = tmp_path / "layers.jsonl"
        content = path.read_text()
        path.write_text("not json at all\n" + '{"v": 99, "digest": "d1"}\n'
                        + content + '{"v": 1, "digest": "d1", "radius": 9'.strip())
        got, _ = load_layers(tmp_path, "d1", 1)
        assert got == [{(0,): 1}, {(1,): 3}]

    def test_cached_layer_counts_round_trip(self, tmp_path, pentagon):
        cold, src_cold = cached_layer_counts(pentagon, 6, cache_dir=tmp_path)
        warm, src_warm = cached_layer_counts(pentagon, 6, cache_dir=tmp_path)
        assert cold == warm and src_cold == src_warm
        shallow, _ = cached_layer_counts(pentagon, 4, cache_dir=tmp_path)
        assert shallow == cold[:5]

    def test_cache_dir_none_is_passthrough(self, pentagon):
        layers, src = cached_layer_counts(pentagon, 4, cache_dir=None)
        assert sum(layers[4].values()) == 105
