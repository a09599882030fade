import json
from math import prod

import pytest

from looijenga.oracle import dp3_closed_form
from looijenga.correspondence import ContactData, log_from_open
from looijenga.partitions import EMPTY, Partition, enumerate_partitions
from looijenga.qalgebra import HalfLaurent, Phased, QRational
from looijenga.schur import h_spec, vertex_amplitude
from looijenga import strip
from looijenga.strip import (DP3_0_2, PRESETS, GeometryError, StripGeometry, box,
                             closed_string_coefficient, connected_open_series, edge_factor,
                             invert_w_empty, load_geometry, open_amplitude_coefficient)

GOLDEN = __import__("pathlib").Path(__file__).parent / "golden"
P = Partition


def single_edge(deg=-1):
    return StripGeometry(brane_edge_degree=-1, edges=((deg, (1,)),), brane_class_vector=(0,),
                         class_map=((1, 0), (0, 1)))


class TestGeometry:
    def test_preset_registry(self):
        assert load_geometry("dp3-0-2") is DP3_0_2
        assert PRESETS["dp3-0-2"].normal_degrees == (-1, -2, -1)

    def test_file_round_trip(self):
        g = load_geometry(str(GOLDEN / "dp3_geometry.json"))
        assert g == DP3_0_2
        assert hash(g) == hash(DP3_0_2)

    def test_class_map(self):
        assert DP3_0_2.surface_class(1, (1, 1, 0)) == (1, 1, 1, 0)
        assert DP3_0_2.surface_class(1, (1, 1, 1)) == (1, 1, 1, 1)
        assert DP3_0_2.open_class((2, 3, 1, 1)) == (3, (2, 1, 0))
        assert DP3_0_2.open_class((1, 1, 0, 0)) == (1, (1, 0, -1))
        assert DP3_0_2.d2_dot((1, 1, 1, 0)) == 1

    def test_dependent_edges_rejected(self):
        with pytest.raises(GeometryError, match="linearly dependent"):
            StripGeometry(-1, ((-1, (1, 0)), (-1, (2, 0))), (0, 1), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def test_class_map_rank(self):
        with pytest.raises(GeometryError, match="column rank"):
            StripGeometry(-1, ((-1, (1,)),), (0,), ((1, 1), (2, 2)))
        with pytest.raises(GeometryError, match="columns"):
            StripGeometry(-1, ((-1, (1,)),), (0,), ((1,),))

    def test_schema_errors(self, tmp_path):
        obj = DP3_0_2.to_json_obj()
        del obj["edges"]
        path = tmp_path / "g.json"
        path.write_text(json.dumps(obj))
        with pytest.raises(GeometryError, match="missing field 'edges'"):
            load_geometry(str(path))
        obj = DP3_0_2.to_json_obj()
        obj["edges"][1]["normal_degree"] = "minus two"
        path.write_text(json.dumps(obj))
        with pytest.raises(GeometryError, match=r"edges\[1\].normal_degree"):
            load_geometry(str(path))

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "brane_edge_degree": -1,\n  "edges": [\n}')
        with pytest.raises(GeometryError, match="line 4"):
            load_geometry(str(path))

    def test_missing_file(self):
        with pytest.raises(GeometryError):
            load_geometry("no-such-geometry")


class TestAmplitudes:
    def test_edge_factor(self):
        # degree -1: sign only, no q-power
        assert edge_factor(-1, P([2, 1])) == QRational(-1)
        assert edge_factor(-1, P([2, 1, 1])) == QRational(1)
        assert edge_factor(-2, P([2])) == QRational(HalfLaurent.monomial(2))
        assert edge_factor(0, P([3])) == QRational(HalfLaurent.monomial(-6))

    def test_zero_class_is_one(self):
        assert closed_string_coefficient(DP3_0_2, (0, 0, 0)) == QRational(1)
        assert closed_string_coefficient(single_edge(), (0,)) == QRational(1)
        assert open_amplitude_coefficient(DP3_0_2, EMPTY, (0, 0, 0)) == QRational(1)

    def test_single_edge_value(self):
        # one tuple mu_1 = (1): -W_{(1),0} W_{0,(1)} = -h_1^2
        v = closed_string_coefficient(single_edge(), (1,))
        assert v == -(vertex_amplitude(P([1]), EMPTY) * vertex_amplitude(EMPTY, P([1])))
        assert v == -(h_spec(1) ** 2)

    def test_negative_class_rejected(self):
        with pytest.raises(GeometryError):
            closed_string_coefficient(DP3_0_2, (1, -1, 0))

    def test_tuple_counts(self):
        for c in box((2, 2, 2)):
            if sum(c) > 6:
                continue
            strip.clear_caches()
            strip.tuple_counter.count = 0
            open_amplitude_coefficient(DP3_0_2, P([1]), c)
            assert strip.tuple_counter.count == prod(len(enumerate_partitions(x)) for x in c)
        strip.clear_caches()
        strip.tuple_counter.count = 0
        open_amplitude_coefficient(DP3_0_2, P([2, 1]), (3, 1, 2))
        assert strip.tuple_counter.count == 3 * 1 * 2

    def test_inverse_examples(self):
        inv = invert_w_empty(DP3_0_2, (1, 1, 0))
        w = lambda c: closed_string_coefficient(DP3_0_2, c)
        assert inv[(0, 0, 0)] == QRational(1)
        assert inv[(1, 0, 0)] == -w((1, 0, 0))
        assert inv[(1, 1, 0)] == -w((1, 1, 0)) + QRational(2) * w((1, 0, 0)) * w((0, 1, 0))

    def test_division_consistency(self):
        bound = (2, 2, 2)
        inv = invert_w_empty(DP3_0_2, bound)
        for c in box(bound):
            total = QRational(0)
            for a in box(c):
                rest = tuple(x - y for x, y in zip(c, a))
                total = total + closed_string_coefficient(DP3_0_2, a) * inv[rest]
            assert total == QRational(1 if not any(c) else 0)


class TestConnected:
    def test_degree_zero_disk(self):
        # winding 1, zero class: a single hook term over W_0 = 1
        v = connected_open_series(DP3_0_2, 1, (0, 0, 0))
        assert v.i_power == 1
        assert v.value == open_amplitude_coefficient(DP3_0_2, P([1]), (0, 0, 0))
        assert v.expand(3).terms[-1].re == 1

    def test_winding_two_hook_structure(self):
        c = (1, 0, 0)
        got = connected_open_series(DP3_0_2, 2, c)
        inv = invert_w_empty(DP3_0_2, c)
        total = QRational(0)
        for sign, hook in ((1, P([2])), (-1, P([1, 1]))):
            for a in box(c):
                rest = tuple(x - y for x, y in zip(c, a))
                total = total + QRational(sign) * open_amplitude_coefficient(DP3_0_2, hook, a) * inv[rest]
        assert got == Phased.make(strip.CONNECTED_I_POWER, total * QRational(1, 2))

    def test_winding_validation(self):
        with pytest.raises(ValueError):
            connected_open_series(DP3_0_2, 0, (0, 0, 0))

    def test_matches_closed_form_on_an_interior_class(self):
        d = DP3_0_2.surface_class(1, (1, 1, 1))
        contact = ContactData(1, (1,), 1, DP3_0_2.d2_dot(d))
        log = log_from_open(connected_open_series(DP3_0_2, 1, (1, 1, 1)), contact)
        assert log == Phased(0, dp3_closed_form(*d))
