# File: backend/tests/test_adapters.py

import json

import numpy as np
import pandas as pd
import pytest

from core.adapters.adapter_factory import AdapterFactory
from core.adapters.data_schemas import ORDERING, dump_record
from core.adapters.json_adapter import JsonRecordAdapter
from core.adapters.off_adapter import OffAdapter
from core.adapters.table_adapter import TableAdapter
from core.bodies.reference import regular_polygon
from core.exceptions import RecordFormatError
from core.models import BodyKind, BodySpec, HarmonicVector, TensorSet
from core.tensors.bijection import harmonic_vector
from core.tensors.moments import tensor_set


class TestJsonRecords:

    def test_parse_harmonics(self):
        """Test a harmonics record becomes a HarmonicVector"""
        text = json.dumps({'kind': 'harmonics', 'n': 2, 's_o': 1, 'ordering': ORDERING,
                           'values': [1.0, 0.0, 0.0]})
        vector = JsonRecordAdapter().parse(text)
        assert isinstance(vector, HarmonicVector)
        assert vector.dim == 2
        assert vector.max_degree == 1

    def test_tensor_record(self, cube_measure):
        """Test a written tensors record reads back the same phi vector"""
        adapter = JsonRecordAdapter()
        tensors = tensor_set(cube_measure, 2)
        parsed = adapter.parse(adapter.render(tensors))
        assert isinstance(parsed, TensorSet)
        assert np.allclose(parsed.vector(), tensors.vector())

    def test_deterministic_output(self, cube_measure):
        """Test records are written with sorted keys and a trailing newline"""
        text = JsonRecordAdapter().render(harmonic_vector(cube_measure, 2))
        assert text.endswith("\n")
        assert text == dump_record(json.loads(text))

    def test_body_record_without_kind(self):
        """Test body files may omit the kind field"""
        spec = JsonRecordAdapter().parse('{"type": "pyramid", "height": 2.0}')
        assert spec.kind is BodyKind.PYRAMID
        assert spec.height == 2.0

    def test_measure_record(self, cube_measure):
        """Test measure records keep atoms and weights"""
        adapter = JsonRecordAdapter()
        measure = adapter.parse(adapter.render(cube_measure))
        assert measure.size == 6
        assert measure.total_mass == pytest.approx(6.0)

    def test_malformed_json(self):
        """Test a syntax error is reported with its line"""
        with pytest.raises(RecordFormatError) as info:
            JsonRecordAdapter().parse('{"kind": "harmonics",\n "n": }', "broken.json")
        assert info.value.source == "broken.json"
        assert info.value.location.startswith("line 2")

    def test_unknown_ordering(self):
        """Test records in another component ordering are rejected"""
        text = json.dumps({'kind': 'harmonics', 'n': 2, 's_o': 1, 'ordering': 'grlex',
                           'values': [1.0, 0.0, 0.0]})
        with pytest.raises(RecordFormatError) as info:
            JsonRecordAdapter().parse(text)
        assert info.value.location == 'ordering'

    def test_missing_field(self):
        """Test the missing field is named"""
        with pytest.raises(RecordFormatError) as info:
            JsonRecordAdapter().parse('{"kind": "harmonics", "n": 3, "values": []}')
        assert info.value.location == 's_o'

    def test_wrong_length(self):
        """Test a harmonic vector of the wrong length is rejected"""
        text = json.dumps({'kind': 'harmonics', 'n': 3, 's_o': 2, 'values': [1.0, 2.0]})
        with pytest.raises(RecordFormatError):
            JsonRecordAdapter().parse(text)

    def test_unknown_kind_and_field(self):
        """Test unknown kinds and body fields are rejected"""
        with pytest.raises(RecordFormatError):
            JsonRecordAdapter().parse('{"kind": "mesh"}')
        with pytest.raises(RecordFormatError) as info:
            JsonRecordAdapter().parse('{"type": "ball", "colour": "red"}')
        assert info.value.location == 'colour'

    def test_top_level_array(self):
        """Test the top level must be an object"""
        with pytest.raises(RecordFormatError):
            JsonRecordAdapter().parse('[1, 2, 3]')


class TestOffAdapter:

    def test_cube_mesh(self, unit_cube):
        """Test the cube's mesh has 8 vertices, 6 faces and reads back as the cube"""
        text = OffAdapter().render(unit_cube)
        assert text.splitlines()[2] == "8 6 0"
        body = OffAdapter().parse(text)
        assert body.dim == 3
        assert body.volume == pytest.approx(1.0)

    def test_planar_polygon(self):
        """Test a polygon is written with z = 0 and reads back as 2D"""
        text = OffAdapter().render(regular_polygon(6))
        assert "# dim 2" in text
        body = OffAdapter().parse(text)
        assert body.dim == 2
        assert body.surface_area == pytest.approx(regular_polygon(6).surface_area)

    def test_polygon_without_dim_comment(self):
        """Test z = 0 and a single face mean a 2D body"""
        text = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n"
        assert OffAdapter().parse(text).dim == 2

    def test_missing_header(self):
        """Test files without the OFF keyword are rejected"""
        with pytest.raises(RecordFormatError):
            OffAdapter().parse("4 1 0\n0 0 0\n")

    def test_bad_vertex_line(self):
        """Test the offending line is reported"""
        text = "OFF\n3 0 0\n0 0 0\n1 x 0\n0 1 0\n"
        with pytest.raises(RecordFormatError) as info:
            OffAdapter().parse(text)
        assert info.value.location == "line 4"

    def test_refuses_measures(self, cube_measure):
        """Test only polytopes are written"""
        with pytest.raises(TypeError):
            OffAdapter().render(cube_measure)


class TestTableAdapter:

    def test_csv_table(self):
        """Test tables are written without the index and read back"""
        table = pd.DataFrame({'degree': [0, 1], 'max_abs_diff': [0.0, 0.25]})
        text = TableAdapter().render(table)
        assert text.splitlines()[0] == "degree,max_abs_diff"
        assert TableAdapter().parse(text)['max_abs_diff'].tolist() == [0.0, 0.25]

    def test_empty_file(self):
        """Test an empty file is a format error"""
        with pytest.raises(RecordFormatError):
            TableAdapter().parse("")


class TestAdapterFactory:

    def test_supported_formats(self):
        """Test format list"""
        assert AdapterFactory.get_supported_formats() == ["json", "off", "csv"]

    def test_detect_by_extension(self):
        """Test adapters are chosen from the extension"""
        assert isinstance(AdapterFactory.create_adapter("a/b.OFF"), OffAdapter)
        assert isinstance(AdapterFactory.create_adapter("x.csv"), TableAdapter)
        assert isinstance(AdapterFactory.create_adapter("x.txt", "json"), JsonRecordAdapter)

    def test_unknown_extension(self):
        """Test unknown extensions and formats raise"""
        with pytest.raises(RecordFormatError):
            AdapterFactory.create_adapter("x.stl")
        with pytest.raises(RecordFormatError):
            AdapterFactory.create_adapter("x.json", "yaml")

    def test_save_and_load(self, tmp_path):
        """Test saving a body spec into a new directory and loading it"""
        path = AdapterFactory.save(BodySpec.cube(side=2.0), tmp_path / "bodies" / "cube.json")
        spec = AdapterFactory.load(path)
        assert spec.kind is BodyKind.CUBE
        assert spec.side == 2.0

    def test_missing_file(self, tmp_path):
        """Test a missing file is a format error naming the path"""
        with pytest.raises(RecordFormatError) as info:
            AdapterFactory.load(tmp_path / "absent.json")
        assert info.value.source.endswith("absent.json")
