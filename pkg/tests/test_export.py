"""Tests for the export system."""

import csv
import json
import xml.etree.ElementTree as ET

import pytest

from core.export.export_system import (
    DataType, ExportConfig, ExportData, ExportFormat, ExportStatus, export_to_file,
    get_export_system, initialize_export_system, table, to_json_text,
)
from core.symbolic.subdivision import LineSegment


class TestJSON:
    def test_sorted_and_exact(self, tmp_path):
        path = tmp_path / "report.json"
        content = {"b": 0.1 + 0.2, "a": [1, 2]}
        export_to_file(content, path)
        text = path.read_text(encoding="utf-8")
        assert text == to_json_text(content)
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text)["b"] == 0.1 + 0.2

    def test_same_bytes_twice(self, tmp_path):
        content = {"margin": 1e-7, "attractors": [{"period": 3}]}
        export_to_file(content, tmp_path / "one.json")
        export_to_file(content, tmp_path / "two.json")
        assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()


class TestCSV:
    def test_rows(self, tmp_path):
        path = tmp_path / "orbit.csv"
        export_to_file(table(["step", "x", "y", "cone_index"], [(0, 0.5, -1.0, 2), (1, 1.25, 0.5, 0)]),
                       path, data_type=DataType.TABLE)
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
        assert rows == [["step", "x", "y", "cone_index"], ["0", "0.5", "-1.0", "2"], ["1", "1.25", "0.5", "0"]]


class TestSVG:
    def test_segments_and_polygon(self, tmp_path, square):
        path = tmp_path / "singular.svg"
        content = {
            "polygon": list(square.vertices),
            "segments": [LineSegment(0j, -3 + 0j), LineSegment(1 + 0j, 1 - 3j, 2)],
            "bbox": (-3.0, -3.0, 3.0, 3.0),
        }
        result = export_to_file(content, path, data_type=DataType.SEGMENTS)
        assert result.items_exported == 2
        root = ET.parse(path).getroot()
        ns = {"svg": "http://www.w3.org/2000/svg"}
        lines = root.findall(".//svg:line", ns)
        assert [line.get("data-order") for line in lines] == ["0", "2"]
        assert len(root.findall(".//svg:polygon", ns)) == 1


class TestFailures:
    def test_directory_as_target(self, tmp_path):
        target = tmp_path / "taken.json"
        target.mkdir()
        with pytest.raises(OSError):
            export_to_file({"a": 1}, target)

    def test_no_overwrite(self, tmp_path):
        path = tmp_path / "exists.json"
        path.write_text("{}", encoding="utf-8")
        data = ExportData(content={"a": 1})
        result = get_export_system().export_data(
            data, ExportConfig(format=ExportFormat.JSON, output_path=path, overwrite_existing=False))
        assert result.status is ExportStatus.FAILED
        with pytest.raises(FileExistsError):
            result.raise_for_status()

    def test_wrong_data_type(self, tmp_path):
        data = ExportData(content={"a": 1}, data_type=DataType.RASTER)
        result = get_export_system().export_data(
            data, ExportConfig(format=ExportFormat.JSON, output_path=tmp_path / "x.json"))
        assert not result.success

    def test_failure_event(self, tmp_path):
        system = initialize_export_system()
        seen = []
        system.add_event_handler("export_failed", lambda event, result: seen.append(result))
        system.export_data(ExportData(content={"a": 1}),
                           ExportConfig(format=ExportFormat.JSON, output_path=tmp_path))
        assert seen and seen[-1].error is not None


class TestEvents:
    def test_completed_event(self, tmp_path):
        system = initialize_export_system()
        seen = []
        system.add_event_handler("export_completed", lambda event, result: seen.append((event, result)))
        result = export_to_file({"a": 1}, tmp_path / "a.json")
        assert seen == [("export_completed", result)]
        assert result.file_size == (tmp_path / "a.json").stat().st_size

    def test_rejected_data_type_is_reported(self, tmp_path):
        system = initialize_export_system()
        seen = []
        system.add_event_handler("export_failed", lambda event, result: seen.append(result))
        system.export_data(ExportData(content={"a": 1}, data_type=DataType.RASTER),
                           ExportConfig(format=ExportFormat.JSON, output_path=tmp_path / "x.json"))
        assert len(seen) == 1
        assert isinstance(seen[0].error, ValueError)

    def test_handler_registered_once(self, tmp_path):
        system = initialize_export_system()
        seen = []

        def handler(event, result):
            seen.append(result)

        system.add_event_handler("export_completed", handler)
        system.add_event_handler("export_completed", handler)
        export_to_file({"a": 1}, tmp_path / "a.json")
        assert len(seen) == 1

    def test_failing_handler_does_not_break_export(self, tmp_path):
        system = initialize_export_system()

        def handler(event, result):
            raise RuntimeError("boom")

        system.add_event_handler("export_completed", handler)
        assert export_to_file({"a": 1}, tmp_path / "a.json").success
