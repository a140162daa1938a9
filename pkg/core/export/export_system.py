"""Export System for Result Files.

This module writes the machine-readable outputs of the toolkit: JSON
reports, CSV orbit tables, SVG line drawings of singular sets and PPM/PNG
basin images. Output is deterministic: no timestamps, floats written with
their shortest round-trip representation.
"""

import csv
import json
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from PIL import Image

logger = logging.getLogger(__name__)


class ExportFormat(Enum):
    """Supported export formats."""
    CSV = "csv"
    JSON = "json"
    SVG = "svg"
    PPM = "ppm"
    PNG = "png"


class ExportStatus(Enum):
    """Export operation status."""
    PENDING = "pending"
    PROCESSING = "processing"
    COMPLETED = "completed"
    FAILED = "failed"


class DataType(Enum):
    """Data types for export."""
    TABLE = "table"
    MAPPING = "mapping"
    SEGMENTS = "segments"
    RASTER = "raster"


@dataclass
class ExportConfig:
    """Export configuration."""
    format: ExportFormat = ExportFormat.JSON
    output_path: Optional[Path] = None
    overwrite_existing: bool = True

    # JSON
    indent: int = 2

    # SVG
    stroke_width: float = 0.002  # relative to the drawing extent
    canvas_size: int = 800


@dataclass
class ExportData:
    """Data to be exported."""
    title: str = ""
    content: Any = None
    data_type: DataType = DataType.MAPPING


@dataclass
class ExportResult:
    """Export operation result."""
    status: ExportStatus = ExportStatus.PENDING
    success: bool = False
    output_path: Optional[Path] = None
    file_size: int = 0
    items_exported: int = 0
    error_message: str = ""
    error: Optional[BaseException] = None

    def raise_for_status(self):
        """Re-raise the exception that made the export fail."""
        if self.success:
            return
        if self.error is not None:
            raise self.error
        raise OSError(self.error_message or "export failed")


def to_json_text(content: Any, indent: int = 2) -> str:
    """Serialize a result mapping the way JSON files are written."""
    return json.dumps(content, indent=indent, sort_keys=True, ensure_ascii=False) + "\n"


class BaseExporter:
    """Base class for all exporters."""

    def __init__(self, format: ExportFormat):
        self.format = format
        self.supported_data_types = [DataType.MAPPING]
        self.logger = logging.getLogger(f"{__name__}.{type(self).__name__}")

    def can_export(self, data_type: DataType) -> bool:
        return data_type in self.supported_data_types

    def validate_config(self, config: ExportConfig) -> List[str]:
        """Validate export configuration.

        Args:
            config: Configuration to validate

        Returns:
            List[str]: List of validation errors
        """
        errors = []
        if config.output_path is None:
            errors.append("Output path is required")
            return errors
        path = Path(config.output_path)
        if path.exists() and not config.overwrite_existing:
            errors.append(f"{path} exists and overwriting is disabled")
        return errors

    def export(self, data: ExportData, config: ExportConfig) -> ExportResult:
        """Export data, catching IO failures into the result."""
        result = ExportResult(status=ExportStatus.PROCESSING)
        path = Path(config.output_path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            result.items_exported = self._write(data, config, path)
            result.output_path = path
            result.file_size = path.stat().st_size
            result.status = ExportStatus.COMPLETED
            result.success = True
        except OSError as e:
            result.status = ExportStatus.FAILED
            result.error_message = str(e)
            result.error = e
            self.logger.error(f"Export to {path} failed: {e}")
        return result

    def _write(self, data: ExportData, config: ExportConfig, path: Path) -> int:
        raise NotImplementedError("Subclasses must implement _write")


class JSONExporter(BaseExporter):
    """JSON format exporter."""

    def __init__(self):
        super().__init__(ExportFormat.JSON)
        self.supported_data_types = [DataType.MAPPING, DataType.TABLE]

    def _write(self, data: ExportData, config: ExportConfig, path: Path) -> int:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(to_json_text(data.content, config.indent))
        return 1


class CSVExporter(BaseExporter):
    """CSV format exporter; content is {'headers': [...], 'rows': [...]}."""

    def __init__(self):
        super().__init__(ExportFormat.CSV)
        self.supported_data_types = [DataType.TABLE]

    def _write(self, data: ExportData, config: ExportConfig, path: Path) -> int:
        rows = data.content.get("rows", [])
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            if data.content.get("headers"):
                writer.writerow(data.content["headers"])
            for row in rows:
                writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return len(rows)


class SVGExporter(BaseExporter):
    """Line drawing of a polygon and segments.

    Content keys: 'polygon' (complex vertices), 'segments' (objects with
    start/end/order) and 'bbox' (x0, y0, x1, y1).
    """

    PALETTE = ("#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#7f8c8d")

    def __init__(self):
        super().__init__(ExportFormat.SVG)
        self.supported_data_types = [DataType.SEGMENTS]

    def _write(self, data: ExportData, config: ExportConfig, path: Path) -> int:
        content = data.content
        x0, y0, x1, y1 = content["bbox"]
        extent = max(x1 - x0, y1 - y0)
        root = ET.Element("svg", {
            "xmlns": "http://www.w3.org/2000/svg",
            "width": str(config.canvas_size),
            "height": str(config.canvas_size),
            "viewBox": f"{x0!r} {-y1!r} {(x1 - x0)!r} {(y1 - y0)!r}",
        })
        if data.title:
            ET.SubElement(root, "title").text = data.title
        # y axis points up in the plane
        group = ET.SubElement(root, "g", {"transform": "scale(1,-1)", "fill": "none",
                                          "stroke-width": repr(config.stroke_width * extent)})

        polygon = content.get("polygon") or []
        if polygon:
            ET.SubElement(group, "polygon", {
                "points": " ".join(f"{v.real!r},{v.imag!r}" for v in polygon),
                "fill": "#dddddd", "stroke": "#000000",
            })
        segments = content.get("segments") or []
        for seg in segments:
            ET.SubElement(group, "line", {
                "x1": repr(seg.start.real), "y1": repr(seg.start.imag),
                "x2": repr(seg.end.real), "y2": repr(seg.end.imag),
                "stroke": self.PALETTE[seg.order % len(self.PALETTE)],
                "data-order": str(seg.order),
            })

        tree = ET.ElementTree(root)
        tree.write(path, encoding="utf-8", xml_declaration=True)
        return len(segments)


class ImageExporter(BaseExporter):
    """RGB raster writer (binary PPM or PNG) through Pillow."""

    def __init__(self, format: ExportFormat):
        super().__init__(format)
        self.supported_data_types = [DataType.RASTER]

    def _write(self, data: ExportData, config: ExportConfig, path: Path) -> int:
        rgb = np.ascontiguousarray(data.content, dtype=np.uint8)
        image = Image.fromarray(rgb, "RGB")
        image.save(path, format=self.format.name)
        return rgb.shape[0] * rgb.shape[1]


class ExportSystem:
    """Main export system manager."""

    def __init__(self):
        self.exporters: Dict[ExportFormat, BaseExporter] = {
            ExportFormat.CSV: CSVExporter(),
            ExportFormat.JSON: JSONExporter(),
            ExportFormat.SVG: SVGExporter(),
            ExportFormat.PPM: ImageExporter(ExportFormat.PPM),
            ExportFormat.PNG: ImageExporter(ExportFormat.PNG),
        }
        self.event_handlers: Dict[str, List[Callable]] = {
            "export_completed": [],
            "export_failed": [],
        }
        self.logger = logging.getLogger(__name__)

    def export_data(self, data: ExportData, config: ExportConfig) -> ExportResult:
        """Export data to specified format.

        Args:
            data: Data to export
            config: Export configuration

        Returns:
            ExportResult: Export result; IO failures are reported, not raised
        """
        exporter = self.exporters.get(config.format)
        if exporter is None or not exporter.can_export(data.data_type):
            result = ExportResult(status=ExportStatus.FAILED)
            result.error_message = f"Format {config.format} cannot export {data.data_type} data"
            result.error = ValueError(result.error_message)
            self._emit_event("export_failed", result)
            return result

        errors = exporter.validate_config(config)
        if errors:
            result = ExportResult(status=ExportStatus.FAILED)
            result.error_message = "; ".join(errors)
            result.error = FileExistsError(result.error_message)
            self._emit_event("export_failed", result)
            return result

        result = exporter.export(data, config)
        self._emit_event("export_completed" if result.success else "export_failed", result)
        return result

    def _emit_event(self, event: str, data: Any):
        for handler in self.event_handlers.get(event, []):
            try:
                handler(event, data)
            except Exception as e:
                self.logger.error(f"Error in event handler: {e}")

    def add_event_handler(self, event: str, handler: Callable):
        if event in self.event_handlers and handler not in self.event_handlers[event]:
            self.event_handlers[event].append(handler)


# Global export system instance
_export_system: Optional[ExportSystem] = None


def get_export_system() -> ExportSystem:
    """Get the global export system, creating it on first use."""
    if _export_system is None:
        return initialize_export_system()
    return _export_system


def initialize_export_system() -> ExportSystem:
    global _export_system
    _export_system = ExportSystem()
    return _export_system


def export_to_file(content: Any, file_path: Path, format: ExportFormat = None,
                   data_type: DataType = DataType.MAPPING, title: str = "") -> ExportResult:
    """Export content to a file, picking the format from the extension when omitted.

    Raises:
        OSError: The file could not be written
    """
    file_path = Path(file_path)
    if format is None:
        format = ExportFormat(file_path.suffix[1:].lower())
    data = ExportData(title=title or file_path.stem, content=content, data_type=data_type)
    result = get_export_system().export_data(data, ExportConfig(format=format, output_path=file_path))
    result.raise_for_status()
    return result


def table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> Dict[str, Any]:
    """Content for the CSV exporter."""
    return {"headers": list(headers), "rows": [list(r) for r in rows]}
