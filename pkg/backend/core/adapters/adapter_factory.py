from pathlib import Path
from typing import Any, List, Optional

from core.adapters.base_adapter import PathLike, RecordAdapter
from core.adapters.json_adapter import JsonRecordAdapter
from core.adapters.off_adapter import OffAdapter
from core.adapters.table_adapter import TableAdapter
from core.exceptions import RecordFormatError


class AdapterFactory:
    """
    Factory for file format adapters.

    Detects the format from the file extension; JSON records are further
    dispatched on their `kind` field.
    """

    ADAPTERS = (JsonRecordAdapter, OffAdapter, TableAdapter)

    @staticmethod
    def create_adapter(path: PathLike, file_format: Optional[str] = None) -> RecordAdapter:
        """
        Create the adapter for a file.

        Args:
            path: File path
            file_format: Force a format ("json", "off" or "csv"), or None for
                auto-detect

        Raises:
            RecordFormatError: If the format cannot be determined
        """
        if file_format:
            for adapter in AdapterFactory.ADAPTERS:
                if adapter.format_name == file_format.lower():
                    return adapter()
            raise RecordFormatError(f"Unknown format {file_format!r}", str(path))

        for adapter in AdapterFactory.ADAPTERS:
            if adapter.handles(path):
                return adapter()
        raise RecordFormatError(
            f"Cannot determine file format from extension {Path(path).suffix!r}", str(path)
        )

    @staticmethod
    def load(path: PathLike, file_format: Optional[str] = None) -> Any:
        """Read any supported file into its core object"""
        return AdapterFactory.create_adapter(path, file_format).read(path)

    @staticmethod
    def save(obj: Any, path: PathLike, file_format: Optional[str] = None) -> Path:
        """Write a core object in the format given by the extension"""
        return AdapterFactory.create_adapter(path, file_format).write(obj, path)

    @staticmethod
    def get_supported_formats() -> List[str]:
        return [adapter.format_name for adapter in AdapterFactory.ADAPTERS]
