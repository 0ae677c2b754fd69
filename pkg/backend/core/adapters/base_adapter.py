from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Tuple, Union

from core.exceptions import RecordFormatError

PathLike = Union[str, Path]


class RecordAdapter(ABC):
    """
    Abstract base class for file formats.

    Each adapter reads one family of files into core objects and writes them
    back. Output must be deterministic: the same object gives the same bytes.
    """

    format_name = "UNKNOWN"
    extensions: Tuple[str, ...] = ()

    @classmethod
    def handles(cls, path: PathLike) -> bool:
        """Whether the file extension belongs to this format"""
        return Path(path).suffix.lower() in cls.extensions

    def read(self, path: PathLike) -> Any:
        """
        Read a file.

        Raises:
            RecordFormatError: If the file is missing or malformed
        """
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise RecordFormatError(f"cannot read file: {e.strerror}", str(path)) from e
        return self.parse(text, str(path))

    def write(self, obj: Any, path: PathLike) -> Path:
        """Write an object, creating parent directories"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(obj))
        return path

    @abstractmethod
    def parse(self, text: str, source: str = "<string>") -> Any:
        """
        Parse file contents.

        Args:
            text: File contents
            source: Name used in error messages

        Returns:
            Core object described by the text
        """
        pass

    @abstractmethod
    def render(self, obj: Any) -> str:
        """
        Serialize an object to file contents.

        Returns:
            Text ending in a newline
        """
        pass

    def get_format_info(self) -> dict:
        return {
            'name': self.format_name,
            'extensions': list(self.extensions),
        }
