from abc import ABC, abstractmethod
from pathlib import Path

from src.commands.schemas import InstanceDocument, ReportDocument


class DocumentStorage(ABC):
    """Abstract base class defining how instance and report documents are
    loaded and stored."""

    @abstractmethod
    def load_instance(self, path: Path) -> tuple[InstanceDocument, str]:
        """Read and validate an instance document.

        Args:
            path (Path): Location of the document

        Returns:
            tuple[InstanceDocument, str]: The parsed document and the
                SHA-256 digest of its raw bytes
        """
        pass

    @abstractmethod
    def save_instance(self, document: InstanceDocument, path: Path | None) -> None:
        """Write an instance document.

        Args:
            document (InstanceDocument): Document to write
            path (Path | None): Target file, standard output when None
        """
        pass

    @abstractmethod
    def save_report(self, report: ReportDocument, path: Path | None) -> None:
        """Write a report document.

        Args:
            report (ReportDocument): Document to write
            path (Path | None): Target file, standard output when None
        """
        pass
