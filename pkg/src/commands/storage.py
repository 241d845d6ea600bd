import hashlib
import json
import sys
from pathlib import Path

import structlog
from pydantic import BaseModel, ValidationError

from src.commands.abstract_document_storage import DocumentStorage
from src.commands.exceptions import DocumentFormatException, DocumentNotFoundException
from src.commands.schemas import InstanceDocument, ReportDocument

logger = structlog.get_logger(__name__)


def dump_document(document: BaseModel) -> str:
    """Canonical JSON text: field order, two-space indent, trailing newline."""
    payload = document.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


class JsonDocumentStorage(DocumentStorage):

    def load_instance(self, path: Path) -> tuple[InstanceDocument, str]:
        """Read an instance file.

        Raises:
            DocumentNotFoundException: If the file cannot be read
            DocumentFormatException: If it is not JSON or fails validation
        """
        try:
            raw = Path(path).read_bytes()
        except OSError as e:
            raise DocumentNotFoundException(f"Cannot read {path}: {e.strerror}") from e
        try:
            payload = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise DocumentFormatException(f"{path} is not valid JSON: {e}") from e
        try:
            document = InstanceDocument.model_validate(payload)
        except ValidationError as e:
            errors = "; ".join(
                f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
                for err in e.errors()
            )
            raise DocumentFormatException(f"{path}: {errors}") from e
        digest = hashlib.sha256(raw).hexdigest()
        logger.debug("load_instance: completed", path=str(path), sha256=digest)
        return document, digest

    def _write(self, text: str, path: Path | None) -> None:
        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as e:
            raise DocumentNotFoundException(f"Cannot write {path}: {e.strerror}") from e

    def save_instance(self, document: InstanceDocument, path: Path | None) -> None:
        self._write(dump_document(document), path)

    def save_report(self, report: ReportDocument, path: Path | None) -> None:
        self._write(dump_document(report), path)


dao = JsonDocumentStorage()
