from src.commands.spec import ExitCode


class DocumentNotFoundException(Exception):
    """Raised when an instance file cannot be opened.

    Attributes:
        message (str): Human-readable error description. Defaults to
            "Document not found" if not provided explicitly.
    """

    def __init__(self, message: str = "Document not found"):
        self.message = message
        super().__init__(self.message)


class DocumentFormatException(Exception):
    """Raised when a document is not valid JSON or does not match its schema.

    Attributes:
        message (str): Human-readable error description.
    """

    def __init__(self, message: str = "Malformed document"):
        self.message = message
        super().__init__(self.message)


class CommandFailed(Exception):
    """Terminates a subcommand with a non-zero exit code.

    Attributes:
        exit_code (ExitCode): Code the process exits with
        error_type (str): Machine-readable error class name
        message (str): Human-readable error description
    """

    def __init__(self, exit_code: ExitCode, error_type: str, message: str):
        self.exit_code = exit_code
        self.error_type = error_type
        self.message = message
        super().__init__(self.message)

    def to_error_object(self) -> dict:
        return {"error": {"type": self.error_type, "message": self.message}}
