class GeometryError(Exception):
    """Base exception of the geometry library.

    Attributes:
        message (str): Human-readable error description.
    """

    default_message = "Geometry error"

    def __init__(self, message: str | None = None):
        self.message = message or self.default_message
        super().__init__(self.message)


class InputError(GeometryError):
    """Raised when an operation receives input violating its preconditions.

    Typical causes:
    - Vectors of different ambient dimensions
    - Zero vectors where the homogeneous theory requires nonzero ones
    - Parameters such as k or the number of colors out of range
    """

    default_message = "Invalid input"


class NoLinealityError(InputError):
    """Raised when a positive basis of a trivial lineality space is requested."""

    default_message = "no nontrivial lineality"


class GenerationError(InputError):
    """Raised when a random generator exhausts its redraw budget."""

    default_message = "Random generation failed"


class InvariantBreachError(GeometryError):
    """Raised when a guarantee of the construction fails.

    Under valid hypotheses this never happens; it signals a bug.
    """

    default_message = "Internal invariant breached"
