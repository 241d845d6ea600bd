"""JSON documents read and written by the command-line tool.

Rationals travel as canonical strings ("p/q", or "n" for integers); integers
are accepted on input as well. Floats are refused.
"""
from enum import Enum
from fractions import Fraction
from typing import Annotated

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    model_validator,
)

from src.geometry.cone import Lineality, VectorSet
from src.geometry.exceptions import InputError
from src.geometry.rainbow import ColoredSystem, RainbowSelection
from src.geometry.ratlin import Subspace, Vector, to_rational
from src.geometry.verify import Polyhedron


def _parse_rational(value: object) -> Fraction:
    try:
        return to_rational(value)
    except InputError as e:
        raise ValueError(e.message) from e


Rational = Annotated[
    Fraction,
    BeforeValidator(_parse_rational),
    PlainSerializer(str, return_type=str),
]
Coordinates = list[Rational]


class _Document(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)


class InstanceKind(str, Enum):
    HOMOGENEOUS = "homogeneous"
    POLYHEDRAL = "polyhedral"


class PolyhedronSchema(_Document):
    """{x : <normals[i], x> <= offsets[i]}."""

    normals: list[Coordinates]
    offsets: list[Rational]

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.normals) != len(self.offsets):
            raise ValueError("normals and offsets must have the same length")
        return self

    def to_polyhedron(self, dimension: int) -> Polyhedron:
        return Polyhedron(
            tuple(tuple(b) for b in self.normals), tuple(self.offsets), dimension
        )

    @classmethod
    def from_polyhedron(cls, polyhedron: Polyhedron) -> "PolyhedronSchema":
        return cls(
            normals=[list(b) for b in polyhedron.normals],
            offsets=list(polyhedron.offsets),
        )


class InstanceDocument(_Document):
    """A colored vector system or a list of polyhedron families.

    Attributes:
        kind: homogeneous (colors of vectors) or polyhedral (families)
        dimension: Ambient dimension d
        k: Optional default for the theorem parameter
        colors: Color classes, each a list of coordinate lists
        families: Polyhedron families (polyhedral instances)

    Validates:
        every vector and normal has ``dimension`` coordinates and the list
        matching ``kind`` is nonempty
    """

    kind: InstanceKind = InstanceKind.HOMOGENEOUS
    dimension: int = Field(ge=1)
    k: int | None = None
    colors: list[list[Coordinates]] = []
    families: list[list[PolyhedronSchema]] = []

    @model_validator(mode="after")
    def check_shape(self):
        """Dimensions of every vector and presence of the data of the kind."""
        if self.kind == InstanceKind.HOMOGENEOUS and not self.colors:
            raise ValueError("homogeneous instances need at least one color")
        if self.kind == InstanceKind.POLYHEDRAL and not self.families:
            raise ValueError("polyhedral instances need at least one family")
        vectors = [v for color in self.colors for v in color]
        vectors += [b for fam in self.families for p in fam for b in p.normals]
        for v in vectors:
            if len(v) != self.dimension:
                raise ValueError(
                    f"vector of length {len(v)} in dimension {self.dimension}"
                )
        return self

    def to_system(self) -> ColoredSystem:
        if self.kind != InstanceKind.HOMOGENEOUS:
            raise InputError("Instance is not homogeneous")
        return ColoredSystem.from_vectors(
            ([tuple(v) for v in color] for color in self.colors), self.dimension
        )

    def to_families(self) -> list[list[Polyhedron]]:
        if self.kind != InstanceKind.POLYHEDRAL:
            raise InputError("Instance is not polyhedral")
        return [[p.to_polyhedron(self.dimension) for p in fam] for fam in self.families]

    @classmethod
    def from_system(cls, system: ColoredSystem, k: int | None = None) -> "InstanceDocument":
        return cls(
            dimension=system.ambient_dim,
            k=k,
            colors=[[list(v) for v in color] for color in system.colors],
        )

    @classmethod
    def from_vector_set(cls, vectors: VectorSet, k: int | None = None) -> "InstanceDocument":
        return cls(dimension=vectors.ambient_dim, k=k, colors=[[list(v) for v in vectors]])

    @classmethod
    def from_families(
        cls, families: list[list[Polyhedron]], k: int | None = None
    ) -> "InstanceDocument":
        return cls(
            kind=InstanceKind.POLYHEDRAL,
            dimension=families[0][0].ambient_dim,
            k=k,
            families=[[PolyhedronSchema.from_polyhedron(p) for p in fam] for fam in families],
        )


class SubspaceSchema(_Document):
    dim: int
    basis: list[Coordinates]

    @classmethod
    def from_subspace(cls, subspace: Subspace) -> "SubspaceSchema":
        return cls(dim=subspace.dim, basis=[list(b) for b in subspace.basis])


class PickSchema(_Document):
    """One picked element with its data echoed so the witness is self-contained."""

    color: int
    index: int
    vector: Coordinates | None = None
    polyhedron: PolyhedronSchema | None = None

    @classmethod
    def from_vector(cls, color: int, index: int, vector: Vector) -> "PickSchema":
        return cls(color=color, index=index, vector=list(vector))


def picks_of(selection: RainbowSelection, system: ColoredSystem) -> list[PickSchema]:
    return [
        PickSchema.from_vector(c, i, system.colors[c][i]) for c, i in selection.picks
    ]


class ColorLinealitySchema(_Document):
    """Lineality of one color.

    Attributes:
        color: Index of the color
        lineality: Canonical basis and dimension of lpos
        generator_indices: Generators lying in lpos
        solution_dimension: d - dim lpos, absent when the color holds 0
    """

    color: int
    lineality: SubspaceSchema
    generator_indices: list[int]
    solution_dimension: int | None = None

    @classmethod
    def from_lineality(
        cls, color: int, lineality: Lineality, solution_dimension: int | None
    ) -> "ColorLinealitySchema":
        return cls(
            color=color,
            lineality=SubspaceSchema.from_subspace(lineality.subspace),
            generator_indices=sorted(lineality.generator_indices),
            solution_dimension=solution_dimension,
        )


class BlockSchema(_Document):
    index_set: list[int]
    picks: list[PickSchema]
    subspace: SubspaceSchema


class DecompositionCheckSchema(_Document):
    strong: bool
    passed: bool
    failed_clause: str | None = None
    message: str = ""


class WitnessSchema(_Document):
    """First violating sub-selection and its measure (solution dimension,
    lineality dimension or cone dimension, depending on the mode)."""

    picks: list[PickSchema]
    value: int


class CheckSchema(_Document):
    name: str
    passed: bool
    instances: int = 0
    detail: str = ""


class ReportDocument(_Document):
    """Output of every subcommand; sections not produced are omitted."""

    command: str
    tool: str
    version: str
    input_hash: str | None = None
    k: int | None = None
    mode: str | None = None
    verdict: str | None = None
    cap: int | None = None
    witness: WitnessSchema | None = None
    color: int | None = None
    color_values: list[int] | None = None
    lineality: list[ColorLinealitySchema] | None = None
    blocks: list[BlockSchema] | None = None
    verification: DecompositionCheckSchema | None = None
    checks: list[CheckSchema] | None = None
    passed: bool | None = None
    timing_ms: float | None = None
