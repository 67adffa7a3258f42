"""Feature schemas for the two modeling stages.

A schema names the input columns, marks each as continuous or binary, and
names the target column. The target holds the ordinal ejection-fraction
class: 0 = Normal (50-70%), 1 = Below Normal (36-49%), 2 = Low (<35%).
Binary columns encode yes/present as 1 and no/absent as 0.
"""

from dataclasses import dataclass

from .errors import SchemaError
from .serialize import read_json, write_json_atomic

N_CLASSES = 3
CLASS_LABELS = (0, 1, 2)
CLASS_NAMES = ("Normal", "BelowNormal", "Low")

CONTINUOUS = "continuous"
BINARY = "binary"
_KINDS = (CONTINUOUS, BINARY)


@dataclass(frozen=True)
class Column:
    """One input column: a name plus its kind (continuous or binary)."""

    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemaError(
                f"column {self.name!r} has unknown kind {self.kind!r}"
            )


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered input columns and the target column name."""

    columns: tuple
    target: str

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        if not self.columns:
            raise SchemaError("schema must declare at least one column")
        names = [c.name for c in self.columns]
        seen = set()
        for name in names:
            if name in seen:
                raise SchemaError(f"duplicate column name {name!r}")
            seen.add(name)
        if self.target in seen:
            raise SchemaError(
                f"target {self.target!r} collides with an input column"
            )

    @property
    def names(self):
        return tuple(c.name for c in self.columns)

    @property
    def width(self):
        return len(self.columns)

    @property
    def continuous_indices(self):
        return tuple(
            i for i, c in enumerate(self.columns) if c.kind == CONTINUOUS
        )

    @property
    def binary_indices(self):
        return tuple(i for i, c in enumerate(self.columns) if c.kind == BINARY)

    def index_of(self, name):
        for i, column in enumerate(self.columns):
            if column.name == name:
                return i
        raise SchemaError(f"schema has no column named {name!r}")

    def kind_of(self, name):
        return self.columns[self.index_of(name)].kind

    def subset(self, names):
        """Return a schema keeping only ``names``, in this schema's order."""
        keep = set(names)
        missing = keep - set(self.names)
        if missing:
            raise SchemaError(f"unknown columns: {sorted(missing)}")
        kept = tuple(c for c in self.columns if c.name in keep)
        return FeatureSchema(columns=kept, target=self.target)

    def to_dict(self):
        return {
            "columns": [{"name": c.name, "kind": c.kind} for c in self.columns],
            "target": self.target,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            columns = tuple(
                Column(name=c["name"], kind=c["kind"]) for c in data["columns"]
            )
            target = data["target"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed schema document: {exc}") from exc
        return cls(columns=columns, target=target)

    def save(self, path):
        write_json_atomic(path, self.to_dict())

    @classmethod
    def load(cls, path):
        return cls.from_dict(read_json(path))


def _make(names_and_kinds):
    return FeatureSchema(
        columns=tuple(Column(n, k) for n, k in names_and_kinds),
        target="EF",
    )


STEP1_SCHEMA = _make(
    [
        ("Age", CONTINUOUS),
        ("LAD", BINARY),
        ("W.B.C", CONTINUOUS),
        ("R.B.C", CONTINUOUS),
        ("B.U.N", CONTINUOUS),
        ("HB", CONTINUOUS),
        ("CPK", CONTINUOUS),
        ("CPK-MB", CONTINUOUS),
        ("PR", CONTINUOUS),
        ("BS", CONTINUOUS),
        ("TimeX12", CONTINUOUS),
        ("TimeX1234", CONTINUOUS),
        ("TimeX23", CONTINUOUS),
        ("HeartNormSound", BINARY),
    ]
)

STEP2_SCHEMA = _make(
    [
        ("TimeX12", CONTINUOUS),
        ("TimeX1234", CONTINUOUS),
        ("TimeX23", CONTINUOUS),
        ("TimeX123", CONTINUOUS),
        ("HeartNormSound", BINARY),
        ("FmcOnset", CONTINUOUS),
    ]
)

BUILTIN_SCHEMAS = {"step1": STEP1_SCHEMA, "step2": STEP2_SCHEMA}


def get_schema(name_or_path):
    """Resolve a builtin schema name or load a schema JSON file."""
    if name_or_path in BUILTIN_SCHEMAS:
        return BUILTIN_SCHEMAS[name_or_path]
    try:
        return FeatureSchema.load(name_or_path)
    except OSError as exc:
        raise SchemaError(
            f"unknown schema {name_or_path!r}: not builtin "
            f"({', '.join(sorted(BUILTIN_SCHEMAS))}) and not a readable file"
        ) from exc
