"""Exception and warning types shared across the package."""


class PatchCheckError(Exception):
    """Base class for all errors raised by this package."""


class MalformedHeader(PatchCheckError):
    """A record's first line is not a valid program-point header."""

    def __init__(self, line_no: int, line: str):
        super().__init__(f"line {line_no}: not a program-point header: {line!r}")
        self.line_no = line_no
        self.line = line


class EmptyInput(PatchCheckError):
    """An invariant dump contained no records."""


class UnsupportedAtom(PatchCheckError):
    """Solver queries are only defined for linear-comparison atoms."""


class EmptyModifiedSet(PatchCheckError):
    """Test selection needs at least one modified method."""


class DimensionMismatch(PatchCheckError):
    """Vectors or feature/weight shapes disagree."""


class SingleClassData(PatchCheckError):
    """An operation needs examples of both classes."""


class NonFiniteLoss(PatchCheckError):
    """Training diverged (learning rate too high for the data)."""


class MissingCodeFile(PatchCheckError):
    def __init__(self, record_id: str, path: str):
        super().__init__(f"record {record_id}: code file not readable: {path}")
        self.record_id = record_id
        self.path = path


class TooFewRecords(PatchCheckError):
    """A split would leave one side empty."""


class NoCorrectPatches(PatchCheckError):
    """Threshold tuning needs at least one correct-labeled score."""


class MissingInputs(PatchCheckError):
    def __init__(self, stage: str, paths):
        super().__init__(f"stage {stage}: missing inputs: {', '.join(map(str, paths))}")
        self.stage = stage
        self.paths = tuple(paths)


class ModelRequired(PatchCheckError):
    """The syntactic stage is enabled but no predictor model was given."""


class EmptyManifest(PatchCheckError):
    """A batch run needs at least one patch record."""


class ManifestError(PatchCheckError):
    """A manifest or data file does not match its schema."""


class ZeroNormWarning(UserWarning):
    """Cosine similarity against a zero-norm vector was forced to 0."""
