"""Exception types shared across the package."""


class RenderError(RuntimeError):
    """The plotting backend failed while rasterizing a spec."""


class CorpusWriteError(OSError):
    """Writing a corpus entry to disk failed."""


class ModelConfigError(ValueError):
    """Checkpoint / architecture configuration mismatch."""


class DataError(RuntimeError):
    """A corpus is missing, incomplete, or fails to parse."""


class TrainingAbortedError(RuntimeError):
    """Training diverged (non-finite loss); the last good checkpoint is kept."""


class InputError(ValueError):
    """An input file (image, checkpoint) could not be read."""
