"""Exception hierarchy shared across the package."""


class TomatodetError(Exception):
    """Base class for all package errors."""


class ContractError(TomatodetError):
    """An operation was called with arguments violating its contract."""


class ShapeError(TomatodetError):
    """A tensor does not match its declared grid/anchor/class layout."""


class AnnotationParseError(TomatodetError):
    """A label file could not be parsed.

    Carries the offending path and 1-based line number.
    """

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}: "
        super().__init__(f"{where}{message}")


class KbValidationError(TomatodetError):
    """A knowledge-base document failed validation.

    ``violations`` is the full list of :class:`tomatodet.kb.Violation`.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(f"{v.code} at {v.path}" for v in self.violations)
        super().__init__(f"knowledge base invalid: {lines}")


class BackendLoadError(TomatodetError):
    """A model backend artifact is missing or corrupt."""


class BackendConfigError(TomatodetError):
    """A backend descriptor disagrees with the supported configuration."""


class BackendRuntimeError(TomatodetError):
    """The backend failed while running inference."""


class ImageDecodeError(TomatodetError):
    """Uploaded or on-disk bytes could not be decoded as an image."""
