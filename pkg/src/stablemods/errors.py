"""Exception types shared across the package."""


class StableModsError(Exception):
    """Base class for all package errors."""


class ParseError(StableModsError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class ArityError(StableModsError):
    pass


class SignatureError(StableModsError):
    pass


class EvaluationError(StableModsError):
    """An interpretation does not cover a constant it is asked about."""


class InstantiationError(StableModsError):
    """A step expression evaluated to a negative predicate index."""


class EnumerationGuardError(StableModsError):
    """A brute-force enumeration would exceed the configured candidate cap."""


class IncompatibleError(StableModsError):
    """Union of partial interpretations that disagree on a shared constant."""


class NotJoinableError(StableModsError):
    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class AcyclicityError(StableModsError):
    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class NotRuleShapedError(StableModsError):
    """A formula cannot be rendered back into rule syntax."""


class AssemblyError(StableModsError):
    """A join failed during incremental assembly; indicates a bug, not bad input."""
