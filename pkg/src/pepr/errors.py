"""Exception types shared across the package."""


class PeprError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PeprError):
    """Source text could not be tokenized/parsed."""


class NoStatementAtLine(PeprError):
    """No statement-level node covers the requested line."""


class AllLinesUnusable(PeprError):
    """Every suspicious line failed statement location."""


class UnknownTool(PeprError):
    """Tool name not registered."""


class DuplicateToolError(PeprError):
    """Tool name already registered."""


class DuplicatePatternId(PeprError):
    """Pattern id defined more than once in one config."""


class MalformedPredicate(PeprError):
    """Pattern predicate config is invalid."""


class SchemaError(PeprError):
    """Persistent file is corrupt or has an unsupported schema version."""


class EmptyToolset(PeprError):
    """Ranking requested over an empty tool set."""


class UnknownStrategy(PeprError):
    """Simulation strategy name not recognized."""


class DatasetError(PeprError):
    """Repair-result dataset is inconsistent or incomplete."""


class WorkspaceError(PeprError):
    """Workspace configuration is missing or invalid."""
