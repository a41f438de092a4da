"""Exception hierarchy shared across the toolkit."""


class HelpcomError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(HelpcomError):
    """Configuration file missing, unparseable, or violating an invariant."""


class ExtractionError(HelpcomError):
    """Source file could not be decoded or no grammar profile exists."""


class HistoryError(HelpcomError):
    """Version-control history could not be mined for a method."""


class StoreError(HelpcomError):
    """Record file unreadable, unwritable, or schema-invalid."""


class ProviderError(HelpcomError):
    """Completion/embedding/alignment provider failed."""


class ProviderAuthError(ProviderError):
    """Authentication failure; never retried."""


class EmptyCompletionError(ProviderError):
    """Provider returned an empty completion."""
