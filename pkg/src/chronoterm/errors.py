"""Exception hierarchy: configuration problems vs bad input data."""


class ChronotermError(Exception):
    """Base class for all library errors."""


class ConfigurationError(ChronotermError):
    """Invalid configuration or unusable paths (CLI exit code 2)."""


class DataError(ChronotermError):
    """Well-formed request over malformed or inconsistent data (exit code 3)."""


class VocabularyError(DataError):
    """Vocabulary file could not be loaded."""


class CorpusError(DataError):
    """Corpus manifest, text file, or entity file could not be loaded."""


class SamplingError(DataError):
    """A stratum cannot supply the requested sample size."""
