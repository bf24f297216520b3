"""chronoterm: diff automatic subject indexing output across two versions of
a controlled vocabulary to surface, classify, and map deprecated terms."""

__version__ = "0.1.0"
