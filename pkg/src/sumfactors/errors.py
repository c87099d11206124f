"""Exception types shared across the package.

DataError and its subclasses signal problems with user-supplied data
(malformed records, missing splits, incomplete label files) and map to
exit status 2 at the CLI boundary. Programming errors keep raising the
usual ValueError/TypeError.
"""


class DataError(Exception):
    """Invalid or inconsistent input data."""


class CorpusFormatError(DataError):
    """A corpus file violates the line-delimited record format."""


class LabelError(DataError):
    """A label set is malformed or does not match its corpus."""
