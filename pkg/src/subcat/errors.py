"""Exception hierarchy.

Everything raised because of bad *input data* derives from DataError so
the CLI can map it to its own exit code; programming errors (bad
arguments) stay ValueError/TypeError.
"""

from __future__ import annotations


class DataError(ValueError):
    """Malformed or unusable input data."""

    def __init__(self, message: str, *, source: str | None = None,
                 line: int | None = None, column: int | None = None):
        self.message = message
        self.source = source
        self.line = line
        self.column = column
        super().__init__(self._format())

    def _format(self) -> str:
        where = [str(part) for part in (self.source, self.line, self.column)
                 if part is not None]
        if where:
            return ":".join(where) + ": " + self.message
        return self.message

    def with_source(self, source: str) -> "DataError":
        self.source = source
        self.args = (self._format(),)
        return self


class TreebankParseError(DataError):
    def __init__(self, message: str, *, offset: int, line: int, column: int):
        self.offset = offset
        super().__init__(message, line=line, column=column)


class UnbalancedBrackets(TreebankParseError):
    pass


class EmptyTree(TreebankParseError):
    pass


class LeafWithoutTag(TreebankParseError):
    pass


class MalformedRow(DataError):
    pass


class UnknownPos(DataError):
    pass


class EmptyLexicon(DataError):
    pass


class EmptyCorpus(DataError):
    pass


class NoVerbFound(ValueError):
    pass


class NonPositiveWeight(ValueError):
    pass


class MixedWeightModes(ValueError):
    pass


class UnknownStem(KeyError):
    pass


class InvalidRate(ValueError):
    pass


class InvalidSignificance(ValueError):
    pass
