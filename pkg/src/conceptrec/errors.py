"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ConceptRecError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ConceptRecError, ValueError):
    """An index, label or set argument does not fit the context."""


class ParameterError(ConceptRecError, ValueError):
    """A numeric threshold or run parameter is outside its admissible range."""


class ConfigurationError(ConceptRecError, ValueError):
    """Two inputs that must agree (axes, bindings, files) do not."""


class OntologyError(ConceptRecError, LookupError):
    """An ontology operator is undefined for the requested node."""


class ParseError(ConceptRecError, ValueError):
    """Malformed input file. Carries the source name and 1-based line number."""

    def __init__(self, message: str, source: str | None = None, line: int | None = None):
        self.source = source
        self.line = line
        where = source or "<stream>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")
