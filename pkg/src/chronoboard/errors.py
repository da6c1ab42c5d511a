"""Exception taxonomy shared across the package.

Every error carries a stable ``code`` (the class name) so the HTTP layer
and the CLI can report machine-readable failures.
"""

from __future__ import annotations


class ChronoboardError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- point algebra ---------------------------------------------------------

class InvalidPoint(ChronoboardError):
    pass


class TooLargeForOracle(ChronoboardError):
    pass


# --- board / entities ------------------------------------------------------

class EmptyEntitySet(ChronoboardError):
    pass


class OverlappingSpans(ChronoboardError):
    pass


class UnknownEntity(ChronoboardError):
    pass


class UnknownRelation(ChronoboardError):
    pass


class InvalidSpan(ChronoboardError):
    pass


# --- corpus ingest ---------------------------------------------------------

class MalformedXML(ChronoboardError):
    pass


class MissingDCT(ChronoboardError):
    pass


class DanglingReference(ChronoboardError):
    pass


class UnknownRelType(ChronoboardError):
    pass


# --- game building ---------------------------------------------------------

class InvalidLevel(ChronoboardError):
    pass


class InconsistentGold(ChronoboardError):
    pass


class CorpusFormatError(ChronoboardError):
    pass


# --- episodes / annotation -------------------------------------------------

class CellNotPlayable(ChronoboardError):
    pass


class EpisodeFinished(ChronoboardError):
    pass


class EpisodeInProgress(ChronoboardError):
    pass


class InvalidPair(ChronoboardError):
    pass


class EmptyText(ChronoboardError):
    pass


class BoardComplete(ChronoboardError):
    pass


# --- service ---------------------------------------------------------------

class UnknownId(ChronoboardError):
    pass
