"""Exception types shared across the package.

Every error raised by archiguesser code derives from ArchiGuesserError so
callers can catch the whole family at integration boundaries (CLI, HTTP).
"""

from __future__ import annotations


class ArchiGuesserError(Exception):
    """Base class for all errors raised by this package."""


# --- catalog ---------------------------------------------------------------

class ParseError(ArchiGuesserError):
    """A file could not be parsed; message carries line/field context."""


class ValidationError(ArchiGuesserError):
    """A record or request violates a stated invariant."""


class NotFoundError(ArchiGuesserError):
    """Lookup by id or key found nothing."""


# --- curation / generative clients ------------------------------------------

class ClientError(ArchiGuesserError):
    """A generative text client call failed (after retries, where retried)."""


class SummaryError(ArchiGuesserError):
    """A style summary could not be obtained within the retry budget."""


class CurationError(ArchiGuesserError):
    """The curation pipeline failed fatally (I/O, or nothing survived)."""


# --- generative adapters / asset cache ---------------------------------------

class BackendError(ArchiGuesserError):
    """A generation backend failed."""


class CacheError(ArchiGuesserError):
    """The asset store could not read or write."""


# --- prompt building ---------------------------------------------------------

class SameStyleError(ArchiGuesserError):
    """A restyle request targeted the landmark's own native style."""


# --- marker vision -----------------------------------------------------------

class ExhaustedError(ArchiGuesserError):
    """Dictionary search ran out of proposal budget before finding enough codes."""


class ImageFormatError(ArchiGuesserError):
    """An input raster is not a format this package reads."""


class MissingCornersError(ArchiGuesserError):
    """Board calibration is impossible: one or more corner markers absent.

    ``missing`` lists the absent reserved marker ids.
    """

    def __init__(self, missing: list[int]):
        super().__init__(f"corner markers missing: {sorted(missing)}")
        self.missing = sorted(missing)


class DegenerateError(ArchiGuesserError):
    """Calibration points are collinear or otherwise unusable."""


class OutsideBoardError(ArchiGuesserError):
    """A pixel maps outside the board rectangle beyond tolerance."""


class NotSliderMarkerError(ArchiGuesserError):
    """slider_to_year was handed a detection that is not the slider marker."""


# --- scoring -----------------------------------------------------------------

class ModeMismatchError(ArchiGuesserError):
    """Guess shape does not fit the round mode (e.g. 2 tokens outside Sights)."""


# --- game engine ---------------------------------------------------------------

class PhaseError(ArchiGuesserError):
    """An operation arrived in the wrong round phase (or too late)."""


class DuplicateGuessError(ArchiGuesserError):
    """A player tried to guess twice in one round."""


class UnknownPlayerError(ArchiGuesserError):
    """The player id is not part of the session."""


class GenerationError(ArchiGuesserError):
    """Round asset generation failed; the round was aborted."""
