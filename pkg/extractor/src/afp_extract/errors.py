"""Extractor error types."""


class ExtractError(Exception):
    """Base class for extractor errors."""


class DecodeError(ExtractError):
    """A video could not be opened or a frame could not be decoded."""


class ModelError(ExtractError):
    """Feature-model weights are unavailable."""
