"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ChainkgError(Exception):
    """Base class for all package errors."""


class ParseError(ChainkgError):
    """Malformed textual input. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ChainkgError):
    """Input violates a structural constraint (vocabulary, signature form, ...)."""


class DecodeError(ChainkgError):
    """Transaction input data cannot be decoded against the ABI."""


class NotAContractError(ChainkgError):
    """Address has no bytecode in the registry and no provider response."""


class NotFoundError(ChainkgError):
    """Requested entity is unknown to the store."""


class TransportError(ChainkgError):
    """A remote client failed at the transport level (retryable)."""


class ConfigError(ChainkgError):
    """Configuration file or overrides are invalid."""
