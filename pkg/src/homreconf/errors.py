from __future__ import annotations


class CapExceeded(RuntimeError):
    """A brute-force size guard was hit."""


class InvalidCertificate(ValueError):
    """A certificate failed re-validation."""


class InvalidHomomorphism(ValueError):
    """A map that should be an edge-preserving extension is not."""
