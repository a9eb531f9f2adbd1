"""Generate and verify logically obfuscated reasoning problems."""

__version__ = "0.1.0"
