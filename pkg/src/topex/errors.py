"""Exception types and enumeration caps shared by every module."""

import os

DEFAULT_STEP_CAP = 20
DEFAULT_OPEN_CAP = 10**6


class TopexError(Exception):
    """Base class for errors raised by this package."""


class DomainError(TopexError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class SizeLimitError(TopexError):
    """An enumeration would exceed its configured cap."""


def _parse_cap_env():
    raw = os.environ.get("TOPEX_CAP", "").strip()
    if not raw:
        return {}
    caps = {}
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            key, value = "step", key
        key = key.strip()
        if key not in ("step", "opens"):
            raise DomainError(f"TOPEX_CAP: unknown cap {key!r} (expected 'step' or 'opens')")
        try:
            caps[key] = int(value)
        except ValueError:
            raise DomainError(f"TOPEX_CAP: cap {key!r} must be an integer, got {value!r}") from None
        if caps[key] < 0:
            raise DomainError(f"TOPEX_CAP: cap {key!r} must be non-negative")
    return caps


def step_cap(override=None):
    """Largest step index accepted by sign-string enumeration.

    ``TOPEX_CAP=12`` or ``TOPEX_CAP=step=12`` overrides the default of 20.
    """
    if override is not None:
        return int(override)
    return _parse_cap_env().get("step", DEFAULT_STEP_CAP)


def open_cap(override=None):
    """Largest number of open sets a coproduct may enumerate (``TOPEX_CAP=opens=N``)."""
    if override is not None:
        return int(override)
    return _parse_cap_env().get("opens", DEFAULT_OPEN_CAP)
