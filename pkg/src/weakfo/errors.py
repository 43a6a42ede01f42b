"""Exception types and resource caps shared across the package."""

import os


class WeakfoError(Exception):
    pass


class ParseError(WeakfoError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class SignatureError(WeakfoError):
    pass


class ArityError(WeakfoError):
    pass


class CaptureError(WeakfoError):
    pass


class NotNNFError(WeakfoError):
    pass


class DuplicateBindersError(WeakfoError):
    pass


class RenderLimitError(WeakfoError):
    pass


class CapExceeded(WeakfoError):
    pass


class StructureError(WeakfoError):
    pass


class TransformError(WeakfoError):
    pass


def structure_cap() -> int:
    """Maximum number of structures an enumeration sweep may visit."""
    return int(os.environ.get("WEAKFO_CAP", 2_000_000))


def eval_budget() -> int:
    """Maximum number of elementary evaluator steps per top-level call."""
    return 5 * int(os.environ.get("WEAKFO_CAP", 2_000_000))
