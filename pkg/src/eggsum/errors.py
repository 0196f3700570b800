"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A precondition on arguments or data shapes was violated."""


class BracketError(ValidationError):
    """A root bracket handed to the threshold bisection does not bracket."""


class ResourceCapError(RuntimeError):
    """A computation would exceed its configured resource cap.

    Raised instead of silently truncating; the caller must either raise the
    cap explicitly or shrink the request.
    """
