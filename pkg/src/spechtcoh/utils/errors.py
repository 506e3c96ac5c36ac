class CharacteristicError(ValueError):
    """Raised when an odd-characteristic-only operation is called with p = 2."""


class DimensionCapError(RuntimeError):
    """
    Raised when a computation would exceed a configured dimension cap.

    Args:
        message (str): Human readable description of the exceeded cap.
        required (int): The dimension (or d) the computation would need.
        cap (int): The configured cap that was exceeded.
    """

    def __init__(self, message, required, cap):
        super().__init__(message)
        self.required = required
        self.cap = cap
