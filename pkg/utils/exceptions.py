"""
异常定义

所有领域错误都继承 KummerPerverseError，携带 detail 与 exit_code，
CLI 据此决定退出码。
"""
from typing import Optional


class KummerPerverseError(Exception):
    """领域错误基类"""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class EmptyInputError(KummerPerverseError):
    def __init__(self, what: str, value: int):
        super().__init__(f"{what} requires a positive integer, got {value}")


class DomainError(KummerPerverseError):
    def __init__(self, what: str, value: object):
        super().__init__(f"{what} is undefined for {value!r}")


class DivisibilityError(KummerPerverseError):
    def __init__(self, reason: str):
        super().__init__(f"exact division failed: {reason}")


class UnsupportedModelError(KummerPerverseError):
    def __init__(self, case: str, operation: str):
        super().__init__(f"{operation} is only available for compact models, not {case}")


class ShapeError(KummerPerverseError):
    def __init__(self, expected: int, got: int, what: str = "label"):
        super().__init__(f"{what} has {got} tensor factors, expected {expected}")


class DimensionError(KummerPerverseError):
    def __init__(self, left: int, right: int):
        super().__init__(f"mismatched number of points: {left} != {right}")


class GroupMismatchError(KummerPerverseError):
    def __init__(self, left: int, right: int):
        super().__init__(f"torsion labels live in groups of rank {left} and {right}")


class TorsionLabelError(KummerPerverseError):
    def __init__(self, sigma: object, m: int):
        super().__init__(f"torsion label {sigma} is not an element of A[{m}]")


class FeasibilityError(KummerPerverseError):
    exit_code = 3

    def __init__(self, what: str, n: int, bound: int):
        super().__init__(
            f"{what} with n={n} exceeds the feasibility bound n<={bound}; "
            f"set KP_MAX_N to raise it"
        )


class UsageError(KummerPerverseError):
    exit_code = 2

    def __init__(self, message: str, hint: Optional[str] = None):
        detail = message if hint is None else f"{message} ({hint})"
        super().__init__(detail)
