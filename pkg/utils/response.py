from typing import List, Optional


def error_payload(message: str = "Error occurred", exit_code: int = 1, errors: Optional[List[str]] = None) -> dict:
    """
    Helper function to create an error envelope
    """
    return {
        "success": False,
        "message": message,
        "exit_code": exit_code,
        "errors": errors or [],
    }
