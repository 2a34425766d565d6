"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HdxError(Exception):
    """Base class; ``exit_code`` is what the CLI returns when this escapes."""

    exit_code = 2
    kind = "error"

    def __init__(self, message: str, witness: object = None) -> None:
        super().__init__(message)
        self.witness = witness

    def to_json(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


class ParameterError(HdxError, ValueError):
    kind = "parameter"


class InfeasibleError(HdxError):
    exit_code = 3
    kind = "infeasible"


class SizeError(HdxError):
    exit_code = 3
    kind = "size"


class StructuralError(HdxError):
    exit_code = 1
    kind = "structural"


class DisconnectedError(StructuralError):
    kind = "disconnected"


class StateError(HdxError):
    kind = "state"


class ModeError(HdxError):
    exit_code = 3
    kind = "mode"


class ValidationError(StructuralError):
    """Raised by strict builders when a CTS condition fails; carries the record."""

    kind = "validation"

    def __init__(self, message: str, record: object = None) -> None:
        super().__init__(message, witness=getattr(record, "witness", None))
        self.record = record


def _jsonable(obj: object) -> object:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj
