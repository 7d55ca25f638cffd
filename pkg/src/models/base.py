"""
Base Model
Provides common serialization for all dataclass models
"""
import dataclasses
import enum
from fractions import Fraction


def _plain(value):
    """Convert nested model values into JSON-ready primitives"""
    if isinstance(value, BaseModel):
        return value.to_dict()
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


class BaseModel:
    """
    Base model with common methods
    All dataclass models should inherit from this class
    """

    def to_dict(self):
        """Convert model instance to dictionary"""
        return {
            field.name: _plain(getattr(self, field.name))
            for field in dataclasses.fields(self)
        }
