from pathlib import Path
from typing import Any, Self

from pydantic import BaseModel, ConfigDict


class Schema(BaseModel):
    """
    Base class for all schemas.
    It is a wrapper around pydantic.BaseModel, adding the JSON helpers shared by
    reports and payload files.
    """

    def to_json(self) -> str:
        """Indented JSON, the payload format of every command."""
        return self.model_dump_json(indent=2)

    @classmethod
    def parse(cls, obj: Any) -> Self:
        """Validate a decoded payload."""
        return cls.model_validate(obj)

    @classmethod
    def read(cls, path: Path) -> Self:
        """Validate the JSON payload stored in a file."""
        return cls.model_validate_json(path.read_text())


class Node(Schema):
    """
    Base class for syntax tree nodes.
    Nodes are frozen so they can be hashed, shared between processes and used as
    dictionary keys (term sets, Skolem keys, evaluation blocks).
    """

    model_config = ConfigDict(frozen=True)
