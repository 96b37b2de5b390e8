"""
Graph JSON document
{"n": <int>, "edges": [[u, v, w], ...]}
"""
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field


class GraphDocument(BaseModel):
    """Wire form of a weighted graph; edge order is free on input"""

    n: int = Field(ge=1, description="vertex count")
    edges: List[Tuple[int, int, float]] = Field(
        default_factory=list, description="edges as [u, v, w]"
    )

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"n": 3, "edges": [[0, 1, 1.0], [1, 2, 1.0]]}
        }
    )
