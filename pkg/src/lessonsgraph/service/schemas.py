"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

DocTypeName = Literal["FC", "PE", "PS"]


class SearchRequest(BaseModel):
    query: str
    depth: int | None = Field(default=None, ge=0)
    limit: int | None = Field(default=None, ge=1)
    result_types: list[DocTypeName] | None = None


class RecommendRequest(BaseModel):
    element_id: str | None = None
    element_text: str | None = None
    depth: int | None = Field(default=None, ge=0)
    limit: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _exactly_one_target(self):
        if (self.element_id is None) == (self.element_text is None):
            raise ValueError("provide exactly one of element_id or element_text")
        return self


class PathStepModel(BaseModel):
    category: str
    weight: float


class ResultItem(BaseModel):
    id: str
    label: str
    type: str
    score: float
    base: bool
    path: list[PathStepModel]


class SearchResponse(BaseModel):
    results: list[ResultItem]


class StatsNodeRow(BaseModel):
    type: str
    count: int
    percent: int


class StatsRelationRow(BaseModel):
    category: str
    count: int


class StatsResponse(BaseModel):
    total_nodes: int
    total_relations: int
    nodes: list[StatsNodeRow]
    relations: list[StatsRelationRow]


class NodeDetail(BaseModel):
    id: str
    type: str
    label: str
    payload: dict
    structure_parent: str | None = None
    degree: int


class SubgraphNode(BaseModel):
    id: str
    type: str
    label: str


class SubgraphEdge(BaseModel):
    a: str
    b: str
    category: str
    weight: float


class SubgraphResponse(BaseModel):
    nodes: list[SubgraphNode]
    edges: list[SubgraphEdge]


class ErrorBody(BaseModel):
    code: str
    message: str
