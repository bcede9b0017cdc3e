"""
Record Models
Pydantic models for ingested headlines, annotations and ingestion reports
"""
from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Dict, List, Optional


class HeadlineRecord(BaseModel):
    """News headline with its source leaning (liberal = 1, conservative = 0)"""
    id: str
    text: str
    source: str
    leaning: int
    topic: Optional[str] = None
    topics: List[str] = []

    @field_validator('text')
    @classmethod
    def text_not_empty(cls, v: str) -> str:
        if not v.strip():
            raise ValueError('headline text cannot be empty')
        return v

    @field_validator('leaning')
    @classmethod
    def leaning_binary(cls, v: int) -> int:
        if v not in (0, 1):
            raise ValueError('leaning must be 0 (conservative) or 1 (liberal)')
        return v


class AnnotationRecord(BaseModel):
    """Annotated document with raw per-dimension vote counts"""
    id: str
    text: str
    votes: Dict[str, int]
    annotator_count: int = Field(ge=1)

    @model_validator(mode='after')
    def votes_within_annotators(self) -> 'AnnotationRecord':
        """Every count is between 0 and annotator_count"""
        for dimension, count in self.votes.items():
            if count < 0:
                raise ValueError(f'{dimension}: vote count {count} is negative')
            if count > self.annotator_count:
                raise ValueError(
                    f'{dimension}: {count} votes exceed annotator count {self.annotator_count}'
                )
        return self

    def labels(self, min_votes: int) -> Dict[str, int]:
        return {dimension: int(count >= min_votes) for dimension, count in self.votes.items()}


class IngestReport(BaseModel):
    """Row accounting for one ingest operation: rows_read = kept + sum(dropped)"""
    source_path: str
    rows_read: int = Field(ge=0)
    kept: int = Field(ge=0)
    dropped: Dict[str, int] = {}
    unmatched_ids: List[str] = []

    @model_validator(mode='after')
    def rows_conserved(self) -> 'IngestReport':
        if self.kept + sum(self.dropped.values()) != self.rows_read:
            raise ValueError(
                f'{self.kept} kept + {sum(self.dropped.values())} dropped != {self.rows_read} read'
            )
        return self

    def summary(self) -> str:
        parts = [f'{count} {reason}' for reason, count in sorted(self.dropped.items()) if count]
        dropped = f" (dropped: {', '.join(parts)})" if parts else ''
        return f'{self.kept}/{self.rows_read} rows kept from {self.source_path}{dropped}'
