"""
Embedding Models
Pydantic models describing a word-vector file load
"""
from pydantic import BaseModel, model_validator


class LoadReport(BaseModel):
    """Line accounting for one word-vector file load"""
    source_path: str
    dimension: int
    lines_read: int = 0
    entries_kept: int = 0
    duplicates_skipped: int = 0
    malformed_skipped: int = 0
    header_skipped: bool = False
    normalized: bool = False

    @model_validator(mode='after')
    def lines_accounted_for(self) -> 'LoadReport':
        """Every counted line is kept, a duplicate, or malformed"""
        total = self.entries_kept + self.duplicates_skipped + self.malformed_skipped
        if self.lines_read != total:
            raise ValueError(
                f'lines_read ({self.lines_read}) must equal kept + duplicates + malformed ({total})'
            )
        return self
