"""
Lexicon Models
Pydantic models for moral foundation micro-frame lexicons

A lexicon is a named, ordered list of dimensions. Each dimension holds a
virtue word set and a vice word set (the two poles of its semantic axis).
"""
from pydantic import BaseModel, field_validator, model_validator
from typing import Dict, List


def _normalize_words(words: List[str]) -> List[str]:
    """Lowercase, strip, reject multi-word entries, dedupe and sort"""
    cleaned = set()
    for word in words:
        if not isinstance(word, str):
            raise ValueError(f'word entries must be strings, got {word!r}')
        token = word.strip().lower()
        if not token:
            raise ValueError('empty word entry')
        if any(ch.isspace() for ch in token):
            raise ValueError(f'multi-word entry not allowed: {word!r}')
        cleaned.add(token)
    return sorted(cleaned)


class MicroFrameDef(BaseModel):
    """One moral dimension: virtue pole vs. vice pole"""
    name: str
    virtues: List[str]
    vices: List[str]

    @field_validator('name')
    @classmethod
    def name_not_empty(cls, v: str) -> str:
        """Ensure dimension names are not empty or just whitespace"""
        if not v or not v.strip():
            raise ValueError('dimension name cannot be empty')
        return v.strip()

    @field_validator('virtues', 'vices')
    @classmethod
    def pole_words_valid(cls, v: List[str]) -> List[str]:
        """Normalize pole words; a pole may not be empty"""
        words = _normalize_words(v)
        if not words:
            raise ValueError('pole must list at least one word')
        return words

    @model_validator(mode='after')
    def poles_disjoint(self) -> 'MicroFrameDef':
        """A word cannot be both a virtue and a vice of the same dimension"""
        overlap = sorted(set(self.virtues) & set(self.vices))
        if overlap:
            raise ValueError(
                f'dimension {self.name!r}: words listed as both virtue and vice: {", ".join(overlap)}'
            )
        return self


class MoralLexicon(BaseModel):
    """Named, ordered collection of micro-frame dimensions"""
    name: str
    dimensions: List[MicroFrameDef]

    @field_validator('dimensions')
    @classmethod
    def dimensions_unique(cls, v: List[MicroFrameDef]) -> List[MicroFrameDef]:
        """Dimension list is nonempty and names are unique"""
        if not v:
            raise ValueError('lexicon must declare at least one dimension')
        seen = set()
        for dim in v:
            if dim.name in seen:
                raise ValueError(f'duplicate dimension name: {dim.name!r}')
            seen.add(dim.name)
        return v

    @property
    def dimension_names(self) -> List[str]:
        return [dim.name for dim in self.dimensions]

    def get(self, name: str) -> MicroFrameDef:
        """Look up a dimension by name (KeyError if absent)"""
        for dim in self.dimensions:
            if dim.name == name:
                return dim
        raise KeyError(name)


class PoleCoverage(BaseModel):
    """Which words of one pole have embedding vectors"""
    found: List[str] = []
    missing: List[str] = []

    @property
    def found_count(self) -> int:
        return len(self.found)

    @property
    def missing_count(self) -> int:
        return len(self.missing)


class DimensionCoverage(BaseModel):
    name: str
    virtues: PoleCoverage
    vices: PoleCoverage


class LexiconCoverage(BaseModel):
    """Per-dimension vocabulary coverage of a lexicon in an embedding store"""
    lexicon_name: str
    dimensions: List[DimensionCoverage]

    @property
    def missing_words(self) -> List[str]:
        missing = set()
        for dim in self.dimensions:
            missing.update(dim.virtues.missing)
            missing.update(dim.vices.missing)
        return sorted(missing)

    def summary(self) -> Dict[str, Dict[str, int]]:
        """Counts only, keyed by dimension name (for run manifests)"""
        return {
            dim.name: {
                'virtues_found': dim.virtues.found_count,
                'virtues_missing': dim.virtues.missing_count,
                'vices_found': dim.vices.found_count,
                'vices_missing': dim.vices.missing_count,
            }
            for dim in self.dimensions
        }
