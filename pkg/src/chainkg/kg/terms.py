"""Graph terms: IRIs, typed literals, triples, and query patterns."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import Decimal
from typing import Union

from chainkg.errors import ValidationError

LITERAL_KINDS = ("text", "integer", "decimal", "timestamp")

_KIND_FOR_TYPE = {str: "text", int: "integer", Decimal: "decimal", datetime: "timestamp"}


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value or any(c.isspace() for c in self.value):
            raise ValidationError(f"invalid IRI: {self.value!r}")
        if any(c in self.value for c in '<>"{}|^`\\'):
            raise ValidationError(f"IRI contains forbidden character: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    """Typed literal; kind is one of text/integer/decimal/timestamp."""

    value: Union[str, int, Decimal, datetime]
    kind: str

    def __post_init__(self):
        if self.kind not in LITERAL_KINDS:
            raise ValidationError(f"unknown literal kind {self.kind!r}")
        expected = _KIND_FOR_TYPE.get(type(self.value))
        if isinstance(self.value, bool) or expected != self.kind:
            raise ValidationError(f"{type(self.value).__name__} value cannot be a {self.kind} literal")
        if self.kind == "timestamp":
            dt = self.value
            if dt.tzinfo is None:
                raise ValidationError("timestamp literals must be timezone-aware")
            object.__setattr__(self, "value", dt.astimezone(timezone.utc))

    @classmethod
    def text(cls, value: str) -> "Literal":
        return cls(value, "text")

    @classmethod
    def integer(cls, value: int) -> "Literal":
        return cls(value, "integer")

    @classmethod
    def decimal(cls, value: Decimal | str | int) -> "Literal":
        return cls(Decimal(value), "decimal")

    @classmethod
    def timestamp(cls, value: datetime) -> "Literal":
        return cls(value, "timestamp")


Term = Union[Iri, Literal]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, Iri) or not isinstance(self.predicate, Iri):
            raise ValidationError("triple subject and predicate must be IRIs")
        if not isinstance(self.object, (Iri, Literal)):
            raise ValidationError("triple object must be an IRI or a literal")


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValidationError("variables must be named")

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Iri, Literal, Variable]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def terms(self) -> tuple[PatternTerm, PatternTerm, PatternTerm]:
        return (self.subject, self.predicate, self.object)
