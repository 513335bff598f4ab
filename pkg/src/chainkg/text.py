"""Rule-based entity recognition and relation extraction over social posts."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone

from chainkg.errors import ValidationError
from chainkg.kg.terms import Literal, Triple
from chainkg.kg.vocab import RDF_TYPE, Vocab, normalize_username

KIND_ADDRESS = "blockchain_address"
KIND_MENTION = "username_mention"
KIND_PROJECT = "project_name"

REL_ANNOUNCES = "ANNOUNCES"
REL_MENTIONS_ADDRESS = "MENTIONS_ADDRESS"
REL_MENTIONS_USER = "MENTIONS_USER"

DEFAULT_LAUNCH_KEYWORDS = ("mint", "launch", "live", "drop")

_ADDRESS_RE = re.compile(r"(?<![0-9a-zA-Z])0x[0-9a-fA-F]{40}(?![0-9a-fA-F])")
_MENTION_RE = re.compile(r"(?<!\w)@([A-Za-z0-9_]{1,15})")


@dataclass(frozen=True, slots=True)
class SocialPost:
    id: str
    author_username: str
    created_at: datetime
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValidationError(f"post {self.id}: empty text")
        if self.created_at.tzinfo is None:
            raise ValidationError(f"post {self.id}: naive timestamp")
        object.__setattr__(self, "created_at", self.created_at.astimezone(timezone.utc))


@dataclass(frozen=True, slots=True)
class RecognizedEntity:
    span: tuple[int, int]
    kind: str
    value: str


@dataclass(frozen=True, slots=True)
class PostRelation:
    kind: str
    subject: str
    object: str


def recognize_entities(text: str, project_names: tuple[str, ...] = ()) -> list[RecognizedEntity]:
    """Addresses by the 0x+40-hex rule, @mentions, and dictionary project names."""
    entities = []
    for match in _ADDRESS_RE.finditer(text):
        entities.append(RecognizedEntity(match.span(), KIND_ADDRESS, match.group().lower()))
    for match in _MENTION_RE.finditer(text):
        entities.append(RecognizedEntity(match.span(), KIND_MENTION, match.group(1).lower()))
    lowered = text.lower()
    for name in project_names:
        needle = name.lower()
        start = 0
        while True:
            at = lowered.find(needle, start)
            if at < 0:
                break
            entities.append(RecognizedEntity((at, at + len(name)), KIND_PROJECT, name))
            start = at + len(needle)
    return sorted(entities, key=lambda e: (e.span, e.kind))


def extract_post_relations(
    post: SocialPost,
    entities: list[RecognizedEntity],
    launch_keywords: tuple[str, ...] = DEFAULT_LAUNCH_KEYWORDS,
) -> list[PostRelation]:
    """Address mentions always relate; announcements need a launch keyword."""
    author = normalize_username(post.author_username)
    lowered = post.text.lower()
    announcing = any(keyword.lower() in lowered for keyword in launch_keywords)
    relations = []
    for entity in entities:
        if entity.kind == KIND_ADDRESS:
            relations.append(PostRelation(REL_MENTIONS_ADDRESS, author, entity.value))
            if announcing:
                relations.append(PostRelation(REL_ANNOUNCES, author, entity.value))
        elif entity.kind == KIND_MENTION:
            relations.append(PostRelation(REL_MENTIONS_USER, author, entity.value))
    return relations


def post_to_triples(post: SocialPost, relations: list[PostRelation], vocab: Vocab) -> list[Triple]:
    """Deterministic triples for the post, its author, and its relations."""
    post_iri = vocab.post(post.id)
    author_iri = vocab.x_account(post.author_username)
    triples = [
        Triple(post_iri, RDF_TYPE, vocab.XPost),
        Triple(author_iri, RDF_TYPE, vocab.XAccount),
        Triple(author_iri, vocab.label, Literal.text(normalize_username(post.author_username))),
        Triple(post_iri, vocab.postedBy, author_iri),
    ]
    for relation in relations:
        if relation.kind == REL_MENTIONS_ADDRESS:
            triples.append(Triple(post_iri, vocab.mentionsAddress, vocab.address(relation.object)))
        elif relation.kind == REL_ANNOUNCES:
            triples.append(Triple(vocab.address(relation.object), vocab.announcedBy, author_iri))
        elif relation.kind == REL_MENTIONS_USER:
            mentioned = vocab.x_account(relation.object)
            triples.append(Triple(post_iri, vocab.mentionsUser, mentioned))
            triples.append(Triple(mentioned, RDF_TYPE, vocab.XAccount))
            triples.append(Triple(mentioned, vocab.label, Literal.text(relation.object)))
    return triples
