"""Closed vocabulary and deterministic IRI minting under a base namespace.

The ontology is a small, Ethereum-flavored subset: account/contract classes
with tag subclasses, plus the relation set the pipeline emits. Everything
lives under <base>vocab#; entities are minted under path segments of the
base namespace so exports stay prefix-friendly.
"""

from __future__ import annotations

import re

from chainkg.errors import ValidationError
from chainkg.kg.terms import Iri

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_TYPE = Iri(RDF_NS + "type")

XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_LOCAL_RE = re.compile(r"^[A-Za-z0-9_\-]+$")


class Vocab:
    """Vocabulary bound to one base namespace."""

    CLASS_NAMES = (
        "Account",
        "ContractAccount",
        "ExternalAccount",
        "DeployerAccount",
        "NftMinterAccount",
        "Project",
        "NftContract",
        "XAccount",
        "XPost",
        "IngestedRecord",
    )
    PREDICATE_NAMES = (
        "deployed",
        "transferredTo",
        "minted",
        "proceedsTo",
        "announcedBy",
        "postedBy",
        "mentionsAddress",
        "mentionsUser",
        "controlledBy",
        "sameAs",
        "launchDate",
        "estimatedProfit",
        "tagged",
        "label",
        "description",
        "affiliatedWith",
        "derivedFrom",
    )

    def __init__(self, base: str = "http://chainkg.local/"):
        if not base.endswith("/"):
            base += "/"
        self.base = base
        self.ns = base + "vocab#"
        for name in self.CLASS_NAMES + self.PREDICATE_NAMES:
            setattr(self, name, Iri(self.ns + name))
        self.classes: frozenset[Iri] = frozenset(Iri(self.ns + n) for n in self.CLASS_NAMES)
        self.predicates: frozenset[Iri] = frozenset(Iri(self.ns + n) for n in self.PREDICATE_NAMES)
        # Namespaces whose terms are accepted alongside the closed vocabulary.
        self.imported_namespaces: tuple[str, ...] = (RDF_NS,)

    # --- entity minting -------------------------------------------------

    def address(self, address: str) -> Iri:
        return self._entity("address", address.lower())

    def x_account(self, username: str) -> Iri:
        return self._entity("x", normalize_username(username))

    def post(self, post_id: str) -> Iri:
        return self._entity("post", post_id)

    def project(self, name: str) -> Iri:
        return self._entity("project", slugify(name))

    def cluster(self, key: str) -> Iri:
        return self._entity("cluster", key.lower())

    def record(self, source: str, key: str) -> Iri:
        return self._entity("record", f"{source}-{key}")

    def _entity(self, segment: str, local: str) -> Iri:
        if not _LOCAL_RE.match(local):
            raise ValidationError(f"cannot mint IRI from {local!r}")
        return Iri(f"{self.base}{segment}/{local}")

    def local_name(self, iri: Iri, segment: str) -> str | None:
        """Local part of an entity IRI within a segment, if it is one."""
        prefix = f"{self.base}{segment}/"
        if iri.value.startswith(prefix):
            return iri.value[len(prefix):]
        return None

    # --- serialization support -------------------------------------------

    def prefix_table(self) -> dict[str, str]:
        """Prefix -> namespace map for Turtle export, longest namespaces first."""
        table = {
            "rdf": RDF_NS,
            "ckg": self.ns,
            "addr": self.base + "address/",
            "x": self.base + "x/",
            "post": self.base + "post/",
            "project": self.base + "project/",
            "cluster": self.base + "cluster/",
            "record": self.base + "record/",
        }
        return table

    def is_known_predicate(self, predicate: Iri) -> bool:
        if predicate in self.predicates:
            return True
        return any(predicate.value.startswith(ns) for ns in self.imported_namespaces)


def slugify(name: str) -> str:
    """Lowercase, non-alphanumerics collapsed to single dashes."""
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    if not slug:
        raise ValidationError(f"cannot slugify {name!r}")
    return slug


def normalize_username(username: str) -> str:
    username = username.lstrip("@").lower()
    if not re.match(r"^[a-z0-9_]{1,15}$", username):
        raise ValidationError(f"invalid username {username!r}")
    return username
