"""Entity resolution: blocking, Jaccard matching, deposit-reuse clustering, fusion.

Similarity is deliberately simple so it stays brute-force checkable: the
property component compares (predicate, literal) pairs, the relational
component compares (direction, predicate, neighbor) pairs, and the two are
combined by configurable weights that sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from chainkg.chain.types import ChainTransaction
from chainkg.kg.terms import Iri, Literal, Triple
from chainkg.kg.store import Store
from chainkg.kg.vocab import RDF_TYPE, Vocab, normalize_username

DEFAULT_MATCH_THRESHOLD = 0.8
DEFAULT_PROPERTY_WEIGHT = 0.5
DEFAULT_BLOCK_CAP = 256
DEFAULT_FORWARD_FRACTION = Fraction(99, 100)
USERNAME_KEY_LENGTH = 3


@dataclass(frozen=True, slots=True)
class CandidateBlock:
    entity: Iri
    entity_class: Iri
    candidates: tuple[Iri, ...]


@dataclass(frozen=True, slots=True)
class MatchScore:
    entity: Iri
    candidate: Iri
    property_sim: float
    relational_sim: float
    combined: float
    is_match: bool


@dataclass(frozen=True, slots=True)
class EntityCluster:
    canonical: Iri
    members: frozenset[str]
    deposit_addresses: frozenset[str]


def block(
    entity: Iri,
    entity_class: Iri,
    store: Store,
    *,
    cap: int = DEFAULT_BLOCK_CAP,
) -> CandidateBlock:
    """Same-class candidates; XAccounts additionally share a username-prefix key.

    The block is truncated deterministically (IRI order) at the cap.
    """
    candidates = store.subjects(RDF_TYPE, entity_class)
    if entity_class == store.vocab.XAccount:
        key = _username_key(entity, store)
        candidates = [c for c in candidates if _username_key(c, store) == key]
    return CandidateBlock(entity=entity, entity_class=entity_class, candidates=tuple(candidates[:cap]))


def _username_key(entity: Iri, store: Store) -> str | None:
    username = store.vocab.local_name(entity, "x")
    if username is None:
        labels = [o for o in store.objects(entity, store.vocab.label) if isinstance(o, Literal)]
        if not labels:
            return None
        username = str(labels[0].value)
    try:
        return normalize_username(username)[:USERNAME_KEY_LENGTH]
    except Exception:
        return None


def _property_pairs(entity: Iri, store: Store, pending: Iterable[Triple]) -> frozenset:
    pairs = set()
    for triple in list(store.about(entity)) + [t for t in pending if t.subject == entity]:
        if isinstance(triple.object, Literal):
            pairs.add((triple.predicate, triple.object))
    return frozenset(pairs)


def _relational_pairs(entity: Iri, store: Store, pending: Iterable[Triple]) -> frozenset:
    pairs = set()
    pending = list(pending)
    for triple in list(store.about(entity)) + [t for t in pending if t.subject == entity]:
        if isinstance(triple.object, Iri):
            pairs.add(("out", triple.predicate, triple.object))
    for triple in list(store.referencing(entity)) + [t for t in pending if t.object == entity]:
        pairs.add(("in", triple.predicate, triple.subject))
    return frozenset(pairs)


def _jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def match_entity(
    entity: Iri,
    candidate_block: CandidateBlock,
    store: Store,
    pending: Iterable[Triple] = (),
    *,
    threshold: float = DEFAULT_MATCH_THRESHOLD,
    property_weight: float = DEFAULT_PROPERTY_WEIGHT,
) -> list[MatchScore]:
    """Pairwise scores against the block, sorted best-first."""
    pending = list(pending)
    entity_props = _property_pairs(entity, store, pending)
    entity_rels = _relational_pairs(entity, store, pending)
    relational_weight = 1.0 - property_weight
    scores = []
    for candidate in candidate_block.candidates:
        if candidate == entity:
            prop_sim = rel_sim = 1.0
        else:
            prop_sim = _jaccard(entity_props, _property_pairs(candidate, store, ()))
            rel_sim = _jaccard(entity_rels, _relational_pairs(candidate, store, ()))
        combined = property_weight * prop_sim + relational_weight * rel_sim
        scores.append(
            MatchScore(
                entity=entity,
                candidate=candidate,
                property_sim=prop_sim,
                relational_sim=rel_sim,
                combined=combined,
                is_match=combined >= threshold,
            )
        )
    scores.sort(key=lambda s: (-s.combined, s.candidate.value))
    return scores


def fuse(
    entity: Iri,
    matches: list[MatchScore],
    store: Store,
    pending: Iterable[Triple] = (),
    *,
    threshold: float = DEFAULT_MATCH_THRESHOLD,
) -> Iri:
    """Merge onto the best match or keep the fresh IRI.

    With a match, pending triples are rewritten onto the canonical subject
    and a sameAs triple records the alias (never the reverse direction, so
    sameAs stays acyclic). Ties above the threshold resolve to the
    lexicographically smaller IRI and leave a review tag behind.
    """
    pending = list(pending)
    vocab = store.vocab
    winners = [m for m in matches if m.is_match and m.candidate != entity]
    canonical = entity
    extra: list[Triple] = []
    if winners:
        top = max(winners, key=lambda m: m.combined)
        tied = sorted(
            (m.candidate for m in winners if m.combined == top.combined),
            key=lambda iri: iri.value,
        )
        canonical = tied[0]
        for other in tied[1:]:
            extra.append(
                Triple(canonical, vocab.tagged, Literal.text(f"match-tie:{other.value}"))
            )
        extra.append(Triple(entity, vocab.sameAs, canonical))
    rewritten = [_rewrite(t, entity, canonical) for t in pending]
    store.insert(rewritten + extra)
    return canonical


def _rewrite(triple: Triple, old: Iri, new: Iri) -> Triple:
    if old == new:
        return triple
    subject = new if triple.subject == old else triple.subject
    obj = new if triple.object == old else triple.object
    return Triple(subject, triple.predicate, obj)


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, item: str) -> str:
        self.parent.setdefault(item, item)
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def find_deposit_addresses(
    transactions: Iterable[ChainTransaction],
    exchange_addresses: frozenset[str] | set[str],
    *,
    forward_fraction: Fraction = DEFAULT_FORWARD_FRACTION,
) -> dict[str, set[str]]:
    """Deposit address -> its non-exchange senders.

    A deposit address receives at least one top-level transfer from a
    non-exchange sender and forwards at least `forward_fraction` of
    everything it received to exactly one exchange.
    """
    received: dict[str, int] = {}
    inbound: dict[str, set[str]] = {}
    outbound_to_exchange: dict[str, dict[str, int]] = {}
    for tx in transactions:
        if tx.to is None or tx.value <= 0:
            continue
        received[tx.to] = received.get(tx.to, 0) + tx.value
        inbound.setdefault(tx.to, set()).add(tx.sender)
        if tx.to in exchange_addresses:
            outbound_to_exchange.setdefault(tx.sender, {}).setdefault(tx.to, 0)
            outbound_to_exchange[tx.sender][tx.to] += tx.value

    deposits: dict[str, set[str]] = {}
    for address, exchanges in outbound_to_exchange.items():
        if address in exchange_addresses or len(exchanges) != 1:
            continue
        senders = {s for s in inbound.get(address, ()) if s not in exchange_addresses}
        if not senders:
            continue
        forwarded = sum(exchanges.values())
        total_received = received.get(address, 0)
        if forwarded * forward_fraction.denominator >= total_received * forward_fraction.numerator:
            deposits[address] = senders
    return deposits


def cluster_deposit_reuse(
    transactions: Iterable[ChainTransaction],
    exchange_addresses: Iterable[str],
    *,
    forward_fraction: Fraction = DEFAULT_FORWARD_FRACTION,
    vocab: Vocab | None = None,
) -> list[EntityCluster]:
    """Cluster addresses that share exchange deposit addresses.

    Every non-exchange sender into a deposit address lands in that deposit's
    cluster; clusters merge transitively when one sender feeds several
    deposit addresses. The result partitions all clustered addresses.
    """
    vocab = vocab or Vocab()
    exchanges = frozenset(a.lower() for a in exchange_addresses)
    if not exchanges:
        return []
    transactions = list(transactions)
    deposits = find_deposit_addresses(transactions, exchanges, forward_fraction=forward_fraction)
    uf = _UnionFind()
    for deposit, senders in deposits.items():
        for sender in senders:
            uf.union(sender, deposit)
    groups: dict[str, set[str]] = {}
    for member in uf.parent:
        groups.setdefault(uf.find(member), set()).add(member)
    clusters = []
    for members in groups.values():
        canonical_key = min(members)
        clusters.append(
            EntityCluster(
                canonical=vocab.cluster(canonical_key),
                members=frozenset(members),
                deposit_addresses=frozenset(m for m in members if m in deposits),
            )
        )
    clusters.sort(key=lambda c: c.canonical.value)
    return clusters
