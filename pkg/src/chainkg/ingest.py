"""Ingestion: fixture replays for the four source cadences, plus the pipeline.

Sources feed SourceEnvelopes to sinks in a guaranteed per-source order:
chain transactions by (block number, file order), social posts by timestamp,
attribution records per polling cycle deduplicated by content hash, and
enrichment lookups driven by entity-added events from the store.

Idempotence rides on provenance: every processed record leaves an
IngestedRecord marker keyed by its hash/id, and a seen marker short-circuits
reprocessing, so replaying the same fixtures inserts nothing new.

Live adapters (websocket chain feeds, streaming social APIs) implement the
same SourceAdapter protocol as the file replays; only fixture-backed
implementations ship.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Callable, Iterable, Protocol

from chainkg.chain.registry import AbiResolver, ContractRegistry, FixtureAbiProvider
from chainkg.chain.semantics import classify_transaction, extract_relations, is_mint_label, tag_addresses
from chainkg.chain.types import (
    ATTRIBUTION_TAGS,
    PREDICATE_DEPLOY,
    PREDICATE_TRANSFER,
    TAG_DEPLOYER,
    TAG_NFT_MINTER,
    ChainTransaction,
    InternalTransfer,
    normalize_address,
    normalize_tx_hash,
)
from chainkg.config import Config, load_config
from chainkg.errors import ChainkgError, ParseError, TransportError, ValidationError
from chainkg.evm.abi import SignatureDictionary
from chainkg.kg.store import EntityAddedEvent, Store
from chainkg.kg.terms import Iri, Literal, Triple
from chainkg.kg.vocab import RDF_TYPE, Vocab
from chainkg.resolution import block, cluster_deposit_reuse, fuse, match_entity
from chainkg.text import SocialPost, extract_post_relations, post_to_triples, recognize_entities

log = logging.getLogger(__name__)

CHAIN_FILE = "chain.jsonl"
POSTS_FILE = "posts.jsonl"
ATTRIBUTIONS_FILE = "attributions.jsonl"
ENRICHMENT_FILE = "enrichment.json"
CONTRACTS_FILE = "contracts.json"
ABIS_FILE = "abis.json"
SIGNATURES_FILE = "signatures.txt"
PROJECT_NAMES_FILE = "project_names.txt"

SOURCE_CHAIN = "chain"
SOURCE_SOCIAL = "social"
SOURCE_ATTRIBUTION = "attribution"
SOURCE_ENRICHMENT = "enrichment"


@dataclass(frozen=True, slots=True)
class SourceEnvelope:
    source: str
    seq: int
    payload: object
    ingested_at: float


@dataclass(frozen=True, slots=True)
class AttributionRecord:
    address: str
    label: str
    tag: str
    provenance: str

    def __post_init__(self):
        if self.tag not in ATTRIBUTION_TAGS:
            raise ValidationError(f"unknown attribution tag {self.tag!r}")

    def content_hash(self) -> str:
        canonical = json.dumps(
            {"address": self.address, "label": self.label, "tag": self.tag, "provenance": self.provenance},
            sort_keys=True,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True, slots=True)
class ProjectAffiliation:
    name: str
    launch_date: datetime | None = None
    estimated_profit_usd: Decimal | None = None


@dataclass(frozen=True, slots=True)
class EnrichmentRecord:
    username: str
    name: str = ""
    description: str = ""
    affiliations: tuple[ProjectAffiliation, ...] = ()
    links: tuple[str, ...] = ()


Sink = Callable[[SourceEnvelope], None]


class SourceAdapter(Protocol):
    """Wire contract for live sources: connect, pull, acknowledge."""

    source_id: str

    def connect(self) -> None: ...

    def next(self) -> SourceEnvelope | None: ...

    def ack(self, seq: int) -> None: ...


class FileReplayAdapter:
    """SourceAdapter over a pre-parsed payload list (the fixture backend)."""

    def __init__(self, source_id: str, payloads: Iterable[object]):
        self.source_id = source_id
        self._payloads = list(payloads)
        self._cursor = 0
        self._acked = 0
        self._connected = False

    def connect(self) -> None:
        self._connected = True

    def next(self) -> SourceEnvelope | None:
        if not self._connected:
            raise ChainkgError(f"source {self.source_id} is not connected")
        if self._cursor >= len(self._payloads):
            return None
        self._cursor += 1
        return SourceEnvelope(
            source=self.source_id,
            seq=self._cursor,
            payload=self._payloads[self._cursor - 1],
            ingested_at=time.time(),
        )

    def ack(self, seq: int) -> None:
        if seq != self._acked + 1:
            raise ChainkgError(f"source {self.source_id}: out-of-order ack {seq}")
        self._acked = seq


def _drain(adapter, sink: Sink) -> int:
    adapter.connect()
    delivered = 0
    while True:
        envelope = adapter.next()
        if envelope is None:
            return delivered
        sink(envelope)
        adapter.ack(envelope.seq)
        delivered += 1


# --- line parsers ----------------------------------------------------------


def _read_json_lines(path: Path) -> list[tuple[int, dict]]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON: {exc.msg}", line=line_no) from None
            if not isinstance(obj, dict):
                raise ParseError("expected a JSON object", line=line_no)
            rows.append((line_no, obj))
    return rows


def _wei(value, line_no: int, field_name: str) -> int:
    try:
        amount = int(str(value))
    except ValueError:
        raise ParseError(f"{field_name} must be a decimal integer, got {value!r}", line=line_no) from None
    if amount < 0:
        raise ParseError(f"{field_name} must be non-negative", line=line_no)
    return amount


def parse_chain_transaction(obj: dict, line_no: int = 1) -> ChainTransaction:
    try:
        transfers = tuple(
            InternalTransfer(
                sender=normalize_address(t["from"]),
                recipient=normalize_address(t["to"]),
                value=_wei(t["value_wei"], line_no, "internal value_wei"),
            )
            for t in obj.get("internal_transfers", ())
        )
        return ChainTransaction(
            hash=normalize_tx_hash(obj["hash"]),
            block_number=int(obj["block_number"]),
            timestamp=int(obj["timestamp"]),
            sender=normalize_address(obj["from"]),
            to=normalize_address(obj["to"]) if obj.get("to") is not None else None,
            value=_wei(obj["value_wei"], line_no, "value_wei"),
            input=bytes.fromhex(obj.get("input", "0x")[2:] if str(obj.get("input", "0x")).startswith("0x") else obj.get("input", "")),
            created_contract=normalize_address(obj["created_contract"]) if obj.get("created_contract") else None,
            internal_transfers=transfers,
        )
    except KeyError as exc:
        raise ParseError(f"missing transaction field {exc.args[0]!r}", line=line_no) from None
    except (ValidationError, ValueError) as exc:
        raise ParseError(str(exc), line=line_no) from None


def _parse_created_at(value, line_no: int) -> datetime:
    try:
        if isinstance(value, (int, float)):
            return datetime.fromtimestamp(value, tz=timezone.utc)
        text = str(value)
        if text.endswith("Z"):
            text = text[:-1] + "+00:00"
        parsed = datetime.fromisoformat(text)
    except ValueError as exc:
        raise ParseError(f"bad created_at: {exc}", line=line_no) from None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed


def parse_social_post(obj: dict, line_no: int = 1) -> SocialPost:
    try:
        return SocialPost(
            id=str(obj["id"]),
            author_username=str(obj["author_username"]),
            created_at=_parse_created_at(obj["created_at"], line_no),
            text=str(obj["text"]),
        )
    except KeyError as exc:
        raise ParseError(f"missing post field {exc.args[0]!r}", line=line_no) from None
    except ValidationError as exc:
        raise ParseError(str(exc), line=line_no) from None


def parse_attribution(obj: dict, line_no: int = 1) -> AttributionRecord:
    try:
        return AttributionRecord(
            address=normalize_address(obj["address"]),
            label=str(obj["label"]),
            tag=str(obj["tag"]),
            provenance=str(obj.get("provenance", "")),
        )
    except KeyError as exc:
        raise ParseError(f"missing attribution field {exc.args[0]!r}", line=line_no) from None
    except ValidationError as exc:
        raise ParseError(str(exc), line=line_no) from None


def parse_enrichment_file(path: Path) -> dict[str, EnrichmentRecord]:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"enrichment {path}: {exc}") from None
    records = {}
    for username, spec in raw.items():
        affiliations = []
        for item in spec.get("affiliations", ()):
            launch = None
            if item.get("launch_date"):
                launch = datetime.fromisoformat(item["launch_date"]).replace(tzinfo=timezone.utc)
            profit = None
            if item.get("estimated_profit_usd") is not None:
                try:
                    profit = Decimal(str(item["estimated_profit_usd"]))
                except InvalidOperation:
                    raise ParseError(
                        f"enrichment {username}: bad estimated_profit_usd {item['estimated_profit_usd']!r}"
                    ) from None
            affiliations.append(
                ProjectAffiliation(name=item["name"], launch_date=launch, estimated_profit_usd=profit)
            )
        records[username.lower()] = EnrichmentRecord(
            username=username.lower(),
            name=spec.get("name", ""),
            description=spec.get("description", ""),
            affiliations=tuple(affiliations),
            links=tuple(spec.get("links", ())),
        )
    return records


# --- source drivers -----------------------------------------------------------


def replay_chain(path: str | Path, sink: Sink) -> int:
    """Deliver fixture transactions in (block_number, file order)."""
    rows = _read_json_lines(Path(path))
    parsed = [(obj_line, parse_chain_transaction(obj, obj_line)) for obj_line, obj in rows]
    parsed.sort(key=lambda item: (item[1].block_number, item[0]))
    adapter = FileReplayAdapter(SOURCE_CHAIN, [tx for _, tx in parsed])
    return _drain(adapter, sink)


def stream_social(path: str | Path, filters: Iterable[str], sink: Sink) -> int:
    """Deliver posts matching any filter (vacuously all) in timestamp order."""
    rows = _read_json_lines(Path(path))
    parsed = [(line_no, parse_social_post(obj, line_no)) for line_no, obj in rows]
    parsed.sort(key=lambda item: (item[1].created_at, item[0]))
    filter_list = [f.lower() for f in filters]
    posts = [
        post
        for _, post in parsed
        if not filter_list or any(f in post.text.lower() for f in filter_list)
    ]
    adapter = FileReplayAdapter(SOURCE_SOCIAL, posts)
    return _drain(adapter, sink)


class AttributionPoller:
    """Periodic re-read of the attribution file, new records by content hash."""

    def __init__(self, path: str | Path, sink: Sink):
        self.path = Path(path)
        self.sink = sink
        self._seen: set[str] = set()
        self._seq = 0

    def cycle(self) -> int:
        if not self.path.exists():
            log.warning("attribution file %s missing; empty cycle", self.path)
            return 0
        delivered = 0
        for line_no, obj in _read_json_lines(self.path):
            record = parse_attribution(obj, line_no)
            digest = record.content_hash()
            if digest in self._seen:
                continue
            self._seen.add(digest)
            self._seq += 1
            self.sink(
                SourceEnvelope(
                    source=SOURCE_ATTRIBUTION, seq=self._seq, payload=record, ingested_at=time.time()
                )
            )
            delivered += 1
        return delivered

    def run(self, cycles: int, interval: float) -> list[int]:
        """Run N cycles, honoring the interval between cycle starts."""
        counts = []
        next_deadline = time.monotonic()
        for _ in range(cycles):
            now = time.monotonic()
            if now < next_deadline:
                time.sleep(next_deadline - now)
            next_deadline = time.monotonic() + interval
            counts.append(self.cycle())
        return counts


class EnrichmentClient(Protocol):
    def lookup(self, username: str) -> EnrichmentRecord | None: ...


class FixtureEnrichmentClient:
    def __init__(self, records: dict[str, EnrichmentRecord]):
        self._records = records

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureEnrichmentClient":
        return cls(parse_enrichment_file(Path(path)))

    def lookup(self, username: str) -> EnrichmentRecord | None:
        return self._records.get(username.lower())


def enrich_on_entity(
    event: EntityAddedEvent,
    client: EnrichmentClient,
    store: Store,
    *,
    attempts: int = 3,
) -> int:
    """External-KB lookup for freshly added X accounts; returns triples added."""
    vocab = store.vocab
    if event.entity_class != vocab.XAccount:
        return 0
    username = vocab.local_name(event.entity, "x")
    if username is None:
        return 0
    record_iri = vocab.record(SOURCE_ENRICHMENT, username)
    if Triple(record_iri, RDF_TYPE, vocab.IngestedRecord) in store:
        return 0
    record = None
    for attempt in range(1, attempts + 1):
        try:
            record = client.lookup(username)
            break
        except TransportError as exc:
            if attempt == attempts:
                log.warning("enrichment lookup for %s failed %d times, skipping: %s", username, attempts, exc)
                return 0
    if record is None:
        return 0
    account = event.entity
    triples = [
        Triple(record_iri, RDF_TYPE, vocab.IngestedRecord),
        Triple(account, vocab.derivedFrom, record_iri),
    ]
    if record.name:
        triples.append(Triple(account, vocab.label, Literal.text(record.name)))
    if record.description:
        triples.append(Triple(account, vocab.description, Literal.text(record.description)))
    for affiliation in record.affiliations:
        project = vocab.project(affiliation.name)
        triples.append(Triple(project, RDF_TYPE, vocab.Project))
        triples.append(Triple(project, vocab.label, Literal.text(affiliation.name)))
        triples.append(Triple(account, vocab.affiliatedWith, project))
        triples.append(Triple(project, vocab.derivedFrom, record_iri))
        if affiliation.launch_date is not None:
            triples.append(Triple(project, vocab.launchDate, Literal.timestamp(affiliation.launch_date)))
        if affiliation.estimated_profit_usd is not None:
            triples.append(
                Triple(project, vocab.estimatedProfit, Literal.decimal(affiliation.estimated_profit_usd))
            )
    return store.insert(triples)


# --- the pipeline ---------------------------------------------------------------


@dataclass
class IngestStats:
    attribution_delivered: int = 0
    chain_delivered: int = 0
    social_delivered: int = 0
    clusters_found: int = 0
    triples_added: int = 0

    def as_lines(self) -> list[str]:
        return [
            f"attributions delivered: {self.attribution_delivered}",
            f"chain transactions delivered: {self.chain_delivered}",
            f"social posts delivered: {self.social_delivered}",
            f"address clusters found: {self.clusters_found}",
            f"triples added: {self.triples_added}",
        ]


class Pipeline:
    """Wires sources through classification, extraction, and the store."""

    def __init__(
        self,
        store: Store,
        registry: ContractRegistry,
        resolver: AbiResolver,
        config: Config | None = None,
        enrichment_client: EnrichmentClient | None = None,
        project_names: Iterable[str] = (),
    ):
        self.store = store
        self.registry = registry
        self.resolver = resolver
        self.config = config or load_config()
        self.enrichment_client = enrichment_client
        self.project_names = tuple(project_names)
        self.transactions: list[ChainTransaction] = []

    @classmethod
    def from_fixture_dir(
        cls,
        fixtures: str | Path,
        store: Store,
        config: Config | None = None,
    ) -> "Pipeline":
        fixtures = Path(fixtures)
        registry_path = fixtures / CONTRACTS_FILE
        registry = ContractRegistry.from_file(registry_path) if registry_path.exists() else ContractRegistry()
        dictionary = None
        signatures_path = fixtures / SIGNATURES_FILE
        if signatures_path.exists():
            dictionary = SignatureDictionary.load(signatures_path)
        providers = ()
        abis_path = fixtures / ABIS_FILE
        if abis_path.exists():
            providers = (FixtureAbiProvider.from_file(abis_path),)
        resolver = AbiResolver(registry, providers=providers, dictionary=dictionary)
        client = None
        enrichment_path = fixtures / ENRICHMENT_FILE
        if enrichment_path.exists():
            client = FixtureEnrichmentClient.from_file(enrichment_path)
        names: tuple[str, ...] = ()
        names_path = fixtures / PROJECT_NAMES_FILE
        if names_path.exists():
            names = tuple(
                line.strip()
                for line in names_path.read_text(encoding="utf-8").splitlines()
                if line.strip()
            )
        return cls(
            store=store,
            registry=registry,
            resolver=resolver,
            config=config,
            enrichment_client=client,
            project_names=names,
        )

    # -- per-record processing --

    def process_transaction(self, tx: ChainTransaction) -> int:
        vocab = self.store.vocab
        self.transactions.append(tx)
        record_iri = vocab.record(SOURCE_CHAIN, tx.hash)
        marker = Triple(record_iri, RDF_TYPE, vocab.IngestedRecord)
        if marker in self.store:
            return 0
        kind = classify_transaction(tx, self.resolver)
        edges = extract_relations(tx, kind, self.config.proceeds_threshold)
        tags = tag_addresses(edges)
        triples = [marker]
        for address in self._touched_addresses(tx):
            triples.extend(self._address_triples(address, tx, record_iri))
        for edge in edges:
            triples.extend(self._edge_triples(edge, tx, record_iri))
        for tag in tags:
            triples.extend(self._tag_triples(tag))
        return self.store.insert(triples)

    def _touched_addresses(self, tx: ChainTransaction) -> list[str]:
        addresses = [tx.sender]
        if tx.to is not None:
            addresses.append(tx.to)
        if tx.created_contract is not None:
            addresses.append(tx.created_contract)
        return addresses

    def _address_triples(self, address: str, tx: ChainTransaction, record_iri: Iri) -> list[Triple]:
        vocab = self.store.vocab
        iri = vocab.address(address)
        if address == tx.created_contract or self.registry.is_contract(address, tx.block_number):
            klass = vocab.ContractAccount
        else:
            klass = vocab.ExternalAccount
        return [Triple(iri, RDF_TYPE, klass), Triple(iri, vocab.derivedFrom, record_iri)]

    def _edge_triples(self, edge, tx: ChainTransaction, record_iri: Iri) -> list[Triple]:
        vocab = self.store.vocab
        subject = vocab.address(edge.subject)
        obj = vocab.address(edge.object)
        triples: list[Triple] = []
        if edge.predicate == PREDICATE_DEPLOY:
            triples.append(Triple(subject, vocab.deployed, obj))
        elif edge.predicate == PREDICATE_TRANSFER:
            triples.append(Triple(subject, vocab.transferredTo, obj))
        elif is_mint_label(edge.predicate) and edge.value > 0:
            triples.append(Triple(subject, vocab.minted, obj))
        elif edge.value > 0:
            # Non-mint calls that move value still matter as money flow.
            triples.append(Triple(subject, vocab.transferredTo, obj))
        if edge.proceeds_recipient is not None:
            recipient = vocab.address(edge.proceeds_recipient)
            triples.append(Triple(obj, vocab.proceedsTo, recipient))
            triples.extend(self._address_triples(edge.proceeds_recipient, tx, record_iri))
        return triples

    def _tag_triples(self, tag) -> list[Triple]:
        vocab = self.store.vocab
        iri = vocab.address(tag.address)
        if tag.tag == TAG_DEPLOYER:
            return [Triple(iri, RDF_TYPE, vocab.DeployerAccount)]
        if tag.tag == TAG_NFT_MINTER:
            triples = [Triple(iri, RDF_TYPE, vocab.NftMinterAccount)]
            if tag.target is not None:
                triples.append(Triple(vocab.address(tag.target), RDF_TYPE, vocab.NftContract))
            return triples
        return [Triple(iri, vocab.tagged, Literal.text(tag.tag))]

    def process_post(self, post: SocialPost) -> int:
        vocab = self.store.vocab
        record_iri = vocab.record(SOURCE_SOCIAL, post.id)
        marker = Triple(record_iri, RDF_TYPE, vocab.IngestedRecord)
        if marker in self.store:
            return 0
        names = set(self.project_names)
        for project in self.store.subjects(RDF_TYPE, vocab.Project):
            for label in self.store.objects(project, vocab.label):
                if isinstance(label, Literal) and label.kind == "text":
                    names.add(str(label.value))
        entities = recognize_entities(post.text, tuple(sorted(names)))
        relations = extract_post_relations(post, entities, self.config.launch_keywords)
        author = vocab.x_account(post.author_username)
        pending = post_to_triples(post, relations, vocab)
        pending.append(marker)
        # every entity this post mints is evidenced by this record
        minted_entities = set()
        for triple in pending:
            for term in (triple.subject, triple.object):
                if isinstance(term, Iri) and any(
                    vocab.local_name(term, segment) is not None
                    for segment in ("post", "x", "address")
                ):
                    minted_entities.add(term)
        for entity in sorted(minted_entities, key=lambda i: i.value):
            pending.append(Triple(entity, vocab.derivedFrom, record_iri))
        before = len(self.store)
        candidates = block(author, vocab.XAccount, self.store, cap=self.config.block_cap)
        scores = match_entity(
            author,
            candidates,
            self.store,
            pending,
            threshold=self.config.match_threshold,
            property_weight=self.config.property_weight,
        )
        fuse(author, scores, self.store, pending, threshold=self.config.match_threshold)
        return len(self.store) - before

    def process_attribution(self, record: AttributionRecord) -> int:
        vocab = self.store.vocab
        record_iri = vocab.record(SOURCE_ATTRIBUTION, record.content_hash())
        marker = Triple(record_iri, RDF_TYPE, vocab.IngestedRecord)
        if marker in self.store:
            return 0
        address = vocab.address(record.address)
        triples = [
            marker,
            Triple(address, RDF_TYPE, vocab.Account),
            Triple(address, vocab.tagged, Literal.text(record.tag)),
            Triple(address, vocab.label, Literal.text(record.label)),
            Triple(address, vocab.derivedFrom, record_iri),
        ]
        if record.provenance:
            triples.append(Triple(record_iri, vocab.label, Literal.text(record.provenance)))
        return self.store.insert(triples)

    def exchange_addresses(self) -> list[str]:
        vocab = self.store.vocab
        addresses = []
        for iri in self.store.subjects(vocab.tagged, Literal.text("exchange")):
            address = vocab.local_name(iri, "address")
            if address is not None:
                addresses.append(address)
        return addresses

    def run_clustering(self) -> tuple[int, int]:
        """Cluster collected transactions; returns (clusters, triples added)."""
        vocab = self.store.vocab
        clusters = cluster_deposit_reuse(
            self.transactions,
            self.exchange_addresses(),
            forward_fraction=self.config.deposit_forward_fraction,
            vocab=vocab,
        )
        triples = []
        for cluster in clusters:
            key = vocab.local_name(cluster.canonical, "cluster") or "cluster"
            record_iri = vocab.record("clustering", key)
            triples.append(Triple(record_iri, RDF_TYPE, vocab.IngestedRecord))
            triples.append(Triple(cluster.canonical, RDF_TYPE, vocab.Account))
            triples.append(Triple(cluster.canonical, vocab.derivedFrom, record_iri))
            for member in sorted(cluster.members):
                triples.append(Triple(vocab.address(member), vocab.controlledBy, cluster.canonical))
        return len(clusters), self.store.insert(triples)

    # -- orchestration --

    def run(self, fixtures: str | Path) -> IngestStats:
        """One batch pass over every fixture source, in dependency order.

        Enrichment triples land during event delivery nested inside other
        inserts, so the triple total is measured as overall store growth.
        """
        fixtures = Path(fixtures)
        stats = IngestStats()
        before = len(self.store)
        subscription = None
        if self.enrichment_client is not None:
            client = self.enrichment_client
            attempts = self.config.enrich_retry_attempts

            def on_entity(event: EntityAddedEvent) -> None:
                enrich_on_entity(event, client, self.store, attempts=attempts)

            subscription = self.store.subscribe(on_entity)
        try:
            poller = AttributionPoller(
                fixtures / ATTRIBUTIONS_FILE,
                lambda envelope: self.process_attribution(envelope.payload),
            )
            stats.attribution_delivered = poller.cycle()

            chain_path = fixtures / CHAIN_FILE
            if chain_path.exists():
                stats.chain_delivered = replay_chain(
                    chain_path, lambda envelope: self.process_transaction(envelope.payload)
                )
            else:
                log.warning("chain fixture %s missing; skipping", chain_path)

            posts_path = fixtures / POSTS_FILE
            if posts_path.exists():
                stats.social_delivered = stream_social(
                    posts_path,
                    self.config.social_filters,
                    lambda envelope: self.process_post(envelope.payload),
                )
            else:
                log.warning("social fixture %s missing; skipping", posts_path)

            stats.clusters_found, _ = self.run_clustering()
        finally:
            if subscription is not None:
                subscription.unsubscribe()
        stats.triples_added = len(self.store) - before
        return stats
