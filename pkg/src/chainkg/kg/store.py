"""In-memory triple store: set semantics, indexed conjunctive queries, events.

Concurrency: one RLock serializes writers; queries and exports run under the
same lock and therefore observe consistent snapshots identified by the
revision counter. Entity-added events are queued during mutation and drained
in order, so nested inserts from inside a consumer keep delivery ordered.
"""

from __future__ import annotations

import threading
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Callable, Iterable

from chainkg.errors import ValidationError
from chainkg.kg.terms import Iri, Literal, Term, Triple, TriplePattern, Variable
from chainkg.kg.vocab import RDF_TYPE, Vocab


@dataclass(frozen=True, slots=True)
class EntityAddedEvent:
    entity: Iri
    entity_class: Iri
    revision: int


class Subscription:
    def __init__(self, store: "Store", consumer: Callable[[EntityAddedEvent], None]):
        self._store = store
        self.consumer = consumer

    def unsubscribe(self) -> None:
        self._store._subscribers = [s for s in self._store._subscribers if s is not self]


class Store:
    def __init__(self, vocab: Vocab | None = None):
        self.vocab = vocab or Vocab()
        self._triples: set[Triple] = set()
        self._by_subject: dict[Iri, set[Triple]] = defaultdict(set)
        self._by_predicate: dict[Iri, set[Triple]] = defaultdict(set)
        self._by_object: dict[Term, set[Triple]] = defaultdict(set)
        self._revision = 0
        self._subscribers: list[Subscription] = []
        self._pending_events: deque[EntityAddedEvent] = deque()
        self._delivering = False
        self._lock = threading.RLock()

    @property
    def revision(self) -> int:
        return self._revision

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def triples(self) -> tuple[Triple, ...]:
        with self._lock:
            return tuple(self._triples)

    # --- mutation ---------------------------------------------------------

    def insert(self, triples: Iterable[Triple]) -> int:
        """Insert with set semantics; returns how many were actually new.

        The revision bumps once per effective batch. An entity-added event is
        queued for every newly inserted rdf:type triple.
        """
        batch = list(triples)
        for triple in batch:
            self._validate(triple)
        with self._lock:
            added = 0
            events: list[EntityAddedEvent] = []
            for triple in batch:
                if triple in self._triples:
                    continue
                self._triples.add(triple)
                self._by_subject[triple.subject].add(triple)
                self._by_predicate[triple.predicate].add(triple)
                self._by_object[triple.object].add(triple)
                added += 1
                if triple.predicate == RDF_TYPE:
                    events.append(EntityAddedEvent(triple.subject, triple.object, self._revision + 1))
            if added:
                self._revision += 1
                self._pending_events.extend(events)
                self._drain_events()
            return added

    def _validate(self, triple: Triple) -> None:
        if not self.vocab.is_known_predicate(triple.predicate):
            raise ValidationError(f"predicate outside declared vocabulary: {triple.predicate}")
        if triple.predicate == RDF_TYPE:
            if not isinstance(triple.object, Iri) or triple.object not in self.vocab.classes:
                raise ValidationError(f"unknown entity class: {triple.object}")

    def _drain_events(self) -> None:
        if self._delivering:
            return  # the outer drain loop keeps delivering, in order
        self._delivering = True
        try:
            while self._pending_events:
                event = self._pending_events.popleft()
                for subscription in list(self._subscribers):
                    subscription.consumer(event)
        finally:
            self._delivering = False

    def subscribe(self, consumer: Callable[[EntityAddedEvent], None]) -> Subscription:
        """Live-only subscription: no replay of earlier events."""
        subscription = Subscription(self, consumer)
        self._subscribers.append(subscription)
        return subscription

    # --- queries ------------------------------------------------------------

    def query(self, patterns: list[TriplePattern]) -> list[dict[str, Term]]:
        """All variable bindings satisfying the conjunction, deduplicated."""
        if not patterns:
            raise ValidationError("query requires at least one pattern")
        with self._lock:
            bindings: list[dict[str, Term]] = [{}]
            for pattern in patterns:
                next_bindings: list[dict[str, Term]] = []
                for binding in bindings:
                    bound = tuple(_substitute(term, binding) for term in pattern.terms())
                    for triple in self._candidates(*bound):
                        extended = _unify(triple, bound, binding)
                        if extended is not None:
                            next_bindings.append(extended)
                bindings = next_bindings
                if not bindings:
                    return []
            seen = set()
            result = []
            for binding in bindings:
                key = tuple(sorted((name, _term_key(term)) for name, term in binding.items()))
                if key not in seen:
                    seen.add(key)
                    result.append(binding)
            return result

    def _candidates(self, subject, predicate, obj) -> Iterable[Triple]:
        # Most selective index first: subject, then object, then predicate.
        if isinstance(subject, Iri):
            return self._by_subject.get(subject, ())
        if isinstance(obj, (Iri, Literal)):
            return self._by_object.get(obj, ())
        if isinstance(predicate, Iri):
            return self._by_predicate.get(predicate, ())
        return self._triples

    # Convenience wrappers used throughout the pipeline.

    def about(self, subject: Iri) -> tuple[Triple, ...]:
        with self._lock:
            return tuple(self._by_subject.get(subject, ()))

    def referencing(self, obj: Term) -> tuple[Triple, ...]:
        with self._lock:
            return tuple(self._by_object.get(obj, ()))

    def with_predicate(self, predicate: Iri) -> tuple[Triple, ...]:
        with self._lock:
            return tuple(self._by_predicate.get(predicate, ()))

    def subjects(self, predicate: Iri, obj: Term) -> list[Iri]:
        with self._lock:
            found = {t.subject for t in self._by_predicate.get(predicate, ()) if t.object == obj}
        return sorted(found, key=lambda i: i.value)

    def objects(self, subject: Iri, predicate: Iri) -> list[Term]:
        with self._lock:
            found = {t.object for t in self._by_subject.get(subject, ()) if t.predicate == predicate}
        return sorted(found, key=_term_key)

    def has_entity(self, iri: Iri) -> bool:
        with self._lock:
            return bool(self._by_subject.get(iri)) or bool(self._by_object.get(iri))


def _substitute(term, binding: dict[str, Term]):
    if isinstance(term, Variable):
        return binding.get(term.name, term)
    return term


def _unify(triple: Triple, bound, binding: dict[str, Term]) -> dict[str, Term] | None:
    extended = None
    for value, term in zip((triple.subject, triple.predicate, triple.object), bound):
        if isinstance(term, Variable):
            current = (extended or binding).get(term.name)
            if current is None:
                if extended is None:
                    extended = dict(binding)
                extended[term.name] = value
            elif current != value:
                return None
        elif term != value:
            return None
    return extended if extended is not None else dict(binding)


def _term_key(term: Term) -> tuple[str, str]:
    if isinstance(term, Iri):
        return ("iri", term.value)
    return ("literal:" + term.kind, str(term.value))
