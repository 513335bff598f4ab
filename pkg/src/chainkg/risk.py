"""Rug-pull risk patterns over the knowledge graph.

Three patterns are evaluated for a subject contract:

  F1 proceeds diversion: mint activity toward the contract whose proceeds
     land on an address tagged as a deployer.
  F2 serial deployer: the contract's deployer was funded, within a bounded
     number of transfer hops, by the deployer of a different contract.
  F3 social history: the announcing X account also announced other
     contracts that themselves show F1 or F2.

Levels: F1 alone is damning (high); F2 and F3 together escalate to high;
exactly one of F2/F3 is medium; otherwise none.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from chainkg.errors import NotFoundError
from chainkg.kg.serialize import triple_to_nt
from chainkg.kg.store import Store
from chainkg.kg.terms import Iri, Triple
from chainkg.kg.vocab import RDF_TYPE

F1_PROCEEDS_DIVERSION = "F1_proceeds_diversion"
F2_SERIAL_DEPLOYER = "F2_serial_deployer"
F3_SOCIAL_HISTORY = "F3_social_history"

PATTERN_WEIGHTS = {
    F1_PROCEEDS_DIVERSION: 1.0,
    F2_SERIAL_DEPLOYER: 0.6,
    F3_SOCIAL_HISTORY: 0.4,
}

LEVEL_NONE = "none"
LEVEL_MEDIUM = "medium"
LEVEL_HIGH = "high"

DEFAULT_HOP_LIMIT = 2
DEFAULT_FLAGGED_PEERS = 2


@dataclass(frozen=True, slots=True)
class Finding:
    pattern: str
    weight: float
    evidence: tuple[Triple, ...]

    def __post_init__(self):
        if not self.evidence:
            raise ValueError("findings must carry evidence")


@dataclass(frozen=True, slots=True)
class RiskReport:
    subject: Iri
    findings: tuple[Finding, ...]
    level: str
    revision: int

    def to_dict(self) -> dict:
        return {
            "subject": self.subject.value,
            "level": self.level,
            "findings": [
                {
                    "pattern": f.pattern,
                    "weight": f.weight,
                    "evidence": sorted(triple_to_nt(t) for t in f.evidence),
                }
                for f in self.findings
            ],
            "revision": self.revision,
        }


def level_for(patterns: set[str] | frozenset[str]) -> str:
    """The declared level table over any subset of {F1, F2, F3}."""
    if F1_PROCEEDS_DIVERSION in patterns:
        return LEVEL_HIGH
    if F2_SERIAL_DEPLOYER in patterns and F3_SOCIAL_HISTORY in patterns:
        return LEVEL_HIGH
    if F2_SERIAL_DEPLOYER in patterns or F3_SOCIAL_HISTORY in patterns:
        return LEVEL_MEDIUM
    return LEVEL_NONE


def assess_address(
    subject: Iri,
    store: Store,
    *,
    hop_limit: int = DEFAULT_HOP_LIMIT,
    flagged_peers_threshold: int = DEFAULT_FLAGGED_PEERS,
) -> RiskReport:
    if not store.has_entity(subject):
        raise NotFoundError(f"unknown subject {subject}")
    findings = []
    f1 = _check_proceeds_diversion(subject, store)
    if f1:
        findings.append(f1)
    f2 = _check_serial_deployer(subject, store, hop_limit)
    if f2:
        findings.append(f2)
    f3 = _check_social_history(subject, store, hop_limit, flagged_peers_threshold)
    if f3:
        findings.append(f3)
    return RiskReport(
        subject=subject,
        findings=tuple(findings),
        level=level_for({f.pattern for f in findings}),
        revision=store.revision,
    )


def explain(report: RiskReport) -> str:
    """Deterministic text rendering: level line, then findings with evidence."""
    lines = [f"level: {report.level}"]
    for finding in report.findings:
        lines.append(f"finding: {finding.pattern} (weight {finding.weight})")
        for nt_line in sorted(triple_to_nt(t) for t in finding.evidence):
            lines.append(f"  {nt_line}")
    return "\n".join(lines)


def _check_proceeds_diversion(subject: Iri, store: Store) -> Finding | None:
    vocab = store.vocab
    mint_triples = [t for t in store.referencing(subject) if t.predicate == vocab.minted]
    if not mint_triples:
        return None
    for proceeds in sorted(store.about(subject), key=triple_to_nt):
        if proceeds.predicate != vocab.proceedsTo or not isinstance(proceeds.object, Iri):
            continue
        deployer_type = Triple(proceeds.object, RDF_TYPE, vocab.DeployerAccount)
        if deployer_type in store:
            evidence = tuple(sorted(mint_triples, key=triple_to_nt)) + (proceeds, deployer_type)
            return Finding(F1_PROCEEDS_DIVERSION, PATTERN_WEIGHTS[F1_PROCEEDS_DIVERSION], evidence)
    return None


def _deployers_of(contract: Iri, store: Store) -> list[Iri]:
    return store.subjects(store.vocab.deployed, contract)


def _check_serial_deployer(subject: Iri, store: Store, hop_limit: int) -> Finding | None:
    """Transfer path (1..hop_limit hops) from another contract's deployer."""
    vocab = store.vocab
    own_deployers = set(_deployers_of(subject, store))
    if not own_deployers:
        return None
    for deployer in sorted(own_deployers, key=lambda i: i.value):
        candidates = []
        for deployed_triple in store.with_predicate(vocab.deployed):
            other_deployer, other_contract = deployed_triple.subject, deployed_triple.object
            if other_contract == subject or other_deployer in own_deployers:
                continue
            candidates.append((other_deployer, deployed_triple))
        for other_deployer, deployed_triple in sorted(
            candidates, key=lambda c: (c[0].value, triple_to_nt(c[1]))
        ):
            path = _transfer_path(other_deployer, deployer, store, hop_limit)
            if path is not None:
                own_triple = Triple(deployer, vocab.deployed, subject)
                evidence = (own_triple, deployed_triple) + tuple(path)
                return Finding(F2_SERIAL_DEPLOYER, PATTERN_WEIGHTS[F2_SERIAL_DEPLOYER], evidence)
    return None


def _transfer_path(source: Iri, target: Iri, store: Store, hop_limit: int) -> list[Triple] | None:
    """Shortest transferredTo path with at most hop_limit edges, BFS order."""
    vocab = store.vocab
    queue = deque([(source, [])])
    seen = {source}
    while queue:
        node, path = queue.popleft()
        if len(path) >= hop_limit:
            continue
        hops = [t for t in store.about(node) if t.predicate == vocab.transferredTo]
        for triple in sorted(hops, key=triple_to_nt):
            nxt = triple.object
            if not isinstance(nxt, Iri) or nxt in seen:
                continue
            new_path = path + [triple]
            if nxt == target:
                return new_path
            seen.add(nxt)
            queue.append((nxt, new_path))
    return None


def _check_social_history(
    subject: Iri, store: Store, hop_limit: int, flagged_peers_threshold: int
) -> Finding | None:
    vocab = store.vocab
    announcers = [
        t for t in store.about(subject) if t.predicate == vocab.announcedBy and isinstance(t.object, Iri)
    ]
    for announce_triple in sorted(announcers, key=triple_to_nt):
        account = announce_triple.object
        peers = [
            t
            for t in store.referencing(account)
            if t.predicate == vocab.announcedBy and t.subject != subject
        ]
        flagged_evidence: list[Triple] = []
        flagged = 0
        for peer_triple in sorted(peers, key=triple_to_nt):
            peer = peer_triple.subject
            peer_hit = _check_proceeds_diversion(peer, store) or _check_serial_deployer(
                peer, store, hop_limit
            )
            if peer_hit:
                flagged += 1
                flagged_evidence.append(peer_triple)
        if flagged >= flagged_peers_threshold:
            evidence = (announce_triple,) + tuple(flagged_evidence)
            return Finding(F3_SOCIAL_HISTORY, PATTERN_WEIGHTS[F3_SOCIAL_HISTORY], evidence)
    return None
