"""Risk patterns over synthetic graph fixtures and the level table."""

from __future__ import annotations

import itertools

import pytest

from chainkg.errors import NotFoundError
from chainkg.kg.store import Store
from chainkg.kg.terms import Iri, Literal, Triple
from chainkg.kg.vocab import RDF_TYPE, Vocab
from chainkg.risk import (
    F1_PROCEEDS_DIVERSION,
    F2_SERIAL_DEPLOYER,
    F3_SOCIAL_HISTORY,
    LEVEL_HIGH,
    LEVEL_MEDIUM,
    LEVEL_NONE,
    assess_address,
    explain,
    level_for,
)

V = Vocab()


def addr(n: int) -> Iri:
    return V.address(f"0x{n:040x}")


def minimal_contract(store: Store, contract: Iri, deployer: Iri):
    store.insert(
        [
            Triple(contract, RDF_TYPE, V.ContractAccount),
            Triple(deployer, RDF_TYPE, V.DeployerAccount),
            Triple(deployer, V.deployed, contract),
        ]
    )


def add_diverted_mint(store: Store, contract: Iri, minter: Iri, deployer: Iri):
    store.insert(
        [
            Triple(minter, V.minted, contract),
            Triple(contract, V.proceedsTo, deployer),
        ]
    )


class TestLevelTable:
    def test_all_eight_subsets(self):
        expected = {
            frozenset(): LEVEL_NONE,
            frozenset({F1_PROCEEDS_DIVERSION}): LEVEL_HIGH,
            frozenset({F2_SERIAL_DEPLOYER}): LEVEL_MEDIUM,
            frozenset({F3_SOCIAL_HISTORY}): LEVEL_MEDIUM,
            frozenset({F1_PROCEEDS_DIVERSION, F2_SERIAL_DEPLOYER}): LEVEL_HIGH,
            frozenset({F1_PROCEEDS_DIVERSION, F3_SOCIAL_HISTORY}): LEVEL_HIGH,
            frozenset({F2_SERIAL_DEPLOYER, F3_SOCIAL_HISTORY}): LEVEL_HIGH,
            frozenset({F1_PROCEEDS_DIVERSION, F2_SERIAL_DEPLOYER, F3_SOCIAL_HISTORY}): LEVEL_HIGH,
        }
        patterns = (F1_PROCEEDS_DIVERSION, F2_SERIAL_DEPLOYER, F3_SOCIAL_HISTORY)
        for r in range(4):
            for subset in itertools.combinations(patterns, r):
                assert level_for(frozenset(subset)) == expected[frozenset(subset)]


class TestPatterns:
    def test_fresh_contract_is_level_none(self):
        store = Store(V)
        contract, deployer = addr(1), addr(2)
        minimal_contract(store, contract, deployer)
        report = assess_address(contract, store)
        assert report.level == LEVEL_NONE
        assert report.findings == ()

    def test_f1_proceeds_diversion(self):
        store = Store(V)
        contract, deployer, minter = addr(1), addr(2), addr(3)
        minimal_contract(store, contract, deployer)
        add_diverted_mint(store, contract, minter, deployer)
        report = assess_address(contract, store)
        assert [f.pattern for f in report.findings] == [F1_PROCEEDS_DIVERSION]
        assert report.level == LEVEL_HIGH

    def test_proceeds_to_non_deployer_is_not_f1(self):
        store = Store(V)
        contract, deployer, minter, outsider = addr(1), addr(2), addr(3), addr(4)
        minimal_contract(store, contract, deployer)
        store.insert(
            [
                Triple(minter, V.minted, contract),
                Triple(contract, V.proceedsTo, outsider),
                Triple(outsider, RDF_TYPE, V.ExternalAccount),
            ]
        )
        assert assess_address(contract, store).level == LEVEL_NONE

    def test_mintless_proceeds_is_not_f1(self):
        store = Store(V)
        contract, deployer = addr(1), addr(2)
        minimal_contract(store, contract, deployer)
        store.insert([Triple(contract, V.proceedsTo, deployer)])
        assert assess_address(contract, store).level == LEVEL_NONE

    def test_f2_one_hop_funding_is_medium(self):
        # three-address synthetic fixture: prior deployer funds this deployer
        store = Store(V)
        contract, deployer = addr(1), addr(2)
        other_contract, other_deployer = addr(3), addr(4)
        minimal_contract(store, contract, deployer)
        minimal_contract(store, other_contract, other_deployer)
        store.insert([Triple(other_deployer, V.transferredTo, deployer)])
        report = assess_address(contract, store)
        assert [f.pattern for f in report.findings] == [F2_SERIAL_DEPLOYER]
        assert report.level == LEVEL_MEDIUM

    def test_f2_respects_hop_limit(self):
        store = Store(V)
        contract, deployer = addr(1), addr(2)
        other_contract, other_deployer = addr(3), addr(4)
        hop1, hop2 = addr(5), addr(6)
        minimal_contract(store, contract, deployer)
        minimal_contract(store, other_contract, other_deployer)
        store.insert(
            [
                Triple(other_deployer, V.transferredTo, hop1),
                Triple(hop1, V.transferredTo, hop2),
                Triple(hop2, V.transferredTo, deployer),
            ]
        )
        assert assess_address(contract, store, hop_limit=2).level == LEVEL_NONE
        assert assess_address(contract, store, hop_limit=3).level == LEVEL_MEDIUM

    def test_f2_ignores_same_deployer_other_projects(self):
        store = Store(V)
        contract, sibling, deployer = addr(1), addr(3), addr(2)
        minimal_contract(store, contract, deployer)
        minimal_contract(store, sibling, deployer)
        assert assess_address(contract, store).level == LEVEL_NONE

    def test_f3_two_flagged_peers(self):
        store = Store(V)
        account = V.x_account("serial_zeta")
        subject, subject_deployer = addr(1), addr(2)
        minimal_contract(store, subject, subject_deployer)
        store.insert([Triple(subject, V.announcedBy, account)])
        for i in range(2):
            peer, peer_deployer, peer_minter = addr(10 + i), addr(20 + i), addr(30 + i)
            minimal_contract(store, peer, peer_deployer)
            add_diverted_mint(store, peer, peer_minter, peer_deployer)
            store.insert([Triple(peer, V.announcedBy, account)])
        report = assess_address(subject, store)
        assert [f.pattern for f in report.findings] == [F3_SOCIAL_HISTORY]
        assert report.level == LEVEL_MEDIUM

    def test_f3_below_peer_threshold(self):
        store = Store(V)
        account = V.x_account("serial_zeta")
        subject, subject_deployer = addr(1), addr(2)
        minimal_contract(store, subject, subject_deployer)
        store.insert([Triple(subject, V.announcedBy, account)])
        peer, peer_deployer, peer_minter = addr(10), addr(20), addr(30)
        minimal_contract(store, peer, peer_deployer)
        add_diverted_mint(store, peer, peer_minter, peer_deployer)
        store.insert([Triple(peer, V.announcedBy, account)])
        assert assess_address(subject, store).level == LEVEL_NONE

    def test_unknown_subject_raises(self):
        with pytest.raises(NotFoundError):
            assess_address(addr(404), Store(V))

    def test_evidence_triples_exist_in_store(self):
        store = Store(V)
        contract, deployer, minter = addr(1), addr(2), addr(3)
        other_contract, other_deployer = addr(4), addr(5)
        account = V.x_account("serial_zeta")
        minimal_contract(store, contract, deployer)
        add_diverted_mint(store, contract, minter, deployer)
        minimal_contract(store, other_contract, other_deployer)
        store.insert([Triple(other_deployer, V.transferredTo, deployer)])
        store.insert([Triple(contract, V.announcedBy, account)])
        report = assess_address(contract, store)
        for finding in report.findings:
            for triple in finding.evidence:
                assert triple in store

    def test_determinism_same_revision(self):
        store = Store(V)
        contract, deployer, minter = addr(1), addr(2), addr(3)
        minimal_contract(store, contract, deployer)
        add_diverted_mint(store, contract, minter, deployer)
        first = assess_address(contract, store)
        second = assess_address(contract, store)
        assert first == second
        assert first.revision == store.revision

    def test_monotone_in_f1(self):
        rank = {LEVEL_NONE: 0, LEVEL_MEDIUM: 1, LEVEL_HIGH: 2}
        store = Store(V)
        contract, deployer = addr(1), addr(2)
        other_contract, other_deployer = addr(3), addr(4)
        minimal_contract(store, contract, deployer)
        minimal_contract(store, other_contract, other_deployer)
        store.insert([Triple(other_deployer, V.transferredTo, deployer)])
        before = assess_address(contract, store)
        add_diverted_mint(store, contract, addr(9), deployer)
        after = assess_address(contract, store)
        assert rank[after.level] >= rank[before.level]


class TestExplain:
    def test_level_none_single_line(self):
        store = Store(V)
        contract, deployer = addr(1), addr(2)
        minimal_contract(store, contract, deployer)
        text = explain(assess_address(contract, store))
        assert text == "level: none"

    def test_high_report_lists_each_pattern_once(self):
        store = Store(V)
        contract, deployer, minter = addr(1), addr(2), addr(3)
        other_contract, other_deployer = addr(4), addr(5)
        minimal_contract(store, contract, deployer)
        add_diverted_mint(store, contract, minter, deployer)
        minimal_contract(store, other_contract, other_deployer)
        store.insert([Triple(other_deployer, V.transferredTo, deployer)])
        text = explain(assess_address(contract, store))
        assert text.splitlines()[0] == "level: high"
        for pattern in (F1_PROCEEDS_DIVERSION, F2_SERIAL_DEPLOYER):
            assert text.count(f"finding: {pattern}") == 1

    def test_rendering_is_byte_identical(self):
        store = Store(V)
        contract, deployer, minter = addr(1), addr(2), addr(3)
        minimal_contract(store, contract, deployer)
        add_diverted_mint(store, contract, minter, deployer)
        report = assess_address(contract, store)
        assert explain(report) == explain(report)

    def test_report_serializes_to_structured_object(self):
        store = Store(V)
        contract, deployer, minter = addr(1), addr(2), addr(3)
        minimal_contract(store, contract, deployer)
        add_diverted_mint(store, contract, minter, deployer)
        payload = assess_address(contract, store).to_dict()
        assert payload["level"] == "high"
        assert payload["subject"] == contract.value
        assert payload["findings"][0]["pattern"] == F1_PROCEEDS_DIVERSION
        assert payload["findings"][0]["evidence"]
        assert isinstance(payload["revision"], int)
