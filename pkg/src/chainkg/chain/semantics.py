"""Transaction classification, relation extraction, and address tagging."""

from __future__ import annotations

from fractions import Fraction

from chainkg.chain.calldata import decode_call
from chainkg.chain.registry import AbiResolver
from chainkg.chain.types import (
    PREDICATE_DEPLOY,
    PREDICATE_TRANSFER,
    TAG_DEPLOYER,
    TAG_NFT_MINTER,
    AddressTag,
    ChainTransaction,
    ContractCall,
    ContractCreation,
    RelationEdge,
    TransactionKind,
    UnknownCall,
    ValueTransfer,
)
from chainkg.errors import DecodeError
from chainkg.evm.abi import fallback_label, find_function

DEFAULT_PROCEEDS_THRESHOLD = Fraction(9, 10)


def classify_transaction(tx: ChainTransaction, resolver: AbiResolver) -> TransactionKind:
    """Decide what a transaction is, given the registry snapshot.

    Creations are recognized by the missing recipient; an empty input is a
    plain value transfer; a call into known bytecode is a ContractCall when
    its selector resolves against the (fetched or reconstructed) ABI, and an
    UnknownCall otherwise.
    """
    if tx.to is None:
        return ContractCreation(contract=tx.created_contract)
    if not tx.input:
        return ValueTransfer()
    selector = bytes(tx.input[:4])
    if resolver.registry.is_contract(tx.to, tx.block_number):
        abi = resolver.fetch(tx.to)
        if find_function(abi.functions, selector) is not None:
            decoded = decode_call(tx.input, list(abi.functions), resolver.dictionary)
            label = decoded.function or fallback_label(selector)
            return ContractCall(function=label, decoded=decoded)
    return UnknownCall(selector=selector)


def proceeds_recipient(tx: ChainTransaction, threshold: Fraction = DEFAULT_PROCEEDS_THRESHOLD) -> str | None:
    """Dominant outside recipient of the called contract's internal transfers.

    Set only when a single address outside the contract receives at least
    `threshold` of the transaction value within the same transaction.
    Zero-value calls never qualify.
    """
    if tx.to is None or tx.value <= 0:
        return None
    totals: dict[str, int] = {}
    for transfer in tx.internal_transfers:
        if transfer.sender == tx.to and transfer.recipient != tx.to:
            totals[transfer.recipient] = totals.get(transfer.recipient, 0) + transfer.value
    if not totals:
        return None
    # Highest total wins; ties break to the lexicographically smaller address.
    best = min(totals, key=lambda addr: (-totals[addr], addr))
    if totals[best] * threshold.denominator >= tx.value * threshold.numerator:
        return best
    return None


def extract_relations(
    tx: ChainTransaction,
    kind: TransactionKind,
    threshold: Fraction = DEFAULT_PROCEEDS_THRESHOLD,
) -> list[RelationEdge]:
    if isinstance(kind, ContractCreation):
        return [
            RelationEdge(
                subject=tx.sender,
                predicate=PREDICATE_DEPLOY,
                object=kind.contract,
                tx_hash=tx.hash,
                value=tx.value,
            )
        ]
    if isinstance(kind, ValueTransfer):
        return [
            RelationEdge(
                subject=tx.sender,
                predicate=PREDICATE_TRANSFER,
                object=tx.to,
                tx_hash=tx.hash,
                value=tx.value,
            )
        ]
    if isinstance(kind, ContractCall):
        return [
            RelationEdge(
                subject=tx.sender,
                predicate=kind.function,
                object=tx.to,
                tx_hash=tx.hash,
                value=tx.value,
                proceeds_recipient=proceeds_recipient(tx, threshold),
            )
        ]
    return [
        RelationEdge(
            subject=tx.sender,
            predicate=fallback_label(kind.selector),
            object=tx.to,
            tx_hash=tx.hash,
            value=tx.value,
        )
    ]


def is_mint_label(predicate: str) -> bool:
    """Lexical rule: the resolved function name contains "mint" (any case).

    Raw selector fallbacks never match; their hex could contain the letters
    by accident without any lexical meaning.
    """
    return not predicate.startswith("call:0x") and "mint" in predicate.lower()


def tag_addresses(edges: list[RelationEdge]) -> list[AddressTag]:
    """Deployer and NFT-minter tags derivable from extracted edges.

    Exchange and deposit-address tags are never inferred here; they arrive
    through attribution imports only.
    """
    tags: list[AddressTag] = []
    for edge in edges:
        if edge.predicate == PREDICATE_DEPLOY:
            tags.append(AddressTag(address=edge.subject, tag=TAG_DEPLOYER, source_tx=edge.tx_hash))
        elif is_mint_label(edge.predicate) and edge.value > 0:
            tags.append(
                AddressTag(
                    address=edge.subject,
                    tag=TAG_NFT_MINTER,
                    target=edge.object,
                    source_tx=edge.tx_hash,
                )
            )
    return tags
