"""Transaction and relation value types shared by the chain workflow."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from chainkg.errors import ValidationError

_ADDRESS_RE = re.compile(r"^0x[0-9a-f]{40}$")
_HASH_RE = re.compile(r"^0x[0-9a-f]{64}$")


def normalize_address(value: str) -> str:
    addr = value.lower()
    if not _ADDRESS_RE.match(addr):
        raise ValidationError(f"invalid address {value!r}")
    return addr


def normalize_tx_hash(value: str) -> str:
    tx_hash = value.lower()
    if not _HASH_RE.match(tx_hash):
        raise ValidationError(f"invalid transaction hash {value!r}")
    return tx_hash


@dataclass(frozen=True, slots=True)
class InternalTransfer:
    sender: str
    recipient: str
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValidationError("internal transfer value must be non-negative")


@dataclass(frozen=True, slots=True)
class ChainTransaction:
    hash: str
    block_number: int
    timestamp: int
    sender: str
    to: str | None
    value: int
    input: bytes = b""
    created_contract: str | None = None
    internal_transfers: tuple[InternalTransfer, ...] = ()

    def __post_init__(self):
        if self.to is None and self.created_contract is None:
            raise ValidationError(f"tx {self.hash}: creation transaction needs created_contract")
        if self.value < 0:
            raise ValidationError(f"tx {self.hash}: negative value")
        if self.block_number < 0:
            raise ValidationError(f"tx {self.hash}: negative block number")


# --- transaction kinds ----------------------------------------------------


@dataclass(frozen=True, slots=True)
class ContractCreation:
    contract: str


@dataclass(frozen=True, slots=True)
class ValueTransfer:
    pass


@dataclass(frozen=True, slots=True)
class ContractCall:
    function: str
    decoded: "DecodedCall"


@dataclass(frozen=True, slots=True)
class UnknownCall:
    selector: bytes


TransactionKind = Union[ContractCreation, ValueTransfer, ContractCall, UnknownCall]


@dataclass(frozen=True, slots=True)
class DecodedArg:
    type: str
    value: object


@dataclass(frozen=True, slots=True)
class DecodedCall:
    selector: bytes
    function: str | None
    args: tuple[DecodedArg, ...] = ()


# --- extracted relations ----------------------------------------------------

PREDICATE_DEPLOY = "Deploy"
PREDICATE_TRANSFER = "Transfer"


@dataclass(frozen=True, slots=True)
class RelationEdge:
    """Semantic edge between two addresses, observed in one transaction."""

    subject: str
    predicate: str
    object: str
    tx_hash: str
    value: int = 0
    proceeds_recipient: str | None = None

    def __post_init__(self):
        if not self.predicate:
            raise ValidationError("relation edges must carry a predicate")


TAG_DEPLOYER = "deployer"
TAG_NFT_MINTER = "nft_minter"
TAG_EXCHANGE = "exchange"
TAG_DEPOSIT_ADDRESS = "deposit_address"
TAG_CONTRACT = "contract"
TAG_EOA = "eoa"

ATTRIBUTION_TAGS = frozenset({TAG_EXCHANGE, TAG_DEPOSIT_ADDRESS, "known_entity"})


@dataclass(frozen=True, slots=True)
class AddressTag:
    address: str
    tag: str
    target: str | None = None  # the NFT contract for nft_minter tags
    source_tx: str | None = None
