"""Contract registry and the ABI provider chain with bytecode fallback.

The registry file maps address -> {bytecode hex, optional abi, optional
deployed_block}. Remote ABI providers share one contract: given an address
they return an ABI JSON array or a miss; only fixture-backed implementations
ship, but live REST backends can slot in behind the same protocol.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from chainkg.errors import NotAContractError, ParseError
from chainkg.evm.abi import AbiFunction, abi_to_json, abi_from_bytecode, from_provider_json, named_abi, SignatureDictionary
from chainkg.evm.disasm import parse_bytecode
from chainkg.chain.types import normalize_address


@dataclass(frozen=True, slots=True)
class RegistryEntry:
    bytecode: bytes
    abi_json: tuple | None = None
    deployed_block: int | None = None


class ContractRegistry:
    def __init__(self, entries: dict[str, RegistryEntry] | None = None):
        self._entries = dict(entries or {})

    @classmethod
    def from_file(cls, path: str | Path) -> "ContractRegistry":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"registry {path}: {exc}") from None
        entries = {}
        for address, spec in raw.items():
            entries[normalize_address(address)] = RegistryEntry(
                bytecode=parse_bytecode(spec["bytecode"]),
                abi_json=tuple(spec["abi"]) if "abi" in spec else None,
                deployed_block=spec.get("deployed_block"),
            )
        return cls(entries)

    def register(self, address: str, entry: RegistryEntry) -> None:
        self._entries[normalize_address(address)] = entry

    def entry(self, address: str) -> RegistryEntry | None:
        return self._entries.get(address.lower())

    def bytecode(self, address: str) -> bytes | None:
        entry = self.entry(address)
        return entry.bytecode if entry else None

    def is_contract(self, address: str, block_number: int | None = None) -> bool:
        """True when bytecode exists at (or before) the given block."""
        entry = self.entry(address)
        if entry is None:
            return False
        if block_number is None or entry.deployed_block is None:
            return True
        return entry.deployed_block <= block_number


class AbiProvider(Protocol):
    name: str

    def get_abi(self, address: str) -> list[dict] | None: ...


class FixtureAbiProvider:
    """Provider backed by a JSON file: {address: [abi entries]}."""

    def __init__(self, abis: dict[str, list[dict]], name: str = "fixture"):
        self.name = name
        self._abis = {normalize_address(a): entries for a, entries in abis.items()}

    @classmethod
    def from_file(cls, path: str | Path, name: str = "fixture") -> "FixtureAbiProvider":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"abi fixture {path}: {exc}") from None
        return cls(raw, name=name)

    def get_abi(self, address: str) -> list[dict] | None:
        return self._abis.get(address.lower())


@dataclass(frozen=True, slots=True)
class ResolvedAbi:
    functions: tuple[AbiFunction, ...]
    source: str  # "registry" | "provider:<name>" | "reconstructed"
    json: tuple


class AbiResolver:
    """fetch() tries registry ABI, then providers in order, then reconstructs."""

    def __init__(
        self,
        registry: ContractRegistry,
        providers: tuple[AbiProvider, ...] = (),
        dictionary: SignatureDictionary | None = None,
    ):
        self.registry = registry
        self.providers = providers
        self.dictionary = dictionary
        self._cache: dict[str, ResolvedAbi] = {}

    def fetch(self, address: str) -> ResolvedAbi:
        address = address.lower()
        cached = self._cache.get(address)
        if cached is not None:
            return cached
        resolved = self._resolve(address)
        self._cache[address] = resolved
        return resolved

    def _resolve(self, address: str) -> ResolvedAbi:
        entry = self.registry.entry(address)
        if entry is not None and entry.abi_json is not None:
            return ResolvedAbi(
                functions=tuple(from_provider_json(list(entry.abi_json))),
                source="registry",
                json=entry.abi_json,
            )
        for provider in self.providers:
            abi_json = provider.get_abi(address)
            if abi_json is not None:
                return ResolvedAbi(
                    functions=tuple(from_provider_json(abi_json)),
                    source=f"provider:{provider.name}",
                    json=tuple(abi_json),
                )
        if entry is None:
            raise NotAContractError(f"no bytecode or ABI known for {address}")
        functions = tuple(named_abi(abi_from_bytecode(entry.bytecode), self.dictionary))
        return ResolvedAbi(
            functions=functions,
            source="reconstructed",
            json=tuple(abi_to_json(list(functions))),
        )
