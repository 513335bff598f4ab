"""ABI reconstruction from bytecode, plus selector/signature utilities.

Reconstruction walks the dispatch table recovered by the disassembler:
each selector's body is tagged with every opcode reachable over statically
resolvable jumps, and the tag set decides mutability and input/output
presence. Parameter arity and types are not recovered; a present-but-untyped
slot carries the OPAQUE_SLOT tag.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from chainkg.errors import ParseError, ValidationError
from chainkg.evm.disasm import FunctionBody, Program, disassemble
from chainkg.evm.keccak import keccak256

STATE_CHANGING_OPCODES = frozenset({"SSTORE", "CREATE", "CREATE2"})
STATE_READING_OPCODES = frozenset({"SLOAD"})
INPUT_OPCODES = frozenset({"CALLDATALOAD", "CALLDATASIZE", "CALLDATACOPY"})

MUTABILITIES = ("payable", "nonpayable", "view", "pure")

# Type tag for a parameter slot whose concrete type is unknown.
OPAQUE_SLOT = "unknown"

_SIGNATURE_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*\((?:[^\s()]*|\([^\s()]*\))*\)$")


@dataclass(frozen=True, slots=True)
class AbiFunction:
    """One callable function: selector, optional name, mutability, slots."""

    selector: bytes
    name: str | None
    payable: bool
    state_mutability: str
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.selector) != 4:
            raise ValidationError("selector must be exactly 4 bytes")
        if self.state_mutability not in MUTABILITIES:
            raise ValidationError(f"unknown mutability {self.state_mutability!r}")
        if self.payable != (self.state_mutability == "payable"):
            raise ValidationError("payable flag must mirror payable mutability")

    def to_json(self) -> dict:
        """Standard contract-ABI object; opaque slots render as bytes."""
        entry: dict = {
            "type": "function",
            "stateMutability": self.state_mutability,
            "inputs": [_slot_json(t) for t in self.inputs],
            "outputs": [_slot_json(t) for t in self.outputs],
        }
        if self.name is not None:
            entry["name"] = self.name
        return entry


def _slot_json(type_tag: str) -> dict:
    return {"name": "", "type": "bytes" if type_tag == OPAQUE_SLOT else type_tag}


def abi_to_json(functions: list[AbiFunction] | tuple[AbiFunction, ...]) -> list[dict]:
    return [fn.to_json() for fn in functions]


def function_tags(fn: FunctionBody, destinations: dict[int, FunctionBody], program: Program) -> frozenset[str]:
    """Union of opcode mnemonics reachable from fn across static jumps.

    Depth-first over the body graph: a JUMP/JUMPI whose target was pushed by
    the immediately preceding instruction leads into the destination body when
    one exists; computed targets are skipped; each body is visited once.
    """
    tags: set[str] = set()
    visited: set[int] = set()
    stack = [fn]
    while stack:
        body = stack.pop()
        if body.entry_offset in visited:
            continue
        visited.add(body.entry_offset)
        start = program.index_of(body.entry_offset)
        if start is None:
            continue
        for i in range(start, len(program.instructions)):
            ins = program.instructions[i]
            if ins.offset not in body.reachable_offsets:
                break
            tags.add(ins.opcode)
            if ins.opcode in ("JUMP", "JUMPI") and i > 0:
                prev = program.instructions[i - 1]
                if prev.opcode.startswith("PUSH") and prev.push_data:
                    target = int.from_bytes(prev.push_data, "big")
                    dest = destinations.get(target)
                    if dest is not None:
                        stack.append(dest)
            if ins.opcode == "JUMP":
                break
    return frozenset(tags)


def abi_from_bytecode(bytecode: bytes | str) -> list[AbiFunction]:
    """Reconstruct the function list from bytecode.

    For every dispatched selector with a known destination: payable is the
    negation of the CALLVALUE guard; a non-payable function is state-changing
    (nonpayable) when its tags touch SSTORE/CREATE/CREATE2, state-reading
    (view) when they touch SLOAD, and pure otherwise. Outputs are present
    when the tags contain RETURN or the function is a view; inputs when any
    CALLDATA* opcode appears. Results are ordered by selector bytes.
    """
    program = disassemble(bytecode)
    abi: list[AbiFunction] = []
    for selector, offset in sorted(program.selectors.items()):
        body = program.destinations.get(offset)
        if body is None:
            continue
        tags = function_tags(body, program.destinations, program)
        payable = not program.not_payable.get(offset, False)
        if payable:
            mutability = "payable"
        elif tags & STATE_CHANGING_OPCODES:
            mutability = "nonpayable"
        elif tags & STATE_READING_OPCODES:
            mutability = "view"
        else:
            mutability = "pure"
        outputs = (OPAQUE_SLOT,) if ("RETURN" in tags or mutability == "view") else ()
        inputs = (OPAQUE_SLOT,) if tags & INPUT_OPCODES else ()
        abi.append(
            AbiFunction(
                selector=selector,
                name=None,
                payable=payable,
                state_mutability=mutability,
                inputs=inputs,
                outputs=outputs,
            )
        )
    return abi


def selector_for_signature(signature: str) -> bytes:
    """First 4 bytes of keccak-256 of a canonical signature like name(type,...)."""
    if not signature or not _SIGNATURE_RE.match(signature):
        raise ValidationError(f"malformed function signature: {signature!r}")
    return keccak256(signature.encode("ascii"))[:4]


class SignatureDictionary:
    """Selector -> full signature map, keccak-verified on load.

    File format: one `selectorhex signature` pair per line; blank lines and
    lines starting with # are skipped.
    """

    def __init__(self, entries: dict[bytes, str] | None = None):
        self._entries: dict[bytes, str] = {}
        for selector, signature in (entries or {}).items():
            self.add(selector, signature)

    def add(self, selector: bytes, signature: str) -> None:
        computed = selector_for_signature(signature)
        if computed != selector:
            raise ValidationError(
                f"signature {signature!r} hashes to {computed.hex()}, not {selector.hex()}"
            )
        existing = self._entries.get(selector)
        if existing is not None and existing != signature:
            raise ValidationError(
                f"selector {selector.hex()} claimed by both {existing!r} and {signature!r}"
            )
        self._entries[selector] = signature

    @classmethod
    def load(cls, path) -> "SignatureDictionary":
        dictionary = cls()
        with open(path, encoding="utf-8") as handle:
            for line_no, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(None, 1)
                if len(parts) != 2 or len(parts[0]) != 8:
                    raise ParseError("expected `selectorhex signature`", line=line_no)
                try:
                    selector = bytes.fromhex(parts[0])
                except ValueError:
                    raise ParseError(f"bad selector hex {parts[0]!r}", line=line_no) from None
                dictionary.add(selector, parts[1])
        return dictionary

    def signature(self, selector: bytes) -> str | None:
        return self._entries.get(selector)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, selector: bytes) -> bool:
        return selector in self._entries


def resolve_function_name(selector: bytes, dictionary: SignatureDictionary | None) -> str | None:
    """Name part of the dictionary signature, or None when unknown."""
    if dictionary is None:
        return None
    signature = dictionary.signature(selector)
    if signature is None:
        return None
    return signature.split("(", 1)[0]


def fallback_label(selector: bytes) -> str:
    """Label used when no name is resolvable for a selector."""
    return f"call:0x{selector.hex()}"


def named_abi(functions: list[AbiFunction], dictionary: SignatureDictionary | None) -> list[AbiFunction]:
    """Copy of the list with names filled in from the dictionary where known."""
    out = []
    for fn in functions:
        name = fn.name or resolve_function_name(fn.selector, dictionary)
        if name != fn.name:
            fn = AbiFunction(
                selector=fn.selector,
                name=name,
                payable=fn.payable,
                state_mutability=fn.state_mutability,
                inputs=fn.inputs,
                outputs=fn.outputs,
            )
        out.append(fn)
    return out


def signature_for_entry(entry: dict) -> str:
    """Canonical signature text for a provider ABI JSON entry."""
    types = ",".join(arg.get("type", "") for arg in entry.get("inputs", ()))
    return f"{entry['name']}({types})"


def from_provider_json(entries: list[dict]) -> list[AbiFunction]:
    """Normalize a provider ABI JSON array into AbiFunction records.

    Non-function entries (events, constructors, ...) are skipped. Selectors
    are derived from the declared name and input types.
    """
    functions = []
    for entry in entries:
        if entry.get("type", "function") != "function":
            continue
        mutability = entry.get("stateMutability", "nonpayable")
        if mutability == "constant":
            mutability = "view"
        functions.append(
            AbiFunction(
                selector=selector_for_signature(signature_for_entry(entry)),
                name=entry["name"],
                payable=mutability == "payable",
                state_mutability=mutability,
                inputs=tuple(arg.get("type", OPAQUE_SLOT) for arg in entry.get("inputs", ())),
                outputs=tuple(arg.get("type", OPAQUE_SLOT) for arg in entry.get("outputs", ())),
            )
        )
    return sorted(functions, key=lambda fn: fn.selector)


def find_function(functions, selector: bytes) -> AbiFunction | None:
    for fn in functions:
        if fn.selector == selector:
            return fn
    return None
