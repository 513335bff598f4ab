"""Shared test utilities: a label-aware assembler, reference implementations
used as oracles, and hand-assembled bytecode fixtures.

The oracles here are deliberately independent of the package: the keccak
reference derives its round constants and rotation offsets from the LFSR
schedule instead of literal tables, and the query/cluster references are
naive nested loops.
"""

from __future__ import annotations

from dataclasses import dataclass

from chainkg.evm.keccak import keccak256
from chainkg.evm.opcodes import MNEMONIC_TO_BYTE
from chainkg.kg.terms import Iri, Literal, Triple, Variable

# --- mini assembler ----------------------------------------------------------


@dataclass(frozen=True)
class Label:
    name: str


@dataclass(frozen=True)
class Ref:
    name: str


def asm(*items) -> bytes:
    """Assemble mnemonics into bytecode.

    Items: "MNEMONIC", ("PUSHn", operand), or Label/Ref markers. Operands may
    be ints, bytes, or Refs to label offsets (resolved in a second pass).
    """
    offsets: dict[str, int] = {}
    offset = 0
    for item in items:
        if isinstance(item, Label):
            offsets[item.name] = offset
        elif isinstance(item, tuple):
            mnemonic = item[0]
            offset += 1 + (MNEMONIC_TO_BYTE[mnemonic] - 0x5F)
        else:
            offset += 1
    out = bytearray()
    for item in items:
        if isinstance(item, Label):
            continue
        if isinstance(item, tuple):
            mnemonic, operand = item
            byte = MNEMONIC_TO_BYTE[mnemonic]
            width = byte - 0x5F
            if isinstance(operand, Ref):
                operand = offsets[operand.name]
            if isinstance(operand, int):
                operand = operand.to_bytes(width, "big")
            if len(operand) != width:
                raise ValueError(f"{mnemonic} operand must be {width} bytes")
            out.append(byte)
            out.extend(operand)
        else:
            out.append(MNEMONIC_TO_BYTE[item])
    return bytes(out)


def selector(signature: str) -> bytes:
    return keccak256(signature.encode())[:4]


# --- hand-assembled contracts -------------------------------------------------

FOUR_FN_SIGNATURES = {
    "payable": "deposit()",
    "nonpayable": "store(uint256)",
    "view": "retrieve()",
    "pure": "calc()",
}


def _guard(body_label: str) -> list:
    return [
        "JUMPDEST",
        "CALLVALUE",
        "DUP1",
        "ISZERO",
        ("PUSH2", Ref(body_label)),
        "JUMPI",
        ("PUSH1", 0),
        "DUP1",
        "REVERT",
        Label(body_label),
        "JUMPDEST",
    ]


def _dispatcher(pairs: list[tuple[bytes, str]]) -> list:
    items: list = [("PUSH1", 0), "CALLDATALOAD", ("PUSH1", 0xE0), "SHR"]
    for sel, label in pairs:
        items += ["DUP1", ("PUSH4", sel), "EQ", ("PUSH2", Ref(label)), "JUMPI"]
    items += [("PUSH1", 0), "DUP1", "REVERT"]
    return items


def four_function_bytecode() -> bytes:
    """Dispatcher plus four bodies: payable, nonpayable, view, and pure.

    deposit() has no CALLVALUE guard and stores; store(uint256) guards,
    reads calldata, and stores; retrieve() guards and returns an SLOAD;
    calc() guards and returns arithmetic.
    """
    sels = {k: selector(v) for k, v in FOUR_FN_SIGNATURES.items()}
    items = _dispatcher(
        [(sels["payable"], "a"), (sels["nonpayable"], "b"), (sels["view"], "c"), (sels["pure"], "d")]
    )
    items += [Label("a"), "JUMPDEST", ("PUSH1", 1), ("PUSH1", 0), "SSTORE", "STOP"]
    items += [Label("b")] + _guard("b_body") + [
        ("PUSH1", 4), "CALLDATALOAD", ("PUSH1", 0), "SSTORE", "STOP",
    ]
    items += [Label("c")] + _guard("c_body") + [
        ("PUSH1", 0), "SLOAD", ("PUSH1", 0), "MSTORE", ("PUSH1", 0x20), ("PUSH1", 0), "RETURN",
    ]
    items += [Label("d")] + _guard("d_body") + [
        ("PUSH1", 1), ("PUSH1", 2), "ADD", ("PUSH1", 0), "MSTORE", ("PUSH1", 0x20), ("PUSH1", 0), "RETURN",
    ]
    return asm(*items)


def nft_bytecode(mint_signature: str, supply_signature: str = "totalSupply()") -> bytes:
    """Two-function NFT-ish contract: a payable mint and a guarded view."""
    items = _dispatcher([(selector(mint_signature), "mint"), (selector(supply_signature), "supply")])
    items += [Label("mint"), "JUMPDEST", ("PUSH1", 1), ("PUSH1", 0), "SSTORE", "STOP"]
    items += [Label("supply")] + _guard("supply_body") + [
        ("PUSH1", 0), "SLOAD", ("PUSH1", 0), "MSTORE", ("PUSH1", 0x20), ("PUSH1", 0), "RETURN",
    ]
    return asm(*items)


# --- independent keccak reference ----------------------------------------------


def _reference_round_constants() -> list[int]:
    """Round constants from the LFSR bit generator, not a literal table."""

    def rc_bit(t: int) -> int:
        r = 1
        for _ in range(t % 255):
            r <<= 1
            if r & 0x100:
                r ^= 0x171
        return r & 1

    constants = []
    for round_index in range(24):
        value = 0
        for j in range(7):
            if rc_bit(7 * round_index + j):
                value |= 1 << (2**j - 1)
        constants.append(value)
    return constants


def _reference_rotations() -> dict[tuple[int, int], int]:
    """Rotation offsets from the pi-walk schedule, not a literal table."""
    offsets = {(0, 0): 0}
    x, y = 1, 0
    for t in range(24):
        offsets[(x, y)] = ((t + 1) * (t + 2) // 2) % 64
        x, y = y, (2 * x + 3 * y) % 5
    return offsets


def keccak256_reference(data: bytes) -> bytes:
    """Reference Keccak-256 with a dict-keyed state; used as the test oracle."""
    mask = (1 << 64) - 1
    rot = _reference_rotations()
    rcs = _reference_round_constants()
    lanes = {(x, y): 0 for x in range(5) for y in range(5)}

    def rotl(v: int, s: int) -> int:
        s %= 64
        return ((v << s) | (v >> (64 - s))) & mask if s else v

    rate = 136
    padded = bytearray(data)
    pad = rate - len(padded) % rate
    if pad == 1:
        padded.append(0x81)
    else:
        padded += b"\x01" + bytes(pad - 2) + b"\x80"
    for start in range(0, len(padded), rate):
        block = padded[start : start + rate]
        for i in range(rate // 8):
            x, y = i % 5, i // 5
            lanes[(x, y)] ^= int.from_bytes(block[8 * i : 8 * i + 8], "little")
        for rc in rcs:
            c = {x: lanes[(x, 0)] ^ lanes[(x, 1)] ^ lanes[(x, 2)] ^ lanes[(x, 3)] ^ lanes[(x, 4)] for x in range(5)}
            d = {x: c[(x - 1) % 5] ^ rotl(c[(x + 1) % 5], 1) for x in range(5)}
            lanes = {(x, y): lanes[(x, y)] ^ d[x] for x in range(5) for y in range(5)}
            moved = {((0 * x + 1 * y) % 5, (2 * x + 3 * y) % 5): rotl(lanes[(x, y)], rot[(x, y)]) for x in range(5) for y in range(5)}
            lanes = {
                (x, y): moved[(x, y)] ^ ((~moved[((x + 1) % 5, y)]) & moved[((x + 2) % 5, y)])
                for x in range(5)
                for y in range(5)
            }
            lanes[(0, 0)] ^= rc
    out = b""
    for i in range(4):
        out += lanes[(i % 5, i // 5)].to_bytes(8, "little")
    return out


# --- naive evaluation oracles ---------------------------------------------------


def brute_force_query(triples, patterns) -> list[dict]:
    """Reference conjunctive evaluation: scan every triple for every pattern."""
    triples = list(triples)

    def match(pattern, triple, binding):
        new_binding = dict(binding)
        for term, value in zip(
            (pattern.subject, pattern.predicate, pattern.object),
            (triple.subject, triple.predicate, triple.object),
        ):
            if isinstance(term, Variable):
                if term.name in new_binding:
                    if new_binding[term.name] != value:
                        return None
                else:
                    new_binding[term.name] = value
            elif term != value:
                return None
        return new_binding

    bindings = [{}]
    for pattern in patterns:
        bindings = [
            nb for b in bindings for t in triples if (nb := match(pattern, t, b)) is not None
        ]
    unique = []
    seen = set()
    for binding in bindings:
        key = frozenset((k, repr(v)) for k, v in binding.items())
        if key not in seen:
            seen.add(key)
            unique.append(binding)
    return unique


def binding_set(bindings) -> set:
    return {frozenset((k, repr(v)) for k, v in b.items()) for b in bindings}
