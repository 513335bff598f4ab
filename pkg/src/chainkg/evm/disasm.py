"""EVM bytecode disassembler with selector-dispatch and payability analysis.

Disassembly is total: every byte sequence produces a Program. Unassigned
opcode bytes become INVALID instructions that remember their raw byte, and
a PUSH whose immediate runs past the end of the code is zero-extended and
flagged truncated, so re-serialization stays byte-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from chainkg.errors import ParseError
from chainkg.evm.opcodes import TERMINATORS, lookup, push_width

# A CALLVALUE guard must complete within this many instructions of the
# function entry, with at most this many unrelated instructions interleaved.
NOT_PAYABLE_WINDOW = 12
NOT_PAYABLE_MAX_GAP = 3


@dataclass(frozen=True, slots=True)
class Instruction:
    """One decoded instruction.

    push_data is zero-padded to the full width implied by the opcode;
    raw_size is how many of those bytes were actually present in the code
    (smaller than the width only for a truncated trailing PUSH).
    """

    offset: int
    opcode: str
    byte: int
    push_data: bytes = b""
    truncated: bool = False
    raw_size: int = 0

    @property
    def size(self) -> int:
        """Bytes this instruction occupies in the original code."""
        return 1 + self.raw_size

    def __str__(self) -> str:
        if self.push_data:
            return f"{self.offset:#06x} {self.opcode} 0x{self.push_data.hex()}"
        return f"{self.offset:#06x} {self.opcode}"


@dataclass(frozen=True, slots=True)
class FunctionBody:
    """Linear run of instructions from an entry offset.

    reachable_offsets covers the fall-through path only: it ends at the
    first terminator. Jump targets are resolved separately during tagging.
    """

    entry_offset: int
    reachable_offsets: frozenset[int]


@dataclass(frozen=True)
class Program:
    """Disassembled code plus the derived structural facts."""

    code: bytes
    instructions: tuple[Instruction, ...]
    jumpdests: frozenset[int]
    selectors: dict[bytes, int] = field(default_factory=dict)
    destinations: dict[int, FunctionBody] = field(default_factory=dict)
    not_payable: dict[int, bool] = field(default_factory=dict)

    def instruction_at(self, offset: int) -> Instruction | None:
        i = self.index_of(offset)
        return self.instructions[i] if i is not None else None

    def index_of(self, offset: int) -> int | None:
        """Index into `instructions` for an instruction starting at offset."""
        lo, hi = 0, len(self.instructions) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            got = self.instructions[mid].offset
            if got == offset:
                return mid
            if got < offset:
                lo = mid + 1
            else:
                hi = mid - 1
        return None


def parse_bytecode(source: bytes | bytearray | str) -> bytes:
    """Accept raw bytes or hex text with optional 0x prefix (case-insensitive)."""
    if isinstance(source, (bytes, bytearray)):
        return bytes(source)
    text = source.strip()
    if text[:2].lower() == "0x":
        text = text[2:]
    if len(text) % 2 != 0:
        raise ParseError("odd-length hex bytecode")
    try:
        return bytes.fromhex(text)
    except ValueError as exc:
        raise ParseError(f"invalid hex bytecode: {exc}") from exc


def disassemble(bytecode: bytes | bytearray | str) -> Program:
    """Linear-scan disassembly honoring push widths, plus all derived maps."""
    code = parse_bytecode(bytecode)
    instructions: list[Instruction] = []
    i = 0
    while i < len(code):
        byte = code[i]
        name, width = lookup(byte)
        if width:
            available = min(width, len(code) - i - 1)
            data = code[i + 1 : i + 1 + available]
            instructions.append(
                Instruction(
                    offset=i,
                    opcode=name,
                    byte=byte,
                    push_data=data.ljust(width, b"\x00"),
                    truncated=available < width,
                    raw_size=available,
                )
            )
            i += 1 + available
        else:
            instructions.append(Instruction(offset=i, opcode=name, byte=byte))
            i += 1

    instrs = tuple(instructions)
    jumpdests = find_jumpdests(instrs)
    program = Program(code=code, instructions=instrs, jumpdests=jumpdests)
    program.selectors.update(extract_selectors(program))
    for offset in sorted(jumpdests):
        program.destinations[offset] = _function_body(program, offset)
    for offset in program.destinations:
        program.not_payable[offset] = detect_not_payable(program, offset)
    return program


def assemble(instructions: tuple[Instruction, ...] | list[Instruction]) -> bytes:
    """Re-serialize instructions; truncated pushes shrink back to raw_size."""
    parts = []
    for ins in instructions:
        parts.append(bytes([ins.byte]))
        if ins.push_data:
            parts.append(ins.push_data[: ins.raw_size])
    return b"".join(parts)


def find_jumpdests(instructions: tuple[Instruction, ...] | list[Instruction]) -> frozenset[int]:
    """Offsets of JUMPDEST instructions (bytes inside push data never count)."""
    return frozenset(ins.offset for ins in instructions if ins.opcode == "JUMPDEST")


def extract_selectors(program: Program) -> dict[bytes, int]:
    """Recover the dispatcher's selector -> body-offset table.

    Matches the two dominant comparison shapes, chained along the
    fall-through path:

        DUP1 PUSH4 s EQ PUSH<n> dest JUMPI
             PUSH4 s EQ PUSH<n> dest JUMPI

    with PUSH1..PUSH4 accepted for the destination. The first occurrence
    of a selector wins.
    """
    selectors: dict[bytes, int] = {}
    instrs = program.instructions
    for i, ins in enumerate(instrs):
        if ins.opcode == "DUP1":
            match = _match_compare(instrs, i + 1)
        elif ins.opcode == "PUSH4":
            match = _match_compare(instrs, i)
        else:
            continue
        if match is not None:
            selector, dest = match
            selectors.setdefault(selector, dest)
    return selectors


def _match_compare(instrs: tuple[Instruction, ...], i: int) -> tuple[bytes, int] | None:
    """PUSH4 s, EQ, PUSH1..4 dest, JUMPI starting at index i."""
    if i + 3 >= len(instrs):
        return None
    push_sel, eq, push_dest, jumpi = instrs[i : i + 4]
    if push_sel.opcode != "PUSH4" or push_sel.truncated:
        return None
    if eq.opcode != "EQ" or jumpi.opcode != "JUMPI":
        return None
    if push_dest.byte < 0x60 or push_dest.byte > 0x63 or push_dest.truncated:
        return None
    return push_sel.push_data, int.from_bytes(push_dest.push_data, "big")


def detect_not_payable(program: Program, entry_offset: int) -> bool:
    """CALLVALUE guard present near the entry of a function body?

    True iff the sequence CALLVALUE .. ISZERO .. PUSH .. JUMPI occurs within
    the first NOT_PAYABLE_WINDOW instructions from entry, with at most
    NOT_PAYABLE_MAX_GAP unrelated instructions interleaved, and the
    fall-through path after the JUMPI reverts.
    """
    start = program.index_of(entry_offset)
    if start is None:
        return False
    window = program.instructions[start : start + NOT_PAYABLE_WINDOW]
    # The guard lives in this body: never scan past its first terminator.
    for cut, ins in enumerate(window):
        if ins.opcode in TERMINATORS:
            window = window[:cut]
            break
    for wi, ins in enumerate(window):
        if ins.opcode != "CALLVALUE":
            continue
        jumpi_index = _match_guard(window, wi)
        if jumpi_index is not None and _falls_through_to_revert(
            program, start + jumpi_index + 1
        ):
            return True
    return False


def _match_guard(window: tuple[Instruction, ...], wi: int) -> int | None:
    """Scan for ISZERO, PUSH, JUMPI after the CALLVALUE at window index wi.

    Returns the window index of the JUMPI, or None. Unrelated instructions
    between the four anchors count against NOT_PAYABLE_MAX_GAP.
    """
    gap = 0
    stages = iter(("ISZERO", "PUSH", "JUMPI"))
    want = next(stages)
    for j in range(wi + 1, len(window)):
        op = window[j].opcode
        hit = op == want or (want == "PUSH" and op.startswith("PUSH"))
        if hit:
            if want == "JUMPI":
                return j
            want = next(stages)
        else:
            gap += 1
            if gap > NOT_PAYABLE_MAX_GAP:
                return None
    return None


def _falls_through_to_revert(program: Program, index: int) -> bool:
    """Does the straight-line path starting at instruction `index` revert?"""
    for ins in program.instructions[index:]:
        if ins.opcode in ("REVERT", "INVALID"):
            return True
        if ins.opcode in ("JUMPDEST", "JUMP", "JUMPI", "STOP", "RETURN", "SELFDESTRUCT"):
            return False
    return False


def _function_body(program: Program, entry_offset: int) -> FunctionBody:
    """Fall-through run from entry: stops at the first terminator."""
    start = program.index_of(entry_offset)
    offsets = set()
    if start is not None:
        for ins in program.instructions[start:]:
            offsets.add(ins.offset)
            if ins.opcode in TERMINATORS:
                break
    else:
        offsets.add(entry_offset)
    return FunctionBody(entry_offset=entry_offset, reachable_offsets=frozenset(offsets))
