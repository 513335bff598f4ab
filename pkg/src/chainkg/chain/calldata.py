"""Calldata encoding/decoding for the supported ABI type subset.

Static types: uint256, address, bool, bytes32. Dynamic string/bytes go
through the standard head-tail offset scheme. Anything else decodes to raw
32-byte words, and a function whose parameter types are unknown (opaque
reconstruction slot) decodes its whole argument section to raw words.
"""

from __future__ import annotations

from chainkg.errors import DecodeError
from chainkg.evm.abi import OPAQUE_SLOT, AbiFunction, SignatureDictionary, find_function, resolve_function_name
from chainkg.chain.types import DecodedArg, DecodedCall

WORD = 32

STATIC_TYPES = ("uint256", "address", "bool", "bytes32")
DYNAMIC_TYPES = ("string", "bytes")


def encode_args(types: list[str] | tuple[str, ...], values: list | tuple) -> bytes:
    """Standard ABI encoding of an argument list (supported types only)."""
    if len(types) != len(values):
        raise DecodeError("type/value arity mismatch")
    head: list[bytes] = []
    tail: list[bytes] = []
    tail_base = len(types) * WORD
    for type_name, value in zip(types, values):
        if type_name in DYNAMIC_TYPES:
            payload = value.encode("utf-8") if type_name == "string" else bytes(value)
            offset = tail_base + sum(len(t) for t in tail)
            head.append(offset.to_bytes(WORD, "big"))
            padded_len = (len(payload) + WORD - 1) // WORD * WORD
            tail.append(len(payload).to_bytes(WORD, "big") + payload.ljust(padded_len, b"\x00"))
        else:
            head.append(_encode_static(type_name, value))
    return b"".join(head) + b"".join(tail)


def _encode_static(type_name: str, value) -> bytes:
    if type_name == "uint256":
        if not 0 <= value < 2**256:
            raise DecodeError(f"uint256 out of range: {value}")
        return value.to_bytes(WORD, "big")
    if type_name == "address":
        return bytes(12) + bytes.fromhex(value[2:] if value.startswith("0x") else value)
    if type_name == "bool":
        return (1 if value else 0).to_bytes(WORD, "big")
    if type_name == "bytes32":
        if len(value) != WORD:
            raise DecodeError("bytes32 must be exactly 32 bytes")
        return bytes(value)
    raise DecodeError(f"cannot encode type {type_name!r}")


def decode_call(
    data: bytes,
    abi: list[AbiFunction] | tuple[AbiFunction, ...],
    dictionary: SignatureDictionary | None = None,
) -> DecodedCall:
    """Decode a transaction input against an ABI.

    The first four bytes select the function; its declared input types drive
    argument decoding. Unsupported declared types come back as raw words.
    """
    if len(data) < 4:
        raise DecodeError(f"input of {len(data)} bytes is shorter than a selector")
    selector = bytes(data[:4])
    function = find_function(abi, selector)
    if function is None:
        raise DecodeError(f"selector 0x{selector.hex()} not present in ABI")
    name = function.name or resolve_function_name(selector, dictionary)
    args = tuple(decode_args(function.inputs, data[4:]))
    return DecodedCall(selector=selector, function=name, args=args)


def decode_args(types: tuple[str, ...], data: bytes) -> list[DecodedArg]:
    if any(t == OPAQUE_SLOT for t in types):
        return _raw_words(data)
    static_section = len(types) * WORD
    if len(data) < static_section:
        raise DecodeError(
            f"argument data is {len(data)} bytes, shorter than the {static_section}-byte static section"
        )
    args = []
    for index, type_name in enumerate(types):
        word = data[index * WORD : (index + 1) * WORD]
        if type_name in DYNAMIC_TYPES:
            args.append(DecodedArg(type_name, _decode_dynamic(type_name, data, word)))
        elif type_name in STATIC_TYPES:
            args.append(DecodedArg(type_name, _decode_static(type_name, word)))
        else:
            args.append(DecodedArg("raw", bytes(word)))
    return args


def _raw_words(data: bytes) -> list[DecodedArg]:
    return [DecodedArg("raw", bytes(data[i : i + WORD])) for i in range(0, len(data), WORD)]


def _decode_static(type_name: str, word: bytes):
    if type_name == "uint256":
        return int.from_bytes(word, "big")
    if type_name == "address":
        return "0x" + word[12:].hex()
    if type_name == "bool":
        return int.from_bytes(word, "big") != 0
    return bytes(word)  # bytes32


def _decode_dynamic(type_name: str, data: bytes, offset_word: bytes):
    offset = int.from_bytes(offset_word, "big")
    if offset + WORD > len(data):
        raise DecodeError(f"dynamic argument offset {offset} outside data")
    length = int.from_bytes(data[offset : offset + WORD], "big")
    start = offset + WORD
    if start + length > len(data):
        raise DecodeError(f"dynamic argument of length {length} overruns data")
    payload = bytes(data[start : start + length])
    if type_name == "string":
        try:
            return payload.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(f"string argument is not valid UTF-8: {exc}") from None
    return payload


def reencode_call(call: DecodedCall) -> bytes:
    """Selector plus re-encoded arguments; raw args are passed through."""
    parts = [call.selector]
    static_args = []
    types = []
    for arg in call.args:
        if arg.type == "raw":
            parts.append(arg.value)
            continue
        types.append(arg.type)
        static_args.append(arg.value)
    if types:
        parts.append(encode_args(types, static_args))
    return b"".join(parts)
