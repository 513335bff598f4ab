"""Operator CLI: ingest fixtures, inspect bytecode, query the graph, assess risk.

All outputs are deterministic given the inputs: exports and query bindings
are sorted, ABI listings order by selector. Exit status is 0 exactly when no
error diagnostic was emitted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from chainkg.chain.semantics import classify_transaction, extract_relations
from chainkg.chain.types import ContractCall, normalize_address
from chainkg.config import Config, load_config
from chainkg.errors import ChainkgError
from chainkg.evm.abi import abi_to_json, abi_from_bytecode, named_abi, SignatureDictionary
from chainkg.evm.disasm import disassemble
from chainkg.ingest import SIGNATURES_FILE, Pipeline, parse_chain_transaction
from chainkg.kg.serialize import export_graph, import_graph, parse_patterns, term_to_nt
from chainkg.kg.store import Store
from chainkg.kg.terms import Iri
from chainkg.kg.vocab import Vocab
from chainkg.risk import assess_address, explain

log = logging.getLogger("chainkg")


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fixtures", help="fixture directory")
    parser.add_argument("--store", help="store snapshot path (N-Triples)")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--verbose", action="store_true", help="debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chainkg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="run all fixture sources through the pipeline")
    _common_flags(p)

    p = sub.add_parser("disasm", help="disassemble bytecode (hex or file path)")
    _common_flags(p)
    p.add_argument("bytecode")

    p = sub.add_parser("abi", help="reconstruct an ABI from bytecode (hex or file path)")
    _common_flags(p)
    p.add_argument("bytecode")

    p = sub.add_parser("decode", help="classify and decode a transaction JSON file")
    _common_flags(p)
    p.add_argument("tx_file")

    p = sub.add_parser("query", help="run conjunctive patterns from a file")
    _common_flags(p)
    p.add_argument("pattern_file")

    p = sub.add_parser("risk", help="assess rug-pull risk for an IRI or 0x address")
    _common_flags(p)
    p.add_argument("subject")
    p.add_argument("--json", action="store_true", help="emit the structured report")

    p = sub.add_parser("export", help="export the store")
    _common_flags(p)
    p.add_argument("--format", choices=("ntriples", "turtle"), default="ntriples")

    p = sub.add_parser("import", help="import a graph document into the store")
    _common_flags(p)
    p.add_argument("graph_file")
    p.add_argument("--format", choices=("ntriples", "turtle"), default="ntriples")

    return parser


def _configure(args) -> Config:
    verbose = args.verbose or os.environ.get("CHAINKG_VERBOSE", "") not in ("", "0")
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)
    return load_config(args.config)


def _load_store(args, config: Config) -> Store:
    store = Store(Vocab(config.base_namespace))
    if args.store and Path(args.store).exists():
        import_graph(store, Path(args.store).read_text(encoding="utf-8"), "ntriples")
    return store


def _save_store(args, store: Store) -> None:
    if args.store:
        Path(args.store).write_text(export_graph(store, "ntriples"), encoding="utf-8")


def _read_bytecode_arg(value: str) -> str:
    try:
        path = Path(value)
        if path.exists():
            return path.read_text(encoding="utf-8").strip()
    except OSError:  # e.g. a long hex blob exceeds filename limits
        pass
    return value


def _signature_dictionary(args) -> SignatureDictionary | None:
    if args.fixtures:
        path = Path(args.fixtures) / SIGNATURES_FILE
        if path.exists():
            return SignatureDictionary.load(path)
    return None


def _require(args, attribute: str, flag: str) -> str:
    value = getattr(args, attribute)
    if not value:
        raise ChainkgError(f"this command requires {flag}")
    return value


def cmd_ingest(args, config: Config) -> int:
    fixtures = Path(_require(args, "fixtures", "--fixtures"))
    if not fixtures.is_dir():
        raise ChainkgError(f"fixture directory {fixtures} does not exist")
    store = _load_store(args, config)
    pipeline = Pipeline.from_fixture_dir(fixtures, store, config)
    stats = pipeline.run(fixtures)
    _save_store(args, store)
    for line in stats.as_lines():
        print(line)
    return 0


def cmd_disasm(args, config: Config) -> int:
    program = disassemble(_read_bytecode_arg(args.bytecode))
    for instruction in program.instructions:
        print(instruction)
    return 0


def cmd_abi(args, config: Config) -> int:
    functions = abi_from_bytecode(_read_bytecode_arg(args.bytecode))
    functions = named_abi(functions, _signature_dictionary(args))
    print(json.dumps(abi_to_json(functions), indent=2))
    return 0


def cmd_decode(args, config: Config) -> int:
    fixtures = Path(_require(args, "fixtures", "--fixtures"))
    store = Store(Vocab(config.base_namespace))
    pipeline = Pipeline.from_fixture_dir(fixtures, store, config)
    tx = parse_chain_transaction(json.loads(Path(args.tx_file).read_text(encoding="utf-8")))
    kind = classify_transaction(tx, pipeline.resolver)
    print(f"kind: {type(kind).__name__}")
    if isinstance(kind, ContractCall):
        print(f"function: {kind.function}")
        for arg in kind.decoded.args:
            value = arg.value.hex() if isinstance(arg.value, bytes) else arg.value
            print(f"  {arg.type}: {value}")
    for edge in extract_relations(tx, kind, config.proceeds_threshold):
        qualifier = f" proceeds->{edge.proceeds_recipient}" if edge.proceeds_recipient else ""
        print(f"edge: {edge.subject} -[{edge.predicate}]-> {edge.object}{qualifier}")
    return 0


def cmd_query(args, config: Config) -> int:
    store = _load_store(args, config)
    patterns = parse_patterns(Path(args.pattern_file).read_text(encoding="utf-8"))
    bindings = store.query(patterns)
    lines = sorted(
        " ".join(f"?{name}={term_to_nt(term)}" for name, term in sorted(binding.items()))
        for binding in bindings
    )
    for line in lines:
        print(line)
    print(f"{len(lines)} solution(s)")
    return 0


def cmd_risk(args, config: Config) -> int:
    store = _load_store(args, config)
    subject = args.subject
    if subject.startswith("0x"):
        iri = store.vocab.address(normalize_address(subject))
    else:
        iri = Iri(subject)
    report = assess_address(
        iri,
        store,
        hop_limit=config.risk_hop_limit,
        flagged_peers_threshold=config.risk_flagged_peers,
    )
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(explain(report))
    return 0


def cmd_export(args, config: Config) -> int:
    store = _load_store(args, config)
    sys.stdout.write(export_graph(store, args.format))
    return 0


def cmd_import(args, config: Config) -> int:
    store = _load_store(args, config)
    added = import_graph(store, Path(args.graph_file).read_text(encoding="utf-8"), args.format)
    _save_store(args, store)
    print(f"imported {added} new triple(s)")
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "disasm": cmd_disasm,
    "abi": cmd_abi,
    "decode": cmd_decode,
    "query": cmd_query,
    "risk": cmd_risk,
    "export": cmd_export,
    "import": cmd_import,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _configure(args)
        return _COMMANDS[args.command](args, config)
    except ChainkgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
