"""EVM bytecode analysis: disassembly, selector recovery, ABI reconstruction."""
