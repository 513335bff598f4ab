"""Blockchain transaction types, decoding, and semantic relation extraction."""
