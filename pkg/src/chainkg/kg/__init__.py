"""Triple store, vocabulary, and RDF serialization."""
