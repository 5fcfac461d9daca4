"""Offline embedding exporter.

Reads a line-delimited request file (request_id, text, start, end), runs a
Word-in-Context bi-encoder over the requests, and writes the vectors in the
binary store format the sensegap toolkit reads, plus a JSON manifest mapping
request ids to content hashes. The exporter embeds exactly what it is given:
all text rewriting (headword injection, substitution) happens upstream.
"""

__version__ = "0.1.0"
