"""sensegap: find word usages whose senses a dictionary does not record.

Usages from a corpus and sense entries from a dictionary are embedded with a
Word-in-Context encoder (pluggable; a deterministic mock ships for tests);
a usage whose best sense similarity stays below a tuned threshold is flagged
as a non-recorded sense candidate. The package also contains the evaluation
harness (sense masking simulation, seeded cross-validation, F-beta threshold
sweeps, baselines) and the annotation tooling (instance generation, majority
aggregation, Krippendorff's alpha) used to select and validate models.
"""

__version__ = "0.1.0"
