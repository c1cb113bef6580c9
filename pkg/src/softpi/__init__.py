"""Soft session types: processes, proof terms, weights and subject reduction."""

import sys

# proof terms and traces are deep trees; the default limit is too small for them
if sys.getrecursionlimit() < 100_000:
    sys.setrecursionlimit(100_000)
