"""Canonical serialization and payload digests.

Digests must be byte-exact across runs, so payloads are serialized with
sorted field order, compact separators, and ASCII escapes before hashing.
"""

from __future__ import annotations

import hashlib
import json


def canonical_json(obj) -> str:
    """Serialize ``obj`` with a stable byte representation (sorted keys)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True, allow_nan=False)


def payload_digest(payload) -> str:
    """sha256 hex digest of the canonical serialization of ``payload``."""
    return hashlib.sha256(canonical_json(payload).encode("ascii")).hexdigest()
