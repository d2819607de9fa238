"""Generation-versioned store of named data products.

Every product a channel's modules exchange goes through here: sources and
transforms ``put`` payloads under a name, each write bumps the per-key
generation, and consumers read through an immutable per-cycle snapshot.
Snapshots exclude expired products, so staleness is visible as a missing
input rather than silently served.

Payloads are either a scalar record (flat map of field -> number/string/bool)
or a table (list of records sharing one field set). They are deep-copied on
write and on read, so a stored generation can never be mutated; its digest
is computed once at write time and is part of the product's history.
"""

from __future__ import annotations

import copy
import math
import re
import threading
from dataclasses import dataclass, field

from .canonical import payload_digest
from .errors import MalformedPayload, UnknownKey

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

DEFAULT_RETENTION = 100


def is_identifier(text) -> bool:
    return isinstance(text, str) and bool(IDENT_RE.match(text))


def _check_record(record, where: str) -> None:
    if not isinstance(record, dict):
        raise MalformedPayload(f"{where}: record must be a mapping")
    for fname, value in record.items():
        if not is_identifier(fname):
            raise MalformedPayload(f"{where}: bad field name {fname!r}")
        if isinstance(value, bool) or isinstance(value, str):
            continue
        if isinstance(value, (int, float)):
            if not math.isfinite(value):
                raise MalformedPayload(f"{where}: field {fname!r} is not finite")
            continue
        raise MalformedPayload(
            f"{where}: field {fname!r} must be a number, string, or boolean")


def validate_payload(payload) -> None:
    """Raise MalformedPayload unless ``payload`` is a valid record or table."""
    if isinstance(payload, dict):
        _check_record(payload, "record payload")
        return
    if isinstance(payload, list):
        fields = None
        for i, row in enumerate(payload):
            _check_record(row, f"table row {i}")
            if fields is None:
                fields = set(row)
            elif set(row) != fields:
                raise MalformedPayload(f"table row {i}: field set differs from row 0")
        return
    raise MalformedPayload("payload must be a record (mapping) or a table (list of mappings)")


@dataclass(frozen=True)
class ProductKey:
    channel_id: str
    name: str


@dataclass(frozen=True)
class ProductHeader:
    generation: int
    created_at: float
    expiration_at: float
    producer: str


@dataclass(frozen=True)
class DataProduct:
    key: ProductKey
    header: ProductHeader
    payload: object
    digest: str

    def is_table(self) -> bool:
        return isinstance(self.payload, list)


@dataclass(frozen=True)
class DataBlockSnapshot:
    """Consistent view of one channel's latest unexpired products.

    The snapshot is a value: puts performed after it was taken are invisible
    through it, and it may be handed to concurrently running modules.
    """

    channel_id: str
    cycle_id: int
    taken_at: float
    entries: dict = field(default_factory=dict)  # name -> DataProduct

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def names(self) -> list:
        return sorted(self.entries)

    def get(self, name: str):
        return self.entries.get(name)

    def payload(self, name: str):
        """Deep copy of the payload for ``name``, or None when absent."""
        product = self.entries.get(name)
        if product is None:
            return None
        return copy.deepcopy(product.payload)


class _KeyStore:
    """History of one product key: retained generations plus full digest trail."""

    def __init__(self, retention: int):
        self.retention = retention
        self.products: list = []            # bounded window of DataProduct
        self.trail: list = []               # every (ProductHeader, digest) ever stored

    @property
    def generation(self) -> int:
        return len(self.trail)

    def append(self, product: DataProduct) -> None:
        self.products.append(product)
        self.trail.append((product.header, product.digest))
        if len(self.products) > self.retention:
            del self.products[0]

    def latest(self) -> DataProduct:
        return self.products[-1]


class DataBlock:
    """Thread-safe store of generation-versioned products, scoped per channel.

    History is bounded to ``retention`` payload-bearing generations per key;
    headers and digests of every generation are kept so the audit trail stays
    complete even after old payloads are pruned.
    """

    def __init__(self, retention: int = DEFAULT_RETENTION):
        if retention < 1:
            raise ValueError("retention must be >= 1")
        self._retention = retention
        self._keys: dict = {}  # ProductKey -> _KeyStore
        self._lock = threading.Lock()

    def put(self, channel_id: str, name: str, payload, validity_s: float,
            producer: str, now: float) -> ProductHeader:
        """Store a new generation of (channel_id, name).

        The payload is validated and deep-copied; the new generation is the
        previous one plus one (1 for a first write). Prior generations stay
        in history rather than being overwritten.
        """
        if not is_identifier(name):
            raise MalformedPayload(f"bad product name {name!r}")
        if not (isinstance(validity_s, (int, float)) and validity_s > 0):
            raise ValueError("validity_s must be > 0")
        validate_payload(payload)
        frozen = copy.deepcopy(payload)
        digest = payload_digest(frozen)
        key = ProductKey(channel_id, name)
        with self._lock:
            store = self._keys.get(key)
            if store is None:
                store = self._keys[key] = _KeyStore(self._retention)
            header = ProductHeader(
                generation=store.generation + 1,
                created_at=float(now),
                expiration_at=float(now) + float(validity_s),
                producer=producer,
            )
            store.append(DataProduct(key=key, header=header, payload=frozen,
                                     digest=digest))
            return header

    def snapshot(self, channel_id: str, cycle_id: int, now: float) -> DataBlockSnapshot:
        """Latest unexpired generation of every key in the channel.

        Products with ``expiration_at`` before ``now`` are excluded; missing
        keys are simply absent.
        """
        entries = {}
        with self._lock:
            for key, store in self._keys.items():
                if key.channel_id != channel_id:
                    continue
                latest = store.latest()
                if latest.header.expiration_at >= now:
                    entries[key.name] = latest
        return DataBlockSnapshot(channel_id=channel_id, cycle_id=cycle_id,
                                 taken_at=float(now), entries=entries)

    def history(self, channel_id: str, name: str) -> list:
        """All generations ever stored for the key, oldest first, as (header, digest)."""
        with self._lock:
            store = self._keys.get(ProductKey(channel_id, name))
            if store is None:
                raise UnknownKey(f"no product {name!r} in channel {channel_id!r}")
            return list(store.trail)

    def dump(self, channel_id: str | None = None) -> list:
        """Export every retained generation (payloads included), for the CLI dump.

        Documents are ordered by (channel, name, generation).
        """
        docs = []
        with self._lock:
            for key in sorted(self._keys, key=lambda k: (k.channel_id, k.name)):
                if channel_id is not None and key.channel_id != channel_id:
                    continue
                for product in self._keys[key].products:
                    docs.append({
                        "channel": key.channel_id,
                        "name": key.name,
                        "generation": product.header.generation,
                        "created_at": product.header.created_at,
                        "expiration_at": product.header.expiration_at,
                        "producer": product.header.producer,
                        "payload": copy.deepcopy(product.payload),
                    })
        return docs
