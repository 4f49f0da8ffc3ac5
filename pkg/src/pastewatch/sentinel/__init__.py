"""Paste-watching service: delay queue, recommendations, counters, and
the HTTP API."""

from .app import create_app
from .core import (APPLIED, CANCELED, DISCARDED, EXPIRED, NOT_STATEMENT,
                   PENDING, QUEUED, SHOWN, CounterStore, EventCounters,
                   PasteEvent, Recommendation, SentinelService)

__all__ = [
    "create_app", "SentinelService", "PasteEvent", "Recommendation",
    "EventCounters", "CounterStore", "PENDING", "SHOWN", "APPLIED",
    "CANCELED", "EXPIRED", "QUEUED", "DISCARDED", "NOT_STATEMENT",
]
