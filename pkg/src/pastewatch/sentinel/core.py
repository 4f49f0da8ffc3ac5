"""Paste-watching service core: delay queue, edit suppression, clone
check, classifier gate, recommendation lifecycle, and event counters
persisted as XML. Time is injected so the delay contract is testable."""

from __future__ import annotations

import difflib
import os
import re
import tempfile
import time
import uuid
from dataclasses import dataclass, field

import numpy as np

from ..clones import find_duplicates
from ..config import Settings, load_settings
from ..errors import (InvalidState, NameCollision, NotExtractable,
                      ParseError, PastewatchError, UnknownFile)
from ..metrics import compute_metrics
from ..refactor import (analyze_dataflow, apply_plan, is_extractable,
                        plan_extraction)
from ..syntax import Fragment, SourceFile, parse_statements

PENDING = "Pending"
SHOWN = "Shown"
APPLIED = "Applied"
CANCELED = "Canceled"
EXPIRED = "Expired"

QUEUED = "queued"
DISCARDED = "discarded"
NOT_STATEMENT = "NotStatement"

_COUNTER_FIELDS = ("copyCount", "pasteCount", "notificationCount",
                   "extractMethodAppliedCount", "extractMethodCanceledCount")


@dataclass
class EventCounters:
    copyCount: int = 0
    pasteCount: int = 0
    notificationCount: int = 0
    extractMethodAppliedCount: int = 0
    extractMethodCanceledCount: int = 0

    def to_dict(self):
        return {name: getattr(self, name) for name in _COUNTER_FIELDS}

    def to_xml(self) -> str:
        inner = "".join(f"<{n}>{getattr(self, n)}</{n}>"
                        for n in _COUNTER_FIELDS)
        return f"<statistics>{inner}</statistics>"

    @classmethod
    def from_xml(cls, text: str) -> "EventCounters":
        values = {}
        for name in _COUNTER_FIELDS:
            m = re.search(f"<{name}>(\\d+)</{name}>", text)
            if m is None:
                raise ValueError(f"missing <{name}> element")
            values[name] = int(m.group(1))
        return cls(**values)


class CounterStore:
    """Counters plus optional XML persistence; every increment rewrites
    the file atomically (temp file + rename)."""

    def __init__(self, path=None):
        self.path = os.fspath(path) if path is not None else None
        self.counters = EventCounters()
        if self.path and os.path.exists(self.path):
            with open(self.path, encoding="utf-8") as fh:
                self.counters = EventCounters.from_xml(fh.read())

    def increment(self, name: str):
        setattr(self.counters, name, getattr(self.counters, name) + 1)
        self._persist()

    def _persist(self):
        if not self.path:
            return
        directory = os.path.dirname(self.path) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(self.counters.to_xml())
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


@dataclass
class PasteEvent:
    file_id: str
    text: str
    offset: int
    timestamp: float


@dataclass
class _QueuedPaste:
    span: tuple  # (start, end) byte offsets in the current content
    due_at: float
    suppressed: bool = False


@dataclass
class Recommendation:
    id: str
    file_id: str
    span: tuple
    match_count: int
    exact_match_count: int
    probability: float
    state: str
    shown_at: float
    expires_at: float

    def to_dict(self):
        return {"id": self.id, "fileId": self.file_id,
                "span": list(self.span), "matchCount": self.match_count,
                "exactMatchCount": self.exact_match_count,
                "probability": self.probability, "state": self.state}


@dataclass
class _FileState:
    content: str
    queue: list = field(default_factory=list)


def _shift_span(span, edit_start, edit_end, delta):
    """New span after replacing [edit_start, edit_end); None if the edit
    overlaps the span."""
    s, e = span
    if edit_end <= s:
        return (s + delta, e + delta)
    if edit_start >= e:
        return span
    return None


class SentinelService:
    """One service instance watches many registered files. The classifier
    maps a metric matrix (n x 78) to probabilities via predict_proba."""

    def __init__(self, classifier=None, settings: Settings = None,
                 clock=time.time, counters_path=None):
        self.settings = settings or load_settings(environ={})
        self.classifier = classifier
        if self.classifier is None and self.settings.model_path:
            from ..ml import load_classifier
            _, self.classifier = load_classifier(self.settings.model_path)
        self.clock = clock
        self.store = CounterStore(counters_path)
        self.files: dict[str, _FileState] = {}
        self.recommendations: dict[str, Recommendation] = {}

    # -- registration and editing --------------------------------------

    def register_file(self, content: str) -> str:
        file_id = uuid.uuid4().hex[:12]
        self.files[file_id] = _FileState(content=content)
        return file_id

    def file_content(self, file_id: str) -> str:
        return self._file(file_id).content

    def _file(self, file_id: str) -> _FileState:
        try:
            return self.files[file_id]
        except KeyError:
            raise UnknownFile(f"no registered file {file_id!r}") from None

    def edit(self, file_id: str, start: int, end: int, text: str):
        state = self._file(file_id)
        if not (0 <= start <= end <= len(state.content)):
            raise ValueError("edit range outside file")
        delta = len(text) - (end - start)
        state.content = state.content[:start] + text + state.content[end:]
        for item in state.queue:
            shifted = _shift_span(item.span, start, end, delta)
            if shifted is None:
                item.suppressed = True
            else:
                item.span = shifted
        for rec in self.recommendations.values():
            if rec.file_id != file_id or rec.state != SHOWN:
                continue
            shifted = _shift_span(rec.span, start, end, delta)
            if shifted is None:
                rec.state = EXPIRED
            else:
                rec.span = shifted

    # -- events --------------------------------------------------------

    def record_copy(self):
        self.store.increment("copyCount")

    def enqueue_paste(self, event: PasteEvent):
        """Insert the pasted text, bump pasteCount, and queue the span
        for delayed evaluation when it parses as statements."""
        state = self._file(event.file_id)
        if not (0 <= event.offset <= len(state.content)):
            raise ValueError("insertion offset outside file")
        self.store.increment("pasteCount")
        state.content = (state.content[:event.offset] + event.text
                         + state.content[event.offset:])
        shift = len(event.text)
        for item in state.queue:
            shifted = _shift_span(item.span, event.offset, event.offset, shift)
            item.span = shifted if shifted else item.span
        try:
            parse_statements(event.text)
        except ParseError:
            return {"status": DISCARDED, "reason": NOT_STATEMENT}
        due = event.timestamp + self.settings.delay_ms / 1000.0
        state.queue.append(_QueuedPaste(
            span=(event.offset, event.offset + len(event.text)), due_at=due))
        return {"status": QUEUED, "dueAt": due}

    # -- evaluation ----------------------------------------------------

    def _fragment_for_span(self, file: SourceFile, span):
        """Maximal sibling-statement run fully inside the span, with its
        enclosing method and class; None when the span does not align."""
        start, end = span
        for class_node, method in file.methods():
            if not (method.start <= start and end <= method.end):
                continue
            best = None
            for block in method.attrs["body"].walk():
                if block.kind not in ("Body", "Block"):
                    continue
                run = [s for s in block.attrs["stmts"]
                       if start <= s.start and s.end <= end]
                if run and (best is None or len(run) > len(best)):
                    best = run
            if best:
                return class_node, method, Fragment(
                    file=file, statements=tuple(best),
                    enclosing_method=method)
        return None

    def _probability(self, vector) -> float:
        X = np.asarray([vector.values], dtype=float)
        return float(self.classifier.predict_proba(X)[0])

    def evaluate_due(self, now: float) -> list:
        """Process due queue items and expire stale notifications; called
        lazily from every API entry point. Returns newly shown items."""
        for rec in self.recommendations.values():
            if rec.state == SHOWN and now >= rec.expires_at:
                rec.state = EXPIRED
        shown = []
        for file_id, state in self.files.items():
            remaining = []
            for item in state.queue:
                if item.suppressed:
                    continue
                if item.due_at > now:
                    remaining.append(item)
                    continue
                try:
                    rec = self._evaluate_item(file_id, state, item, now)
                except PastewatchError:
                    rec = None  # per-item failures are skipped
                if rec is not None:
                    shown.append(rec)
            state.queue = remaining
        return shown

    def _evaluate_item(self, file_id, state, item, now):
        file = SourceFile.from_text(state.content, path=file_id)
        resolved = self._fragment_for_span(file, item.span)
        if resolved is None:
            return None
        class_node, method, fragment = resolved
        matches = find_duplicates(fragment, file,
                                  self.settings.clone_threshold)
        if not matches:
            return None
        vector = compute_metrics(fragment, method, class_node)
        probability = self._probability(vector)
        if probability < self.settings.decision_threshold:
            return None
        if not is_extractable(analyze_dataflow(fragment, method)):
            return None
        rec = Recommendation(
            id=uuid.uuid4().hex[:12], file_id=file_id, span=fragment.span,
            match_count=len(matches),
            exact_match_count=sum(m.kind == "Exact" for m in matches),
            probability=probability, state=SHOWN, shown_at=now,
            expires_at=now + self.settings.expiry_ms / 1000.0)
        self.recommendations[rec.id] = rec
        self.store.increment("notificationCount")
        return rec

    # -- responses -----------------------------------------------------

    def shown_recommendations(self):
        return [r for r in self.recommendations.values()
                if r.state == SHOWN]

    def _shown(self, rec_id: str) -> Recommendation:
        rec = self.recommendations.get(rec_id)
        if rec is None:
            raise InvalidState(f"unknown recommendation {rec_id!r}")
        if rec.state != SHOWN:
            raise InvalidState(f"recommendation is {rec.state}, not Shown")
        return rec

    def apply(self, rec_id: str, name: str):
        rec = self._shown(rec_id)
        state = self._file(rec.file_id)
        rec.state = APPLIED
        try:
            file = SourceFile.from_text(state.content, path=rec.file_id)
            resolved = self._fragment_for_span(file, rec.span)
            if resolved is None:
                raise InvalidState("recommendation span no longer resolves")
            class_node, method, fragment = resolved
            matches = find_duplicates(fragment, file,
                                      self.settings.clone_threshold)
            plan = plan_extraction(fragment, method, class_node, name,
                                   matches)
            new_file = apply_plan(plan, file)
        except (NotExtractable, NameCollision, InvalidState):
            rec.state = SHOWN
            raise
        diff = "".join(difflib.unified_diff(
            state.content.splitlines(keepends=True),
            new_file.content.splitlines(keepends=True),
            fromfile="before", tofile="after"))
        state.content = new_file.content
        state.queue = []  # spans predate the rewrite
        self.store.increment("extractMethodAppliedCount")
        return {"diff": diff, "content": new_file.content,
                "newMethodName": plan.new_method_name}

    def cancel(self, rec_id: str):
        rec = self._shown(rec_id)
        rec.state = CANCELED
        self.store.increment("extractMethodCanceledCount")

    # -- counters ------------------------------------------------------

    @property
    def counters(self) -> EventCounters:
        return self.store.counters

    def counters_xml(self) -> str:
        return self.store.counters.to_xml()
