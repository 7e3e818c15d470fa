"""LRU image cache keyed by view-request content hash, bounded by bytes."""

from __future__ import annotations

import threading
from collections import OrderedDict

from .base import ImageRef, ImageryProvider, ViewRequest


class LruImageCache:
    def __init__(self, byte_budget: int = 64 * 1024 * 1024):
        self._budget = max(0, byte_budget)
        self._entries: OrderedDict[str, ImageRef] = OrderedDict()
        self._bytes = 0
        self._lock = threading.Lock()

    def get(self, req: ViewRequest) -> ImageRef | None:
        key = req.content_key()
        with self._lock:
            ref = self._entries.get(key)
            if ref is not None:
                self._entries.move_to_end(key)
            return ref

    def put(self, req: ViewRequest, ref: ImageRef) -> None:
        if len(ref.data) > self._budget:
            return
        key = req.content_key()
        with self._lock:
            old = self._entries.pop(key, None)
            if old is not None:
                self._bytes -= len(old.data)
            self._entries[key] = ref
            self._bytes += len(ref.data)
            while self._bytes > self._budget and self._entries:
                _, evicted = self._entries.popitem(last=False)
                self._bytes -= len(evicted.data)

    @property
    def size_bytes(self) -> int:
        with self._lock:
            return self._bytes


class CachingImageryProvider:
    """Wraps any imagery provider with the LRU cache; views repeat across verbosity levels."""

    def __init__(self, inner: ImageryProvider, cache: LruImageCache | None = None):
        self._inner = inner
        self.cache = cache or LruImageCache()

    def render_view(self, req: ViewRequest) -> ImageRef:
        hit = self.cache.get(req)
        if hit is not None:
            return hit
        ref = self._inner.render_view(req)
        self.cache.put(req, ref)
        return ref
