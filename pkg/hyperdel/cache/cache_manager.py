"""
Cache Manager - Singleton LRU memo for ball enumerations and other pure results.
Entries can optionally be persisted to a disk directory as pickles.
"""
import hashlib
import logging
import pickle
import threading
from collections import OrderedDict
from pathlib import Path
from typing import Any, Callable, Hashable, Optional

from hyperdel.shared.settings import get_settings

logger = logging.getLogger(__name__)


class CacheManager:
    """Singleton class holding memoized results keyed by canonical array keys."""

    _instance: Optional["CacheManager"] = None
    _initialized: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        """Initialize the cache manager (only once)."""
        if not CacheManager._initialized:
            settings = get_settings()
            self.max_entries: int = settings.cache_max_entries
            self.cache_dir: Optional[Path] = settings.cache_dir
            self._items: "OrderedDict[Hashable, Any]" = OrderedDict()
            self._lock = threading.RLock()
            self.hits = 0
            self.misses = 0
            CacheManager._initialized = True

    def configure(self, max_entries: Optional[int] = None, cache_dir: Optional[Path] = None) -> None:
        """Override the size limit or the disk directory at runtime."""
        with self._lock:
            if max_entries is not None:
                self.max_entries = max_entries
                self._evict()
            if cache_dir is not None:
                self.cache_dir = Path(cache_dir)

    def get_or_compute(self, namespace: str, key: Hashable, compute: Callable[[], Any]) -> Any:
        """
        Return the memoized value for (namespace, key), computing it on a miss.

        Args:
            namespace: Kind of result, e.g. "ball".
            key: Hashable key built from canonical array keys and parameters.
            compute: Zero-argument function producing the value.

        Returns:
            The cached or freshly computed value.
        """
        full_key = (namespace, key)
        with self._lock:
            if full_key in self._items:
                self._items.move_to_end(full_key, last=True)
                self.hits += 1
                return self._items[full_key]

        value = self._load_from_disk(full_key)
        if value is None:
            value = compute()
            self._save_to_disk(full_key, value)

        with self._lock:
            self.misses += 1
            self._items[full_key] = value
            self._evict()
        return value

    def clear(self) -> None:
        with self._lock:
            self._items.clear()
            self.hits = 0
            self.misses = 0

    def stats(self) -> dict:
        return {"entries": len(self._items), "hits": self.hits, "misses": self.misses}

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, full_key) -> bool:
        return full_key in self._items

    def _evict(self) -> None:
        while len(self._items) > self.max_entries:
            self._items.popitem(last=False)

    def _disk_path(self, full_key) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        digest = hashlib.sha256(repr(full_key).encode("utf-8")).hexdigest()
        return self.cache_dir / full_key[0] / f"{digest}.pkl"

    def _load_from_disk(self, full_key) -> Any:
        path = self._disk_path(full_key)
        if path is None or not path.exists():
            return None
        try:
            with path.open("rb") as fh:
                return pickle.load(fh)
        except (OSError, pickle.UnpicklingError, EOFError) as e:
            logger.warning("Ignoring unreadable cache file %s: %s", path, e)
            return None

    def _save_to_disk(self, full_key, value: Any) -> None:
        path = self._disk_path(full_key)
        if path is None:
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("wb") as fh:
                pickle.dump(value, fh, protocol=pickle.HIGHEST_PROTOCOL)
        except OSError as e:
            logger.warning("Could not persist cache entry to %s: %s", path, e)


# Global instance
cache_manager = CacheManager()
