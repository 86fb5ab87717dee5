from __future__ import annotations

from functools import lru_cache

from zerosum.groups import build_group


@lru_cache(maxsize=None)
def grp(spec: str):
    """Groups are immutable; share one instance per spec across tests."""
    return build_group(spec)
