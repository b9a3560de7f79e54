"""Deep-recursion runner: comparison may recurse proportionally to term depth,
so adversarially nested inputs run inside a worker thread with a large stack."""

from __future__ import annotations

import sys
import threading


def call_deep(fn, *args, stack_mb=512, limit=1_000_000, **kwargs):
    out = {}

    def runner():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(limit)
        try:
            out["value"] = fn(*args, **kwargs)
        except BaseException as e:  # propagated to the caller below
            out["error"] = e
        finally:
            sys.setrecursionlimit(old)

    old_size = threading.stack_size(stack_mb * 1024 * 1024)
    try:
        th = threading.Thread(target=runner)
        th.start()
        th.join()
    finally:
        threading.stack_size(old_size)
    if "error" in out:
        raise out["error"]
    return out["value"]
