"""Term-map kernel selection: compiled extension if available, else pure Python.

Set AFFHECKE_KERNEL=python to force the fallback (used by the benchmark
and to reproduce results without a compiler).
"""

import os

if os.environ.get("AFFHECKE_KERNEL", "").lower() in ("py", "python"):
    from . import _termops_py as _impl
else:
    try:
        from . import _termops_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _termops_py as _impl

BACKEND = _impl.BACKEND
tadd = _impl.tadd
tsub = _impl.tsub
tmul = _impl.tmul
tscale = _impl.tscale
taxpy = _impl.taxpy
