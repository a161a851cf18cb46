"""Kernel selection: compiled Cython loops when available, numpy fallback.

``BACKEND`` reports which implementation was picked at import time; the
benchmark in benchmarks/bench_kernels.py compares the two directly.
"""

from . import _kernels_py

try:
    from . import _speedups as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    _impl = _kernels_py
    BACKEND = "python"

julia_classify = _impl.julia_classify
newton_invert_ext = _impl.newton_invert_ext

julia_classify_py = _kernels_py.julia_classify
newton_invert_ext_py = _kernels_py.newton_invert_ext
