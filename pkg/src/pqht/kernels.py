"""Kernel backend selection.

The environment variable ``PQHT_KERNELS`` picks the statevector kernel
implementation at import time:

* ``auto`` (default) - numba if it imports, else the pure-numpy fallback
* ``numba``          - require the compiled path; ImportError if unavailable
* ``numpy``          - force the fallback (useful for debugging and for the
  benchmark baseline)

Both backends implement identical in-place contracts; ``BACKEND`` records
which one won so tests and benchmarks can report it.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_choice = os.environ.get("PQHT_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"PQHT_KERNELS must be one of auto/numba/numpy, got {_choice!r}"
    )

if _choice == "numpy":
    _impl = _kernels_numpy
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _impl  # type: ignore[no-redef]

        _impl.warmup()
        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        _impl = _kernels_numpy
        BACKEND = "numpy"

apply_1q = _impl.apply_1q
apply_diag = _impl.apply_diag
apply_x = _impl.apply_x
apply_cx = _impl.apply_cx
apply_swap = _impl.apply_swap
apply_ccx = _impl.apply_ccx
run_program = _impl.run_program

# Instruction opcodes for run_program's encoded streams.
OPCODES = {
    "h": 0, "x": 1, "sx": 2, "rz": 3, "cx": 4, "swap": 5, "ccx": 6,
    "skip": 7, "pauli_x": 8, "pauli_y": 9, "pauli_z": 10,
}
