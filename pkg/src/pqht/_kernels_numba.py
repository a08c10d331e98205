"""Numba-compiled statevector gate kernels (hot path).

Same calling contracts as ``_kernels_numpy``: in-place updates, qubit ``q``
is bit ``q`` of the little-endian amplitude index.  All loops are written as
strided index walks so no temporaries are allocated; this is what makes the
64-vector sweeps fast.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def apply_1q(amps, q, m00, m01, m10, m11):
    half = 1 << q
    step = half << 1
    for base in range(0, amps.shape[0], step):
        for off in range(base, base + half):
            i1 = off + half
            a0 = amps[off]
            a1 = amps[i1]
            amps[off] = m00 * a0 + m01 * a1
            amps[i1] = m10 * a0 + m11 * a1


@numba.njit(cache=True)
def apply_diag(amps, q, d0, d1):
    half = 1 << q
    step = half << 1
    for base in range(0, amps.shape[0], step):
        for off in range(base, base + half):
            amps[off] = d0 * amps[off]
            amps[off + half] = d1 * amps[off + half]


@numba.njit(cache=True)
def apply_x(amps, q):
    half = 1 << q
    step = half << 1
    for base in range(0, amps.shape[0], step):
        for off in range(base, base + half):
            i1 = off + half
            tmp = amps[off]
            amps[off] = amps[i1]
            amps[i1] = tmp


@numba.njit(cache=True)
def apply_cx(amps, control, target):
    cbit = 1 << control
    tbit = 1 << target
    # Walk indices with control=1, target=0; swap with the target=1 partner.
    for i in range(amps.shape[0]):
        if (i & cbit) != 0 and (i & tbit) == 0:
            j = i | tbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


@numba.njit(cache=True)
def apply_swap(amps, a, b):
    abit = 1 << a
    bbit = 1 << b
    for i in range(amps.shape[0]):
        if (i & abit) != 0 and (i & bbit) == 0:
            j = (i & ~abit) | bbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


@numba.njit(cache=True)
def apply_ccx(amps, control1, control2, target):
    c1bit = 1 << control1
    c2bit = 1 << control2
    tbit = 1 << target
    cmask = c1bit | c2bit
    for i in range(amps.shape[0]):
        if (i & cmask) == cmask and (i & tbit) == 0:
            j = i | tbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp


# Program opcodes shared with the numpy backend (see kernels.OPCODES):
# 0=H 1=X 2=SX 3=RZ 4=CX 5=SWAP 6=CCX 7=skip 8=PauliX 9=PauliY 10=PauliZ

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@numba.njit(cache=True)
def run_program(amps, codes, qa, qb, qc, angles):
    """Execute a whole instruction stream in one compiled call.

    Crossing the Python/numba boundary costs more than a 2**14-amplitude
    gate update, so trajectory replays hand the full program over at once.
    """
    for i in range(codes.shape[0]):
        code = codes[i]
        if code == 0:
            apply_1q(amps, qa[i], _INV_SQRT2 + 0j, _INV_SQRT2 + 0j,
                     _INV_SQRT2 + 0j, -_INV_SQRT2 + 0j)
        elif code == 1 or code == 8:
            apply_x(amps, qa[i])
        elif code == 2:
            apply_1q(amps, qa[i], 0.5 + 0.5j, 0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j)
        elif code == 3:
            half = 0.5 * angles[i]
            c = np.cos(half)
            s = np.sin(half)
            apply_diag(amps, qa[i], complex(c, -s), complex(c, s))
        elif code == 4:
            apply_cx(amps, qa[i], qb[i])
        elif code == 5:
            apply_swap(amps, qa[i], qb[i])
        elif code == 6:
            apply_ccx(amps, qa[i], qb[i], qc[i])
        elif code == 9:
            apply_1q(amps, qa[i], 0j, -1j, 1j, 0j)
        elif code == 10:
            apply_diag(amps, qa[i], 1.0 + 0j, -1.0 + 0j)
        # code 7: no-op (MEASURE placeholder)


def warmup() -> None:
    """Trigger JIT compilation on a tiny state so first real use is fast."""
    v = np.zeros(8, dtype=np.complex128)
    v[0] = 1.0
    apply_1q(v, 0, 0.5 + 0j, 0.5 + 0j, 0.5 + 0j, -0.5 + 0j)
    apply_diag(v, 1, 1.0 + 0j, 1j)
    apply_x(v, 2)
    apply_cx(v, 0, 1)
    apply_swap(v, 1, 2)
    apply_ccx(v, 0, 1, 2)
    codes = np.arange(11, dtype=np.int64)
    zeros = np.zeros(11, dtype=np.int64)
    run_program(v, codes, zeros, zeros + 1, zeros + 2, np.zeros(11))
