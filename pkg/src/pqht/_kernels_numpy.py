"""Pure-numpy statevector gate kernels (fallback path).

Every kernel mutates ``amps`` in place.  ``amps`` is a contiguous complex128
array of length ``2**n``; qubit ``q`` is bit ``q`` of the amplitude index
(little-endian).  The numba module implements the same contracts; this one is
the always-available reference.
"""

from __future__ import annotations

import numpy as np


def _view1(amps: np.ndarray, q: int) -> np.ndarray:
    """Reshape so the qubit-q bit is its own axis: (high, 2, 2**q)."""
    low = 1 << q
    return amps.reshape(-1, 2, low)


def _view2(amps: np.ndarray, hi: int, lo: int) -> np.ndarray:
    """Axes (high, bit hi, mid, bit lo, low); requires hi > lo."""
    low = 1 << lo
    mid = 1 << (hi - lo - 1)
    return amps.reshape(-1, 2, mid, 2, low)


def apply_1q(amps: np.ndarray, q: int, m00: complex, m01: complex, m10: complex, m11: complex) -> None:
    v = _view1(amps, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m00 * a0 + m01 * a1
    v[:, 1, :] = m10 * a0 + m11 * a1


def apply_diag(amps: np.ndarray, q: int, d0: complex, d1: complex) -> None:
    v = _view1(amps, q)
    v[:, 0, :] *= d0
    v[:, 1, :] *= d1


def apply_x(amps: np.ndarray, q: int) -> None:
    v = _view1(amps, q)
    v[:, [0, 1], :] = v[:, [1, 0], :]


def apply_cx(amps: np.ndarray, control: int, target: int) -> None:
    if control > target:
        v = _view2(amps, control, target)
        v[:, 1, :, [0, 1], :] = v[:, 1, :, [1, 0], :]
    else:
        v = _view2(amps, target, control)
        v[:, [0, 1], :, 1, :] = v[:, [1, 0], :, 1, :]


def apply_swap(amps: np.ndarray, a: int, b: int) -> None:
    hi, lo = (a, b) if a > b else (b, a)
    v = _view2(amps, hi, lo)
    tmp = v[:, 0, :, 1, :].copy()
    v[:, 0, :, 1, :] = v[:, 1, :, 0, :]
    v[:, 1, :, 0, :] = tmp


def apply_ccx(amps: np.ndarray, control1: int, control2: int, target: int) -> None:
    # Flatten the three qubit bits into explicit axes, then exchange the two
    # slices where both controls are 1 and the target differs.
    bits = sorted((control1, control2, target), reverse=True)
    b2, b1, b0 = bits
    low = 1 << b0
    m1 = 1 << (b1 - b0 - 1)
    m2 = 1 << (b2 - b1 - 1)
    v = amps.reshape(-1, 2, m2, 2, m1, 2, low)
    axis_of = {b2: 1, b1: 3, b0: 5}

    def selector(target_bit: int) -> tuple:
        idx: list = [slice(None)] * 7
        idx[axis_of[control1]] = 1
        idx[axis_of[control2]] = 1
        idx[axis_of[target]] = target_bit
        return tuple(idx)

    sel0, sel1 = selector(0), selector(1)
    tmp = v[sel0].copy()
    v[sel0] = v[sel1]
    v[sel1] = tmp


_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def run_program(amps: np.ndarray, codes: np.ndarray, qa: np.ndarray,
                qb: np.ndarray, qc: np.ndarray, angles: np.ndarray) -> None:
    """Execute an encoded instruction stream (opcodes in kernels.OPCODES)."""
    for i in range(codes.shape[0]):
        code = codes[i]
        if code == 0:
            apply_1q(amps, qa[i], _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2)
        elif code == 1 or code == 8:
            apply_x(amps, qa[i])
        elif code == 2:
            apply_1q(amps, qa[i], 0.5 + 0.5j, 0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j)
        elif code == 3:
            half = 0.5 * angles[i]
            d = complex(np.cos(half), np.sin(half))
            apply_diag(amps, qa[i], d.conjugate(), d)
        elif code == 4:
            apply_cx(amps, qa[i], qb[i])
        elif code == 5:
            apply_swap(amps, qa[i], qb[i])
        elif code == 6:
            apply_ccx(amps, qa[i], qb[i], qc[i])
        elif code == 9:
            apply_1q(amps, qa[i], 0j, -1j, 1j, 0j)
        elif code == 10:
            apply_diag(amps, qa[i], 1.0, -1.0)
