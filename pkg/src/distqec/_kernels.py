"""Numba kernels for the column-major tableau hot paths.

Each kernel mirrors one loop from tableau.py exactly, operating on the
int64-array representation used by the fast tableau (n <= 31 so every
2n-bit row mask fits a signed 64-bit integer with room to spare).  The
pure-Python tableau remains the reference implementation; these kernels
must stay bit-for-bit equivalent to it.
"""

from __future__ import annotations

from numba import int64, njit


@njit(cache=True)
def _popcount(v):
    v = v - ((v >> 1) & 0x5555555555555555)
    v = (v & 0x3333333333333333) + ((v >> 2) & 0x3333333333333333)
    v = (v + (v >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (v * 0x0101010101010101) >> 56


@njit(cache=True)
def k_h(xs, zs, ph, q):
    xq = xs[q]
    zq = zs[q]
    ph[1] ^= xq & zq
    xs[q] = zq
    zs[q] = xq


@njit(cache=True)
def k_s(xs, zs, ph, q):
    xq = xs[q]
    carry = ph[0] & xq
    ph[0] ^= xq
    ph[1] ^= carry
    zs[q] ^= xq


@njit(cache=True)
def k_x(xs, zs, ph, q):
    ph[1] ^= zs[q]


@njit(cache=True)
def k_y(xs, zs, ph, q):
    ph[1] ^= xs[q] ^ zs[q]


@njit(cache=True)
def k_z(xs, zs, ph, q):
    ph[1] ^= xs[q]


@njit(cache=True)
def k_cnot(xs, zs, ph, c, t):
    xs[t] ^= xs[c]
    zs[c] ^= zs[t]


@njit(cache=True)
def k_cz(xs, zs, ph, a, b):
    ph[1] ^= xs[a] & xs[b]
    zs[a] ^= xs[b]
    zs[b] ^= xs[a]


@njit(cache=True)
def k_anticommute(xs, zs, ox, oz):
    """Bit r of the result: row r anticommutes with X^ox Z^oz."""
    m = int64(0)
    for q in range(xs.shape[0]):
        if (oz >> q) & 1:
            m ^= xs[q]
        if (ox >> q) & 1:
            m ^= zs[q]
    return m


@njit(cache=True)
def k_measure_update(xs, zs, ph, n, m, ox, oz, oe):
    """Project onto the recorded eigenspace: batch row multiplications by
    the pivot, retire the pivot into its destabilizer slot, install the
    signed observable as the new stabilizer row.  `oe` already includes
    the outcome sign."""
    stab_mask = m >> n
    low = stab_mask & (-stab_mask)
    p = 0
    while (low >> p) & 1 == 0:
        p += 1
    p_row = n + p
    dbit = int64(1) << p
    pbit = int64(1) << p_row
    keep = ~(dbit | pbit)
    targets = m & ~pbit
    acc = int64(0)
    for q in range(n):
        xq = xs[q]
        zq = zs[q]
        px = xq & pbit
        pz = zq & pbit
        if px:
            acc ^= zq
            xq ^= targets
        if pz:
            zq ^= targets
        nx = xq & keep
        nz = zq & keep
        if px:
            nx |= dbit
        if (ox >> q) & 1:
            nx |= pbit
        if pz:
            nz |= dbit
        if (oz >> q) & 1:
            nz |= pbit
        xs[q] = nx
        zs[q] = nz
    e1 = ph[0]
    e2 = ph[1]
    pe1 = e1 & pbit
    pe2 = e2 & pbit
    lo = targets if pe1 else int64(0)
    hi = targets if pe2 else int64(0)
    carry = e1 & lo
    e1n = (e1 ^ lo) & keep
    e2n = (e2 ^ hi ^ carry ^ (acc & targets)) & keep
    if pe1:
        e1n |= dbit
    if oe & 1:
        e1n |= pbit
    if pe2:
        e2n |= dbit
    if oe & 2:
        e2n |= pbit
    ph[0] = e1n
    ph[1] = e2n


@njit(cache=True)
def k_measure_z(xs, zs, ph, n, q):
    """Fused Z_q measurement probe: (outcome, mask) with outcome 0 when
    the result is random (caller draws and applies k_measure_update with
    the returned anticommute mask)."""
    m = xs[q]
    if (m >> n) != 0:
        return 0, m
    sel = m & ((int64(1) << n) - 1)
    mask = sel << n
    ae = _popcount(ph[0] & mask) + 2 * _popcount(ph[1] & mask)
    cross = int64(0)
    for c in range(n):
        xm = (xs[c] >> n) & sel
        if xm == 0:
            continue
        zm = (zs[c] >> n) & sel
        if zm == 0:
            continue
        while xm:
            low = xm & (-xm)
            cross ^= _popcount(zm & (low - 1)) & 1
            xm ^= low
    outcome = 1 if (ae + 2 * cross) & 3 == 0 else -1
    return outcome, m


@njit(cache=True)
def k_det_phase(xs, zs, ph, n, m):
    """Phase exponent of the stabilizer-row product selected by the
    anticommuting destabilizers (commuting-observable branch)."""
    sel = m & ((int64(1) << n) - 1)
    mask = sel << n
    ae = _popcount(ph[0] & mask) + 2 * _popcount(ph[1] & mask)
    cross = int64(0)
    for q in range(n):
        xm = (xs[q] >> n) & sel
        if xm == 0:
            continue
        zm = (zs[q] >> n) & sel
        if zm == 0:
            continue
        while xm:
            low = xm & (-xm)
            cross ^= _popcount(zm & (low - 1)) & 1
            xm ^= low
    return (ae + 2 * cross) & 3
