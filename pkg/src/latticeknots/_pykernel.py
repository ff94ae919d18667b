"""Pure-Python/numpy kernels. Same signatures as the compiled ``_ckernel``.

Used when the extension is not built, or when ``LATTICEKNOTS_PURE=1``.
Exact sweeps use Python integers; the batched sweeps use ``int64`` with a
per-step magnitude guard and report rows that would overflow.
"""

from __future__ import annotations

import struct

import numpy as np

NAME = "python"

# |coefficient| at or above this value may overflow int64 in the next step.
_GUARD = 1 << 52

# d**L as {shift: coefficient}, d = -A^2 - A^-2
_LOOP_POWERS = {
    0: ((0, 1),),
    1: ((2, -1), (-2, -1)),
    2: ((4, 1), (0, 2), (-4, 1)),
}


def sweep_bracket(sched, bits) -> tuple[int, list[int]]:
    """Kauffman bracket as ``(min_exp, coeffs)`` in ``A``, exact integers."""
    c = sched.crossing_count
    base_t, outs, loops_t = sched.trans_base, sched.trans_out, sched.trans_loops
    vec = [{0: 1}]
    for x in range(c):
        b = bits[x]
        new = [dict() for _ in range(int(sched.state_counts[x + 1]))]
        base = int(base_t[x])
        last = x == c - 1
        for s, poly in enumerate(vec):
            if not poly:
                continue
            for g in (0, 1):
                k = base + 2 * s + g
                t = int(outs[k])
                loops = int(loops_t[k]) - (1 if last else 0)
                shift = 1 if g == b else -1
                target = new[t]
                for ds, dc in _LOOP_POWERS[loops]:
                    for e, v in poly.items():
                        key = e + shift + ds
                        target[key] = target.get(key, 0) + dc * v
        vec = [{e: v for e, v in p.items() if v} for p in new]
    terms = vec[0]
    if not terms:
        return 0, []
    lo, hi = min(terms), max(terms)
    return lo, [terms.get(e, 0) for e in range(lo, hi + 1)]


def _jones_key_from_bracket(lo: int, coeffs, writhe: int) -> bytes:
    # J = (-A)^(-3w) <D>, then q = A^-2
    sign = -1 if writhe % 2 else 1
    lo_a = lo - 3 * writhe
    hi_a = lo_a + len(coeffs) - 1
    if lo_a % 4 or (hi_a - lo_a) % 4 or any(coeffs[1::2]) or any(coeffs[2::4]):
        raise ArithmeticError("bracket exponents are not aligned to A^4")
    out = [sign * coeffs[i] for i in range(len(coeffs) - 1, -1, -2)]
    min_q = -hi_a // 2
    return struct.pack(f"<{len(out) + 1}q", min_q, *out)


def jones_key(sched, bits) -> bytes:
    lo, coeffs = sweep_bracket(sched, bits)
    w = sum(-s if b else s for s, b in zip(sched.plus_signs.tolist(), bits))
    return _jones_key_from_bracket(lo, coeffs, w)


def _batch_brackets(sched, bits: np.ndarray):
    """Vectorized sweep over a batch of resolutions (rows of ``bits``).

    Returns ``(coeff array [B, width], overflow mask [B])``.
    """
    B = bits.shape[0]
    c = sched.crossing_count
    width, off = sched.width, sched.offset
    vec = np.zeros((B, 1, width), dtype=np.int64)
    vec[:, 0, off] = 1
    bad = np.zeros(B, dtype=bool)
    for x in range(c):
        m_out = int(sched.state_counts[x + 1])
        new = np.zeros((B, m_out, width), dtype=np.int64)
        base = int(sched.trans_base[x])
        last = x == c - 1
        col = bits[:, x].astype(bool)
        for s in range(vec.shape[1]):
            src = vec[:, s, :]
            up = np.zeros_like(src)
            up[:, 1:] = src[:, :-1]
            down = np.zeros_like(src)
            down[:, :-1] = src[:, 1:]
            for g in (0, 1):
                k = base + 2 * s + g
                t = int(sched.trans_out[k])
                loops = int(sched.trans_loops[k]) - (1 if last else 0)
                # weight A when g matches the resolution bit, else A^-1
                moved = np.where((col == bool(g))[:, None], up, down)
                for ds, dc in _LOOP_POWERS[loops]:
                    if ds > 0:
                        new[:, t, ds:] += dc * moved[:, :-ds]
                    elif ds < 0:
                        new[:, t, :ds] += dc * moved[:, -ds:]
                    else:
                        new[:, t, :] += dc * moved
        vec = new
        bad |= (np.abs(vec).max(axis=(1, 2)) >= _GUARD)
    return vec[:, 0, :], bad


def jones_keys(sched, bits: np.ndarray, batch: int = 2048) -> list:
    """Jones keys for each row of ``bits`` (uint8 [B, c]); ``None`` on overflow."""
    out: list = []
    signs = sched.plus_signs.astype(np.int64)
    off = sched.offset
    for start in range(0, bits.shape[0], batch):
        chunk = np.ascontiguousarray(bits[start:start + batch])
        coeffs, bad = _batch_brackets(sched, chunk)
        writhes = (signs * (1 - 2 * chunk.astype(np.int64))).sum(axis=1)
        for row in range(chunk.shape[0]):
            if bad[row]:
                out.append(None)
                continue
            nz = np.flatnonzero(coeffs[row])
            lo, hi = nz[0], nz[-1]
            out.append(_jones_key_from_bracket(int(lo) - off,
                                               coeffs[row, lo:hi + 1].tolist(),
                                               int(writhes[row])))
    return out


def census(sched, prefix_len: int, prefix_code: int, batch: int = 2048) -> dict:
    """Count Jones keys over all resolutions whose low ``prefix_len`` bits
    equal ``prefix_code``. Returns ``{key: [count, min_code]}``."""
    c = sched.crossing_count
    free = c - prefix_len
    total = 1 << free
    counts: dict = {}
    shifts = np.arange(free, dtype=np.uint64)
    for start in range(0, total, batch):
        hi_part = np.arange(start, min(start + batch, total), dtype=np.uint64)
        codes = (hi_part << np.uint64(prefix_len)) | np.uint64(prefix_code)
        bits = np.zeros((len(codes), c), dtype=np.uint8)
        for i in range(prefix_len):
            bits[:, i] = (prefix_code >> i) & 1
        bits[:, prefix_len:] = ((hi_part[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
        keys = jones_keys(sched, bits, batch=batch)
        for key, code in zip(keys, codes.tolist()):
            if key is None:
                key = jones_key(sched, [(code >> i) & 1 for i in range(c)])
            entry = counts.get(key)
            if entry is None:
                counts[key] = [1, code]
            else:
                entry[0] += 1
                if code < entry[1]:
                    entry[1] = code
    return counts


def smoothing_cube(port_edge: np.ndarray, edge_ports: np.ndarray, c: int) -> np.ndarray:
    """Loop count for every geometric smoothing (bit i = smoothing at crossing i).

    ``port_edge[i, p]`` is the edge at port ``p`` of crossing ``i``;
    ``edge_ports[e]`` holds the two global port ids ``4*i + p`` of edge ``e``.
    Uses vectorized pointer jumping over batches of smoothings.
    """
    total = 1 << c
    out = np.empty(total, dtype=np.uint8)
    nports = 4 * c
    # port partner along its edge
    along = np.empty(nports, dtype=np.int64)
    along[edge_ports[:, 0]] = edge_ports[:, 1]
    along[edge_ports[:, 1]] = edge_ports[:, 0]
    # partner inside the crossing for the two smoothings, E=0 N=1 W=2 S=3
    inside0 = np.array([3, 2, 1, 0])  # N-W, E-S
    inside1 = np.array([1, 0, 3, 2])  # N-E, S-W
    port_ids = np.arange(nports)
    cross_of = port_ids // 4
    local = port_ids % 4
    batch = 1 << 14
    for start in range(0, total, batch):
        sig = np.arange(start, min(start + batch, total), dtype=np.int64)
        bit = (sig[:, None] >> cross_of[None, :]) & 1
        inside = np.where(bit == 1, inside1[local][None, :], inside0[local][None, :]) + 4 * cross_of[None, :]
        # successor: leave port along its edge, then turn inside the next crossing
        succ = inside[np.arange(len(sig))[:, None], along[None, :]]
        label = np.broadcast_to(port_ids, succ.shape).copy()
        step = succ
        for _ in range(int(np.ceil(np.log2(nports))) + 1):
            label = np.minimum(label, np.take_along_axis(label, step, axis=1))
            step = np.take_along_axis(step, step, axis=1)
        # each loop is two cycles of the port successor map (one per direction
        # of travel is impossible here, so each loop uses its ports once)
        reps = (label == port_ids[None, :]).sum(axis=1)
        out[start:start + len(sig)] = reps // 2
    return out


def statesum_hist(cube: np.ndarray, code: int, c: int) -> np.ndarray:
    """Histogram ``h[j, k]``: smoothings with ``j`` B-choices and ``k`` loops."""
    sig = np.arange(1 << c, dtype=np.uint32)
    j = np.bitwise_count(sig ^ np.uint32(code)) if hasattr(np, "bitwise_count") \
        else np.array([bin(v).count("1") for v in (sig ^ code).tolist()])
    flat = j.astype(np.int64) * (c + 2) + cube.astype(np.int64)
    return np.bincount(flat, minlength=(c + 1) * (c + 2)).reshape(c + 1, c + 2)
