"""Hot numeric kernels: skeleton thinning and node-substitution cost matrices.

Each kernel exists twice: a numba ``@njit`` build and a pure-numpy build.
The active implementation is chosen at import time; setting the environment
variable ``CONTOURGRAPH_NO_NUMBA=1`` (or having no numba installed) selects
the numpy path.  Both paths accumulate floating-point terms in the same
order, so their outputs are bit-identical — the test suite asserts this and
``benchmarks/bench_kernels.py`` compares their speed.
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "CONTOURGRAPH_NO_NUMBA"


def _numba_wanted() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("1", "true", "yes")


USING_NUMBA = False
if _numba_wanted():
    try:
        import numba

        USING_NUMBA = True
    except ImportError:  # pragma: no cover - depends on environment
        USING_NUMBA = False


# ---------------------------------------------------------------------------
# Zhang-Suen thinning
# ---------------------------------------------------------------------------

def _shifted(img: np.ndarray):
    # p2..p9: clockwise 8-neighborhood starting at north, on a padded image.
    return (
        img[:-2, 1:-1],
        img[:-2, 2:],
        img[1:-1, 2:],
        img[2:, 2:],
        img[2:, 1:-1],
        img[2:, :-2],
        img[1:-1, :-2],
        img[:-2, :-2],
    )


def thin_numpy(bitmap: np.ndarray) -> np.ndarray:
    """Thin a binary image to a 1-pixel-wide 8-connected skeleton."""
    img = np.pad(bitmap.astype(bool), 1)
    while True:
        changed = False
        for step in (0, 1):
            nb = [n.astype(np.uint8) for n in _shifted(img)]
            p2, p3, p4, p5, p6, p7, p8, p9 = nb
            b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9
            seq = nb + [p2]
            a = np.zeros_like(b)
            for k in range(8):
                a += (seq[k] == 0) & (seq[k + 1] == 1)
            if step == 0:
                c1 = (p2 & p4 & p6) == 0
                c2 = (p4 & p6 & p8) == 0
            else:
                c1 = (p2 & p4 & p8) == 0
                c2 = (p2 & p6 & p8) == 0
            kill = img[1:-1, 1:-1] & (b >= 2) & (b <= 6) & (a == 1) & c1 & c2
            if kill.any():
                img[1:-1, 1:-1] &= ~kill
                changed = True
        if not changed:
            return img[1:-1, 1:-1].copy()


if USING_NUMBA:

    @numba.njit(cache=True)
    def _thin_pass_numba(img, out, step):  # pragma: no cover - jitted
        h, w = img.shape
        changed = False
        for r in range(1, h - 1):
            for c in range(1, w - 1):
                if not img[r, c]:
                    continue
                p2 = img[r - 1, c]
                p3 = img[r - 1, c + 1]
                p4 = img[r, c + 1]
                p5 = img[r + 1, c + 1]
                p6 = img[r + 1, c]
                p7 = img[r + 1, c - 1]
                p8 = img[r, c - 1]
                p9 = img[r - 1, c - 1]
                b = (
                    int(p2) + int(p3) + int(p4) + int(p5)
                    + int(p6) + int(p7) + int(p8) + int(p9)
                )
                if b < 2 or b > 6:
                    continue
                a = 0
                if not p2 and p3:
                    a += 1
                if not p3 and p4:
                    a += 1
                if not p4 and p5:
                    a += 1
                if not p5 and p6:
                    a += 1
                if not p6 and p7:
                    a += 1
                if not p7 and p8:
                    a += 1
                if not p8 and p9:
                    a += 1
                if not p9 and p2:
                    a += 1
                if a != 1:
                    continue
                if step == 0:
                    if p2 and p4 and p6:
                        continue
                    if p4 and p6 and p8:
                        continue
                else:
                    if p2 and p4 and p8:
                        continue
                    if p2 and p6 and p8:
                        continue
                out[r, c] = False
                changed = True
        return changed

    def thin_numba(bitmap: np.ndarray) -> np.ndarray:
        img = np.pad(bitmap.astype(bool), 1)
        while True:
            changed = False
            for step in (0, 1):
                out = img.copy()
                if _thin_pass_numba(img, out, step):
                    changed = True
                img = out
            if not changed:
                return img[1:-1, 1:-1].copy()


# ---------------------------------------------------------------------------
# Node-substitution cost matrix
# ---------------------------------------------------------------------------
#
# Node attributes are packed into dense arrays by the caller:
#   kind_*      int8 [n]        0 = point node, 1 = line node
#   num_val_g   float64 [n, A]  numeric value on the test side
#   num_lo_c/num_hi_c [m, A]    numeric bounds on the concept side
#   num_mask_*  bool [*, A]     attribute present
#   num_w       float64 [A]     per-attribute weight
#   cat_*       int64 [*, K]    categorical label codes, -1 = absent
#   cat_w       float64 [K]
#
# Cost per pair: infinity for point/line mismatch; otherwise the sum over
# numeric attributes (0 inside the bounds, weighted distance to the nearest
# bound outside, weighted presence penalty when one-sided) plus categorical
# terms (0 on match, infinity on mismatch, presence penalty one-sided).


def cost_matrix_numpy(
    kind_g,
    kind_c,
    num_val_g,
    num_mask_g,
    num_lo_c,
    num_hi_c,
    num_mask_c,
    num_w,
    cat_g,
    cat_c,
    cat_w,
    presence_penalty,
    infinity,
):
    n = kind_g.shape[0]
    m = kind_c.shape[0]
    out = np.zeros((n, m), dtype=np.float64)
    for a in range(num_w.shape[0]):
        vg = num_val_g[:, a][:, None]
        mg = num_mask_g[:, a][:, None]
        lo = num_lo_c[:, a][None, :]
        hi = num_hi_c[:, a][None, :]
        mc = num_mask_c[:, a][None, :]
        dev = np.where(vg < lo, lo - vg, np.where(vg > hi, vg - hi, 0.0))
        both = mg & mc
        one = mg ^ mc
        out += np.where(both, num_w[a] * dev, np.where(one, num_w[a] * presence_penalty, 0.0))
    for k in range(cat_w.shape[0]):
        cg = cat_g[:, k][:, None]
        cc = cat_c[:, k][None, :]
        both = (cg >= 0) & (cc >= 0)
        out += np.where(both & (cg != cc), infinity, 0.0)
        out += np.where((cg >= 0) ^ (cc >= 0), cat_w[k] * presence_penalty, 0.0)
    mism = kind_g[:, None] != kind_c[None, :]
    return np.where(mism, infinity, out)


if USING_NUMBA:

    @numba.njit(cache=True)
    def _cost_matrix_core(  # pragma: no cover - jitted
        kind_g,
        kind_c,
        num_val_g,
        num_mask_g,
        num_lo_c,
        num_hi_c,
        num_mask_c,
        num_w,
        cat_g,
        cat_c,
        cat_w,
        presence_penalty,
        infinity,
    ):
        n = kind_g.shape[0]
        m = kind_c.shape[0]
        na = num_w.shape[0]
        nk = cat_w.shape[0]
        out = np.zeros((n, m), dtype=np.float64)
        for i in range(n):
            for j in range(m):
                if kind_g[i] != kind_c[j]:
                    out[i, j] = infinity
                    continue
                total = 0.0
                for a in range(na):
                    mg = num_mask_g[i, a]
                    mc = num_mask_c[j, a]
                    if mg and mc:
                        v = num_val_g[i, a]
                        lo = num_lo_c[j, a]
                        hi = num_hi_c[j, a]
                        if v < lo:
                            dev = lo - v
                        elif v > hi:
                            dev = v - hi
                        else:
                            dev = 0.0
                        total = total + num_w[a] * dev
                    elif mg or mc:
                        total = total + num_w[a] * presence_penalty
                for k in range(nk):
                    cg = cat_g[i, k]
                    cc = cat_c[j, k]
                    if cg >= 0 and cc >= 0:
                        if cg != cc:
                            total = total + infinity
                    elif cg >= 0 or cc >= 0:
                        total = total + cat_w[k] * presence_penalty
                out[i, j] = total
        return out

    def cost_matrix_numba(
        kind_g,
        kind_c,
        num_val_g,
        num_mask_g,
        num_lo_c,
        num_hi_c,
        num_mask_c,
        num_w,
        cat_g,
        cat_c,
        cat_w,
        presence_penalty,
        infinity,
    ):
        return _cost_matrix_core(
            kind_g,
            kind_c,
            num_val_g,
            num_mask_g,
            num_lo_c,
            num_hi_c,
            num_mask_c,
            num_w,
            cat_g,
            cat_c,
            cat_w,
            float(presence_penalty),
            float(infinity),
        )


if USING_NUMBA:
    thin = thin_numba
    cost_matrix = cost_matrix_numba
else:
    thin = thin_numpy
    cost_matrix = cost_matrix_numpy
