"""Synthetic contour-digit rendering.

Draws 28x28 grayscale digit-like glyphs (classes 1, 2, 3, 6, 7, 9) from
jittered stroke skeletons: control points wobble per sample, the whole
glyph gets a small random rotation/scale/shift, and stroke thickness
varies.  Classes 1 and 2 come in two writing styles each so a library can
hold separate concepts per style.  Everything is driven by explicit seeds,
so a dataset is a pure function of (classes, count, seed).
"""

from __future__ import annotations

import numpy as np

SIZE = 28
CLASSES = ("1", "2", "3", "6", "7", "9")


def _catmull_rom(points, samples_per_seg: int = 24) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 3:
        t = np.linspace(0.0, 1.0, samples_per_seg)[:, None]
        return pts[0] * (1 - t) + pts[-1] * t
    padded = np.vstack([pts[0], pts, pts[-1]])
    out = []
    for i in range(len(pts) - 1):
        p0, p1, p2, p3 = padded[i], padded[i + 1], padded[i + 2], padded[i + 3]
        for t in np.linspace(0.0, 1.0, samples_per_seg, endpoint=False):
            t2, t3 = t * t, t * t * t
            out.append(
                0.5
                * (
                    2 * p1
                    + (-p0 + p2) * t
                    + (2 * p0 - 5 * p1 + 4 * p2 - p3) * t2
                    + (-p0 + 3 * p1 - 3 * p2 + p3) * t3
                )
            )
    out.append(pts[-1])
    return np.array(out)


def _polyline(points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    out = []
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(2, int(np.hypot(*(b - a)) * 30))
        for t in np.linspace(0.0, 1.0, n, endpoint=False):
            out.append(a * (1 - t) + b * t)
    out.append(pts[-1])
    return np.array(out)


def _jitter(points, rng, amount: float):
    pts = np.asarray(points, dtype=np.float64)
    return pts + rng.uniform(-amount, amount, size=pts.shape)


def _strokes_for(cls: str, style: int, rng) -> list[np.ndarray]:
    """Unit-square (x right, y down) stroke paths for one glyph instance."""
    j = lambda pts, a=0.035: _jitter(pts, rng, a)
    if cls == "1":
        # monotone slants: the stroke ends sit at opposite x extremes of the
        # glyph, which keeps their normalized positions stable under the
        # pixel grid
        slant = rng.uniform(0.05, 0.09) if style == 0 else rng.uniform(0.12, 0.18)
        x = 0.50 + rng.uniform(-0.03, 0.03)
        return [_catmull_rom([(x + slant, 0.06), (x, 0.50), (x - slant, 0.94)])]
    if cls == "7":
        bar_y = 0.12 + rng.uniform(-0.02, 0.02)
        elbow = (0.76 + rng.uniform(-0.03, 0.03), bar_y + rng.uniform(-0.01, 0.03))
        return [
            _polyline(j([(0.16, bar_y), elbow, (0.38, 0.92)], 0.02)),
        ]
    if cls == "2":
        # curve down to the bottom-left, then a straight baseline bar;
        # joining them end to end keeps the joint a corner, not a junction
        if style == 0:
            # one smooth swan-neck sweep; only the baseline elbow is sharp.
            # The descender bulge varies toward 3-like shapes.
            bulge = 0.50 + rng.uniform(-0.04, 0.08)
            curve = _catmull_rom(
                j(
                    [
                        (0.20, 0.34),
                        (0.38, 0.12),
                        (0.62, 0.14),
                        (bulge + 0.16, 0.34),
                        (bulge, 0.56),
                        (0.26, 0.82),
                    ],
                    0.03,
                )
            )
        else:
            curve = _catmull_rom(
                j(
                    [
                        (0.24, 0.28),
                        (0.44, 0.10),
                        (0.68, 0.14),
                        (0.70, 0.34),
                        (0.44, 0.60),
                        (0.22, 0.88),
                    ],
                    0.04,
                )
            )
        bar_end = j([(0.76, 0.87)], 0.03)[0]
        bar = _polyline([curve[-1], bar_end])
        return [np.vstack([curve, bar[1:]])]
    if cls == "3":
        # the middle waist wanders; shallow waists drift toward a 2-like
        # single bow, which is exactly where handwriting gets ambiguous
        waist = 0.46 + rng.uniform(-0.08, 0.04)
        return [
            _catmull_rom(
                j(
                    [
                        (0.26, 0.14),
                        (0.60, 0.08),
                        (0.72, 0.26),
                        (waist, 0.46),
                        (0.74, 0.64),
                        (0.60, 0.88),
                        (0.24, 0.86),
                    ],
                    0.03,
                )
            )
        ]
    if cls == "6":
        # the loop's tail aims well past the stem so the loop always closes
        return [
            _catmull_rom(
                j(
                    [
                        (0.68, 0.06),
                        (0.50, 0.22),
                        (0.36, 0.44),
                        (0.30, 0.66),
                        (0.42, 0.86),
                        (0.62, 0.80),
                        (0.66, 0.60),
                        (0.50, 0.46),
                        (0.30, 0.56),
                    ],
                    0.018,
                )
            )
        ]
    if cls == "9":
        # the loop closes just under its own start; the tail leaves downward
        # without re-crossing the bowl
        return [
            _catmull_rom(
                j(
                    [
                        (0.72, 0.36),
                        (0.52, 0.08),
                        (0.26, 0.20),
                        (0.28, 0.46),
                        (0.52, 0.54),
                        (0.715, 0.40),
                        (0.66, 0.66),
                        (0.54, 0.92),
                    ],
                    0.012,
                )
            )
        ]
    raise ValueError(f"unsupported class {cls!r}")


def render_digit(cls: str, rng, style: int = 0) -> np.ndarray:
    """One 28x28 uint8 glyph of the class, white strokes on black."""
    strokes = _strokes_for(cls, style, rng)
    theta = np.deg2rad(rng.uniform(-4.0, 4.0))
    scale = rng.uniform(0.88, 1.05)
    tx = rng.uniform(-1.0, 1.0)
    ty = rng.uniform(-1.0, 1.0)
    radius = rng.uniform(0.6, 1.1)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    canvas = np.zeros((SIZE, SIZE), dtype=np.uint8)
    for stroke in strokes:
        px = 5.0 + stroke[:, 0] * 18.0
        py = 3.5 + stroke[:, 1] * 21.0
        cx, cy = SIZE / 2.0, SIZE / 2.0
        xr = (px - cx) * scale
        yr = (py - cy) * scale
        xs = cos_t * xr - sin_t * yr + cx + tx
        ys = sin_t * xr + cos_t * yr + cy + ty
        _draw(canvas, xs, ys, radius)
    return canvas


def _draw(canvas: np.ndarray, xs: np.ndarray, ys: np.ndarray, radius: float) -> None:
    # densify so consecutive stamps are at most 0.3 px apart
    dense_x = [xs[0]]
    dense_y = [ys[0]]
    for x0, y0, x1, y1 in zip(xs[:-1], ys[:-1], xs[1:], ys[1:]):
        steps = max(1, int(np.hypot(x1 - x0, y1 - y0) / 0.3))
        for t in np.linspace(0.0, 1.0, steps + 1)[1:]:
            dense_x.append(x0 + t * (x1 - x0))
            dense_y.append(y0 + t * (y1 - y0))
    r_int = int(np.ceil(radius))
    for x, y in zip(dense_x, dense_y):
        x0, y0 = int(round(x)), int(round(y))
        for dy in range(-r_int, r_int + 1):
            for dx in range(-r_int, r_int + 1):
                xi, yi = x0 + dx, y0 + dy
                if 0 <= xi < SIZE and 0 <= yi < SIZE:
                    if (xi - x) ** 2 + (yi - y) ** 2 <= radius * radius:
                        canvas[yi, xi] = 255


def n_styles(cls: str) -> int:
    return 2 if cls in ("1", "2") else 1


def make_dataset(
    classes: tuple[str, ...] = CLASSES, per_class: int = 100, seed: int = 0, salt: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Render `per_class` samples of every class, deterministically.

    Samples of a class alternate between its writing styles.  `salt`
    separates train and test pools drawn with the same seed.
    """
    images = []
    labels = []
    for cls in classes:
        for i in range(per_class):
            rng = np.random.default_rng((seed, salt, int(cls), i))
            style = i % n_styles(cls)
            images.append(render_digit(cls, rng, style))
            labels.append(int(cls))
    return np.array(images, dtype=np.uint8), np.array(labels, dtype=np.uint8)
