"""Independent naive reference implementations for the filter blocks.

Everything here is written as straightforward per-pixel loops from the
mathematical definitions, deliberately sharing no code with the library's
optimized paths. The heaviest loops carry a JIT decorator purely so the
suite stays fast; the arithmetic remains plain scalar float64 except where
a comment says otherwise.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


def gaussian_taps(sigma: float) -> np.ndarray:
    radius = int(math.ceil(3.0 * sigma))
    k = np.array([math.exp(-(i * i) / (2.0 * sigma * sigma))
                  for i in range(-radius, radius + 1)], dtype=np.float64)
    return k / k.sum()


@njit(cache=True)
def _dense_conv2(src, k2d, out):
    h, w = src.shape
    r = k2d.shape[0] // 2
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in range(-r, r + 1):
                yy = min(max(y + dy, 0), h - 1)
                for dx in range(-r, r + 1):
                    xx = min(max(x + dx, 0), w - 1)
                    acc += k2d[dy + r, dx + r] * src[yy, xx]
            out[y, x] = acc
    return out


def gaussian_ref(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Dense 2-D convolution with the outer product of the 1-D taps."""
    k1 = gaussian_taps(sigma)
    k2d = np.outer(k1, k1)
    out = np.empty(plane.shape, np.float64)
    return _dense_conv2(plane.astype(np.float64), k2d, out)


def round_ref(value: float) -> int:
    return int(min(max(math.floor(value + 0.5), 0), 255))


def luma_ref(rgb: np.ndarray) -> np.ndarray:
    h, w, _ = rgb.shape
    out = np.empty((h, w), np.uint8)
    for y in range(h):
        for x in range(w):
            r, g, b = (float(v) for v in rgb[y, x])
            out[y, x] = round_ref(0.299 * r + 0.587 * g + 0.114 * b)
    return out


def gray_split_ref(rgb: np.ndarray):
    h, w, _ = rgb.shape
    luma = np.empty((h, w), np.uint8)
    u = np.empty((h, w), np.float64)
    v = np.empty((h, w), np.float64)
    for yy in range(h):
        for xx in range(w):
            r, g, b = (float(c) for c in rgb[yy, xx])
            y = 0.299 * r + 0.587 * g + 0.114 * b
            luma[yy, xx] = round_ref(y)
            u[yy, xx] = (b - y) / 1.772
            v[yy, xx] = (r - y) / 1.402
    return luma, u, v


def recombine_ref(luma: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    h, w = luma.shape
    out = np.empty((h, w, 3), np.uint8)
    for yy in range(h):
        for xx in range(w):
            y = float(luma[yy, xx])
            r = y + 1.402 * v[yy, xx]
            b = y + 1.772 * u[yy, xx]
            g = (y - 0.299 * r - 0.114 * b) / 0.587
            out[yy, xx] = (round_ref(r), round_ref(g), round_ref(b))
    return out


def sobel_ref(luma: np.ndarray) -> np.ndarray:
    h, w = luma.shape
    src = luma.astype(np.float64)
    out = np.empty((h, w), np.uint8)
    kx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]
    ky = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]]
    for y in range(h):
        for x in range(w):
            gx = gy = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    gx += kx[dy + 1][dx + 1] * src[yy, xx]
                    gy += ky[dy + 1][dx + 1] * src[yy, xx]
            out[y, x] = round_ref(math.hypot(gx, gy))
    return out


def xdog_ref(luma: np.ndarray, sigma: float, p: float) -> np.ndarray:
    g1 = gaussian_ref(luma, sigma)
    g2 = gaussian_ref(luma, 1.6 * sigma)
    h, w = luma.shape
    out = np.empty((h, w), np.uint8)
    for y in range(h):
        for x in range(w):
            out[y, x] = round_ref((1.0 + p) * g1[y, x] - p * g2[y, x])
    return out


def soft_threshold_ref(data: np.ndarray, phi: float, epsilon: float) -> np.ndarray:
    flat = data.reshape(-1)
    out = np.empty_like(flat)
    for i, value in enumerate(flat):
        out[i] = round_ref(255.0 * (1.0 + math.tanh(min(0.0, phi * (float(value) - epsilon)))))
    return out.reshape(data.shape)


def posterize_ref(data: np.ndarray, levels: int) -> np.ndarray:
    flat = data.reshape(-1)
    out = np.empty_like(flat)
    for i, value in enumerate(flat):
        q = math.floor(float(value) * (levels - 1) / 255.0 + 0.5)
        out[i] = round_ref(q * 255.0 / (levels - 1))
    return out.reshape(data.shape)


@njit(cache=True)
def _tvf_ref_iter(u, dt, eps2):
    h, w = u.shape
    px = np.zeros((h, w), np.float64)
    py = np.zeros((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            gx = u[y, x + 1] - u[y, x] if x < w - 1 else 0.0
            gy = u[y + 1, x] - u[y, x] if y < h - 1 else 0.0
            nrm = math.sqrt(gx * gx + gy * gy + eps2)
            px[y, x] = gx / nrm
            py[y, x] = gy / nrm
    nxt = np.empty((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            d = px[y, x] + py[y, x]
            if x > 0:
                d -= px[y, x - 1]
            if y > 0:
                d -= py[y - 1, x]
            nxt[y, x] = u[y, x] + dt * d
    return nxt


def tvf_ref(plane: np.ndarray, iterations: int, dt: float, eps: float) -> np.ndarray:
    u = plane.astype(np.float64)
    for _ in range(iterations):
        u = _tvf_ref_iter(u, dt, eps * eps)
    h, w = u.shape
    out = np.empty((h, w), np.uint8)
    for y in range(h):
        for x in range(w):
            out[y, x] = round_ref(u[y, x])
    return out


@njit(cache=True)
def _bilateral_ref(src, radius, sigma_s, sigma_r):
    h, w = src.shape
    out = np.empty((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            c = src[y, x]
            num = 0.0
            den = 0.0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    if dx * dx + dy * dy > radius * radius:
                        continue
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    v = src[yy, xx]
                    wgt = math.exp(-(dx * dx + dy * dy) / (2.0 * sigma_s * sigma_s)) \
                        * math.exp(-((v - c) ** 2) / (2.0 * sigma_r * sigma_r))
                    num += wgt * v
                    den += wgt
            out[y, x] = num / den
    return out


def detail_control_ref(img_data: np.ndarray, delta: float) -> np.ndarray:
    """Luma-domain detail scaling with a scalar disk bilateral base."""
    if img_data.shape[2] == 3:
        luma, u, v = gray_split_ref(img_data)
    else:
        luma = img_data[:, :, 0]
    base = _bilateral_ref(luma.astype(np.float64), 9, 3.0, 25.0)
    scale = 1.0 + delta / 100.0
    h, w = luma.shape
    new_luma = np.empty((h, w), np.uint8)
    for y in range(h):
        for x in range(w):
            new_luma[y, x] = round_ref(base[y, x] + scale * (float(luma[y, x]) - base[y, x]))
    if img_data.shape[2] == 1:
        return new_luma[:, :, np.newaxis]
    return recombine_ref(new_luma, u, v)


@njit(cache=True)
def _etf_iter_ref(tx, ty, mag, radius):
    h, w = tx.shape
    ntx = np.empty((h, w), np.float64)
    nty = np.empty((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            sx = 0.0
            sy = 0.0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    if dx * dx + dy * dy > radius * radius:
                        continue
                    yy = y + dy
                    xx = x + dx
                    if yy < 0 or yy >= h or xx < 0 or xx >= w:
                        continue
                    dot = tx[y, x] * tx[yy, xx] + ty[y, x] * ty[yy, xx]
                    wm = (1.0 + math.tanh(mag[yy, xx] - mag[y, x])) / 2.0
                    phi = 1.0 if dot >= 0.0 else -1.0
                    wgt = phi * abs(dot) * wm
                    sx += wgt * tx[yy, xx]
                    sy += wgt * ty[yy, xx]
            nrm = math.sqrt(sx * sx + sy * sy)
            if nrm < 1e-12:
                ntx[y, x] = tx[y, x]
                nty[y, x] = ty[y, x]
            else:
                ntx[y, x] = sx / nrm
                nty[y, x] = sy / nrm
    return ntx, nty


def etf_tangents_ref(luma: np.ndarray, radius: int, iterations: int):
    h, w = luma.shape
    src = luma.astype(np.float64)
    gx = np.zeros((h, w), np.float64)
    gy = np.zeros((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            if w >= 2:
                if x == 0:
                    gx[y, x] = src[y, 1] - src[y, 0]
                elif x == w - 1:
                    gx[y, x] = src[y, x] - src[y, x - 1]
                else:
                    gx[y, x] = (src[y, x + 1] - src[y, x - 1]) / 2.0
            if h >= 2:
                if y == 0:
                    gy[y, x] = src[1, x] - src[0, x]
                elif y == h - 1:
                    gy[y, x] = src[y, x] - src[y - 1, x]
                else:
                    gy[y, x] = (src[y + 1, x] - src[y - 1, x]) / 2.0
    mag = np.hypot(gx, gy)
    tx = np.where(mag > 0, -gy, 1.0)
    ty = np.where(mag > 0, gx, 0.0)
    tx = np.where(mag > 0, tx / np.where(mag > 0, mag, 1.0), tx)
    ty = np.where(mag > 0, ty / np.where(mag > 0, mag, 1.0), ty)
    for _ in range(iterations):
        tx, ty = _etf_iter_ref(tx, ty, mag, radius)
    return tx, ty, mag


@njit(cache=True)
def _lic_ref(src, tx, ty, half_len, weights):
    # positions/directions use float32 like the implementation so streamline
    # pixel decisions agree; the accumulated values stay float64
    h, w = src.shape
    out = np.empty((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            acc = weights[0] * src[y, x]
            wsum = weights[0]
            for sgn in range(2):
                fy = np.float32(y)
                fx = np.float32(x)
                dirx = np.float32(tx[y, x])
                diry = np.float32(ty[y, x])
                if sgn == 1:
                    dirx = -dirx
                    diry = -diry
                for k in range(1, half_len + 1):
                    fy = fy + diry
                    fx = fx + dirx
                    if fy < np.float32(0.0) or fy > np.float32(h - 1) \
                            or fx < np.float32(0.0) or fx > np.float32(w - 1):
                        break
                    iy = min(int(fy + np.float32(0.5)), h - 1)
                    ix = min(int(fx + np.float32(0.5)), w - 1)
                    ndx = np.float32(tx[iy, ix])
                    ndy = np.float32(ty[iy, ix])
                    if ndx * dirx + ndy * diry < np.float32(0.0):
                        ndx = -ndx
                        ndy = -ndy
                    dirx = ndx
                    diry = ndy
                    y0 = int(fy)
                    x0 = int(fx)
                    y1 = min(y0 + 1, h - 1)
                    x1 = min(x0 + 1, w - 1)
                    ay = float(fy) - y0
                    ax = float(fx) - x0
                    val = (src[y0, x0] * (1 - ax) + src[y0, x1] * ax) * (1 - ay) \
                        + (src[y1, x0] * (1 - ax) + src[y1, x1] * ax) * ay
                    acc += weights[k] * val
                    wsum += weights[k]
            out[y, x] = acc / wsum
    return out


def etf_ref(img_data: np.ndarray, radius: int, iterations: int) -> np.ndarray:
    if img_data.shape[2] == 3:
        luma = luma_ref(img_data)
    else:
        luma = img_data[:, :, 0]
    tx, ty, _ = etf_tangents_ref(luma, radius, iterations)
    sigma = max(radius / 2.0, 0.5)
    weights = np.array([math.exp(-(k * k) / (2 * sigma * sigma))
                        for k in range(radius + 1)], np.float64)
    out = np.empty(img_data.shape, np.uint8)
    for c in range(img_data.shape[2]):
        plane = _lic_ref(img_data[:, :, c].astype(np.float64), tx, ty, radius, weights)
        for y in range(plane.shape[0]):
            for x in range(plane.shape[1]):
                out[y, x, c] = round_ref(plane[y, x])
    return out
