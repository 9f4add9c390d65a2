"""Hot inner loops, JIT-compiled.

Every kernel is written so each output pixel is produced by one sequential
accumulation; row-parallel execution is therefore bit-identical to the
sequential definition regardless of thread count.
"""

from __future__ import annotations

import numpy as np
from numba import config as _numba_config
from numba import njit, prange

_numba_config.THREADING_LAYER = "workqueue"

F32 = np.float32


def gaussian_kernel_1d(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps with radius ceil(3*sigma)."""
    radius = int(np.ceil(3.0 * sigma))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    return (k / k.sum()).astype(np.float32)


@njit(cache=True, parallel=True)
def _sep_pass_h(src, dst, taps):
    h, w = src.shape
    radius = taps.shape[0] // 2
    for y in prange(h):
        for x in range(w):
            acc = F32(0.0)
            for t in range(taps.shape[0]):
                xx = x + t - radius
                if xx < 0:
                    xx = 0
                elif xx >= w:
                    xx = w - 1
                acc += taps[t] * src[y, xx]
            dst[y, x] = acc


@njit(cache=True, parallel=True)
def _sep_pass_v(src, dst, taps):
    h, w = src.shape
    radius = taps.shape[0] // 2
    for y in prange(h):
        for x in range(w):
            acc = F32(0.0)
            for t in range(taps.shape[0]):
                yy = y + t - radius
                if yy < 0:
                    yy = 0
                elif yy >= h:
                    yy = h - 1
                acc += taps[t] * src[yy, x]
            dst[y, x] = acc


def gaussian_blur_f32(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Separable clamp-to-edge Gaussian on a float32 plane."""
    taps = gaussian_kernel_1d(sigma)
    src = np.ascontiguousarray(plane, dtype=np.float32)
    tmp = np.empty_like(src)
    out = np.empty_like(src)
    _sep_pass_h(src, tmp, taps)
    _sep_pass_v(tmp, out, taps)
    return out


@njit(cache=True, parallel=True)
def _sobel_mag(src, dst):
    h, w = src.shape
    for y in prange(h):
        for x in range(w):
            y0 = y - 1 if y > 0 else 0
            y1 = y + 1 if y < h - 1 else h - 1
            x0 = x - 1 if x > 0 else 0
            x1 = x + 1 if x < w - 1 else w - 1
            gx = (src[y0, x1] + F32(2.0) * src[y, x1] + src[y1, x1]
                  - src[y0, x0] - F32(2.0) * src[y, x0] - src[y1, x0])
            gy = (src[y1, x0] + F32(2.0) * src[y1, x] + src[y1, x1]
                  - src[y0, x0] - F32(2.0) * src[y0, x] - src[y0, x1])
            dst[y, x] = np.sqrt(gx * gx + gy * gy)


def sobel_magnitude_f32(plane: np.ndarray) -> np.ndarray:
    src = np.ascontiguousarray(plane, dtype=np.float32)
    dst = np.empty_like(src)
    _sobel_mag(src, dst)
    return dst


@njit(cache=True, parallel=True)
def _tvf_flux(u, px, py, eps2):
    h, w = u.shape
    for y in prange(h):
        for x in range(w):
            gx = u[y, x + 1] - u[y, x] if x < w - 1 else F32(0.0)
            gy = u[y + 1, x] - u[y, x] if y < h - 1 else F32(0.0)
            nrm = np.sqrt(gx * gx + gy * gy + eps2)
            px[y, x] = gx / nrm
            py[y, x] = gy / nrm


@njit(cache=True, parallel=True)
def _tvf_update(u, px, py, dt):
    h, w = u.shape
    for y in prange(h):
        for x in range(w):
            d = px[y, x] + py[y, x]
            if x > 0:
                d -= px[y, x - 1]
            if y > 0:
                d -= py[y - 1, x]
            u[y, x] += dt * d


def tvf_run_f32(plane: np.ndarray, iterations: int, dt: float, eps: float) -> np.ndarray:
    """Explicit total-variation flow with Neumann boundaries; returns float32."""
    u = np.ascontiguousarray(plane, dtype=np.float32).copy()
    px = np.empty_like(u)
    py = np.empty_like(u)
    eps2 = np.float32(eps * eps)
    dt32 = np.float32(dt)
    for _ in range(iterations):
        _tvf_flux(u, px, py, eps2)
        _tvf_update(u, px, py, dt32)
    return u


def total_variation(plane: np.ndarray) -> float:
    """Sum of forward-difference gradient magnitudes (matches the flow scheme)."""
    d = np.asarray(plane, dtype=np.float64)
    gx = np.zeros_like(d)
    gy = np.zeros_like(d)
    gx[:, :-1] = d[:, 1:] - d[:, :-1]
    gy[:-1, :] = d[1:, :] - d[:-1, :]
    return float(np.hypot(gx, gy).sum())


# tanh lookup for the magnitude weight; dense enough that interpolation error
# is far below the ETF output tolerance. The table spans more than the
# largest possible gradient-magnitude difference (hypot of two central
# differences of 8-bit data is < 361), so lookups never need clamping.
_TANH_RANGE = 368.0
_TANH_N = 16384
_TANH_LUT = np.tanh(np.linspace(-_TANH_RANGE, _TANH_RANGE, _TANH_N)).astype(np.float32)
_TANH_SCALE = np.float32((_TANH_N - 1) / (2.0 * _TANH_RANGE))


@njit(cache=True, inline="always")
def _tanh_lut(x, lut, scale):
    pos = (x + F32(_TANH_RANGE)) * scale
    i = int(pos)
    frac = pos - F32(i)
    return lut[i] * (F32(1.0) - frac) + lut[i + 1] * frac


@njit(cache=True, parallel=True)
def _etf_iterate(tx, ty, mag, ntx, nty, xr, radius, lut, scale):
    h, w = tx.shape
    for y in prange(h):
        y_int = radius <= y < h - radius
        for x in range(w):
            cx = tx[y, x]
            cy = ty[y, x]
            cm = mag[y, x]
            sx = F32(0.0)
            sy = F32(0.0)
            # sign-aligned direction weight: sign(dot) * |dot| is just dot
            if y_int and radius <= x < w - radius:
                for dy in range(-radius, radius + 1):
                    yy = y + dy
                    half = xr[dy + radius]
                    for xx in range(x - half, x + half + 1):
                        ox = tx[yy, xx]
                        oy = ty[yy, xx]
                        dot = cx * ox + cy * oy
                        wm = (F32(1.0) + _tanh_lut(mag[yy, xx] - cm, lut, scale)) * F32(0.5)
                        wgt = wm * dot
                        sx += wgt * ox
                        sy += wgt * oy
            else:
                for dy in range(-radius, radius + 1):
                    yy = y + dy
                    if yy < 0 or yy >= h:
                        continue
                    half = xr[dy + radius]
                    for xx in range(x - half, x + half + 1):
                        if xx < 0 or xx >= w:
                            continue
                        ox = tx[yy, xx]
                        oy = ty[yy, xx]
                        dot = cx * ox + cy * oy
                        wm = (F32(1.0) + _tanh_lut(mag[yy, xx] - cm, lut, scale)) * F32(0.5)
                        wgt = wm * dot
                        sx += wgt * ox
                        sy += wgt * oy
            nrm = np.sqrt(sx * sx + sy * sy)
            if nrm < F32(1e-12):
                ntx[y, x] = cx
                nty[y, x] = cy
            else:
                ntx[y, x] = sx / nrm
                nty[y, x] = sy / nrm


def disk_half_widths(radius: int) -> np.ndarray:
    """Per-row half widths of the pixel disk of the given radius."""
    dys = np.arange(-radius, radius + 1)
    return np.floor(np.sqrt(radius * radius - dys * dys + 1e-9)).astype(np.int64)


def etf_field(gx: np.ndarray, gy: np.ndarray, radius: int, iterations: int):
    """Smoothed unit tangent field from a gradient field.

    Tangents start as the gradient rotated 90 degrees; zero-gradient pixels
    default to (1, 0) so normalization is total. Each pass re-weights
    neighbors within the disk by magnitude difference and sign-aligned
    direction agreement, then renormalizes.
    """
    mag = np.hypot(gx, gy).astype(np.float32)
    tx = np.where(mag > 0, -gy, 1.0).astype(np.float32)
    ty = np.where(mag > 0, gx, 0.0).astype(np.float32)
    nz = mag > 0
    tx[nz] /= mag[nz]
    ty[nz] /= mag[nz]
    xr = disk_half_widths(radius)
    for _ in range(iterations):
        ntx = np.empty_like(tx)
        nty = np.empty_like(ty)
        _etf_iterate(tx, ty, mag, ntx, nty, xr, radius, _TANH_LUT, _TANH_SCALE)
        tx, ty = ntx, nty
    return tx, ty, mag


@njit(cache=True, inline="always")
def _bilinear_at(img, fy, fx):
    h, w = img.shape
    if fy < F32(0.0):
        fy = F32(0.0)
    elif fy > F32(h - 1):
        fy = F32(h - 1)
    if fx < F32(0.0):
        fx = F32(0.0)
    elif fx > F32(w - 1):
        fx = F32(w - 1)
    y0 = int(fy)
    x0 = int(fx)
    y1 = y0 + 1 if y0 < h - 1 else y0
    x1 = x0 + 1 if x0 < w - 1 else x0
    ay = fy - F32(y0)
    ax = fx - F32(x0)
    top = img[y0, x0] * (F32(1.0) - ax) + img[y0, x1] * ax
    bot = img[y1, x0] * (F32(1.0) - ax) + img[y1, x1] * ax
    return top * (F32(1.0) - ay) + bot * ay


@njit(cache=True, parallel=True)
def _lic(src, tx, ty, dst, half_len, weights):
    h, w = src.shape
    for y in prange(h):
        for x in range(w):
            acc = weights[0] * src[y, x]
            wsum = weights[0]
            for sgn in range(2):
                fy = F32(y)
                fx = F32(x)
                dirx = tx[y, x]
                diry = ty[y, x]
                if sgn == 1:
                    dirx = -dirx
                    diry = -diry
                for k in range(1, half_len + 1):
                    fy = fy + diry
                    fx = fx + dirx
                    if fy < F32(0.0) or fy > F32(h - 1) or fx < F32(0.0) or fx > F32(w - 1):
                        break
                    iy = int(fy + F32(0.5))
                    ix = int(fx + F32(0.5))
                    if iy > h - 1:
                        iy = h - 1
                    if ix > w - 1:
                        ix = w - 1
                    ndx = tx[iy, ix]
                    ndy = ty[iy, ix]
                    # keep marching the same way along the (orientation-free) field
                    if ndx * dirx + ndy * diry < F32(0.0):
                        ndx = -ndx
                        ndy = -ndy
                    dirx = ndx
                    diry = ndy
                    wgt = weights[k]
                    acc += wgt * _bilinear_at(src, fy, fx)
                    wsum += wgt
            dst[y, x] = acc / wsum


def lic_smooth_f32(plane: np.ndarray, tx: np.ndarray, ty: np.ndarray, half_len: int) -> np.ndarray:
    """1-D Gaussian smoothing along streamlines of a unit tangent field."""
    sigma = max(half_len / 2.0, 0.5)
    ks = np.exp(-(np.arange(half_len + 1, dtype=np.float64) ** 2) / (2 * sigma * sigma))
    weights = ks.astype(np.float32)
    src = np.ascontiguousarray(plane, dtype=np.float32)
    dst = np.empty_like(src)
    _lic(src, tx, ty, dst, half_len, weights)
    return dst


@njit(cache=True, parallel=True)
def _screen_alpha(cov, alpha, cell, cos_t, sin_t):
    """Dot coverage for one rotated halftone screen.

    cov is the box-prefiltered ink fraction in [0, 1]; the dot radius at a
    cell is cell*sqrt(coverage)/2, sampled at the cell center, rendered with
    a ~1px antialiased edge.
    """
    h, w = cov.shape
    for y in prange(h):
        for x in range(w):
            u = cos_t * F32(x) + sin_t * F32(y)
            v = -sin_t * F32(x) + cos_t * F32(y)
            ucen = (np.floor(u / cell) + F32(0.5)) * cell
            vcen = (np.floor(v / cell) + F32(0.5)) * cell
            cx = cos_t * ucen - sin_t * vcen
            cy = sin_t * ucen + cos_t * vcen
            iy = int(cy + F32(0.5))
            ix = int(cx + F32(0.5))
            if iy < 0:
                iy = 0
            elif iy >= h:
                iy = h - 1
            if ix < 0:
                ix = 0
            elif ix >= w:
                ix = w - 1
            c = cov[iy, ix]
            if c < F32(0.0):
                c = F32(0.0)
            r = cell * np.sqrt(c) * F32(0.5)
            du = u - ucen
            dv = v - vcen
            d = np.sqrt(du * du + dv * dv)
            a = r - d + F32(0.5)
            if a > r:  # sub-pixel dots fade out instead of inking the center
                a = r
            if a < F32(0.0):
                a = F32(0.0)
            elif a > F32(1.0):
                a = F32(1.0)
            alpha[y, x] = a


def screen_alpha(coverage: np.ndarray, cell: int, angle_deg: float) -> np.ndarray:
    theta = np.deg2rad(angle_deg)
    alpha = np.empty_like(coverage, dtype=np.float32)
    _screen_alpha(np.ascontiguousarray(coverage, np.float32), alpha,
                  np.float32(cell), np.float32(np.cos(theta)), np.float32(np.sin(theta)))
    return alpha


def box_prefilter(plane: np.ndarray, size: int) -> np.ndarray:
    """Mean over a size x size clamp-to-edge window (for screen sampling)."""
    d = np.asarray(plane, dtype=np.float64)
    h, w = d.shape
    r0 = size // 2
    r1 = size - 1 - r0
    yy = np.clip(np.arange(-r0, h + r1), 0, h - 1)
    xx = np.clip(np.arange(-r0, w + r1), 0, w - 1)
    padded = d[np.ix_(yy, xx)]
    cs = padded.cumsum(axis=0).cumsum(axis=1)
    cs = np.pad(cs, ((1, 0), (1, 0)))
    out = (cs[size:, size:] - cs[:-size, size:] - cs[size:, :-size] + cs[:-size, :-size])
    return (out / (size * size)).astype(np.float32)


def warm_up() -> None:
    """Compile the JIT kernels on a tiny input (first-call latency control)."""
    p = np.arange(64, dtype=np.float32).reshape(8, 8)
    gaussian_blur_f32(p, 1.0)
    sobel_magnitude_f32(p)
    tvf_run_f32(p, 2, 0.2, 0.255)
    gx, gy = np.gradient(p)
    tx, ty, _ = etf_field(gx, gy, 2, 1)
    lic_smooth_f32(p, tx, ty, 2)
    screen_alpha(np.full((8, 8), 0.5, np.float32), 4, 45.0)
