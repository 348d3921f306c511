"""Dense float64 tensor kernels: 2-D convolution, matmul, max pooling.

All values are numpy float64 arrays in row-major layout. Convolution is
cross-correlation (no kernel flip) with stride fixed to 1. Each operation
reduces through a single fixed sequence of vectorized accumulations, so
repeated runs on one platform are bit-identical.
"""

from __future__ import annotations

from enum import Enum

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DimensionError


class ConvMode(Enum):
    VALID = "valid"
    SAME = "same"


def as_f64(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def _pad_amounts(m: int, n: int, mode: ConvMode) -> tuple[int, int, int, int]:
    """SAME-mode zero-pad per side; the smaller pad leads."""
    if mode is ConvMode.VALID:
        return 0, 0, 0, 0
    pt = (m - 1) // 2
    pb = (m - 1) - pt
    pl = (n - 1) // 2
    pr = (n - 1) - pl
    return pt, pb, pl, pr


def _pad_same(x: np.ndarray, m: int, n: int, mode: ConvMode) -> np.ndarray:
    pt, pb, pl, pr = _pad_amounts(m, n, mode)
    if pt == pb == pl == pr == 0:
        return x
    pads = [(0, 0)] * (x.ndim - 2) + [(pt, pb), (pl, pr)]
    return np.pad(x, pads)


def _patches(xpad: np.ndarray, m: int, n: int) -> np.ndarray:
    """(B, c, hp, wp) -> (B, h', w', c*m*n) patch matrix, row-major patches."""
    win = sliding_window_view(xpad, (m, n), axis=(2, 3))  # (B, c, h', w', m, n)
    b, c, hh, ww = win.shape[:4]
    return np.ascontiguousarray(win.transpose(0, 2, 3, 1, 4, 5)).reshape(b, hh, ww, c * m * n)


def conv_forward(x: np.ndarray, kernels: np.ndarray, mode: ConvMode) -> np.ndarray:
    """Batched multi-channel cross-correlation.

    x: (B, c, h, w), kernels: (t, c, m, n) -> (B, t, h', w').
    """
    x = as_f64(x)
    kernels = as_f64(kernels)
    if x.ndim != 4 or kernels.ndim != 4:
        raise DimensionError("conv expects (B,c,h,w) input and (t,c,m,n) kernels",
                             x.shape, kernels.shape)
    b, c, h, w = x.shape
    t, ck, m, n = kernels.shape
    if ck != c:
        raise DimensionError("kernel channel count does not match input", x.shape, kernels.shape)
    if mode is ConvMode.VALID and (m > h or n > w):
        raise DimensionError("kernel larger than input in VALID mode", x.shape, kernels.shape)
    xpad = _pad_same(x, m, n, mode)
    p = _patches(xpad, m, n)  # (B, h', w', c*m*n)
    out = p @ kernels.reshape(t, c * m * n).T  # (B, h', w', t)
    return np.ascontiguousarray(out.transpose(0, 3, 1, 2))


def conv_kernel_grad(x: np.ndarray, upstream: np.ndarray, kernel_shape, mode: ConvMode) -> np.ndarray:
    """Gradient of sum(upstream * conv_forward(x, K)) with respect to K."""
    t, c, m, n = kernel_shape
    xpad = _pad_same(as_f64(x), m, n, mode)
    p = _patches(xpad, m, n)  # (B, h', w', c*m*n)
    b, hh, ww, _ = p.shape
    g = upstream.transpose(0, 2, 3, 1).reshape(b * hh * ww, t)  # (B*h'*w', t)
    return (g.T @ p.reshape(b * hh * ww, c * m * n)).reshape(t, c, m, n)


def conv_input_grad(upstream: np.ndarray, kernels: np.ndarray, input_shape, mode: ConvMode) -> np.ndarray:
    """Gradient of sum(upstream * conv_forward(x, K)) with respect to x."""
    b, c, h, w = input_shape
    t, _, m, n = kernels.shape
    pt, pb, pl, pr = _pad_amounts(m, n, mode)
    hh, ww = upstream.shape[2], upstream.shape[3]
    g = upstream.transpose(0, 2, 3, 1).reshape(b * hh * ww, t)
    cols = (g @ kernels.reshape(t, c * m * n)).reshape(b, hh, ww, c, m, n)
    gx = np.zeros((b, c, h + pt + pb, w + pl + pr))
    for i in range(m):
        for j in range(n):
            gx[:, :, i:i + hh, j:j + ww] += cols[:, :, :, :, i, j].transpose(0, 3, 1, 2)
    if pt or pb or pl or pr:
        gx = gx[:, :, pt:pt + h, pl:pl + w]
    return np.ascontiguousarray(gx)


def conv2d(input: np.ndarray, kernel: np.ndarray, mode: ConvMode = ConvMode.VALID) -> np.ndarray:
    """Single-plane cross-correlation: (h, w) * (m, n) -> (h', w')."""
    x = as_f64(input)
    k = as_f64(kernel)
    if x.ndim != 2 or k.ndim != 2:
        raise DimensionError("conv2d expects 2-D input and kernel", x.shape, k.shape)
    return conv_forward(x[None, None], k[None, None], mode)[0, 0]


def conv2d_multi(input: np.ndarray, kernels: np.ndarray, mode: ConvMode = ConvMode.VALID) -> np.ndarray:
    """Multi-channel convolution: (c, h, w) * (t, c, m, n) -> (t, h', w').

    Output map l sums the per-channel correlations with kernel slice l.
    """
    x = as_f64(input)
    k = as_f64(kernels)
    if x.ndim != 3 or k.ndim != 4:
        raise DimensionError("conv2d_multi expects (c,h,w) input and (t,c,m,n) kernels",
                             x.shape, k.shape)
    return conv_forward(x[None], k, mode)[0]


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product (p, q) @ (q, r) with an inner-dimension check."""
    a = as_f64(a)
    b = as_f64(b)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError("matmul expects 2-D operands", a.shape, b.shape)
    if a.shape[1] != b.shape[0]:
        raise DimensionError("matmul inner dimensions differ", a.shape, b.shape)
    return a @ b


def maxpool_forward(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """2x2/stride-2 max pool over (..., h, w); h and w must be even.

    Returns (pooled, idx) where idx holds 0..3, the row-major position of
    the max inside each window; ties take the first such position.
    """
    x = as_f64(x)
    h, w = x.shape[-2], x.shape[-1]
    if h % 2 or w % 2:
        raise DimensionError("max pool needs even spatial extents", x.shape)
    lead = x.shape[:-2]
    win = x.reshape(*lead, h // 2, 2, w // 2, 2)
    order = tuple(range(len(lead))) + (len(lead), len(lead) + 2, len(lead) + 1, len(lead) + 3)
    win = win.transpose(order).reshape(*lead, h // 2, w // 2, 4)
    idx = win.argmax(axis=-1)
    pooled = np.take_along_axis(win, idx[..., None], axis=-1)[..., 0]
    return pooled, idx.astype(np.int64)


def maxpool_backward(upstream: np.ndarray, idx: np.ndarray, input_shape) -> np.ndarray:
    """Route upstream gradients back to the argmax positions."""
    h, w = input_shape[-2], input_shape[-1]
    lead = input_shape[:-2]
    gx = np.zeros((*lead, h // 2, w // 2, 2, 2))
    flat = gx.reshape(*lead, h // 2, w // 2, 4)
    np.put_along_axis(flat, idx[..., None], upstream[..., None], axis=-1)
    order = tuple(range(len(lead))) + (len(lead), len(lead) + 2, len(lead) + 1, len(lead) + 3)
    return flat.reshape(*lead, h // 2, w // 2, 2, 2).transpose(order).reshape(input_shape)


def max_pool2d(input: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """2x2/stride-2 max pool of a (c, h, w) stack; see maxpool_forward."""
    x = as_f64(input)
    if x.ndim != 3:
        raise DimensionError("max_pool2d expects (c,h,w)", x.shape)
    return maxpool_forward(x)
