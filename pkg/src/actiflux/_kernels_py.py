"""Numpy implementations of the reconstruction kernels.

Used when the compiled ``_kernels`` extension is unavailable.  Both backends
share the signatures below; ``actiflux._core`` picks one at import time.
"""
import numpy as np


def _parabola(avg, left, right, xi):
    return (-3.0 * (2.0 * avg - left - right) * xi * xi + (right - left) * xi
            + (6.0 * avg - left - right) * 0.25)


def eval_interfaces_1d(avg_pad, pts_pad, offsets, depth):
    """Reconstruction sampled at ``x_{p} + offset * dx`` for every interface p.

    ``offsets`` lie in ``[-1, 1]``; a nonpositive offset uses the left cell,
    which is the tie-break at the interface itself.  Returns ``(K, m, n+1)``.
    """
    avg_pad = np.ascontiguousarray(avg_pad, dtype=float)
    pts_pad = np.ascontiguousarray(pts_pad, dtype=float)
    m = pts_pad.shape[0]
    n1 = pts_pad.shape[1] - 2 * depth
    out = np.empty((len(offsets), m, n1))
    for k, d in enumerate(offsets):
        d = float(d)
        if d == 0.0:
            out[k] = pts_pad[:, depth:depth + n1]
            continue
        if d < 0.0:
            c0, xi = depth - 1, d + 0.5
        else:
            c0, xi = depth, d - 0.5
        out[k] = _parabola(avg_pad[:, c0:c0 + n1], pts_pad[:, c0:c0 + n1],
                           pts_pad[:, c0 + 1:c0 + 1 + n1], xi)
    return out


def recon2d_block(avg_pad, nodes_pad, ev_pad, eh_pad, i0, j0, px, py, xi, eta):
    """Biparabolic reconstruction of the padded cells ``[i0:i0+px, j0:j0+py]``
    evaluated at the same local coordinate ``(xi, eta)`` in every cell."""
    A = avg_pad[i0:i0 + px, j0:j0 + py]
    W = ev_pad[i0:i0 + px, j0:j0 + py]
    E = ev_pad[i0 + 1:i0 + 1 + px, j0:j0 + py]
    S = eh_pad[i0:i0 + px, j0:j0 + py]
    N = eh_pad[i0:i0 + px, j0 + 1:j0 + 1 + py]
    SW = nodes_pad[i0:i0 + px, j0:j0 + py]
    SE = nodes_pad[i0 + 1:i0 + 1 + px, j0:j0 + py]
    NW = nodes_pad[i0:i0 + px, j0 + 1:j0 + 1 + py]
    NE = nodes_pad[i0 + 1:i0 + 1 + px, j0 + 1:j0 + 1 + py]
    w = recon2d_weights(xi, eta)
    return (w[0] * A + w[1] * W + w[2] * E + w[3] * S + w[4] * N
            + w[5] * SW + w[6] * SE + w[7] * NW + w[8] * NE)


def recon2d_weights(xi, eta):
    """Basis values multiplying (avg, W, E, S, N, SW, SE, NW, NE)."""
    bx = -1.0 + 4.0 * xi * xi
    by = -1.0 + 4.0 * eta * eta
    return (
        2.25 * bx * by,
        -0.25 * (-1.0 - 4.0 * xi + 12.0 * xi * xi) * by,
        -0.25 * (-1.0 + 4.0 * xi + 12.0 * xi * xi) * by,
        -0.25 * bx * (-1.0 - 4.0 * eta + 12.0 * eta * eta),
        -0.25 * bx * (-1.0 + 4.0 * eta + 12.0 * eta * eta),
        0.0625 * (-1.0 + 2.0 * xi) * (-1.0 + 2.0 * eta) * (-1.0 - 2.0 * eta + 2.0 * xi * (-1.0 + 6.0 * eta)),
        0.0625 * (1.0 + 2.0 * xi) * (-1.0 + 2.0 * eta) * (1.0 + 2.0 * eta + 2.0 * xi * (-1.0 + 6.0 * eta)),
        0.0625 * (-1.0 + 2.0 * xi) * (1.0 + 2.0 * eta) * (1.0 - 2.0 * eta + 2.0 * xi * (1.0 + 6.0 * eta)),
        0.0625 * (1.0 + 2.0 * xi) * (1.0 + 2.0 * eta) * (-1.0 + 2.0 * eta + 2.0 * xi * (1.0 + 6.0 * eta)),
    )
