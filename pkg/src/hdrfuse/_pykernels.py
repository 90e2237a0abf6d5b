"""Pure numpy implementations of the hot kernels.

These are the reference versions: ``_ckernels`` must agree with them to
rounding error. Every function takes and returns float64 arrays.
"""
import numpy as np

NAME = "python"


def box_mean(a, r):
    """Mean over a (2r+1) x (2r+1) window with edge-replicated borders."""
    a = np.asarray(a, dtype=np.float64)
    n = 2 * r + 1
    p = np.pad(a, r, mode="edge")
    c = np.cumsum(p, axis=0)
    c = np.vstack([np.zeros((1, c.shape[1])), c])
    rows = c[n:] - c[:-n]
    c = np.cumsum(rows, axis=1)
    c = np.hstack([np.zeros((c.shape[0], 1)), c])
    return (c[:, n:] - c[:, :-n]) / float(n * n)


def _bilinear_taps(n_in, n_out):
    # pixel-centre alignment, clamped at the borders
    pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    pos = np.clip(pos, 0.0, n_in - 1)
    i0 = np.floor(pos).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_in - 1)
    return i0, i1, pos - i0


def upsample_bilinear(a, out_h, out_w):
    a = np.asarray(a, dtype=np.float64)
    h, w = a.shape
    r0, r1, fr = _bilinear_taps(h, out_h)
    c0, c1, fc = _bilinear_taps(w, out_w)
    rows = a[r0] * (1.0 - fr)[:, None] + a[r1] * fr[:, None]
    return rows[:, c0] * (1.0 - fc) + rows[:, c1] * fc


def hist_kmeans(hist, centers, max_iter):
    """Lloyd iterations on a gray-level histogram.

    ``hist[g]`` is the pixel count at level g. Returns ``(labels, centers,
    counts)`` where ``labels[g]`` is the cluster of level g. Ties go to the
    lower cluster index. An empty cluster keeps its previous centre, except
    when every pixel has collapsed into one cluster: then one empty cluster is
    re-seeded at the occupied level farthest from that centre (lowest level
    on ties).
    """
    hist = np.asarray(hist, dtype=np.float64)
    centers = np.array(centers, dtype=np.float64)
    k = centers.size
    levels = np.arange(hist.size, dtype=np.float64)
    occupied = hist > 0
    labels = np.full(hist.size, -1, dtype=np.intp)
    counts = np.zeros(k)
    for _ in range(max_iter):
        # argmin returns the first minimum, i.e. the lower index on ties
        new = np.argmin(np.abs(levels[:, None] - centers[None, :]), axis=1)
        changed = not np.array_equal(new, labels)
        labels = new
        counts = np.bincount(labels, weights=hist, minlength=k)
        sums = np.bincount(labels, weights=hist * levels, minlength=k)
        nz = counts > 0
        centers[nz] = sums[nz] / counts[nz]
        if np.count_nonzero(nz) == 1:
            dist = np.where(occupied, np.abs(levels - centers[labels]), -1.0)
            g = int(np.argmax(dist))
            if dist[g] > 0:
                centers[np.argmin(nz)] = levels[g]
                centers.sort()
                changed = True
        if not changed:
            break
    return labels, centers, counts


def spectral_combine(fx, flh, flv, dh, dv, lam):
    num = fx + lam * (np.conj(dh) * flh + np.conj(dv) * flv)
    den = 1.0 + lam * (dh.real**2 + dh.imag**2 + dv.real**2 + dv.imag**2)
    return num / den


def saturation(r, g, b):
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    rho = (r + g + b) / 3.0
    return np.sqrt((r - rho) ** 2 + (g - rho) ** 2 + (b - rho) ** 2)
