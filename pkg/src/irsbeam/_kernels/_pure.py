"""Numpy reference implementations of the hot inner loops.

Used when the compiled extension is unavailable (or forced via
IRSBEAM_BACKEND=python). Semantics match irsbeam._kernels._core; results
agree to floating-point reordering.
"""

import numpy as np


def sweep_unit_rows(R, Y, S):
    """One in-place Gauss-Seidel pass of row-wise maximization of tr(Y^H R Y).

    Rows of Y stay unit norm. S must equal R @ Y on entry and is updated
    incrementally as rows change (callers refresh it between sweeps to keep
    rounding error bounded). Each row update is the exact maximizer of the
    objective in that row, so the objective never decreases. Returns the
    largest row movement (2-norm).
    """
    n = Y.shape[0]
    max_move = 0.0
    for i in range(n):
        g = S[i] - R[i, i].real * Y[i]
        ng = np.linalg.norm(g)
        if ng <= 0.0:
            continue  # flat direction: keep the current row
        new = g / ng
        delta = new - Y[i]
        move = float(np.linalg.norm(delta))
        if move > max_move:
            max_move = move
        S += np.outer(R[:, i], delta)
        Y[i] = new
    return max_move


def best_unit_modulus(L, raw, R):
    """Best entrywise unit-modulus projection of L @ r over the rows of raw.

    Candidates are scanned in row order; ties keep the first maximum.
    Returns (best objective Re(v^H R v), best row index, best v).
    """
    count = raw.shape[0]
    n = L.shape[0]
    best = -np.inf
    best_idx = -1
    best_v = None
    chunk = max(1, (1 << 20) // max(n, 1))
    for lo in range(0, count, chunk):
        W = raw[lo:lo + chunk] @ L.T
        mags = np.abs(W)
        V = np.where(mags > 0.0, W / np.where(mags > 0.0, mags, 1.0), 1.0 + 0.0j)
        objs = np.einsum("ci,ci->c", V.conj(), V @ R.T).real
        k = int(np.argmax(objs))
        if objs[k] > best:
            best = float(objs[k])
            best_idx = lo + k
            best_v = V[k].copy()
    return best, best_idx, best_v


def phase_grid_scan(Phi, hd_row, points):
    """Exhaustive scan of the uniform per-element phase grid {2*pi*k/points}.

    Maximizes ||v^H Phi + hd_row||^2 over v with v_n = e^{j*2*pi*k_n/points}.
    Returns (best gain, flat C-order index over (k_1, ..., k_N)); ties keep
    the first maximum in scan order. Supports N = Phi.shape[0] in 0..3.
    """
    n_elts = Phi.shape[0]
    if n_elts == 0:
        return float(np.vdot(hd_row, hd_row).real), 0
    if n_elts > 3:
        raise ValueError("grid scan supports at most 3 elements")
    w = np.exp(-2j * np.pi * np.arange(points) / points)  # conj(v_n) factors
    terms = [np.multiply.outer(w, Phi[i]) for i in range(n_elts)]
    base = np.asarray(hd_row)
    if n_elts == 1:
        comp = terms[0] + base
        gains = np.einsum("km,km->k", comp.conj(), comp).real
        k = int(np.argmax(gains))
        return float(gains[k]), k
    if n_elts == 2:
        best = -np.inf
        best_flat = -1
        for k1 in range(points):
            comp = terms[1] + (base + terms[0][k1])
            gains = np.einsum("km,km->k", comp.conj(), comp).real
            k2 = int(np.argmax(gains))
            if gains[k2] > best:
                best = float(gains[k2])
                best_flat = k1 * points + k2
        return best, best_flat
    best = -np.inf
    best_flat = -1
    for k1 in range(points):
        comp = (terms[1][:, None, :] + terms[2][None, :, :]) + (base + terms[0][k1])
        gains = np.einsum("kjm,kjm->kj", comp.conj(), comp).real
        flat = int(np.argmax(gains))
        if gains.flat[flat] > best:
            best = float(gains.flat[flat])
            best_flat = k1 * points * points + flat
    return best, best_flat
