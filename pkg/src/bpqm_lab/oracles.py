"""Ground-truth decoders and channel quantities, all in the codeword span.

The 2^k channel-output states are linearly independent with Gram matrix
G[x][y] = prod_{i: x_i != y_i} cos(theta_i), so both the square-root
measurement for block decoding and the binary Helstrom test for bit decoding
reduce to dense symmetric algebra on 2^k x 2^k matrices; nothing here touches
a 2^n-dimensional operator.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .codes import BinaryLinearCode

MAX_GRAM_K = 14
MAX_MAP_N = 20
EIG_REL_TOL = 1e-12


def gram_matrix(code: BinaryLinearCode, thetas) -> np.ndarray:
    """Pairwise overlaps of the channel outputs, codewords in message order."""
    thetas = np.asarray(thetas, dtype=float)
    cw = code.codewords().astype(np.float64)
    c = np.cos(thetas)
    zero = np.abs(c) < 1e-300
    logs = np.where(zero, 0.0, np.log(np.abs(np.where(zero, 1.0, c))))
    negs = (c < 0).astype(np.float64)

    def xor_weighted(weights):
        a = cw @ weights
        m = (cw * weights) @ cw.T
        return a[:, None] + a[None, :] - 2.0 * m

    logmag = xor_weighted(logs)
    parity = xor_weighted(negs)
    zcount = xor_weighted(zero.astype(np.float64))
    g = np.exp(logmag) * np.where(np.round(parity) % 2 == 1, -1.0, 1.0)
    g[np.round(zcount) > 0] = 0.0
    np.fill_diagonal(g, 1.0)
    return g


def _sqrt_psd(g: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(g)
    tol = EIG_REL_TOL * max(w.max(), 1.0)
    if w.min() < tol:
        cond = w.max() / max(w.min(), 1e-300)
        warnings.warn(
            f"Gram matrix numerically singular (condition number {cond:.3e}); "
            "proceeding with the pseudo square root", stacklevel=3)
    w = np.where(w > tol, w, 0.0)
    return (v * np.sqrt(w)) @ v.T


def pgm_success_from_gram(g: np.ndarray) -> float:
    """Square-root-measurement success for equiprobable pure states."""
    s = _sqrt_psd(g)
    return float(np.mean(np.diag(s) ** 2))


def pgm_block_success(code: BinaryLinearCode, thetas) -> float:
    """Optimal equal-prior block decoding success probability."""
    if code.k > MAX_GRAM_K:
        raise ValueError(f"k={code.k} exceeds Gram-oracle guard {MAX_GRAM_K}")
    return pgm_success_from_gram(gram_matrix(code, thetas))


def helstrom_success_from_gram(g: np.ndarray, bits) -> float:
    """Binary Helstrom success for the two equal-prior mixtures selected by
    ``bits`` (0/1 label per state)."""
    bits = np.asarray(bits)
    s = _sqrt_psd(g)
    half = len(bits) // 2
    if int(bits.sum()) != half:
        raise ValueError("bit labels must split the states evenly")
    s0 = s[:, bits == 0]
    s1 = s[:, bits == 1]
    diff = (s0 @ s0.T - s1 @ s1.T) / half
    eig = np.linalg.eigvalsh(diff)
    return 0.5 + 0.25 * float(np.abs(eig).sum())


def helstrom_bit_success(code: BinaryLinearCode, thetas, r: int) -> float:
    """Optimal single-bit decoding success probability for X_r."""
    if code.k > MAX_GRAM_K:
        raise ValueError(f"k={code.k} exceeds Gram-oracle guard {MAX_GRAM_K}")
    cw = code.codewords()
    return helstrom_success_from_gram(gram_matrix(code, thetas), cw[:, r - 1])


def classical_bsc_param(theta: float) -> float:
    """Crossover probability of the measure-first channel."""
    return (1.0 - math.sin(theta)) / 2.0


def _likelihoods(code: BinaryLinearCode, thetas) -> tuple[np.ndarray, np.ndarray]:
    """(2^n x 2^k) channel likelihood table and the codeword array."""
    if code.n > MAX_MAP_N:
        raise ValueError(f"n={code.n} exceeds MAP-oracle guard {MAX_MAP_N}")
    thetas = np.asarray(thetas, dtype=float)
    p = (1.0 - np.sin(thetas)) / 2.0
    cw = code.codewords().astype(np.float64)
    ys = ((np.arange(2 ** code.n)[:, None] >> np.arange(code.n - 1, -1, -1)) & 1).astype(np.float64)
    logp = np.log(np.maximum(p, 1e-300))
    logq = np.log(np.maximum(1.0 - p, 1e-300))
    w = logp - logq
    a = ys @ w
    b = cw @ w
    xor_w = a[:, None] + b[None, :] - 2.0 * (ys * w) @ cw.T
    return np.exp(xor_w + logq.sum()), cw


def classical_map_success(code: BinaryLinearCode, thetas, target) -> float:
    """Measure each output in |+>/|->, then exact MAP decoding on the BSCs.

    ``target`` is ("bit", r) or "block". Ties resolve to bit 0 / the
    lexicographically smallest codeword.
    """
    lik, cw = _likelihoods(code, thetas)
    n_cw = cw.shape[0]
    if target == "block":
        # candidate order: lexicographically smallest codeword wins ties
        as_int = cw @ (2.0 ** np.arange(code.n - 1, -1, -1))
        order = np.argsort(as_int, kind="stable")
        best = order[np.argmax(lik[:, order], axis=1)]
        correct = lik[np.arange(lik.shape[0])[:, None], np.arange(n_cw)[None, :]]
        hits = (best[:, None] == np.arange(n_cw)[None, :])
        return float((correct * hits).sum() / n_cw)
    kind, r = target
    if kind != "bit":
        raise ValueError("target must be ('bit', r) or 'block'")
    labels = cw[:, r - 1]
    m0 = lik[:, labels == 0].sum(axis=1)
    m1 = lik[:, labels == 1].sum(axis=1)
    est = (m1 > m0).astype(np.float64)  # tie -> 0
    match = (labels[None, :] == est[:, None])
    return float((lik * match).sum() / n_cw)


def _h2(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def capacities(theta: float) -> tuple[float, float]:
    """(Holevo capacity, capacity after per-qubit measurement)."""
    chi = _h2((1.0 + math.cos(theta)) / 2.0)
    c = 1.0 - _h2(classical_bsc_param(theta))
    return chi, c
