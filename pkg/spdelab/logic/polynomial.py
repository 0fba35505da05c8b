"""Real root isolation for univariate polynomials.

Coefficients are numpy power-series order (lowest degree first). Roots are
isolated with a Sturm sequence, so that every bracket holds exactly one
distinct root, and refined by bisection. Only the low degrees arising from
polynomial nonlinearities (``<= 2 beta + 2``) are expected here.
"""

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import optimize

XTOL = 1e-12
MAX_DEPTH = 200


def trim(c: np.ndarray, rtol: float = 1e-14) -> np.ndarray:
    """Drop trailing coefficients that are zero relative to the largest."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0:
        return np.zeros(1)
    return P.polytrim(c, tol=rtol * scale)


def degree(c: np.ndarray) -> int:
    c = trim(c)
    return len(c) - 1


def leading(c: np.ndarray) -> float:
    return float(trim(c)[-1])


def cauchy_bound(c: np.ndarray) -> float:
    """Every real root lies in ``[-R, R]`` with ``R = 1 + max|a_i / a_lead|``."""
    c = trim(c)
    if len(c) == 1:
        return 1.0
    return float(1 + np.max(np.abs(c[:-1])) / abs(c[-1]))


def sturm_sequence(c: np.ndarray) -> list[np.ndarray]:
    c = trim(c)
    seq = [c]
    if len(c) == 1:
        return seq
    seq.append(trim(P.polyder(c)))
    while len(seq[-1]) > 1:
        _, rem = P.polydiv(seq[-2], seq[-1])
        # exact division: the last entry is the gcd
        if np.max(np.abs(rem)) <= 1e-12 * np.max(np.abs(seq[-2])):
            break
        seq.append(-trim(rem))
    return seq


def sign_variations(seq: list[np.ndarray], x: float) -> int:
    values = np.array([P.polyval(x, s) for s in seq])
    signs = np.sign(values[values != 0])
    return int(np.sum(signs[1:] != signs[:-1]))


def isolate_roots(c: np.ndarray, lo: float, hi: float) -> list[tuple[float, float]]:
    """Brackets ``(a, b]`` inside ``(lo, hi]`` holding one distinct root each."""
    seq = sturm_sequence(c)
    stack = [(lo, hi, sign_variations(seq, lo), sign_variations(seq, hi), 0)]
    brackets = []
    while stack:
        a, b, va, vb, depth = stack.pop()
        count = va - vb
        if count <= 0:
            continue
        if count == 1 or depth >= MAX_DEPTH or b - a <= XTOL:
            brackets.append((a, b))
            continue
        mid = 0.5 * (a + b)
        vm = sign_variations(seq, mid)
        stack.append((mid, b, vm, vb, depth + 1))
        stack.append((a, mid, va, vm, depth + 1))
    return sorted(brackets)


def _narrow(seq: list[np.ndarray], a: float, b: float, xtol: float) -> float:
    """Shrink a one-root bracket by Sturm counts (no sign change needed)."""
    va = sign_variations(seq, a)
    for _ in range(MAX_DEPTH):
        if b - a <= xtol:
            break
        mid = 0.5 * (a + b)
        vm = sign_variations(seq, mid)
        if va - vm > 0:
            b = mid
        else:
            a, va = mid, vm
    return 0.5 * (a + b)


def real_roots(c: np.ndarray, lo: float, hi: float, xtol: float = XTOL) -> list[float]:
    """Distinct real roots of ``c`` in ``(lo, hi]``.

    Brackets with a sign change are refined by bisection; a bracket without
    one holds a root of even multiplicity and is narrowed by Sturm counts.
    """
    c = trim(c)
    if len(c) == 1:
        return []
    seq = sturm_sequence(c)
    roots = []
    for a, b in isolate_roots(c, lo, hi):
        fa, fb = P.polyval(a, c), P.polyval(b, c)
        if fb == 0:
            roots.append(b)
        elif fa * fb < 0:
            roots.append(optimize.bisect(P.polyval, a, b, args=(c,), xtol=xtol))
        else:
            roots.append(_narrow(seq, a, b, xtol))
    return roots


def maximize_halfline(c: np.ndarray) -> tuple[float, float]:
    """Maximum of a polynomial with negative leading coefficient on
    ``[0, inf)``: ``(argmax, max)``.

    Candidates are ``0`` and the critical points in ``(0, R]``, ``R`` the
    Cauchy bound of the derivative.
    """
    c = trim(c)
    if len(c) > 1 and c[-1] >= 0:
        raise ValueError("Polynomial is unbounded above on [0, inf)")
    candidates = [0.0]
    dc = trim(P.polyder(c)) if len(c) > 1 else np.zeros(1)
    if len(dc) > 1:
        # roots at 0 are already candidates
        while len(dc) > 1 and dc[0] == 0:
            dc = dc[1:]
        candidates.extend(r for r in real_roots(dc, 0.0, cauchy_bound(dc)) if r > 0)
    values = P.polyval(np.asarray(candidates), c)
    best = int(np.argmax(values))
    return float(candidates[best]), float(values[best])
