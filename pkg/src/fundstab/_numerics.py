"""Bracketed bisection used by the root and threshold searches."""


def bisect_root(func, lo, hi, tol=1e-12, max_iter=200):
    """Root of ``func`` on ``[lo, hi]`` given a sign change at the ends.

    Stops once ``|func(mid)| <= tol`` or the bracket stops shrinking.
    Returns ``None`` when the endpoints share a sign.
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        return None
    best, best_abs = (lo, abs(f_lo)) if abs(f_lo) < abs(f_hi) else (hi, abs(f_hi))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = func(mid)
        if abs(f_mid) < best_abs:
            best, best_abs = mid, abs(f_mid)
        if abs(f_mid) <= tol:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return best


def bisect_threshold(pred, lo, hi, resolution=1e-10, max_iter=200):
    """Smallest ``x`` in ``[lo, hi]`` with ``pred(x)`` true, for monotone ``pred``.

    ``pred`` must be false-then-true on the interval. Returns ``lo`` when it
    already holds there and ``None`` when it fails at ``hi``. The result is
    the upper end of the final bracket, so ``pred`` holds at it.
    """
    if pred(lo):
        return lo
    if not pred(hi):
        return None
    for _ in range(max_iter):
        if hi - lo <= resolution:
            break
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi
