"""Qualitative labels for concurrence time series and critical-parameter scans.

Labels
------
NONE  never rises above ``eps_zero`` over the horizon.
SD    sudden death: after entanglement first appears, it stays below
      ``eps_zero`` over at least one interval longer than ``delta_dead``.
DI    death for an instant only: zeros occur, but every below-threshold
      interval is no longer than ``delta_dead``.
AL    always living: after first generation the series never returns to zero.

"Zero" therefore means "below eps_zero", which is this artifact's
operational definition of an instant of death; the default threshold is
1e-6 with a dead-interval floor of 1e-3 of the horizon.  Sampled series
alone cannot resolve isolated zeros, so when an evolution callback is
supplied every local minimum of the sampled series is refined (golden
section) and interval boundaries are located by bisection to a resolution
of 1e-4 of the horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientHorizon, NoSwitch

EPS_ZERO_DEFAULT = 1e-6
DELTA_DEAD_FRACTION = 1e-3
REFINE_FRACTION = 1e-4
# Local minima above this value are never refined; every near-death dip seen
# in this model sits orders of magnitude below it.
REFINE_CANDIDATE_CEILING = 0.05

LABELS = ("NONE", "SD", "DI", "AL")

_GOLDEN = (np.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class DynamicsVerdict:
    """Outcome of classifying one concurrence time series."""

    label: str
    dead_intervals: tuple[tuple[float, float], ...] = ()
    first_generation_time: float | None = None
    zero_times: tuple[float, ...] = ()
    min_after_generation: float | None = None
    evidence: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def generated(self) -> bool:
        return self.first_generation_time is not None


@dataclass(frozen=True)
class ScanResult:
    """Bracketed verdict boundary along one scanned parameter."""

    parameter: str
    bracket: tuple[float, float]
    critical: float
    uncertainty: float
    probes: tuple[tuple[float, str], ...]


def estimate_period(times: np.ndarray, values: np.ndarray) -> float | None:
    """Period of the first autocorrelation recurrence peak, or None.

    Used only to gate the horizon check.  The initial decay of the
    autocorrelation is skipped and the first genuine local maximum after it
    is taken, so a beat riding on a fast carrier reports the carrier, not
    the beat.
    """
    values = np.asarray(values, dtype=float)
    x = values - values.mean()
    if np.abs(x).max() < 1e-12:
        return None
    ac = np.correlate(x, x, mode="full")[len(x) - 1:]
    ac = ac / ac[0]
    dt = float(times[1] - times[0])
    n = len(ac)
    i = 1
    while i < n - 1 and ac[i + 1] <= ac[i]:
        i += 1
    j = i + 1
    while j < n - 1:
        if ac[j] >= ac[j - 1] and ac[j] >= ac[j + 1] and ac[j] > 0.05:
            return j * dt
        j += 1
    return None


def _golden_min(fn, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of fn on [a, b] to abscissa tolerance tol."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while (b - a) > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
    xm = (a + b) / 2
    return xm, min(f1, f2, fn(xm))


def _bisect_crossing(fn, lo: float, hi: float, eps: float, tol: float,
                     below_at_hi: bool) -> float:
    """Abscissa where fn crosses eps between lo and hi.

    ``below_at_hi`` states which side is below threshold; the bracket is
    shrunk to width tol and the midpoint returned.
    """
    for _ in range(200):
        if (hi - lo) <= tol:
            break
        mid = (lo + hi) / 2
        if (fn(mid) < eps) == below_at_hi:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def classify(times, values, *, eps_zero: float = EPS_ZERO_DEFAULT,
             delta_dead: float | None = None, callback=None,
             horizon: float | None = None,
             check_horizon: bool = True) -> DynamicsVerdict:
    """Classify a sampled concurrence series into NONE / SD / DI / AL.

    Parameters
    ----------
    times, values
        Uniform sample grid (at least ~500 points for reliable results) and
        the concurrence samples on it.
    eps_zero, delta_dead
        Zero threshold and the dead-interval length separating an "instant"
        from sudden death.  ``delta_dead`` defaults to 1e-3 of the horizon.
    callback
        Optional scalar function C(t).  Required to resolve isolated zeros
        that fall between samples; without it classification degrades to
        sample-level detection.
    check_horizon
        Raise :class:`InsufficientHorizon` when the detected oscillation
        period exceeds one tenth of the horizon.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.ndim != 1 or times.shape != values.shape or times.size < 2:
        raise ValueError("need matching 1-d time and value arrays")
    span = horizon if horizon is not None else float(times[-1] - times[0])
    if delta_dead is None:
        delta_dead = DELTA_DEAD_FRACTION * span
    resolution = REFINE_FRACTION * span

    if check_horizon:
        period = estimate_period(times, values)
        # 5% slack absorbs the grid-resolution uncertainty of the peak location
        if period is not None and period > 1.05 * span / 10:
            raise InsufficientHorizon(
                f"detected period {period:.3g} exceeds a tenth of the horizon {span:.3g}"
            )

    if values.max() < eps_zero:
        return DynamicsVerdict("NONE", evidence=values)

    # first generation time, refined when it falls between samples
    gen_idx = int(np.argmax(values >= eps_zero))
    if gen_idx == 0:
        t_gen = float(times[0])
    elif callback is not None:
        t_gen = _bisect_crossing(callback, times[gen_idx - 1], times[gen_idx],
                                 eps_zero, resolution, below_at_hi=False)
    else:
        t_gen = float(times[gen_idx])

    dead: list[tuple[float, float]] = []
    zeros: list[float] = []

    # sample-level below-threshold runs after generation
    i = gen_idx
    n = times.size
    while i < n:
        if values[i] < eps_zero:
            j = i
            while j < n and values[j] < eps_zero:
                j += 1
            if callback is not None:
                left = (
                    _bisect_crossing(callback, times[i - 1], times[i], eps_zero,
                                     resolution, below_at_hi=True)
                    if i > gen_idx else float(times[i])
                )
                right = (
                    _bisect_crossing(callback, times[j - 1], times[j], eps_zero,
                                     resolution, below_at_hi=False)
                    if j < n else float(times[-1])
                )
            else:
                left = float(times[max(i - 1, 0)])
                right = float(times[min(j, n - 1)])
            dead.append((left, right))
            zeros.append((left + right) / 2)
            i = j
        else:
            i += 1

    # isolated zeros hiding between samples: refine local minima
    if callback is not None:
        vmax = values[gen_idx:].max()
        ceiling = min(REFINE_CANDIDATE_CEILING, 0.5 * vmax)
        for i in range(max(gen_idx, 1), n - 1):
            v = values[i]
            if v < eps_zero or v > ceiling:
                continue
            if not (v <= values[i - 1] and v <= values[i + 1]):
                continue
            if any(lo <= times[i] <= hi for lo, hi in dead):
                continue
            # deep refinement so a quadratic touch of zero is not missed
            t_star, v_star = _golden_min(callback, times[i - 1], times[i + 1],
                                         tol=1e-9 * span)
            if v_star < eps_zero:
                left = _bisect_crossing(callback, times[i - 1], t_star, eps_zero,
                                        resolution, below_at_hi=True)
                right = _bisect_crossing(callback, t_star, times[i + 1], eps_zero,
                                         resolution, below_at_hi=False)
                dead.append((left, right))
                zeros.append(t_star)

    dead = _merge_intervals(dead)
    zeros = tuple(sorted(zeros))
    min_after = float(values[gen_idx:].min())

    if not dead:
        label = "AL"
    elif max(hi - lo for lo, hi in dead) > delta_dead:
        label = "SD"
    else:
        label = "DI"
    return DynamicsVerdict(
        label,
        dead_intervals=tuple(dead),
        first_generation_time=t_gen,
        zero_times=zeros,
        min_after_generation=min_after,
        evidence=values,
    )


def _merge_intervals(intervals):
    if not intervals:
        return []
    intervals = sorted(intervals)
    merged = [list(intervals[0])]
    for lo, hi in intervals[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [tuple(m) for m in merged]


def scan_critical(evaluate, lo: float, hi: float, *, tol: float,
                  parameter: str = "x",
                  switch=lambda verdict: verdict.label == "SD") -> ScanResult:
    """Bisect the boundary where the verdict switches along one parameter.

    ``evaluate`` maps a parameter value to a :class:`DynamicsVerdict`;
    ``switch`` extracts the boolean whose flip is being located (default:
    whether the verdict is SD).  Raises :class:`NoSwitch` when both
    endpoints agree.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    probes: list[tuple[float, str]] = []

    def probe(x: float) -> bool:
        verdict = evaluate(x)
        probes.append((x, verdict.label))
        return bool(switch(verdict))

    lo_state = probe(lo)
    hi_state = probe(hi)
    if lo_state == hi_state:
        raise NoSwitch(
            f"verdict does not switch over [{lo}, {hi}] "
            f"({probes[0][1]} at both endpoints)"
        )
    a, b = lo, hi
    while (b - a) > tol:
        mid = (a + b) / 2
        if probe(mid) == lo_state:
            a = mid
        else:
            b = mid
    return ScanResult(
        parameter=parameter,
        bracket=(a, b),
        critical=(a + b) / 2,
        uncertainty=(b - a) / 2,
        probes=tuple(probes),
    )
