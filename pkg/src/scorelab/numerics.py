"""Deterministic numerical substrate: fixed-grid quadrature, central
differences, and keyed random streams.

Everything here is pure given its inputs, so results are reproducible and
safe to use from parallel experiment cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_NODES = 4097
DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class QuadratureSpec:
    """Fixed integration grid on [lower, upper] with `nodes` points."""

    lower: float
    upper: float
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise ValueError("quadrature bounds must be finite")
        if self.lower >= self.upper:
            raise ValueError(f"lower must be < upper, got [{self.lower}, {self.upper}]")
        if self.nodes < 16:
            raise ValueError(f"nodes must be >= 16, got {self.nodes}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lower, self.upper, self.nodes)


def _evaluate_on_grid(f, xs: np.ndarray) -> np.ndarray:
    try:
        ys = np.asarray(f(xs), dtype=float)
        if ys.shape != xs.shape:
            raise TypeError
    except Exception:
        # f only supports scalars
        ys = np.array([float(f(x)) for x in xs])
    bad = np.flatnonzero(~np.isfinite(ys))
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"integrand is not finite at node {i} (x={xs[i]!r}, f(x)={ys[i]!r})")
    return ys


def _simpson(ys: np.ndarray, h: float) -> float:
    # classic composite rule; requires an odd number of points
    return h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-2:2].sum())


def quad_integrate(f, spec: QuadratureSpec) -> float:
    """Composite-Simpson approximation of the integral of f over the spec grid.

    f may accept a scalar or a vector; vectorized evaluation is attempted
    first.  When the node count is even (odd interval count), the last
    interval is integrated with the cubic through the final four points, so
    polynomials of degree <= 3 stay exact for every node count.
    """
    xs = spec.grid()
    ys = _evaluate_on_grid(f, xs)
    h = (spec.upper - spec.lower) / (spec.nodes - 1)
    if spec.nodes % 2 == 1:
        return float(_simpson(ys, h))
    head = _simpson(ys[:-1], h)
    tail = h * (ys[-4] - 5.0 * ys[-3] + 19.0 * ys[-2] + 9.0 * ys[-1]) / 24.0
    return float(head + tail)


def finite_diff(f, x: float, h: float = DEFAULT_FD_STEP) -> float:
    """Central difference (f(x+h) - f(x-h)) / 2h.

    The default step balances truncation against round-off at double
    precision.  Used throughout the tests as the derivative oracle.
    """
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    hi = float(f(x + h))
    lo = float(f(x - h))
    if not (np.isfinite(hi) and np.isfinite(lo)):
        raise ValueError(f"function not finite at {x} +/- {h}")
    return (hi - lo) / (2.0 * h)


_U64_MASK = 2**64 - 1


@dataclass
class RngStream:
    """Counter-based random stream keyed by (seed, stream_id).

    Identical keys reproduce the identical sequence; distinct stream_ids give
    statistically independent streams, so experiment cells can derive their
    own stream without coordination.
    """

    seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        key = np.array(
            [self.seed & _U64_MASK, self.stream_id & _U64_MASK], dtype=np.uint64
        )
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self.generator.uniform(low, high, size)


def make_stream(seed: int, stream_id: int = 0) -> RngStream:
    """Build a reproducible stream for one experiment cell."""
    return RngStream(int(seed), int(stream_id))
