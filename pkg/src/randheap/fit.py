"""Growth-model fits for (size, mean cost) points.

PowerLaw        y = a * x**b, least squares on (log x, log y); reports b.
LogLinear       y = c * log2(x), least squares through the origin; reports c.
LogSqOverLogLog y = c * log2(x)**2 / log2(log2(x)), through the origin.

The two single-coefficient models are fitted without an intercept because
the claim under test is the growth class itself; an intercept would let
any slowly growing curve fit any other. Their r2 is the uncentered one
(1 - SSres / sum y**2), the usual convention for regression through the
origin. PowerLaw keeps its intercept, so its r2 is the ordinary centered
one on the log-log axes.
"""

import enum
import math
import statistics
from typing import List, NamedTuple, Sequence, Tuple


class FitModel(enum.Enum):
    POWER = "power"
    LOGLINEAR = "loglinear"
    LOGSQ = "logsq"

    @classmethod
    def parse(cls, value) -> "FitModel":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class TooFewPoints(ValueError):
    pass


MIN_POINTS = 4


class FitResult(NamedTuple):
    model: FitModel
    coeff: float      # exponent for PowerLaw, coefficient otherwise
    r2: float
    points: int
    intercept: float = 0.0

    def format(self) -> str:
        name = "exponent" if self.model is FitModel.POWER else "coeff"
        return f"model={self.model.value} {name}={self.coeff:.6g} r2={self.r2:.6f} points={self.points}"


def loglog_term(x: float) -> float:
    lx = math.log2(x)
    llx = math.log2(lx)
    if llx <= 0:
        raise ValueError(f"log2(log2(x)) must be positive, got x={x}")
    return lx * lx / llx


def _r2(ys, preds, centered: bool) -> float:
    ss_res = sum((y - p) ** 2 for y, p in zip(ys, preds))
    if centered:
        m = statistics.fmean(ys)
        ss_tot = sum((y - m) ** 2 for y in ys)
    else:
        ss_tot = sum(y * y for y in ys)
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else 0.0
    return max(0.0, 1.0 - ss_res / ss_tot)


def fit(points: Sequence[Tuple[float, float]], model) -> FitResult:
    model = FitModel.parse(model)
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < MIN_POINTS:
        raise TooFewPoints(f"need at least {MIN_POINTS} points, got {len(pts)}")
    if model is FitModel.POWER:
        if any(x <= 0 or y <= 0 for x, y in pts):
            raise ValueError("power-law fit needs positive x and y")
        lx = [math.log(x) for x, _ in pts]
        ly = [math.log(y) for _, y in pts]
        if len(set(ly)) == 1:
            slope, icpt = 0.0, ly[0]
        else:
            slope, icpt = statistics.linear_regression(lx, ly)
        preds = [icpt + slope * v for v in lx]
        return FitResult(model, slope, _r2(ly, preds, True), len(pts), icpt)
    g = math.log2 if model is FitModel.LOGLINEAR else loglog_term
    gx = [g(x) for x, _ in pts]
    ys = [y for _, y in pts]
    c = sum(a * b for a, b in zip(gx, ys)) / sum(a * a for a in gx)
    return FitResult(model, c, _r2(ys, [c * v for v in gx], False), len(pts))


def fit_all(points) -> List[FitResult]:
    return [fit(points, m) for m in FitModel]


def strictly_increasing(vals: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(vals, vals[1:]))


def non_increasing(vals: Sequence[float]) -> bool:
    return all(b <= a for a, b in zip(vals, vals[1:]))
