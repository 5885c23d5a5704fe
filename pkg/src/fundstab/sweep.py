"""Parameter sweeps over the optimal funding problem and their CSV form."""

import csv
import io
import math
from dataclasses import dataclass, field, fields

from .exceptions import ConfigError
from .model import LiquidityParams
from .optimizer import FundingRates, OptimalFunding, solve_analytic

PARAMETERS = ("theta", "delta", "r_t", "r_e")
CSV_HEADER = (
    "theta", "delta", "r_t", "r_e", "t_opt", "e_opt", "s_opt", "z_opt", "r_opt",
    "regime", "equity_cap_warning",
)


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.name not in PARAMETERS:
            raise ConfigError("axis", f"unknown parameter {self.name!r}")
        for attr in ("start", "stop", "step"):
            value = float(getattr(self, attr))
            if not math.isfinite(value):
                raise ConfigError(f"{self.name}.{attr}", "must be finite")
            object.__setattr__(self, attr, value)
        if self.step <= 0:
            raise ConfigError(f"{self.name}.step", "must be positive")
        if self.stop < self.start:
            raise ConfigError(f"{self.name}.stop", "must not be below start")

    @classmethod
    def parse(cls, text):
        """Parse ``name:start:stop:step``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError("axis", f"expected name:start:stop:step, got {text!r}")
        name, *nums = parts
        try:
            start, stop, step = (float(x) for x in nums)
        except ValueError as exc:
            raise ConfigError("axis", f"non-numeric bound in {text!r}") from exc
        return cls(name.strip().replace("-", "_"), start, stop, step)

    def values(self):
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return [round(self.start + k * self.step, 12) for k in range(n + 1)]


@dataclass(frozen=True)
class SweepSpec:
    axis1: Axis
    axis2: Axis | None = None
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        swept = {self.axis1.name}
        if self.axis2 is not None:
            if self.axis2.name in swept:
                raise ConfigError("axis2", "must differ from axis1")
            swept.add(self.axis2.name)
        for key in self.fixed:
            if key not in PARAMETERS:
                raise ConfigError(f"fixed.{key}", "unknown parameter")
            if key in swept:
                raise ConfigError(f"fixed.{key}", "is also a sweep axis")
        missing = [p for p in PARAMETERS if p not in swept and p not in self.fixed]
        if missing:
            raise ConfigError(f"fixed.{missing[0]}", "value required")

    def points(self):
        """Parameter dicts in row-major order (axis1 outer)."""
        inner = self.axis2.values() if self.axis2 is not None else [None]
        for a in self.axis1.values():
            for b in inner:
                point = dict(self.fixed)
                point[self.axis1.name] = a
                if b is not None:
                    point[self.axis2.name] = b
                yield point


@dataclass(frozen=True)
class SweepRow:
    theta: float
    delta: float
    r_t: float
    r_e: float
    t_opt: float
    e_opt: float
    s_opt: float
    z_opt: float
    r_opt: float
    regime: str
    equity_cap_warning: bool

    @classmethod
    def from_solution(cls, opt: OptimalFunding):
        return cls(
            theta=opt.params.theta,
            delta=opt.params.delta,
            r_t=opt.rates.r_t,
            r_e=opt.rates.r_e,
            t_opt=opt.t_opt,
            e_opt=opt.e_opt,
            s_opt=opt.s_opt,
            z_opt=opt.z_opt,
            r_opt=opt.r_opt,
            regime=opt.winning_candidate.value,
            equity_cap_warning=opt.equity_cap_warning,
        )


def solve_point(theta, delta, r_t, r_e):
    opt = solve_analytic(LiquidityParams(theta, delta), FundingRates(r_t, r_e))
    return SweepRow.from_solution(opt)


def run_sweep(spec):
    return [solve_point(**point) for point in spec.points()]


def format_number(x):
    return format(float(x), ".10g")


def _format_cell(name, value):
    if name == "regime":
        return value
    if name == "equity_cap_warning":
        return "true" if value else "false"
    return format_number(value)


def write_csv(rows, stream=None):
    """Write rows to ``stream`` (or return the text when ``stream`` is None)."""
    out = io.StringIO() if stream is None else stream
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_format_cell(n, getattr(row, n)) for n in CSV_HEADER])
    if stream is None:
        return out.getvalue()
    return None


def read_csv(stream):
    reader = csv.reader(stream)
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ConfigError("header", f"unexpected CSV header {header!r}")
    rows = []
    for record in reader:
        values = {}
        for f, cell in zip(fields(SweepRow), record):
            if f.name == "regime":
                values[f.name] = cell
            elif f.name == "equity_cap_warning":
                values[f.name] = cell == "true"
            else:
                values[f.name] = float(cell)
        rows.append(SweepRow(**values))
    return rows
