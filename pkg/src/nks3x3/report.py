"""Structured check reports with byte-stable JSON serialization.

A Report is a named list of checks, each carrying the measured value(s),
the tolerance it was judged against, the pass flag, and a one-line
statement of the claim being tested.  Serialization uses fixed key order
and repr-exact floats, so identical runs produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import BadInput


@dataclass
class Check:
    """One named measurement judged against a tolerance.

    values maps quantity names to floats (or small lists of floats).
    tolerance is the bound used; whether it is an upper or lower bound
    is part of the claim text.
    """

    name: str
    values: dict
    tolerance: float
    passed: bool
    claim: str

    def to_dict(self) -> dict:
        return {"name": self.name, "values": self.values,
                "tolerance": self.tolerance, "passed": self.passed,
                "claim": self.claim}

    @classmethod
    def from_dict(cls, d: dict) -> "Check":
        try:
            return cls(str(d["name"]), dict(d["values"]),
                       float(d["tolerance"]), bool(d["passed"]),
                       str(d["claim"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise BadInput(f"malformed check record: {exc}") from exc


def check_max(name: str, value: float, tol: float, claim: str,
              extras: dict = None) -> Check:
    """Upper-bound check: passes when value <= tol."""
    values = {"max": float(value)}
    if extras:
        values.update(extras)
    return Check(name, values, float(tol), float(value) <= float(tol), claim)


def check_min(name: str, value: float, bound: float, claim: str,
              extras: dict = None) -> Check:
    """Lower-bound check: passes when value >= bound."""
    values = {"min": float(value)}
    if extras:
        values.update(extras)
    return Check(name, values, float(bound), float(value) >= float(bound), claim)


def check_close(name: str, value: float, target: float, tol: float,
                claim: str) -> Check:
    """Proximity check: passes when |value - target| <= tol."""
    err = abs(float(value) - float(target))
    return Check(name, {"value": float(value), "target": float(target),
                        "error": err}, float(tol), err <= float(tol), claim)


def check_order(name: str, residuals, min_order: float, claim: str,
                floor: float = 1e-12) -> Check:
    """Convergence-order check over successive grid halvings.

    residuals are coarse-to-fine maxima; passes when every measured
    order is >= min_order, or when the finest residual sits below the
    floating-point floor (order is then unmeasurable).
    """
    import math

    res = [float(r) for r in residuals]
    if res[-1] <= floor:
        return Check(name, {"residuals": res, "orders": []},
                     float(min_order), True, claim + " (at residual floor)")
    orders = [math.log2(res[i] / res[i + 1]) if res[i + 1] > 0 else float("nan")
              for i in range(len(res) - 1)]
    ok = all(o == o and o >= min_order for o in orders)
    return Check(name, {"residuals": res, "orders": orders},
                 float(min_order), ok, claim)


@dataclass
class Report:
    """A command's full result: config echo plus the list of checks."""

    command: str
    config: dict
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def to_dict(self) -> dict:
        return {"command": self.command, "config": self.config,
                "checks": [c.to_dict() for c in self.checks],
                "overall": self.overall}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        try:
            rep = cls(str(d["command"]), dict(d["config"]),
                      [Check.from_dict(c) for c in d["checks"]])
        except (KeyError, TypeError) as exc:
            raise BadInput(f"malformed report record: {exc}") from exc
        if bool(d.get("overall")) != rep.overall:
            raise BadInput("report overall flag disagrees with its checks")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "Report":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BadInput(f"report is not valid JSON: {exc}") from exc
        return cls.from_dict(d)

    def summary(self) -> str:
        """Human-readable one-line-per-check rendering."""
        lines = [f"== {self.command} =="]
        for k, v in self.config.items():
            lines.append(f"   {k} = {v}")
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            vals = ", ".join(f"{k}={_fmt(v)}" for k, v in c.values.items())
            lines.append(f"[{status}] {c.name.ljust(width)}  {vals}  "
                         f"(tol {c.tolerance:.3g})  {c.claim}")
        n_pass = sum(c.passed for c in self.checks)
        verdict = "PASS" if self.overall else "FAIL"
        lines.append(f"overall: {verdict} ({n_pass}/{len(self.checks)} checks)")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)
