"""Solve reports: per-phase records, JSON round-trip and a printable table."""

import json
from dataclasses import asdict, dataclass, field
from typing import List, Optional


@dataclass
class PhaseRecord:
    """One step of the driver: start point, bounds, or a cut+search round."""

    kind: str
    cuts: int = 0
    basis: Optional[int] = None
    nodes: Optional[int] = None
    r_max_sq: Optional[float] = None
    sw_fict_bounds: bool = False
    sw_num_nodes: bool = False
    improvement: Optional[list] = None
    p_ini: Optional[list] = None
    elapsed: float = 0.0
    search_elapsed: Optional[float] = None


@dataclass
class SolveReport:
    optimum: list
    labels: list
    ret: int
    risk_value: float
    invested: int
    uninvested: int
    proven: bool
    r_b_sq: Optional[float]
    B: int
    r0_sq: float
    continuous: list
    R_c: float
    R_ceiling: int
    initial: list
    R_e: int
    bounds: Optional[list]
    phases: List[PhaseRecord] = field(default_factory=list)
    cuts: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    status: str = "ok"
    message: str = ""
    elapsed: float = 0.0

    @property
    def gap(self) -> int:
        """Distance of the optimum's return to the integer return ceiling."""
        return int(self.R_ceiling - self.ret)

    @property
    def risk_sq(self) -> float:
        """Normalized risk Q(x)/B^2 of the optimum."""
        return self.risk_value / float(self.B) ** 2

    @property
    def total_nodes(self) -> int:
        return sum(p.nodes or 0 for p in self.phases)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "SolveReport":
        d = dict(d)
        d["phases"] = [PhaseRecord(**p) for p in d.get("phases", [])]
        return cls(**d)

    @classmethod
    def from_json(cls, s: str) -> "SolveReport":
        return cls.from_dict(json.loads(s))

    def table(self) -> str:
        """Human-readable summary: one line per search round, then the optimum."""
        lines = [
            f"budget B = {self.B}   r0^2 = {self.r0_sq:g}"
            + (f"   border risk r_b^2 = {self.r_b_sq:.6g}" if self.r_b_sq is not None else ""),
            f"continuous optimum return {self.R_c:.6f}  (ceiling {self.R_ceiling})",
            f"start point {tuple(self.initial)}  return {self.R_e}",
        ]
        if self.bounds is not None:
            lines.append(f"lower bounds {tuple(self.bounds)}")
        lines.append(f"{'round':>5} {'cuts':>5} {'r_max^2':>12} {'basis':>7} {'nodes':>7} "
                     f"{'fict':>5} {'time[s]':>9}  improvement")
        k = 0
        for p in self.phases:
            if p.kind != "search" and p.kind != "testset":
                continue
            k += 1
            rm = f"{p.r_max_sq:.6g}" if p.r_max_sq is not None else "-"
            basis = str(p.basis) if p.basis is not None else "-"
            nodes = str(p.nodes) if p.nodes is not None else "-"
            imp = str(tuple(p.improvement)) if p.improvement else ""
            lines.append(f"{k:>5} {p.cuts:>5} {rm:>12} {basis:>7} {nodes:>7} "
                         f"{'yes' if p.sw_fict_bounds else 'no':>5} {p.elapsed:>9.3f}  {imp}")
        for c in self.cuts:
            lines.append(f"cut {tuple(c['normal'])} . x <= {c['rhs']}")
        names = ", ".join(f"{l}={v}" for l, v in zip(self.labels, self.optimum) if v)
        lines.append(f"optimum {tuple(self.optimum)}  ({names or 'empty'})")
        lines.append(f"return {self.ret}  gap {self.gap}  risk^2 {self.risk_sq:.6g}  "
                     f"invested {self.invested}  uninvested {self.uninvested}")
        lines.append(f"status {self.status}{' (proven optimal)' if self.proven else ''}"
                     + (f": {self.message}" if self.message else ""))
        return "\n".join(lines)
