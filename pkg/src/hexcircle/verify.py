"""Verification engine for pattern documents."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import geometry, pattern_core, radius_system
from .document import PatternDocument

DEFAULT_TOLERANCES = {
    "crossratio": 1e-9,
    "constraint": 1e-9,
    "laxzc": 1e-9,
    "kite": 1e-9,
    "positivity": 0.0,
    "immersion": 0.0,
    "radius_eq": 1e-9,
}

ALL_CHECKS = tuple(DEFAULT_TOLERANCES)


@dataclass
class VerifyReport:
    residuals: Dict[str, float] = field(default_factory=dict)
    passed: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def lines(self) -> List[str]:
        out = []
        for name in self.residuals:
            status = "pass" if self.passed[name] else "FAIL"
            out.append(f"{name:12s} max-residual {self.residuals[name]:.3e}  {status}")
        out.extend(self.notes)
        return out


def applicable_checks(doc: PatternDocument) -> List[str]:
    checks = []
    if doc.vertices:
        checks += ["crossratio", "kite", "immersion"]
        if doc.mode in ("hex", "sg") and doc.route == "crossratio":
            checks += ["constraint", "laxzc"]
    if doc.radii:
        checks += ["positivity", "radius_eq"]
    return checks


def run_checks(doc: PatternDocument, checks=None,
               tolerances: Optional[Dict[str, float]] = None) -> VerifyReport:
    tolerances = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    if checks is None:
        checks = applicable_checks(doc)
    report = VerifyReport()
    zf = doc.zfield() if doc.vertices else None
    rf = doc.radius_field() if doc.radii else None
    slab_only = doc.route == "reconstructed" or doc.mode in ("z2", "log")
    for name in checks:
        if name == "crossratio":
            if zf is None:
                report.notes.append("crossratio: no vertices stored")
                continue
            res = pattern_core.max_face_residual(zf)
        elif name == "constraint":
            if zf is None or doc.mode in ("log",):
                report.notes.append("constraint: not applicable")
                continue
            res = pattern_core.max_constraint_residual(zf)
        elif name == "laxzc":
            if zf is None:
                report.notes.append("laxzc: no vertices stored")
                continue
            res = pattern_core.max_zero_curvature_residual(zf)
        elif name == "kite":
            if zf is None:
                report.notes.append("kite: no vertices stored")
                continue
            res = max_kite_residual(zf)
        elif name == "positivity":
            if rf is None:
                report.notes.append("positivity: no radii stored")
                continue
            bad = [s for s, v in rf.values.items()
                   if not rf.is_pole(s) and (math.isnan(v) or v < 0
                                             or (v == 0 and s not in rf.pole_sites
                                                 and doc.mode not in ("z2",)))]
            res = float(len(bad))
        elif name == "immersion":
            if zf is None:
                report.notes.append("immersion: no vertices stored")
                continue
            if doc.mode == "sg":
                sg = geometry.sg_slice(zf)
                rep = geometry.sg_immersion_check(sg)
            else:
                rep = geometry.immersion_check(zf, slab_only=slab_only)
            res = float(len(rep.failures))
        elif name == "radius_eq":
            if rf is None:
                report.notes.append("radius_eq: no radii stored")
                continue
            res = radius_system.max_equation_residual(rf)
        else:
            raise ValueError(f"unknown check {name}")
        report.residuals[name] = res
        report.passed[name] = res <= tolerances[name]
    return report


def max_kite_residual(zf) -> float:
    """Worst deviation of the neighbor distances around any center from a
    common value (max/min ratio minus one)."""
    from . import lattice
    bk = zf.params.backend()
    worst = 0.0
    with bk.context():
        for site in zf.values:
            if lattice.parity(site) != 0:
                continue
            dists = [float(bk.abs(zf[nb] - zf[site]))
                     for nb in lattice.axis_neighbors(site) if nb in zf.values]
            if len(dists) < 2 or min(dists) == 0:
                continue
            worst = max(worst, max(dists) / min(dists) - 1.0)
    return worst
