"""Persistent pattern documents.

Self-describing text format, versioned, with decimal-string numbers so that
documents survive precision-mode changes.  A document stores the parameters,
the vertex map, the radius function and the residual summary recorded when
it was generated; re-verification of a loaded document must reproduce that
summary within a factor of two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import mpmath as mp

from .lattice import MultiIndex, SubIndex
from .pattern_core import PatternParams, ZField
from .radius_system import RadiusField

FORMAT_HEADER = "hexcircle-pattern v1"
TOOL_VERSION = "hexcircle 0.1.0"


class DocumentError(ValueError):
    """Malformed or unreadable pattern document."""


@dataclass
class PatternDocument:
    params: PatternParams
    n_max: int
    mode: str = "hex"
    route: str = "crossratio"
    vertices: Dict[MultiIndex, complex] = field(default_factory=dict)
    radii: Dict[SubIndex, float] = field(default_factory=dict)
    summary: Dict[str, float] = field(default_factory=dict)
    pole_sites: Tuple[SubIndex, ...] = ()
    tool: str = TOOL_VERSION

    def zfield(self) -> ZField:
        zf = ZField(params=self.params, values=dict(self.vertices),
                    generation=self.n_max)
        zf.meta["route"] = self.route
        zf.meta["mode"] = self.mode
        return zf

    def radius_field(self) -> RadiusField:
        return RadiusField(params=self.params, values=dict(self.radii),
                           generation=self.n_max, pole_sites=self.pole_sites)


def _fmt(x: float, precision: str, dps: int) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if precision == "double" or isinstance(x, float):
        return repr(float(x))
    with mp.workdps(dps + 5):
        return mp.nstr(mp.mpf(x), dps + 5)


def _parse_number(s: str, precision: str, dps: int):
    if s == "inf":
        return math.inf
    if s == "-inf":
        return -math.inf
    if precision == "double":
        return float(s)
    with mp.workdps(dps + 5):
        return mp.mpf(s)


def save_document(doc: PatternDocument, path: str) -> None:
    p = doc.params
    lines: List[str] = [FORMAT_HEADER, "[params]"]
    lines.append(f"c = {repr(p.c)}")
    for i, a in enumerate(p.alphas, start=1):
        lines.append(f"alpha{i} = {repr(a)}")
    if p.alpha_pi_fracs is not None:
        lines.append("alpha_pi_fracs = " + ",".join(str(f) for f in p.alpha_pi_fracs))
    lines.append(f"n = {doc.n_max}")
    lines.append(f"mode = {doc.mode}")
    lines.append(f"route = {doc.route}")
    lines.append(f"precision = {p.precision}")
    lines.append(f"dps = {p.dps}")
    lines.append(f"tool = {doc.tool}")
    if doc.pole_sites:
        lines.append("poles = " + ";".join(f"{s[0]} {s[1]} {s[2]}" for s in doc.pole_sites))
    lines.append("[summary]")
    for key in sorted(doc.summary):
        lines.append(f"{key} = {repr(float(doc.summary[key]))}")
    lines.append("[vertices]")
    for site in sorted(doc.vertices):
        z = doc.vertices[site]
        re = z.real if isinstance(z, complex) else z.real
        im = z.imag if isinstance(z, complex) else z.imag
        lines.append(f"{site[0]} {site[1]} {site[2]} "
                     f"{_fmt(re, p.precision, p.dps)} {_fmt(im, p.precision, p.dps)}")
    lines.append("[radii]")
    for site in sorted(doc.radii):
        lines.append(f"{site[0]} {site[1]} {site[2]} "
                     f"{_fmt(doc.radii[site], p.precision, p.dps)}")
    lines.append("[end]")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_document(path: str) -> PatternDocument:
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0] != FORMAT_HEADER:
        raise DocumentError("missing or unsupported format header")
    section = None
    kv: Dict[str, str] = {}
    summary: Dict[str, float] = {}
    vertices: Dict[MultiIndex, Tuple[str, str]] = {}
    radii: Dict[SubIndex, str] = {}
    for ln in lines[1:]:
        ln = ln.strip()
        if not ln:
            continue
        if ln == "[end]":
            break
        if ln.startswith("["):
            section = ln
            continue
        if section == "[params]":
            if "=" not in ln:
                raise DocumentError(f"bad params line: {ln}")
            key, val = (part.strip() for part in ln.split("=", 1))
            kv[key] = val
        elif section == "[summary]":
            key, val = (part.strip() for part in ln.split("=", 1))
            summary[key] = float(val)
        elif section == "[vertices]":
            parts = ln.split()
            if len(parts) != 5:
                raise DocumentError(f"bad vertex line: {ln}")
            site = (int(parts[0]), int(parts[1]), int(parts[2]))
            vertices[site] = (parts[3], parts[4])
        elif section == "[radii]":
            parts = ln.split()
            if len(parts) != 4:
                raise DocumentError(f"bad radius line: {ln}")
            radii[(int(parts[0]), int(parts[1]), int(parts[2]))] = parts[3]
        else:
            raise DocumentError(f"content outside any section: {ln}")
    try:
        precision = kv.get("precision", "double")
        dps = int(kv.get("dps", "40"))
        fracs = None
        if "alpha_pi_fracs" in kv:
            fracs = tuple(Fraction(s) for s in kv["alpha_pi_fracs"].split(","))
        params = PatternParams(
            alphas=(float(kv["alpha1"]), float(kv["alpha2"]), float(kv["alpha3"])),
            c=float(kv["c"]), precision=precision, dps=dps, alpha_pi_fracs=fracs)
        poles: Tuple[SubIndex, ...] = ()
        if "poles" in kv:
            poles = tuple(tuple(int(x) for x in part.split())
                          for part in kv["poles"].split(";") if part)
        doc = PatternDocument(
            params=params, n_max=int(kv["n"]), mode=kv.get("mode", "hex"),
            route=kv.get("route", "crossratio"), summary=summary,
            pole_sites=poles, tool=kv.get("tool", "unknown"))
    except (KeyError, ValueError) as exc:
        raise DocumentError(f"bad parameter block: {exc}") from exc
    with mp.workdps(dps + 5):
        for site, (re_s, im_s) in vertices.items():
            re = _parse_number(re_s, precision, dps)
            im = _parse_number(im_s, precision, dps)
            if precision == "double":
                doc.vertices[site] = complex(re, im)
            else:
                doc.vertices[site] = mp.mpc(re, im)
        for site, val in radii.items():
            doc.radii[site] = _parse_number(val, precision, dps)
    return doc
