"""End-to-end check that the global functions on a generic component form F[x1..x_{n-1}, x_n^{±1}]."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from . import __version__
from .charts import SymbolicChart, chart_A, coordinate_weights, impose_monodromy
from .demazure import ALCOVE as EXTENSION_ALCOVE
from .demazure import CONVENTIONS, PINNED_CONVENTION, check_minor_extension
from .invariants import extendable_subring, invariant_generators, oracle_check, standard_B_k
from .loop import sl2_identity_check
from .weyl import (
    DEFAULT_ALCOVE,
    AffineWeylElement,
    SerreWeightPresentation,
    depth,
    lowest_alcove_presentation,
    s_w_of,
    z_star,
    z_tilde,
)

SCHEMA_VERSION = "1.0"
FIELDS = ("generic", "fp")

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_HYPOTHESES = 0, 1, 2, 3
STATUS_EXIT = {"verified": EXIT_OK, "failed": EXIT_FAILED, "hypotheses not met": EXIT_HYPOTHESES}


class InputError(ValueError):
    """Malformed or inconsistent verification input."""


@dataclass
class VerifyInput:
    p: int
    presentation: SerreWeightPresentation
    field: str = "generic"
    convention: str = "auto"
    box_radius: int = 4

    @property
    def n(self) -> int:
        return self.presentation.n

    @property
    def f(self) -> int:
        return self.presentation.f

    @classmethod
    def from_config(cls, doc: Mapping[str, Any]) -> "VerifyInput":
        """Accepts {p, mu} or {p, w_tilde, omega}; optional n, f, field, convention, box_radius."""
        if not isinstance(doc, Mapping):
            raise InputError("config must be a mapping")
        known = {"p", "n", "f", "mu", "w_tilde", "omega", "field", "convention", "box_radius"}
        extra = set(doc) - known
        if extra:
            raise InputError(f"unknown config keys: {sorted(extra)}")
        fld = str(doc.get("field", "generic"))
        p = doc.get("p")
        if fld.startswith("fp:"):
            try:
                fp = int(fld[3:])
            except ValueError:
                raise InputError(f"bad field {fld!r}") from None
            if p is not None and int(p) != fp:
                raise InputError(f"field characteristic {fp} differs from p = {p}")
            p, fld = fp, "fp"
        if fld not in FIELDS:
            raise InputError(f"field must be 'generic' or 'fp:<p>', got {fld!r}")
        if p is None:
            raise InputError("p is required")
        try:
            p = int(p)
        except (TypeError, ValueError):
            raise InputError(f"p must be an integer, got {p!r}") from None
        if p < 2:
            raise InputError("p must be at least 2")
        conv = str(doc.get("convention", "auto"))
        if conv not in CONVENTIONS + ("auto",):
            raise InputError(f"convention must be linear, affine or auto, got {conv!r}")
        try:
            if "mu" in doc:
                mu = doc["mu"]
                if mu and not isinstance(mu[0], (list, tuple)):
                    mu = [mu]
                pres = lowest_alcove_presentation(mu, p)
            elif "w_tilde" in doc and "omega" in doc:
                ws = tuple(AffineWeylElement.from_json(x) if isinstance(x, Mapping) else x for x in doc["w_tilde"])
                om = tuple(tuple(int(a) for a in r) for r in doc["omega"])
                if len(ws) != len(om) or not ws:
                    raise InputError("w_tilde and omega need the same positive length")
                pres = SerreWeightPresentation(p, len(ws), ws[0].n, ws, om)
                pres.validate()
            else:
                raise InputError("give either mu or both w_tilde and omega")
        except InputError:
            raise
        except (ValueError, TypeError, KeyError, IndexError) as exc:
            raise InputError(str(exc)) from None
        for key, val in (("n", pres.n), ("f", pres.f)):
            if key in doc and int(doc[key]) != val:
                raise InputError(f"{key} = {doc[key]} does not match the weight data ({val})")
        radius = int(doc.get("box_radius", 4))
        return cls(p, pres, fld, conv, radius)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "f": self.f,
            "mu": [list(r) for r in self.presentation.mu()],
            "presentation": self.presentation.to_json(),
            "field": self.field if self.field == "generic" else f"fp:{self.p}",
            "convention": self.convention,
            "box_radius": self.box_radius,
        }


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class VerificationReport:
    input: VerifyInput
    status: str
    depth: dict
    embeddings: list[dict]
    charts: dict
    rings: dict
    filter: dict
    minors: list[dict]
    final_ring: str | None
    checks: list[Check]
    metadata: dict

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT[self.status]

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "status": self.status,
            "input": self.input.to_json(),
            "depth": self.depth,
            "embeddings": self.embeddings,
            "charts": self.charts,
            "rings": self.rings,
            "filter": self.filter,
            "minors": self.minors,
            "final_ring": self.final_ring,
            "checks": [c.to_json() for c in self.checks],
            "metadata": self.metadata,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        inp = self.input
        lines = [
            f"status: {self.status}",
            f"n = {inp.n}, f = {inp.f}, p = {inp.p}, field = {inp.to_json()['field']}",
            f"mu = {[list(r) for r in inp.presentation.mu()]}",
            f"depth = {self.depth['value']} (threshold {self.depth['threshold']}): {self.depth['verdict']}",
        ]
        for e in self.embeddings:
            lines.append(f"  j={e['j']}: w~ = {e['w_tilde_str']}, z~* = {e['z_star_str']}, s_w = {e['s_w']}")
        lines.append(f"U_sw invariants: {self.rings['U_sw']['ring_string']}")
        for k, r in sorted(self.rings["B"].items(), key=lambda kv: int(kv[0])):
            lines.append(f"B_{k} invariants: {r['ring_string']}")
        lines.append(f"extendable subring: {self.filter['ring_string']}")
        for m in self.minors:
            lines.append(f"  minors at j={m['j']}: {m['verdict']} (word {m['word']['letters']})")
        for c in self.checks:
            lines.append(f"[{'ok' if c.ok else 'FAIL'}] {c.name}")
        lines.append(f"final ring: {self.final_ring if self.final_ring else '-'}")
        return "\n".join(lines) + "\n"


def _chart_summary(ch: SymbolicChart) -> dict:
    ring = ch.ring
    return {
        "kind": ch.kind,
        "coordinates": len(ch.coordinates),
        "units": sorted(ch.units),
        "nonunits": sorted(ch.nonunits),
        "relations": [ring.fmt(r) for r in ch.relations],
        "eliminated": [name for name, _ in ch.eliminated],
        "monodromy_violations": ch.metadata.get("violations", ch.metadata.get("monodromy_violations", 0)),
    }


def usw_chart(pres: SerreWeightPresentation, field_mode: str = "generic") -> SymbolicChart:
    """The chart of U_{s_w}: upper triangular cells at z*_j, monodromy for s_w, weights attached."""
    s = s_w_of(pres)
    modulus = pres.p if field_mode == "fp" else None
    omega = pres.omega if field_mode == "fp" else None
    ch = chart_A([z_star(x) for x in pres.w_tilde], modulus=modulus)
    ch = impose_monodromy(ch, s, omega)
    return coordinate_weights(ch, [x.w for x in pres.w_tilde], s)


def _expected_x(n: int, f: int) -> dict[str, dict[str, int]]:
    return {f"x{i}": {f"c_{j}_{i}": 1 for j in range(f)} for i in range(1, n + 1)}


def verify_theorem(inp: VerifyInput) -> VerificationReport:
    pres, n, f, p = inp.presentation, inp.n, inp.f, inp.p
    checks: list[Check] = []
    convention = PINNED_CONVENTION if inp.convention == "auto" else inp.convention

    # hypotheses
    threshold = 3 * n - 1
    depths = [depth(r, p) for r in pres.mu()]
    dval = min(depths)
    if inp.field == "generic":
        verdict = "assumed"
    else:
        verdict = "met" if dval >= threshold else "not met"
    depth_doc = {"value": int(dval), "per_embedding": [int(d) for d in depths], "threshold": threshold, "verdict": verdict}

    s_w = s_w_of(pres)
    embeddings = []
    for j, w in enumerate(pres.w_tilde):
        zs = z_star(w)
        embeddings.append({
            "j": j,
            "w_tilde": w.to_json(),
            "w_tilde_str": str(w),
            "z_star": zs.to_json(),
            "z_star_str": str(zs),
            "s_w": list(s_w[j]),
            "omega": list(pres.omega[j]),
        })

    # U_{s_w}
    ch = usw_chart(pres, inp.field)
    usw = invariant_generators(ch)
    missing = oracle_check(ch, usw, inp.box_radius)
    # for f = 1 the generators carry the names c_i, otherwise x_i
    got = sorted(sorted(g.exponents.as_dict().items()) for g in usw.generators)
    want = sorted(sorted(e.items()) for e in _expected_x(n, f).values())
    usw_ok = got == want and all(g.unit for g in usw.generators)
    checks.append(Check("U_sw invariants are the Laurent ring on x_i", usw_ok, {"ring": usw.ring_string}))
    checks.append(Check("U_sw box oracle agrees", not missing, {"radius": inp.box_radius, "missing": [str(m) for m in missing]}))

    # B_k
    b_rings, b_charts = {}, {}
    b_ok = True
    for k in range(1, n):
        bk = standard_B_k(k, f, n)
        pres_k = invariant_generators(bk)
        miss = oracle_check(bk, pres_k, inp.box_radius)
        b_ok &= not miss
        b_rings[str(k)] = dict(pres_k.to_json(), oracle_missing=[str(m) for m in miss])
        b_charts[str(k)] = _chart_summary(bk)
    checks.append(Check("B_k box oracles agree", b_ok, {"k": list(range(1, n))}))

    # filter on the x_i
    sub = extendable_subring(n, f)
    units = [g.name for g in sub.units]
    rejected = sorted(w["rejected"] for w in sub.witnesses)
    filt_ok = (
        sub.names() == [f"x{i}" for i in range(1, n + 1)]
        and units == [f"x{n}"]
        and rejected == sorted(f"x{i}^-1" for i in range(1, n))
    )
    checks.append(Check("extendability filter leaves x_n as the only unit", filt_ok, {"units": units, "rejected": rejected}))

    # the lifts behave as SL2 triples
    sl2 = [sl2_identity_check(s, n) for s in range(n)]
    checks.append(Check("SL2 identity for the fixed lifts", all(c.ok for c in sl2), {"letters": list(range(n))}))

    # minors extend over the closures, one embedding at a time
    minors = []
    for j, w in enumerate(pres.w_tilde):
        x = z_tilde(w)
        rep = check_minor_extension(x, convention)
        doc = rep.to_json()
        doc["j"] = j
        doc["antidominant_element"] = x.to_json()
        minors.append(doc)
        checks.append(Check(
            f"minors extend at embedding {j}",
            rep.all_extend and rep.cone_ok and rep.antidominant and rep.oracle_agrees,
            {"failing": rep.failing(), "warnings": rep.warnings},
        ))

    all_ok = all(c.ok for c in checks)
    if verdict == "not met":
        status = "hypotheses not met"
    else:
        status = "verified" if all_ok else "failed"
    final = sub.ring_string if status == "verified" else None

    metadata = {
        "version": __version__,
        "alcove": {"charts": DEFAULT_ALCOVE, "extension": EXTENSION_ALCOVE},
        "extension_convention": convention,
        "pinned_convention": PINNED_CONVENTION,
        "lifts": {
            "spherical": "s_i with -1 at (i, i+1) and 1 at (i+1, i)",
            "affine": "s_a with v at (1, n) and -1/v at (n, 1)",
        },
        "words": [m["word"] for m in minors],
        "oracles": {"box_radius": inp.box_radius, "extension_oracle": all(m["oracle_used"] for m in minors)},
        "hilbert_certificate": usw.certificate,
    }
    return VerificationReport(
        inp, status, depth_doc, embeddings,
        {"U_sw": _chart_summary(ch), "B": b_charts},
        {"U_sw": usw.to_json(), "B": b_rings},
        sub.to_json(), minors, final, checks, metadata,
    )


def verify(doc: Mapping[str, Any]) -> VerificationReport:
    return verify_theorem(VerifyInput.from_config(doc))


def toy_config() -> dict:
    return {"n": 3, "f": 1, "p": 23, "mu": [[22, 7, -8]]}


def golden_configs() -> dict[str, dict]:
    return {
        "toy": toy_config(),
        "n3f2": {"n": 3, "f": 2, "p": 31, "mu": [[27, 12, -10], [4, -3, -10]]},
    }


def parse_int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def parse_mu(text: str) -> list[list[int]]:
    """'22,7,-8' or '27,12,-10;4,-3,-10' (rows separated by ';')."""
    return [parse_int_list(r) for r in text.split(";") if r.strip()]


def element_rows(xs: Sequence[AffineWeylElement]) -> list[dict]:
    return [x.to_json() for x in xs]
