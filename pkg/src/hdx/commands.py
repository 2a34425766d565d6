"""Implementations of ``hdx build``, ``hdx verify`` and ``hdx spectrum``.

Every command returns ``(exit_code, text)``; the front end in :mod:`hdx.cli`
handles argument parsing and error reporting.  Reports are deterministic:
no timestamps, no paths, sorted keys.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Callable

from . import __version__
from .complexes import (
    Coloring,
    TwoComplex,
    check_property_inv,
    check_regularity,
    complex_from_json,
    complex_to_json,
    dumps_complex,
    hpower,
    loads_complex,
    validate_coloring,
)
from .constructions import (
    build_conlon,
    build_three_product,
    certify_links,
    certify_transitivity,
    complete_multipartite_base,
    find_sidon_set,
    sidon_from_labels,
)
from .cts import ActionComplex, CtsInstance, check_two_centers, cts_bound_check, verify_lift
from .errors import InfeasibleError, ParameterError, SizeError, StructuralError
from .groups import FiniteGroup, group_from_descriptor, make_group, sample_symmetric_generators
from .hdz import (
    HdzInstance,
    HdzSpec,
    build_hdz,
    check_full_skeleton,
    dual_gap_lower_bound,
    is_complete_multipartite,
    sample_hdz_spec,
)
from .io import atomic_write_text, dumps_json, meta_path, read_json, read_meta, sha256_bytes
from .seeding import derive_rng
from .spectra import dense_cap, spectral_report, sparse_cap, walk_graph

CONSTRUCTIONS = ("conlon", "three-product", "hdz-minus", "hdz-plus", "hpower", "multipartite")
SELECTORS = ("walk", "dual", "L", "rep", "zigzag")

LEMMAS = {
    "regularity": "def:edge-regular-complex",
    "coloring": "def:strong-coloring",
    "inv": "def:property-inv",
    "cts": "def:commutative-triplet-structure",
    "two-centers": "lemma:every-edge-two-centers",
    "lift": "lemma:zigzag-lift-covers-walk",
    "bound": "theorem:cts-walk-bound",
    "transitivity": "theorem:hdz-transitive",
    "links": "theorem:hdz-isomorphic-links",
    "full-skeleton": "lemma:full-skeleton-dual-lambda",
    "dual-gap": "lemma:dual-gap-partition-bound",
}
CHECKS = tuple(LEMMAS)
DEFAULT_CHECKS = ("cts", "two-centers", "lift")

EXACT = 0


def measured(value, tol: float = EXACT) -> dict:
    """A reported number with the tolerance it was computed or compared at."""
    return {"value": value, "tolerance": tol}


# -- params ----------------------------------------------------------------------

_GROUP_PATTERNS: list[tuple[re.Pattern, Callable[[re.Match], FiniteGroup]]] = [
    (re.compile(r"^Z_?(\d+)$"), lambda m: make_group("cyclic", m=int(m[1]))),
    (re.compile(r"^F_?2\^(\d+)$"), lambda m: make_group("boolean-vector", t=int(m[1]))),
    (re.compile(r"^SL\(2,(\d+)\)$"), lambda m: make_group("special-linear", p=int(m[1]))),
    (re.compile(r"^PSL\(2,(\d+)\)$"), lambda m: make_group("special-linear", p=int(m[1]), projective=True)),
]


def parse_group(spec) -> FiniteGroup:
    """A group from a descriptor dict or a short name such as ``Z11``, ``F2^6``, ``SL(2,5)``."""
    if isinstance(spec, dict):
        return group_from_descriptor(spec)
    if isinstance(spec, str):
        name = spec.replace(" ", "")
        for pat, build in _GROUP_PATTERNS:
            m = pat.match(name)
            if m:
                return build(m)
    raise ParameterError(f"cannot parse group {spec!r}")


def _element(group: FiniteGroup, x) -> int:
    if isinstance(x, bool):
        raise ParameterError(f"bad group element {x!r}")
    if isinstance(x, int):
        if not 0 <= x < group.order:
            raise ParameterError(f"element index {x} outside {group!r}")
        return x
    if isinstance(x, str):
        try:
            return group.index_of_label(x)
        except (KeyError, ParameterError):
            raise ParameterError(f"{x!r} is not an element label of {group!r}") from None
    raise ParameterError(f"bad group element {x!r}")


def load_params(text_or_path: str | None) -> tuple[dict, Path]:
    """Params from a JSON file, or inline JSON when the argument starts with ``{``."""
    if text_or_path is None:
        return {}, Path(".")
    if text_or_path.lstrip().startswith("{"):
        try:
            data = json.loads(text_or_path)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"inline params are not valid JSON: {exc}") from None
        base = Path(".")
    else:
        data = read_json(text_or_path, "params file")
        base = Path(text_or_path).parent
    if not isinstance(data, dict):
        raise ParameterError("params must be a JSON object")
    return data, base


def _check_keys(params: dict, allowed: set[str], construction: str) -> None:
    extra = sorted(set(params) - allowed)
    if extra:
        raise ParameterError(f"unknown params for {construction}: {extra}; allowed: {sorted(allowed)}")


def _need(params: dict, key: str, construction: str):
    if key not in params:
        raise ParameterError(f"{construction} needs param {key!r}")
    return params[key]


def _int_param(params: dict, key: str, construction: str) -> int:
    v = _need(params, key, construction)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParameterError(f"param {key!r} must be an integer, got {v!r}")
    return v


def _load_base(params: dict, base_dir: Path, construction: str) -> tuple[TwoComplex, Coloring | None]:
    base = _need(params, "base", construction)
    if isinstance(base, str):
        path = Path(base) if Path(base).is_absolute() else base_dir / base
        return complex_from_json(read_json(path, "base complex"))
    if isinstance(base, dict) and "multipartite" in base:
        mp = base["multipartite"]
        return complete_multipartite_base(_int_param(mp, "chi", "multipartite"), _int_param(mp, "n", "multipartite"))
    if isinstance(base, dict) and "vertices" in base:
        return complex_from_json(base)
    raise ParameterError("param 'base' must be a complex file path, an inline complex, or {'multipartite': ...}")


# -- build -------------------------------------------------------------------------

def _cts_meta(inst: CtsInstance) -> dict:
    return {
        "group": inst.group.descriptor(),
        "S_triangles": inst.action.element_triangles().tolist(),
    }


def _hdz_meta(inst: HdzInstance) -> dict:
    spec = inst.spec
    return {
        **_cts_meta(inst),
        "hdz": {
            "mode": spec.mode,
            "groups": [g.descriptor() for g in spec.groups],
            "generators": [list(f.elements) for f in spec.generators],
            "base": complex_to_json(spec.base, spec.coloring),
        },
    }


def _hdz_spec(params: dict, base_dir: Path, seed: int, mode: str, construction: str) -> HdzSpec:
    _check_keys(params, {"base", "groups", "generators"}, construction)
    base, coloring = _load_base(params, base_dir, construction)
    if coloring is None:
        raise ParameterError(f"{construction} needs a coloured base complex")
    groups = [parse_group(g) for g in _need(params, "groups", construction)]
    if len(groups) != coloring.chi:
        raise ParameterError(f"base has {coloring.chi} colours but {len(groups)} groups were given")
    if "generators" not in params:
        return sample_hdz_spec(base, coloring, groups, seed, mode)
    gens = params["generators"]
    if len(gens) != len(groups):
        raise ParameterError(f"need one generator list per group, got {len(gens)}")
    parsed = [[_element(g, x) for x in f] for g, f in zip(groups, gens)]
    for c, (f, k) in enumerate(zip(parsed, coloring.sizes)):
        want = 2 * k if mode == "plus" else k
        if len(f) != want:
            raise ParameterError(
                f"colour {c} has {k} base vertices, so {construction} needs {want} generators, got {len(f)}",
                witness={"color": c, "class_size": k, "generators": len(f), "expected": want},
            )
    return HdzSpec(base, coloring, groups, parsed, mode=mode, seed=seed)


def build_instance(construction: str, params: dict, base_dir: Path, seed: int):
    """``(complex, coloring, instance_meta, extra)`` for one build request."""
    if construction == "conlon":
        _check_keys(params, {"t", "size", "sidon"}, construction)
        t = _int_param(params, "t", construction)
        if "sidon" in params:
            S = sidon_from_labels(t, params["sidon"])
        else:
            S = find_sidon_set(t, _int_param(params, "size", construction), seed=seed)
        inst = build_conlon(t, S)
        return inst.complex, None, _cts_meta(inst), {"sidon": S.labels(), "validation": inst.record.to_json()}
    if construction == "three-product":
        _check_keys(params, {"groups", "generators", "half_size"}, construction)
        groups = [parse_group(g) for g in _need(params, "groups", construction)]
        if "generators" in params:
            gens = [[_element(g, x) for x in f] for g, f in zip(groups, params["generators"])]
        else:
            half = _int_param(params, "half_size", construction)
            gens = [list(sample_symmetric_generators(g, half, derive_rng(seed, f"generators/{c}")).elements)
                    for c, g in enumerate(groups)]
        inst = build_three_product(groups, gens)
        return inst.complex, None, _hdz_meta(inst), {"validation": inst.record.to_json()}
    if construction in ("hdz-minus", "hdz-plus"):
        mode = construction.split("-")[1]
        inst = build_hdz(_hdz_spec(params, base_dir, seed, mode, construction))
        return inst.complex, None, _hdz_meta(inst), {"validation": inst.record.to_json()}
    if construction == "hpower":
        _check_keys(params, {"base"}, construction)
        base, coloring = _load_base(params, base_dir, construction)
        cx, col = hpower(base, coloring)
        return cx, col, None, {"source_triangles": base.n_triangles}
    if construction == "multipartite":
        _check_keys(params, {"chi", "n"}, construction)
        cx, col = complete_multipartite_base(_int_param(params, "chi", construction), _int_param(params, "n", construction))
        return cx, col, None, {}
    raise ParameterError(f"unknown construction {construction!r}; choose from {list(CONSTRUCTIONS)}")


def cmd_build(construction: str, params_arg: str | None, seed: int, out: str) -> tuple[int, str]:
    params, base_dir = load_params(params_arg)
    cx, col, instance, extra = build_instance(construction, params, base_dir, seed)
    text = dumps_complex(cx, col)
    digest = sha256_bytes(text.encode("utf-8"))
    meta = {
        "tool": "hdx",
        "version": __version__,
        "construction": construction,
        "params": params,
        "seed": seed,
        "complex_sha256": digest,
        "counts": {"vertices": cx.n_vertices, "edges": cx.n_edges, "triangles": cx.n_triangles},
        "instance": instance,
        **extra,
    }
    atomic_write_text(out, text)
    atomic_write_text(meta_path(out), dumps_json(meta))
    summary = {"complex": digest, "counts": meta["counts"], "construction": construction, "seed": seed}
    return 0, dumps_json(summary)


# -- loading a built instance ----------------------------------------------------

class Loaded:
    """A complex file, its sidecar metadata and (when recorded) the CTS instance."""

    def __init__(self, path: str) -> None:
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise ParameterError(f"cannot read complex file {path!r}: {exc.strerror}") from None
        self.sha256 = sha256_bytes(raw)
        self.complex, self.coloring = loads_complex(raw.decode("utf-8"))
        self.meta = read_meta(path)
        self._inst: CtsInstance | None = None
        self._inst_reason: str | None = None

    @property
    def instance_block(self) -> dict:
        meta = self.meta or {}
        return {
            "complex_sha256": self.sha256,
            "construction": meta.get("construction"),
            "seed": meta.get("seed"),
            "matches_build": (meta.get("complex_sha256") == self.sha256) if meta else None,
        }

    def instance(self) -> CtsInstance | None:
        if self._inst is not None or self._inst_reason is not None:
            return self._inst
        info = (self.meta or {}).get("instance")
        if not info:
            self._inst_reason = "no group structure recorded in the sidecar metadata"
            return None
        group = group_from_descriptor(info["group"])
        hdz = info.get("hdz")
        if hdz:
            base, coloring = complex_from_json(hdz["base"])
            groups = [group_from_descriptor(g) for g in hdz["groups"]]
            inst: CtsInstance = build_hdz(HdzSpec(base, coloring, groups, hdz["generators"], mode=hdz["mode"]))
            if inst.group != group:
                raise ParameterError("sidecar group does not match the recorded HDZ groups")
        else:
            inst = CtsInstance(ActionComplex.from_element_triangles(group, info["S_triangles"]))
        inst.attach_complex(self.complex)
        self._inst = inst
        return inst

    def skip_reason(self) -> str | None:
        self.instance()
        return self._inst_reason


# -- verify ------------------------------------------------------------------------

def _entry(name: str, verdict: str, values: dict | None = None, witness=None, reason: str | None = None,
           details: dict | None = None) -> dict:
    out = {"check": name, "lemma": LEMMAS[name], "verdict": verdict, "values": values or {}}
    if witness is not None:
        out["witness"] = witness
    if reason is not None:
        out["reason"] = reason
    if details:
        out["details"] = details
    return out


def _skip(name: str, reason: str) -> dict:
    return _entry(name, "skipped", reason=reason)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _needs_instance(loaded: Loaded, name: str, conditions: tuple[str, ...] = ()) -> CtsInstance | dict:
    inst = loaded.instance()
    if inst is None:
        return _skip(name, loaded.skip_reason() or "no instance")
    failed = [c for c in conditions if not inst.record.verdicts.get(c, False)]
    if failed:
        return _skip(name, f"needs CTS conditions {', '.join(conditions)}; failed: {', '.join(failed)}")
    return inst


def _bound_values(rep, tol: float, eig_tol: float) -> dict:
    return {
        "lambda_walk": measured(rep.walk.lambda_abs, eig_tol),
        "lambda_zigzag": measured(rep.zigzag.lambda_abs, eig_tol),
        "lambda_dual": measured(rep.dual.lambda_abs, eig_tol),
        "lambda_L": measured(rep.L.lambda_abs, eig_tol),
        "bound": measured(rep.bound_zigzag, eig_tol),
        "bound_zigzag_function": measured(rep.bound_function, eig_tol),
        "margin": measured(rep.margin, tol),
        "relaxation_consistent": measured(rep.relaxation_consistent),
    }


def run_check(name: str, loaded: Loaded, tol: float, eig_tol: float, seed: int) -> dict:
    """One report entry; a structural failure inside the check becomes a failed verdict."""
    try:
        return _run_check(name, loaded, tol, eig_tol, seed)
    except StructuralError as exc:
        return _entry(name, "fail", witness=exc.witness, reason=str(exc))


def _run_check(name: str, loaded: Loaded, tol: float, eig_tol: float, seed: int) -> dict:
    cx, col = loaded.complex, loaded.coloring
    if name == "regularity":
        reg = check_regularity(cx)
        return _entry(name, _verdict(reg.regular), {"d": measured(reg.d)}, reg.witness)
    if name in ("coloring", "inv"):
        if col is None:
            return _skip(name, "complex file has no coloring")
        if name == "coloring":
            rep = validate_coloring(cx, col)
            return _entry(name, _verdict(rep.ok), {"strong": measured(rep.strong), "connected": measured(rep.connected)},
                          rep.violations[:3] or None)
        try:
            inv = check_property_inv(cx, col)
        except InfeasibleError as exc:
            return _entry(name, "fail", witness=exc.witness, reason=str(exc))
        return _entry(name, _verdict(inv.holds), {"holds": measured(inv.holds)}, inv.witness)
    if name == "links" and loaded.instance() is None:
        rep = certify_links(cx, seed=seed)
        return _entry(name, _verdict(rep.isomorphic and rep.regular), _link_values(rep), rep.witness,
                      details={"method": rep.method, "canonical_note": rep.canonical_note})
    if name == "cts":
        inst = _needs_instance(loaded, name)
        if isinstance(inst, dict):
            return inst
        rec = inst.record
        values = {f"condition_{c}": measured(ok) for c, ok in rec.verdicts.items()}
        values["d_tilde"] = measured(rec.d_tilde)
        return _entry(name, _verdict(rec.all_pass), values, rec.witness or None)
    if name == "two-centers":
        inst = _needs_instance(loaded, name)
        if isinstance(inst, dict):
            return inst
        res = check_two_centers(inst)
        return _entry(name, _verdict(res.passed), {k: measured(v) for k, v in res.details.items()}, res.witness)
    if name == "lift":
        inst = _needs_instance(loaded, name, ("B", "C"))
        if isinstance(inst, dict):
            return inst
        res = verify_lift(inst, seed=seed)
        values = {k: measured(v) for k, v in res.details.items() if k != "coverage"}
        return _entry(name, _verdict(res.passed), values, res.witness,
                      details={"coverage": res.details.get("coverage")} if res.details else None)
    if name == "bound":
        inst = _needs_instance(loaded, name, ("B", "C"))
        if isinstance(inst, dict):
            return inst
        rep = cts_bound_check(inst, tol, eig_tol)
        return _entry(name, _verdict(rep.holds), _bound_values(rep, tol, eig_tol))
    if name == "transitivity":
        inst = _needs_instance(loaded, name)
        if isinstance(inst, dict):
            return inst
        rep = certify_transitivity(inst, seed=seed)
        values = {
            "vertex_transitive": measured(rep.vertex_transitive),
            "edge_transitive": measured(rep.edge_transitive),
            "triangle_transitive": measured(rep.triangle_transitive),
        }
        values.update({f"translation_orbits_{k}": measured(len(v)) for k, v in rep.family.orbit_sizes.items()})
        return _entry(name, _verdict(rep.transitive), values, rep.witness, details={"method": rep.method})
    if name == "links":
        inst = loaded.instance()
        rep = certify_links(inst, seed=seed)
        return _entry(name, _verdict(rep.isomorphic and rep.regular), _link_values(rep), rep.witness,
                      details={"method": rep.method, "canonical_note": rep.canonical_note})
    if name in ("full-skeleton", "dual-gap"):
        inst = _needs_instance(loaded, name, ("B", "C"))
        if isinstance(inst, dict):
            return inst
        if not isinstance(inst, HdzInstance):
            return _skip(name, "instance was not built from a coloured base complex")
        if name == "full-skeleton":
            if not is_complete_multipartite(inst.base, inst.base_coloring):
                return _skip(name, "base 1-skeleton is not complete multipartite")
            rep = check_full_skeleton(inst, tol=eig_tol)
            values = {
                "lambda_dual": measured(rep.measured, eig_tol),
                "formula": measured(rep.formula, eig_tol),
                "nu": measured(rep.nu, eig_tol),
                "difference": measured(rep.difference, eig_tol),
            }
            return _entry(name, _verdict(rep.holds), values)
        if inst.chi % 2 or inst.chi < 4:
            return _skip(name, f"the pair partition needs an even number of colours >= 4, got {inst.chi}")
        rep = dual_gap_lower_bound(inst, tol=tol, eig_tol=eig_tol)
        values = {"bound": measured(rep.bound, eig_tol), "sigma_dual": measured(rep.sigma_dual, eig_tol),
                  "margin": measured(rep.sigma_dual - rep.bound, tol)}
        return _entry(name, _verdict(rep.holds), values, details={"warnings": rep.warnings} if rep.warnings else None)
    raise ParameterError(f"unknown check {name!r}; choose from {list(CHECKS)}")


def _link_values(rep) -> dict:
    return {
        "isomorphic": measured(rep.isomorphic), "regular": measured(rep.regular),
        "degree": measured(rep.degree), "link_vertices": measured(rep.vertices),
        "checked_vertices": measured(rep.checked),
    }


def parse_checks(csv: str | None) -> list[str]:
    if not csv:
        return list(DEFAULT_CHECKS)
    names = [c.strip() for c in csv.split(",") if c.strip()]
    unknown = [c for c in names if c not in LEMMAS]
    if unknown:
        raise ParameterError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    return list(dict.fromkeys(names))


def cmd_verify(path: str, checks: str | None, tol: float, eig_tol: float, seed: int) -> tuple[int, str]:
    names = parse_checks(checks)
    loaded = Loaded(path)
    results = [run_check(n, loaded, tol, eig_tol, seed) for n in names]
    failed = [r["check"] for r in results if r["verdict"] == "fail"]
    report = {
        "tool": "hdx", "version": __version__, "command": "verify",
        "instance": loaded.instance_block, "seed": seed,
        "checks": results,
        "summary": {"failed": failed, "passed": sum(r["verdict"] == "pass" for r in results),
                    "skipped": sum(r["verdict"] == "skipped" for r in results)},
    }
    return (1 if failed else 0), dumps_json(report)


# -- spectrum -----------------------------------------------------------------------

def _spectral_values(rep) -> dict:
    t = rep.tolerance
    return {
        "lambda_signed": measured(rep.lambda_signed, t),
        "lambda_abs": measured(rep.lambda_abs, t),
        "smallest": measured(rep.smallest, t),
        "spectral_gap": measured(rep.spectral_gap, t * (rep.degree or 1)),
        "degree": measured(rep.degree),
        "vertices": measured(rep.n),
        "connected": measured(rep.connected),
    }


def cmd_spectrum(path: str, selector: str, tol: float, bound: bool, bound_tol: float) -> tuple[int, str]:
    if selector not in SELECTORS:
        raise ParameterError(f"unknown graph {selector!r}; choose from {list(SELECTORS)}")
    loaded = Loaded(path)
    inst = loaded.instance()
    if selector == "walk" and inst is None:
        size = loaded.complex.n_edges
    elif inst is None:
        raise ParameterError(f"graph {selector!r} needs group structure: {loaded.skip_reason()}")
    else:
        size = inst.graph_size(selector)
    if size > sparse_cap():
        raise SizeError(
            f"{selector} graph has {size} vertices, above the eigensolver cap {sparse_cap()}; "
            "use 'hdx verify --checks lift' (sampled mode) or raise HDX_SPARSE_CAP",
            witness={"graph": selector, "vertices": size, "cap": sparse_cap()},
        )
    graph = walk_graph(loaded.complex) if inst is None else inst.graph(selector)
    rep = spectral_report(graph, tol, allow_disconnected=True)
    report = {
        "tool": "hdx", "version": __version__, "command": "spectrum",
        "instance": loaded.instance_block, "graph": selector,
        "method": rep.method, "dense_cap": dense_cap(),
        "spectrum": _spectral_values(rep),
    }
    code = 0
    if bound:
        if inst is None:
            report["bound"] = {"verdict": "skipped", "reason": loaded.skip_reason(), "lemma": LEMMAS["bound"]}
        else:
            missing = [c for c in ("B", "C") if not inst.record.verdicts[c]]
            if missing:
                report["bound"] = {"verdict": "skipped", "lemma": LEMMAS["bound"],
                                   "reason": f"needs CTS conditions B, C; failed: {', '.join(missing)}"}
            else:
                b = cts_bound_check(inst, bound_tol, tol)
                report["bound"] = {"verdict": "holds" if b.holds else "violated", "lemma": LEMMAS["bound"],
                                   "values": _bound_values(b, bound_tol, tol)}
                code = 0 if b.holds else 1
    return code, dumps_json(report)
