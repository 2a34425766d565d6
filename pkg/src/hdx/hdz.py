"""Embedding a coloured complex into a product of groups and the resulting CTS.

A strongly coloured base complex with colour classes ``V^c`` is mapped into
``G_1 x ... x G_chi`` by sending ``V^c_i`` to ``F_c[i]`` placed in coordinate
``c``.  The image ``S`` acts on the product group by left multiplication.  In
``minus`` mode the base must already satisfy property Inv; ``plus`` mode
applies the HPOWER doubling first.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complexes import (
    Coloring,
    TwoComplex,
    check_property_inv,
    check_regularity,
    hpower,
    validate_coloring,
)
from .cts import ActionComplex, CtsInstance, cts_bound_check
from .errors import InfeasibleError, ModeError, ParameterError, StructuralError
from .graphs import WeightedGraph
from .groups import FiniteGroup, GeneratorSet, ProductGroup, sample_symmetric_generators
from .seeding import derive_rng
from .spectra import cayley_graph, normalized_spectrum, sparse_cap, spectral_report

MODES = ("minus", "plus")


def _as_generator_set(group: FiniteGroup, gens) -> GeneratorSet:
    if isinstance(gens, GeneratorSet):
        if gens.group != group:
            raise ParameterError(f"generator set belongs to {gens.group!r}, expected {group!r}")
        return gens
    gens = [int(x) for x in gens]
    if len(gens) % 2:
        raise ParameterError(f"generator list of odd length {len(gens)}")
    return GeneratorSet(group, tuple(gens), len(gens) // 2)


@dataclass
class HdzSpec:
    base: TwoComplex
    coloring: Coloring
    groups: Sequence[FiniteGroup]
    generators: Sequence
    mode: str = "plus"
    seed: int | None = None
    independent: bool = False  # user assertion; not verified

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (len(self.groups) == len(self.generators) == self.coloring.chi):
            raise ParameterError("need one group and one generator set per colour")
        self.generators = [_as_generator_set(g, f) for g, f in zip(self.groups, self.generators)]

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "groups": [g.descriptor() for g in self.groups],
            "generators": [list(f.elements) for f in self.generators],
            "independent_asserted": self.independent,
        }


@dataclass(eq=False)
class Conversion:
    action: ActionComplex
    product: ProductGroup
    phi: dict[str, int]
    color_of_element: dict[int, int]


def conv(complex_: TwoComplex, coloring: Coloring, groups: Sequence[FiniteGroup] | ProductGroup,
         generators: Sequence) -> Conversion:
    """Map ``V^c_i`` to ``F_c[i]`` in coordinate ``c`` of the product group."""
    product = groups if isinstance(groups, ProductGroup) else ProductGroup(list(groups))
    comps = product.components
    if len(comps) != coloring.chi or len(generators) != coloring.chi:
        raise ParameterError(f"coloring has {coloring.chi} colours but {len(comps)} groups / {len(generators)} generator sets")
    gens = [_as_generator_set(g, f) for g, f in zip(comps, generators)]
    for c, (f, k) in enumerate(zip(gens, coloring.sizes)):
        if len(f) != k:
            raise ParameterError(f"colour {c} has {k} vertices but {len(f)} generators",
                                 witness={"color": c, "class_size": k, "generators": len(f)})
    rep = validate_coloring(complex_, coloring)
    if not rep.strong:
        raise ParameterError("coloring is not strong", witness={"triangles": rep.violations[:3]})
    phi: dict[str, int] = {}
    color_of: dict[int, int] = {}
    for c, (cl, f) in enumerate(zip(coloring.classes, gens)):
        for i, v in enumerate(cl):
            g = product.embed(c, f.elements[i])
            phi[v] = g
            color_of[g] = c
    elem = np.array([phi[v] for v in complex_.vertices], dtype=np.int64)
    tri = elem[complex_.triangles]
    action = ActionComplex.from_element_triangles(product, tri, name="conv")
    return Conversion(action, product, phi, color_of)


class HdzInstance(CtsInstance):
    """CTS built from a coloured base complex; keeps the base and the colour data."""

    def __init__(self, spec: HdzSpec, base: TwoComplex, coloring: Coloring, conversion: Conversion) -> None:
        super().__init__(conversion.action)
        self.spec = spec
        self.base = base
        self.base_coloring = coloring
        self.conversion = conversion
        self.product = conversion.product

    @property
    def chi(self) -> int:
        return self.base_coloring.chi

    @functools.cached_property
    def type_colors(self) -> np.ndarray:
        """``(|T|, 2)`` sorted colour pair of every type."""
        col = self.conversion.color_of_element
        return np.sort(np.array([[col[int(a)], col[int(b)]] for a, b in self.types], dtype=np.int64), axis=1)

    def template_set(self, c: int, d: int) -> list[int]:
        """Multiset ``S_cd = {phi(a) phi(b)}`` over types of colours ``{c, d}``, as product elements."""
        c, d = sorted((c, d))
        mask = (self.type_colors[:, 0] == c) & (self.type_colors[:, 1] == d)
        return [int(x) for x in self.hat_elements[mask]]

    def pair_graph(self, c: int, d: int) -> WeightedGraph:
        """``M_cd = Cay(G_c x G_d, S_cd)``."""
        c, d = sorted((c, d))
        comps = self.product.components
        pg = ProductGroup([comps[c], comps[d]])
        elems = [pg.pack((self.product.project(x, c), self.product.project(x, d))) for x in self.template_set(c, d)]
        return cayley_graph(pg, elems, name=f"M_{c}{d}")

    def projected_multiset(self, c: int, d: int, k: int) -> list[int]:
        if k not in (c, d):
            raise ParameterError(f"projection coordinate {k} is not one of {c}, {d}")
        return [self.product.project(x, k) for x in self.template_set(c, d)]

    def projected_graph(self, c: int, d: int, k: int) -> WeightedGraph:
        """``M^k_cd = Cay(G_k, P_k(S_cd))``."""
        return cayley_graph(self.product.components[k], self.projected_multiset(c, d, k), name=f"M^{k}_{c}{d}")

    def color_pairs(self) -> list[tuple[int, int]]:
        return sorted({(int(a), int(b)) for a, b in self.type_colors})

    def component_cayley(self, c: int) -> WeightedGraph:
        """``Cay(G_c, F_c)`` with the generator set actually embedded."""
        f = self.conversion_generators[c]
        return cayley_graph(self.product.components[c], f.elements, name=f"Cay(G_{c},F_{c})")

    @property
    def conversion_generators(self) -> list[GeneratorSet]:
        return list(self.spec.generators)

    def property_report(self) -> dict:
        """Predicted counts next to measured ones (measured only if the big complex is built)."""
        reg = check_regularity(self.base)
        d_base = reg.d
        out = {
            "vertices_expected": self.product.order,
            "triangle_degree_expected": 3 * self.base.n_triangles,
            "complex_regularity_expected": 2 * d_base if d_base is not None else None,
            "walk_degree_expected": 4 * d_base if d_base is not None else None,
            "base_regularity": d_base,
        }
        if self.complex_built:
            cx = self.complex
            tdeg = cx.vertex_triangle_degrees()
            creg = check_regularity(cx)
            wdeg = self.walk.degree
            out.update({
                "vertices": cx.n_vertices,
                "triangle_degree": int(tdeg[0]) if (tdeg == tdeg[0]).all() else None,
                "complex_regularity": creg.d,
                "walk_degree": wdeg,
                "collisions": cx.meta.get("collisions", 0),
            })
        return out


def _require_base(complex_: TwoComplex, coloring: Coloring) -> int:
    rep = validate_coloring(complex_, coloring)
    if not rep.strong:
        raise ParameterError("base coloring is not strong", witness={"triangles": rep.violations[:3]})
    if not rep.connected:
        raise ParameterError("base complex has a disconnected 1-skeleton")
    reg = check_regularity(complex_)
    if not reg.regular:
        raise ParameterError("base complex is not regular", witness=reg.witness)
    return reg.d


def build_hdz(spec: HdzSpec) -> HdzInstance:
    """Assemble the CTS for ``spec`` (validation record included, big complex lazy)."""
    _require_base(spec.base, spec.coloring)
    if spec.mode == "minus":
        inv = check_property_inv(spec.base, spec.coloring)
        if not inv.holds:
            raise ModeError("base complex does not satisfy property Inv; use plus mode", witness=inv.witness)
        base, coloring = spec.base, spec.coloring
    else:
        base, coloring = hpower(spec.base, spec.coloring)
    conversion = conv(base, coloring, spec.groups, spec.generators)
    inst = HdzInstance(spec, base, coloring, conversion)
    if not inst.record.all_pass:
        failed = [c for c, ok in inst.record.verdicts.items() if not ok]
        raise StructuralError(f"embedded complex fails CTS conditions {failed}", witness=inst.record.witness)
    return inst


# -- colour-pair partitions ----------------------------------------------------

@dataclass(frozen=True)
class TemplatePartition:
    """Perfect matchings of ``range(chi)`` covering every pair exactly once."""

    chi: int
    classes: tuple[tuple[tuple[int, int], ...], ...]

    def validate(self) -> list[str]:
        problems = []
        seen: dict[tuple[int, int], int] = {}
        for k, cl in enumerate(self.classes):
            used = [x for p in cl for x in p]
            if len(set(used)) != len(used):
                problems.append(f"class {k} is not a matching")
            for p in cl:
                seen[p] = seen.get(p, 0) + 1
        for p in itertools.combinations(range(self.chi), 2):
            if seen.get(p, 0) != 1:
                problems.append(f"pair {p} covered {seen.get(p, 0)} times")
        return problems

    def to_json(self) -> dict:
        return {"chi": self.chi, "classes": [[list(p) for p in cl] for cl in self.classes]}


def baranyai_partition(chi: int) -> TemplatePartition:
    """Round-robin 1-factorization of the complete graph on ``chi`` colours."""
    if chi % 2 or chi < 4:
        raise InfeasibleError(f"pair partition into perfect matchings needs an even chi >= 4, got {chi}")
    ring = list(range(1, chi))
    classes = []
    for _ in range(chi - 1):
        line = [0] + ring
        pairs = tuple(sorted(tuple(sorted((line[i], line[chi - 1 - i]))) for i in range(chi // 2)))
        classes.append(pairs)
        ring = ring[-1:] + ring[:-1]
    return TemplatePartition(chi, tuple(classes))


@dataclass
class DualGapReport:
    bound: float
    sigma_dual: float
    holds: bool
    class_minima: list[float]
    pair_gaps: dict[str, float]
    warnings: list[str] = field(default_factory=list)
    tolerance: float = 1e-6

    def to_json(self) -> dict:
        return {
            "bound": self.bound, "sigma_dual": self.sigma_dual, "holds": self.holds,
            "class_minima": self.class_minima, "pair_gaps": self.pair_gaps,
            "warnings": self.warnings, "tolerance": self.tolerance,
        }


def pair_gap(hdz: HdzInstance, c: int, d: int, tol: float = 1e-9) -> tuple[float, str | None]:
    """Spectral gap of ``M_cd``; zero with a warning when it is edgeless or disconnected."""
    if not hdz.template_set(c, d):
        return 0.0, f"no template edges between colours {c} and {d}"
    g = hdz.pair_graph(c, d)
    rep = spectral_report(g, tol, allow_disconnected=True)
    if not rep.connected:
        return 0.0, f"M_{c}{d} is disconnected"
    return float(rep.spectral_gap), None


def dual_gap_lower_bound(hdz: HdzInstance, partition: TemplatePartition | None = None,
                         tol: float = 1e-6, eig_tol: float = 1e-9) -> DualGapReport:
    """``sum over classes of min over pairs in the class of sigma(M_cd)``, compared with ``sigma(G_dual)``."""
    partition = partition or baranyai_partition(hdz.chi)
    if partition.chi != hdz.chi:
        raise ParameterError(f"partition is for chi={partition.chi}, instance has chi={hdz.chi}")
    gaps: dict[tuple[int, int], float] = {}
    warnings = []
    for c, d in itertools.combinations(range(hdz.chi), 2):
        gaps[(c, d)], w = pair_gap(hdz, c, d, eig_tol)
        if w:
            warnings.append(w)
    minima = [min(gaps[p] for p in cl) for cl in partition.classes]
    bound = float(sum(minima))
    dual = spectral_report(hdz.G_dual, eig_tol, allow_disconnected=True)
    sigma = float(dual.spectral_gap)
    return DualGapReport(
        bound, sigma, bound <= sigma + tol, minima,
        {f"{c}{d}": g for (c, d), g in gaps.items()}, warnings, tol,
    )


# -- complete multipartite skeleton --------------------------------------------

def full_skeleton_dual_lambda(chi: int, nu: float) -> float:
    """``(N - (chi-1) + (chi-1) nu) / N`` with ``N = chi choose 2``."""
    if chi < 3:
        raise ParameterError(f"chi must be at least 3, got {chi}")
    if not -1.0 <= nu <= 1.0:
        raise ParameterError(f"nu={nu} outside [-1, 1]")
    n = math.comb(chi, 2)
    return (n - (chi - 1) + (chi - 1) * nu) / n


def is_complete_multipartite(complex_: TwoComplex, coloring: Coloring) -> bool:
    col = coloring.color_array(complex_)
    sizes = np.bincount(col, minlength=coloring.chi)
    expected = (sizes.sum() ** 2 - (sizes**2).sum()) // 2
    return complex_.n_edges == expected


def exact_full_skeleton_lambda(spectra: Sequence[np.ndarray], sizes: Sequence[int]) -> tuple[float, float]:
    """Largest non-trivial and smallest eigenvalue of ``G_dual`` from the component spectra.

    Component ``c`` contributes normalized eigenvalues ``mu_c`` of ``Cay(G_c, F_c)``;
    the joint eigenvalues are ``sum_{c<d} K_c K_d mu_c mu_d / sum_{c<d} K_c K_d``
    over all tuples, the all-trivial tuple excluded once.
    """
    chi = len(spectra)
    weights = {(c, d): sizes[c] * sizes[d] for c, d in itertools.combinations(range(chi), 2)}
    total = sum(weights.values())
    distinct = []
    for ev in spectra:
        ev = np.sort(np.asarray(ev, dtype=float))
        vals, counts = _cluster(ev)
        distinct.append(list(zip(vals, counts)))
    best, worst = -np.inf, np.inf
    for combo in itertools.product(*distinct):
        mus = [m for m, _ in combo]
        val = sum(w * mus[c] * mus[d] for (c, d), w in weights.items()) / total
        multiplicity = math.prod(k for _, k in combo)
        trivial = all(abs(m - 1.0) < 1e-9 for m in mus)
        if trivial and multiplicity == 1:
            continue
        best = max(best, val)
        worst = min(worst, val)
    return float(best), float(worst)


def _cluster(ev: np.ndarray, tol: float = 1e-9) -> tuple[list[float], list[int]]:
    vals: list[float] = []
    counts: list[int] = []
    for x in ev:
        if vals and abs(x - vals[-1]) <= tol:
            counts[-1] += 1
        else:
            vals.append(float(x))
            counts.append(1)
    return vals, counts


@dataclass
class FullSkeletonReport:
    chi: int
    nu: float
    component_lambdas: list[float]
    formula: float
    exact: float
    measured: float
    difference: float
    holds: bool
    tolerance: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def check_full_skeleton(hdz: HdzInstance, tol: float = 1e-9, eig_tol: float = 1e-11) -> FullSkeletonReport:
    """Eigensolver ``lambda(G_dual)`` against the closed form with measured ``nu``."""
    if not is_complete_multipartite(hdz.base, hdz.base_coloring):
        raise ParameterError("base 1-skeleton is not complete multipartite")
    comps = [hdz.component_cayley(c) for c in range(hdz.chi)]
    lams = [spectral_report(g, eig_tol, allow_disconnected=True).lambda_signed for g in comps]
    nu = max(lams)
    formula = full_skeleton_dual_lambda(hdz.chi, nu)
    spectra = [normalized_spectrum(g) for g in comps]
    exact, _ = exact_full_skeleton_lambda(spectra, hdz.base_coloring.sizes)
    measured = spectral_report(hdz.G_dual, eig_tol, allow_disconnected=True).lambda_signed
    diff = abs(measured - formula)
    return FullSkeletonReport(hdz.chi, nu, lams, formula, exact, measured, diff, diff <= tol, tol)


# -- projection condition and random instances -----------------------------------

def projection_violations(complex_: TwoComplex, coloring: Coloring) -> list[dict]:
    """Colour pairs whose edges touch fewer than two vertices of one of the two colours."""
    col = coloring.color_array(complex_)
    e = complex_.edges
    out = []
    for c, d in itertools.combinations(range(coloring.chi), 2):
        cu, cv = col[e[:, 0]], col[e[:, 1]]
        mask = ((cu == c) & (cv == d)) | ((cu == d) & (cv == c))
        if not mask.any():
            continue
        ends = e[mask].ravel()
        for k in (c, d):
            distinct = len(np.unique(ends[col[ends] == k]))
            if distinct < 2:
                out.append({"colors": [c, d], "projection": k, "distinct_vertices": int(distinct)})
    return out


def sample_hdz_spec(base: TwoComplex, coloring: Coloring, groups: Sequence[FiniteGroup], seed: int,
                    mode: str = "plus") -> HdzSpec:
    """Uniform symmetric generator sets of the sizes required by ``mode``."""
    gens = []
    for c, (g, k) in enumerate(zip(groups, coloring.sizes)):
        if mode == "minus" and k % 2:
            raise InfeasibleError(f"colour {c} has odd size {k}; minus mode needs even sizes")
        half = k if mode == "plus" else k // 2
        gens.append(sample_symmetric_generators(g, half, derive_rng(seed, f"generators/{c}")))
    return HdzSpec(base, coloring, list(groups), gens, mode=mode, seed=seed)


def random_hdz(base: TwoComplex, coloring: Coloring, groups: Sequence[FiniteGroup], seed: int,
               eig_tol: float = 1e-9, bound_tol: float = 1e-6) -> tuple[HdzInstance, dict]:
    """Sample generators, build the plus-mode instance, and measure every relevant lambda."""
    viol = projection_violations(base, coloring)
    if viol:
        raise InfeasibleError("projection condition fails", witness=viol)
    spec = sample_hdz_spec(base, coloring, groups, seed, "plus")
    hdz = build_hdz(spec)
    report: dict = {"spec": spec.to_json(), "validation": hdz.record.to_json(), "lambdas": {}, "skipped": {}}
    lam = report["lambdas"]
    for c, d in hdz.color_pairs():
        for k in (c, d):
            r = spectral_report(hdz.projected_graph(c, d, k), eig_tol, allow_disconnected=True)
            lam[f"M^{k}_{c}{d}"] = _lam_entry(r)
        lam[f"M_{c}{d}"] = _lam_entry(spectral_report(hdz.pair_graph(c, d), eig_tol, allow_disconnected=True))
    lam["G_dual"] = _lam_entry(spectral_report(hdz.G_dual, eig_tol, allow_disconnected=True))
    lam["L"] = _lam_entry(spectral_report(hdz.L, eig_tol, allow_disconnected=True))
    too_big = [s for s in ("walk", "zigzag") if hdz.graph_size(s) > sparse_cap()]
    if too_big:
        report["skipped"]["walk_bound"] = (
            f"{', '.join(too_big)} graph above the eigensolver cap {sparse_cap()}"
        )
    else:
        report["walk_bound"] = cts_bound_check(hdz, bound_tol, eig_tol).to_json()
    return hdz, report


def _lam_entry(r) -> dict:
    return {"lambda_signed": r.lambda_signed, "lambda_abs": r.lambda_abs, "n": r.n,
            "degree": r.degree, "connected": r.connected, "tolerance": r.tolerance}
