"""Concrete instances and their symmetry certificates.

* Conlon complexes: all 3-subsets of a Sidon set in F_2^t acting on F_2^t.
* The 3-product case: complete tripartite base embedded in ``G_1 x G_2 x G_3``.
* Complete multipartite base complexes.
* Transitivity certificates from right translations, and link isomorphism checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complexes import Coloring, TwoComplex, complete_partite_complex, link_of
from .cts import ActionComplex, CtsInstance, link_graph, translated_link_matches
from .errors import InfeasibleError, ParameterError, StructuralError, ValidationError
from .groups import BooleanVectorGroup, CyclicGroup, FiniteGroup, GeneratorSet, ProductGroup
from .hdz import HdzInstance, HdzSpec, build_hdz
from .isomorphism import (
    BudgetExceeded,
    brute_force_isomorphic,
    canonical_form,
    complex_automorphism,
    find_isomorphism,
    orbit_sizes,
    union_find_orbits,
    wl_hash,
)
from .seeding import derive_rng
from .spectra import cayley_graph, spectral_report, zigzag_function

# -- Sidon sets ----------------------------------------------------------------


@dataclass(frozen=True)
class SidonSet:
    t: int
    elements: tuple[int, ...]

    def labels(self) -> list[str]:
        return [format(x, f"0{self.t}b") for x in self.elements]

    def to_json(self) -> dict:
        return {"t": self.t, "elements": self.labels()}


def sidon_violation(elements: Sequence[int]) -> list[int] | None:
    """A quadruple ``a+b = c+d`` with ``{a,b} != {c,d}`` (XOR), or ``None`` if the set is Sidon."""
    els = [int(x) for x in elements]
    if len(set(els)) != len(els):
        return [els[0], els[0], els[0], els[0]]
    for a, b, c, d in itertools.product(els, repeat=4):
        if a != b and c != d and {a, b} != {c, d} and a ^ b == c ^ d:
            return [a, b, c, d]
    return None


def find_sidon_set(t: int, size: int, seed: int = 0, attempts: int = 200) -> SidonSet:
    """Greedy Sidon set over a seeded random order of the non-zero vectors, with restarts."""
    if t < 1 or size < 1:
        raise ParameterError(f"need t >= 1 and size >= 1, got t={t}, size={size}")
    if size > 2**t - 1:
        raise InfeasibleError(f"F_2^{t} has only {2**t - 1} non-zero elements, need {size}")
    for attempt in range(attempts):
        rng = derive_rng(seed, f"sidon/{attempt}")
        chosen: list[int] = []
        sums: set[int] = set()
        for x in rng.permutation(np.arange(1, 2**t)):
            x = int(x)
            new = {x ^ a for a in chosen}
            if new & sums:
                continue
            chosen.append(x)
            sums |= new
            if len(chosen) == size:
                if sidon_violation(chosen) is not None:  # pragma: no cover - greedy invariant
                    raise StructuralError("greedy Sidon search produced a non-Sidon set")
                return SidonSet(t, tuple(chosen))
    raise InfeasibleError(f"no Sidon set of size {size} found in F_2^{t} after {attempts} attempts")


def sidon_from_labels(t: int, labels: Sequence[str]) -> SidonSet:
    els = tuple(int(s, 2) for s in labels)
    if any(len(s) != t for s in labels):
        raise ParameterError(f"labels must be {t}-bit strings")
    return SidonSet(t, els)


# -- Conlon ---------------------------------------------------------------------

def conlon_action(t: int, S: SidonSet | Sequence[int]) -> ActionComplex:
    els = tuple(S.elements if isinstance(S, SidonSet) else (int(x) for x in S))
    if len(els) < 3:
        raise ParameterError("need at least 3 elements")
    if 0 in els:
        raise ParameterError("the zero vector cannot be a generator")
    if any(x >= 2**t for x in els):
        raise ParameterError(f"element outside F_2^{t}")
    group = BooleanVectorGroup(t)
    return ActionComplex.from_element_triangles(group, list(itertools.combinations(els, 3)), name="conlon")


def build_conlon(t: int, S: SidonSet | Sequence[int], strict: bool = True) -> CtsInstance:
    """``S`` choose 3 acting on F_2^t; a non-Sidon ``S`` surfaces as a condition-D failure."""
    inst = CtsInstance(conlon_action(t, S))
    if strict and not inst.record.all_pass:
        failed = [c for c, ok in inst.record.verdicts.items() if not ok]
        raise ValidationError(f"Conlon complex fails conditions {failed}", inst.record)
    return inst


def conlon_reference(cts: CtsInstance, tol: float = 1e-9) -> dict:
    """Measured walk ``lambda`` next to ``sqrt(3)/2 + lambda(Cay(G,S))^2 / (2 sqrt(3))``."""
    G = cts.group
    gens = [int(x) for x in cts.action.elements]
    cay = spectral_report(cayley_graph(G, gens), tol, allow_disconnected=True)
    walk = spectral_report(cts.walk, tol, allow_disconnected=True)
    ref = math.sqrt(3) / 2 + cay.lambda_abs**2 / (2 * math.sqrt(3))
    return {"lambda_cayley": cay.lambda_abs, "lambda_walk": walk.lambda_abs, "reference": ref,
            "gap": walk.lambda_abs - ref, "tolerance": tol}


# -- 3-product case ------------------------------------------------------------

def _pair_with_inverses(group: FiniteGroup, S: Sequence[int]) -> GeneratorSet:
    S = [int(x) for x in S]
    inv = group.inverse_table()
    if sorted(S) != sorted(int(inv[x]) for x in S) or len(set(S)) != len(S):
        raise ParameterError(f"generator set of {group!r} is not symmetric", witness=[group.label(x) for x in S])
    firsts: list[int] = []
    for x in S:
        if inv[x] == x:
            raise ParameterError(f"{group.label(x)} has order 2; such generators cannot be ordered by inverses")
        if x not in firsts and int(inv[x]) not in firsts:
            firsts.append(x)
    return GeneratorSet(group, tuple(firsts) + tuple(int(inv[x]) for x in firsts), len(firsts))


def build_three_product(groups: Sequence[FiniteGroup], gens: Sequence[Sequence[int]]) -> HdzInstance:
    """Complete tripartite base with parts ``S_1, S_2, S_3`` embedded in ``G_1 x G_2 x G_3``."""
    if len(groups) != 3 or len(gens) != 3:
        raise ParameterError("the 3-product case needs exactly three groups and three generator sets")
    sizes = {len(s) for s in gens}
    if len(sizes) != 1:
        raise ParameterError(f"generator sets have different sizes {[len(s) for s in gens]}")
    if len({g.order for g in groups}) != 1:
        raise ParameterError(f"groups have different orders {[g.order for g in groups]}")
    gsets = [_pair_with_inverses(g, s) for g, s in zip(groups, gens)]
    d = sizes.pop()
    base, coloring = complete_partite_complex([d, d, d])
    spec = HdzSpec(base, coloring, list(groups), gsets, mode="minus")
    return build_hdz(spec)


def three_product_check(inst: HdzInstance, tol: float = 1e-6, eig_tol: float = 1e-9) -> dict:
    """Walk ``lambda`` against ``sqrt(1/2 + f((1 + 2 lambda_3)/3, 1/2)/2)``."""
    lams = [spectral_report(inst.component_cayley(c), eig_tol, allow_disconnected=True).lambda_signed for c in range(3)]
    lam3 = max(lams)
    a = (1 + 2 * lam3) / 3
    bound = math.sqrt(0.5 + 0.5 * zigzag_function(min(max(a, 0.0), 1.0), 0.5))
    walk = spectral_report(inst.walk, eig_tol, allow_disconnected=True)
    cx = inst.complex
    d = len(inst.spec.generators[0])
    return {
        "component_lambdas": lams, "lambda_3": lam3, "bound": bound,
        "lambda_walk": walk.lambda_abs, "margin": bound - walk.lambda_abs,
        "holds": walk.lambda_abs <= bound + tol, "tolerance": tol,
        "triangles": cx.n_triangles, "triangles_before_dedup": d**3 * inst.group.order,
        "collisions": cx.meta.get("collisions", 0),
    }


def complete_multipartite_base(chi: int, n: int) -> tuple[TwoComplex, Coloring]:
    """All polychromatic triangles on ``chi`` parts of size ``n``; edge-regular of degree ``n (chi - 2)``."""
    if chi < 3 or n < 1:
        raise ParameterError(f"need chi >= 3 and n >= 1, got chi={chi}, n={n}")
    return complete_partite_complex([n] * chi)


# -- transitivity ----------------------------------------------------------------

@dataclass
class AutomorphismFamily:
    """Right translations ``x -> x h``, stabilizer automorphisms, and the face orbits they generate."""

    translations: list[str]
    orbit_sizes: dict[str, list[int]]
    preserved: bool
    witness: dict | None = None
    automorphisms: list[str] = field(default_factory=list)


@dataclass
class TransitivityReport:
    family: AutomorphismFamily
    vertex_transitive: bool
    edge_transitive: bool | None
    triangle_transitive: bool | None
    transitive: bool
    method: dict[str, str]
    witness: dict | None = None
    oracle: dict | None = None
    exact_orbits: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "transitive": self.transitive,
            "exact_orbit_counts": self.exact_orbits,
            "vertex_transitive": self.vertex_transitive,
            "edge_transitive": self.edge_transitive,
            "triangle_transitive": self.triangle_transitive,
            "orbit_sizes": self.family.orbit_sizes,
            "translations": self.family.translations,
            "stabilizer_automorphisms": len(self.family.automorphisms),
            "maps_preserve_faces": self.family.preserved,
            "method": self.method,
            "witness": self.witness,
            "oracle": self.oracle,
        }


def _face_keys(rows: np.ndarray, n: int) -> np.ndarray:
    rows = np.sort(rows, axis=1)
    key = np.zeros(len(rows), dtype=np.int64)
    for j in range(rows.shape[1]):
        key = key * n + rows[:, j]
    return key


def _face_permutation(faces: np.ndarray, keys: np.ndarray, vmap: np.ndarray, n: int) -> np.ndarray:
    """Image index of every face under the vertex map, or -1 where the image is not a face."""
    img = _face_keys(vmap[faces], n)
    pos = np.searchsorted(keys, img)
    pos_c = np.minimum(pos, len(keys) - 1)
    return np.where(keys[pos_c] == img, pos_c, -1)


def translation_maps(cts: CtsInstance, extra: int = 4, seed: int = 0) -> list[int]:
    """Group generators plus a few seeded random elements, as right-translation parameters."""
    G = cts.group
    hs = list(dict.fromkeys(G.generators()))
    rng = derive_rng(seed, "translations")
    hs += [int(x) for x in rng.choice(G.order, size=min(extra, G.order), replace=False)]
    return list(dict.fromkeys(hs))


def _gf2_coords(basis: list[int], x: int) -> int | None:
    """Bitmask of basis vectors XOR-ing to ``x`` (basis assumed independent), or ``None``."""
    rows: list[tuple[int, int]] = []  # (reduced vector, combination mask)
    for i, b in enumerate(basis):
        v, m = b, 1 << i
        for r, rm in rows:
            if v ^ r < v:
                v, m = v ^ r, m ^ rm
        rows.append((v, m))
        rows.sort(reverse=True)
    mask = 0
    for r, rm in rows:
        if x ^ r < x:
            x, mask = x ^ r, mask ^ rm
    return mask if x == 0 else None


def _linear_extension(t: int, src: list[int], dst: list[int]) -> np.ndarray | None:
    """Index map of an invertible linear map of F_2^t sending ``src[i]`` to ``dst[i]``, if one exists."""
    basis: list[int] = []
    images: list[int] = []
    for x, y in zip(src, dst):
        if _gf2_coords(basis, x) is None:
            basis.append(x)
            images.append(y)
    for x, y in zip(src, dst):
        mask = _gf2_coords(basis, x)
        img = 0
        for i, yi in enumerate(images):
            if mask >> i & 1:
                img ^= yi
        if img != y:
            return None
    # complete both bases with the same standard vectors
    if len(basis) < t:
        for k in range(t):
            e = 1 << k
            if _gf2_coords(basis, e) is None and _gf2_coords(images, e) is None:
                basis.append(e)
                images.append(e)
        if len(basis) < t or _gf2_coords(images[:-1], images[-1]) is not None:
            return None
    cols = []
    for k in range(t):
        mask = _gf2_coords(basis, 1 << k)
        img = 0
        for i, yi in enumerate(images):
            if mask >> i & 1:
                img ^= yi
        cols.append(img)
    x = np.arange(2**t, dtype=np.int64)
    out = np.zeros_like(x)
    for k, c in enumerate(cols):
        out ^= ((x >> k) & 1) * c
    if len(np.unique(out)) != len(out):
        return None
    return out


def stabilizer_automorphisms(cts: CtsInstance, limit: int = 5040) -> list[tuple[str, np.ndarray]]:
    """Group automorphisms mapping the type triangles onto themselves, as vertex maps.

    An automorphism ``a`` with ``a(S) = S`` sends ``{x g, y g, z g}`` to
    ``{a(x) a(g), a(y) a(g), a(z) a(g)}``, so it is a complex automorphism.
    Covers F_2^t (linear maps permuting the elements of ``S``, at most
    ``limit`` permutations tried), cyclic groups and products of cyclic
    groups (coordinatewise multiplication by units, at most ``limit`` tuples).
    """
    G = cts.group
    els = [int(x) for x in cts.action.elements]
    tri_set = {tuple(sorted(int(x) for x in row)) for row in cts.action.element_triangles()}

    def keeps_triangles(amap) -> bool:
        return {tuple(sorted(int(amap[x]) for x in row)) for row in tri_set} == tri_set

    out: list[tuple[str, np.ndarray]] = []
    if isinstance(G, BooleanVectorGroup):
        if math.factorial(len(els)) > limit:
            return out
        for perm in itertools.permutations(els):
            if list(perm) == els:
                continue
            amap = _linear_extension(G.t, els, list(perm))
            if amap is not None and keeps_triangles(amap):
                out.append(("linear:" + ",".join(G.label(x) for x in perm), amap))
    elif isinstance(G, CyclicGroup):
        m = G.order
        x = np.arange(m, dtype=np.int64)
        for u in range(2, m):
            if math.gcd(u, m) == 1:
                amap = (u * x) % m
                if keeps_triangles(amap):
                    out.append((f"scale:{u}", amap))
    elif isinstance(G, ProductGroup) and all(isinstance(c, CyclicGroup) for c in G.components):
        mods = [c.order for c in G.components]
        units = [[u for u in range(1, m) if math.gcd(u, m) == 1] for m in mods]
        if math.prod(len(u) for u in units) > limit:
            return out
        digits = G.digits
        el_digits = digits[els]
        index = {int(e): k for k, e in enumerate(els)}
        for us in itertools.product(*units):
            if all(u == 1 for u in us):
                continue
            img = [G.pack(int(d) * u % m for d, u, m in zip(row, us, mods)) for row in el_digits]
            if any(i not in index for i in img):
                continue
            small = dict(zip(els, img))
            if not keeps_triangles(small):
                continue
            scaled = (digits * np.array(us)) % np.array(mods)
            amap = scaled @ np.asarray(G.strides, dtype=np.int64)
            out.append(("scale:(" + ",".join(map(str, us)) + ")", amap))
    return out


def check_translation(cts: CtsInstance, h: int) -> dict | None:
    """``None`` if ``x -> x h`` maps triangles onto triangles, else a witness."""
    C = cts.complex
    n = C.n_vertices
    vmap = cts.group.right_table(int(h))
    tri_keys = _face_keys(C.triangles, n)
    img = _face_permutation(C.triangles, tri_keys, vmap, n)
    if (img < 0).any():
        i = int(np.flatnonzero(img < 0)[0])
        return {"translation": cts.group.label(int(h)), "triangle": [C.vertices[x] for x in C.triangles[i]]}
    if len(np.unique(img)) != len(img):
        return {"translation": cts.group.label(int(h)), "reason": "not injective on triangles"}
    return None


DENSE_WALK_LIMIT = 3000


def _edge_invariants(C: TwoComplex, max_len: int = 6) -> tuple[np.ndarray, int]:
    """Per edge: numbers of walks of length 2..max_len between its ends in the 1-skeleton.

    Dense powers are used up to ``DENSE_WALK_LIMIT`` vertices (exact while the
    counts stay below 2^53); larger complexes stop at length 3.
    Returns the invariant rows and the longest walk length used.
    """
    a = C.skeleton().adjacency
    e = C.edges
    if C.n_vertices > DENSE_WALK_LIMIT:
        max_len = 3
        a = a.astype(np.int64)
        p = a @ a
        rows = [np.asarray(p[e[:, 0], e[:, 1]]).ravel()]
        p = p @ a
        rows.append(np.asarray(p[e[:, 0], e[:, 1]]).ravel())
        return np.stack(rows, axis=1), max_len
    dense = a.toarray().astype(float)
    p = dense
    rows = []
    for k in range(2, max_len + 1):
        p = p @ dense
        if p.max() >= 2.0**53:
            max_len = k - 1
            break
        rows.append(p[e[:, 0], e[:, 1]])
    return np.rint(np.stack(rows, axis=1)).astype(np.int64), max_len


def certify_transitivity(cts: CtsInstance, seed: int = 0, oracle_limit: int = 60) -> TransitivityReport:
    """Translation-orbit certificate with an automorphism-invariant obstruction search.

    Right translations are automorphisms of a left Schreier complex; their face
    orbits certify transitivity when each dimension has one orbit.  When the
    translation orbits split, an edge invariant (common neighbours and 3-walks
    in the 1-skeleton) that differs across edges proves no automorphism can merge
    them.  Complexes with at most ``oracle_limit`` vertices also get an
    exhaustive automorphism search.
    """
    C = cts.complex
    G = cts.group
    n = C.n_vertices
    hs = translation_maps(cts, seed=seed)
    bad = None
    for h in hs:
        bad = check_translation(cts, h)
        if bad:
            break
    if bad is not None:
        raise StructuralError("a constructed translation does not preserve the triangle set", witness=bad)
    autos = stabilizer_automorphisms(cts)
    vmaps = [G.right_table(int(h)) for h in hs] + [m for _, m in autos]
    e_keys = _face_keys(C.edges, n)
    t_keys = _face_keys(C.triangles, n)
    emaps = [_face_permutation(C.edges, e_keys, m, n) for m in vmaps]
    tmaps = [_face_permutation(C.triangles, t_keys, m, n) for m in vmaps]
    broken = [k for k, (em, tm) in enumerate(zip(emaps, tmaps)) if (em < 0).any() or (tm < 0).any()]
    if broken:
        k = broken[0]
        name = G.label(int(hs[k])) if k < len(hs) else autos[k - len(hs)][0]
        raise StructuralError("a constructed automorphism does not map faces to faces", witness={"map": name})
    orbits = {
        "vertices": orbit_sizes(union_find_orbits(n, vmaps)),
        "edges": orbit_sizes(union_find_orbits(C.n_edges, emaps)),
        "triangles": orbit_sizes(union_find_orbits(C.n_triangles, tmaps)),
    }
    fam = AutomorphismFamily([G.label(int(h)) for h in hs], orbits, True, automorphisms=[a for a, _ in autos])
    verdict = {k: len(v) == 1 for k, v in orbits.items()}
    family = "translations" + (" and stabilizer automorphisms" if autos else "")
    method = {k: family for k, ok in verdict.items() if ok}
    witness = None
    oracle = None
    edge_t: bool | None = verdict["edges"] or None
    tri_t: bool | None = verdict["triangles"] or None
    exact: dict[str, int] = {k: len(v) for k, v in orbits.items() if len(v) == 1}
    if not verdict["edges"] or not verdict["triangles"]:
        inv, length = _edge_invariants(C)
        edge_class = _lex_rank(inv)
        tri_class = _lex_rank(np.sort(edge_class[C.triangle_edges], axis=1))
        # orbits of the full group refine the invariant classes and are unions of family orbits
        n_edge_classes = int(edge_class.max()) + 1
        n_tri_classes = int(tri_class.max()) + 1
        if n_edge_classes == len(orbits["edges"]):
            exact["edges"] = n_edge_classes
        if n_tri_classes == len(orbits["triangles"]):
            exact["triangles"] = n_tri_classes
        label = f"walk counts of length 2..{length} between edge ends in the 1-skeleton"
        if n_edge_classes > 1:
            j = int(np.flatnonzero(edge_class != edge_class[0])[0])
            ids = C.edge_ids()
            witness = {
                "edges": [list(ids[0]), list(ids[j])],
                "invariants": [inv[0].tolist(), inv[j].tolist()],
                "invariant": label,
            }
            edge_t = False
            method["edges"] = "edge-invariant obstruction"
            if n_tri_classes > 1:
                tri_t = False
                method["triangles"] = "edge-invariant obstruction"
    if n <= oracle_limit:
        oracle = automorphism_oracle(C)
        exact.update({"vertices": oracle["vertex_orbits"], "edges": oracle["edge_orbits"],
                      "triangles": oracle["triangle_orbits"]})
        if edge_t is None:
            edge_t = oracle["edge_orbits"] == 1
            method["edges"] = "exhaustive automorphism search"
        if tri_t is None:
            tri_t = oracle["triangle_orbits"] == 1
            method["triangles"] = "exhaustive automorphism search"
    for key, val in (("edges", edge_t), ("triangles", tri_t)):
        if val is None:
            method[key] = "undetermined: orbits of the constructed maps split and no invariant separates them"
    transitive = bool(verdict["vertices"] and edge_t and tri_t)
    return TransitivityReport(fam, verdict["vertices"], edge_t, tri_t, transitive, method, witness, oracle, exact)


def _lex_rank(rows: np.ndarray) -> np.ndarray:
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1)


def automorphism_oracle(C: TwoComplex) -> dict:
    """Exact face-orbit counts by exhaustive automorphism search (small complexes only)."""
    n = C.n_vertices
    tri = C.triangles
    found: list[np.ndarray] = []

    def labels_for(faces: np.ndarray, keys: np.ndarray) -> np.ndarray:
        return union_find_orbits(len(faces), [_face_permutation(faces, keys, m, n) for m in found])

    def search(src: np.ndarray, dst: np.ndarray) -> np.ndarray | None:
        for perm in itertools.permutations(range(len(dst))):
            m = complex_automorphism(n, tri, {int(a): int(dst[p]) for a, p in zip(src, perm)})
            if m is not None:
                return m
        return None

    def count(faces: np.ndarray) -> int:
        keys = _face_keys(faces, n)
        labels = labels_for(faces, keys)
        reps = list(dict.fromkeys(int(x) for x in labels))
        orbits = 0
        while reps:
            base = faces[int(np.flatnonzero(labels == reps[0])[0])]
            keep = []
            for r in reps[1:]:
                target = faces[int(np.flatnonzero(labels == r)[0])]
                m = search(base, target)
                if m is None:
                    keep.append(target)
                else:
                    found.append(m)
            orbits += 1
            labels = labels_for(faces, keys)
            reps = list(dict.fromkeys(int(labels[int(np.flatnonzero(_face_keys(t[None, :], n)[0] == keys)[0])]) for t in keep))
        return orbits

    vert = count(np.arange(n).reshape(-1, 1))
    edges = count(C.edges)
    tris = count(tri)
    return {"vertex_orbits": vert, "edge_orbits": edges, "triangle_orbits": tris, "automorphisms_found": len(found)}


# -- links ---------------------------------------------------------------------

@dataclass
class LinkReport:
    isomorphic: bool
    regular: bool
    degree: int | None
    vertices: int
    edges: int
    checked: int
    method: str
    canonical_link: list | None = None
    canonical_note: str | None = None
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "link_isomorphic": self.isomorphic, "link_regular": self.regular, "link_degree": self.degree,
            "link_vertices": self.vertices, "link_edges": self.edges, "checked_vertices": self.checked,
            "method": self.method, "canonical_link": self.canonical_link,
            "canonical_note": self.canonical_note, "witness": self.witness,
        }


def _canonical_edge_list(adj: np.ndarray, budget: int) -> tuple[list | None, str | None]:
    try:
        _, order = canonical_form(adj, budget=budget)
    except BudgetExceeded as exc:
        return None, str(exc)
    relabel = adj[np.ix_(order, order)]
    iu, ju = np.nonzero(np.triu(relabel))
    return [[int(i), int(j), int(relabel[i, j])] for i, j in zip(iu, ju)], None


def certify_links(inst: CtsInstance | TwoComplex, sample_size: int = 200, seed: int = 0,
                  all_limit: int = 2000, canonical_budget: int = 5000) -> LinkReport:
    """Pairwise link isomorphism and regularity over all or sampled vertices.

    For a CTS the isomorphism between ``link(v)`` and ``link(w)`` is the right
    translation by ``v^-1 w`` and is verified edge by edge.  For a bare complex
    links are compared by invariants and an explicit isomorphism search
    (exact backtracking below 13 vertices).
    """
    cx = inst.complex if isinstance(inst, CtsInstance) else inst
    n = cx.n_vertices
    if n <= all_limit:
        verts = np.arange(n)
    else:
        verts = np.sort(derive_rng(seed, "links").choice(n, size=min(sample_size, n), replace=False))
    first = link_of(cx, cx.vertices[int(verts[0])])
    ref = first.adjacency.toarray()
    regular = True
    witness = None
    iso = True
    method = "translation maps"
    if isinstance(inst, CtsInstance):
        template = link_graph(inst)
        for v in verts:
            w = translated_link_matches(inst, template, int(v))
            if w is not None:
                iso = False
                witness = {"vertices": [cx.vertices[int(verts[0])], cx.vertices[int(v)]], **w}
                break
    else:
        method = "invariants + isomorphism search"
        ref_hash = wl_hash(ref)
        for v in verts[1:]:
            adj = link_of(cx, cx.vertices[int(v)]).adjacency.toarray()
            same = adj.shape == ref.shape and wl_hash(adj) == ref_hash
            if same:
                if len(adj) <= 12:
                    same = brute_force_isomorphic(ref, adj)
                else:
                    try:
                        same = find_isomorphism(ref, adj) is not None
                    except BudgetExceeded:
                        same = False
            if not same:
                iso = False
                witness = {"vertices": [cx.vertices[int(verts[0])], cx.vertices[int(v)]]}
                break
    # regularity over every checked link
    degrees = set()
    for v in verts:
        deg = link_of(cx, cx.vertices[int(v)]).degrees
        if len(deg) and not (deg == deg[0]).all():
            regular = False
            witness = witness or {"irregular_link_at": cx.vertices[int(v)]}
            break
        degrees.update(int(x) for x in np.unique(deg))
    if len(degrees) > 1:
        regular = False
    canon, note = _canonical_edge_list(ref, canonical_budget)
    return LinkReport(
        iso, regular, first.degree if regular else None, first.n, first.edge_count, len(verts), method,
        canon, note, witness,
    )
