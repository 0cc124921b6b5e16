"""Graph motif parameters: basis-tagged sparse rational vectors over
canonical graphs, basis changes, and evaluation on hosts.

Evaluation always routes through the homomorphism basis, because
cancellation there can shrink the support and with it the exponent of the
running time; that conversion is the core of the whole engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .decomp import exact_treewidth
from .graphs import (
    CanonicalForm,
    Graph,
    automorphism_count,
    canonical_form,
    encode_graph6,
    graph_order_key,
    parse_graph6,
)
from .homcount import count_hom_dp, count_hom_mm
from .partitions import CapacityError, coefficient, spasm

BASES = ("hom", "sub", "indsub", "emb", "strembed")

TREE_BUILDER_GUARD = 10


def _canon(x) -> CanonicalForm:
    if isinstance(x, CanonicalForm):
        return x
    return canonical_form(x)


@dataclass(frozen=True)
class MotifParameter:
    """A finite rational linear combination of pattern counts in one of the
    five bases.  Zero coefficients are never stored."""

    basis: str
    terms: tuple  # sorted tuple of (CanonicalForm, Fraction)

    def __init__(self, basis: str, terms):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        if isinstance(terms, dict):
            terms = terms.items()
        cleaned = {}
        for graph, coeff in terms:
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            cf = _canon(graph)
            cleaned[cf] = cleaned.get(cf, Fraction(0)) + coeff
        ordered = tuple(
            (cf, c)
            for cf, c in sorted(cleaned.items(), key=lambda kv: graph_order_key(kv[0]))
            if c != 0
        )
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "terms", ordered)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def support(self) -> list:
        return [cf for cf, _ in self.terms]

    def is_empty(self) -> bool:
        return not self.terms


# ---------------------------------------------------------------------------
# basis changes


def _supergraph_classes(h: Graph) -> list:
    """Isomorphism classes of supergraphs of h on the same vertex set:
    exactly the graphs f with Ext(h, f) nonzero."""
    present = set(h.edges)
    missing = [
        e for e in itertools.combinations(range(h.n), 2) if e not in present
    ]
    seen = {}
    for r in range(len(missing) + 1):
        for extra in itertools.combinations(missing, r):
            cf = canonical_form(Graph(h.n, list(present) + list(extra)))
            seen[cf.key] = cf
    return list(seen.values())


def _to_sub(p: MotifParameter) -> MotifParameter:
    if p.basis == "sub":
        return p
    if p.basis == "emb":
        return MotifParameter(
            "sub",
            [(cf, c * automorphism_count(cf.graph)) for cf, c in p.terms],
        )
    if p.basis == "strembed":
        scaled = MotifParameter(
            "indsub",
            [(cf, c * automorphism_count(cf.graph)) for cf, c in p.terms],
        )
        return _to_sub(scaled)
    out: dict = {}
    if p.basis == "hom":
        # Hom(H,*) = sum_F Surj(H,F) Sub(F,*); F ranges over spasm(H)
        for cf, c in p.terms:
            for fc in spasm(cf.graph):
                out[fc] = out.get(fc, Fraction(0)) + c * coefficient("Surj", cf, fc)
    else:  # indsub
        # IndSub(H,*) = sum_F ExtInv(H,F) Sub(F,*); F over same-size supergraphs
        for cf, c in p.terms:
            for fc in _supergraph_classes(cf.graph):
                coeff = coefficient("ExtInv", cf, fc)
                if coeff != 0:
                    out[fc] = out.get(fc, Fraction(0)) + c * coeff
    return MotifParameter("sub", out)


def _from_sub(p: MotifParameter, target: str) -> MotifParameter:
    if target == "sub":
        return p
    if target == "emb":
        return MotifParameter(
            "emb",
            [(cf, c / automorphism_count(cf.graph)) for cf, c in p.terms],
        )
    out: dict = {}
    if target == "hom":
        # Sub(H,*) = sum_F SurjInv(H,F) Hom(F,*)
        for cf, c in p.terms:
            for fc in spasm(cf.graph):
                out[fc] = out.get(fc, Fraction(0)) + c * coefficient("SurjInv", cf, fc)
        return MotifParameter("hom", out)
    # indsub / strembed: Sub(H,*) = sum_F Ext(H,F) IndSub(F,*)
    for cf, c in p.terms:
        for fc in _supergraph_classes(cf.graph):
            coeff = coefficient("Ext", cf, fc)
            if coeff != 0:
                out[fc] = out.get(fc, Fraction(0)) + c * coeff
    if target == "indsub":
        return MotifParameter("indsub", out)
    return MotifParameter(
        "strembed",
        [
            (cf, c / automorphism_count(cf.graph))
            for cf, c in MotifParameter("indsub", out).terms
        ],
    )


def change_basis(p: MotifParameter, target: str) -> MotifParameter:
    if target not in BASES:
        raise ValueError(f"unknown basis {target!r}")
    if target == p.basis:
        return p
    return _from_sub(_to_sub(p), target)


# ---------------------------------------------------------------------------
# evaluation


def hom_support_treewidth(p: MotifParameter) -> int:
    """Max treewidth over the Hom-basis support: the predicted evaluation
    exponent minus one."""
    hom = change_basis(p, "hom")
    best = -1
    for cf, _ in hom.terms:
        w, _d = exact_treewidth(cf.graph)
        best = max(best, w)
    return best


def _hom_count(f: Graph, g: Graph, engine: str = "auto") -> int:
    if engine == "dp":
        return count_hom_dp(f, g)
    if engine == "mm":
        return count_hom_mm(f, g)
    if engine == "auto":
        w, _ = exact_treewidth(f)
        if w <= 2:
            return count_hom_mm(f, g)
        return count_hom_dp(f, g)
    if engine == "brute":
        from .oracle import brute_count

        return brute_count("hom", f, g)
    raise ValueError(f"unknown engine {engine!r}")


def evaluate(p: MotifParameter, g: Graph, engine: str = "auto") -> Fraction:
    """Exact value of the parameter on the host, via the Hom basis."""
    hom = change_basis(p, "hom")
    total = Fraction(0)
    for cf, c in hom.terms:
        total += c * _hom_count(cf.graph, g, engine)
    return total


def count_pattern(kind: str, h: Graph, g: Graph, engine: str = "auto") -> int:
    """Convenience counter for a single pattern in any of the five count
    families."""
    if kind == "hom":
        return _hom_count(h, g, engine)
    if kind in ("sub", "indsub"):
        basis = kind
        scale = 1
    elif kind == "emb":
        basis, scale = "sub", automorphism_count(h)
    elif kind == "strembed":
        basis, scale = "indsub", automorphism_count(h)
    else:
        raise ValueError(f"unknown count kind {kind!r}")
    value = evaluate(MotifParameter(basis, {h: Fraction(1)}), g, engine) * scale
    if value.denominator != 1:
        raise AssertionError("pattern count came out non-integral")
    return int(value)


# ---------------------------------------------------------------------------
# tree-count builder


def _all_trees(k: int) -> list:
    """Canonical forms of all unlabeled trees on k vertices, grown by
    attaching leaves."""
    if k == 0:
        return []
    level = {canonical_form(Graph(1))}
    for size in range(2, k + 1):
        nxt = set()
        for cf in level:
            t = cf.graph
            for v in range(t.n):
                bigger = Graph(t.n + 1, list(t.edges) + [(v, t.n)])
                nxt.add(canonical_form(bigger))
        level = nxt
    return sorted(level, key=graph_order_key)


def build_tree_count_parameter(k: int) -> MotifParameter:
    """Sub-basis vector with coefficient 1 on every unlabeled k-vertex
    tree: evaluating it counts all k-vertex tree subgraphs at once."""
    if k > TREE_BUILDER_GUARD:
        raise CapacityError(f"tree-count builder capped at k={TREE_BUILDER_GUARD}")
    if k < 1:
        raise ValueError("k must be positive")
    return MotifParameter("sub", {cf: Fraction(1) for cf in _all_trees(k)})


# ---------------------------------------------------------------------------
# file format


def parse_motif_parameter(text: str) -> MotifParameter:
    """Text format: `basis <name>` then one `<rational> <graph6>` per line.
    `#` starts a comment."""
    basis = None
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if basis is None:
            if parts[0] != "basis" or len(parts) != 2 or parts[1] not in BASES:
                raise ValueError(f"line {lineno}: expected `basis <{'|'.join(BASES)}>`")
            basis = parts[1]
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected `<rational> <graph6>`")
        try:
            coeff = Fraction(parts[0])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad rational {parts[0]!r}") from exc
        terms.append((parse_graph6(parts[1]), coeff))
    if basis is None:
        raise ValueError("missing `basis` line")
    return MotifParameter(basis, terms)


def format_motif_parameter(p: MotifParameter) -> str:
    lines = [f"basis {p.basis}"]
    for cf, c in p.terms:
        lines.append(f"{c} {cf.key}")
    return "\n".join(lines) + "\n"
