"""Conjugacy-class recognition for finite subgroups of PGL2 over finite fields.

Over the algebraic closure, a finite subgroup of PGL2 in characteristic p is
conjugate to one of the classical families (Dickson): a subgroup of the
upper triangular Borel group, a dihedral group D_n with p not dividing n, a
subfield group PSL2 or PGL2 over F_q', or one of the exceptional groups A4,
S4, A5.  For tiny fields the families overlap; the classifier reports a
single primary label under a fixed precedence plus every label that applies
abstractly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import lcm

from .constructions import gl2, sl2
from .ffield import FieldSpec, embedding_table, make_field, quadratic_extension
from .matgrp import (
    Mat2,
    MatGroup,
    ProjGroup,
    commutator_subgroup,
    generating_set,
    identity,
    is_scalar,
    projectivize,
)


class ClassificationError(ValueError):
    pass


# projective order statistics of the exceptional groups
_A4_STATS = {1: 1, 2: 3, 3: 8}
_S4_STATS = {1: 1, 2: 9, 3: 8, 4: 6}
_A5_STATS = {1: 1, 2: 15, 3: 20, 5: 24}

# order statistics of reference subfield groups, filled on demand
_REF_STATS: dict[tuple[str, int], dict[int, int]] = {}
_REF_MAX_Q = 16


@dataclass(frozen=True)
class DicksonClass:
    """Recognition result for a projective group.

    label is the primary family; n is set for Dihedral and Cyclic labels,
    subfield_q for PSL2/PGL2 labels.  all_applicable lists every family the
    group belongs to abstractly, the primary one included.  witness, when
    present, is a change-of-basis matrix over the quadratic extension that
    conjugates the matrix group into upper triangular form.
    """

    label: str
    n: int | None = None
    subfield_q: int | None = None
    all_applicable: tuple[str, ...] = ()
    witness: Mat2 | None = None

    def describe(self) -> str:
        if self.label in ("Dihedral", "Cyclic"):
            return f"{self.label}({self.n})"
        if self.label in ("PSL2", "PGL2"):
            return f"{self.label}({self.subfield_q})"
        return self.label

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "all_applicable": sorted(self.all_applicable),
        }
        if self.n is not None:
            out["n"] = self.n
        if self.subfield_q is not None:
            out["subfield_q"] = self.subfield_q
        if self.witness is not None:
            rows = self.witness.entries()
            out["witness"] = [[list(rows[0][0].coeffs), list(rows[0][1].coeffs)],
                              [list(rows[1][0].coeffs), list(rows[1][1].coeffs)]]
        return out


# ---- Borel conjugability ---------------------------------------------------


def _is_diagonalisable(spec: FieldSpec, m: Mat2) -> bool:
    """True when m is diagonalisable over the algebraic closure."""
    if is_scalar(m) is not None:
        return True
    t = m.trace_i()
    d = m.det_i()
    disc = spec.sub_i(spec.mul_i(t, t), spec.mul_i(4 % spec.p, d))
    return disc != 0


def _eigenlines(ext: FieldSpec, me: tuple[int, int, int, int]) -> list[tuple[int, int]]:
    """Invariant lines of a non-scalar matrix with entries encoded over ext.

    Each line is returned as a normalised vector (first nonzero coordinate
    scaled to 1); the characteristic polynomial splits over ext because ext
    is a quadratic extension of the entry field.
    """
    a, b, c, d = me
    t = ext.add_i(a, d)
    det = ext.sub_i(ext.mul_i(a, d), ext.mul_i(b, c))
    lines = []
    for lam in range(ext.q):
        if ext.add_i(ext.sub_i(ext.mul_i(lam, lam), ext.mul_i(t, lam)), det) != 0:
            continue
        if b != 0:
            v = (b, ext.sub_i(lam, a))
        elif c != 0:
            v = (ext.sub_i(lam, d), c)
        elif a == lam:
            v = (1, 0)
        else:
            v = (0, 1)
        if v[0] != 0:
            s = ext.inv_i(v[0])
            v = (1, ext.mul_i(v[1], s))
        else:
            v = (0, 1)
        if v not in lines:
            lines.append(v)
    return lines


def is_borel_conjugable(G: MatGroup, _commutator: MatGroup | None = None):
    """Whether G is conjugate to a group of upper triangular matrices over
    the quadratic extension of its field.

    Returns (flag, witness); when the flag is True the witness is a basis
    change P over the extension with P^-1 G P upper triangular.  Two
    independent routes are computed and compared: the structural criterion
    (the commutator subgroup contains no diagonalisable matrix besides the
    identity) and a direct common-eigenvector search.
    """
    spec = G.spec
    H = _commutator if _commutator is not None else commutator_subgroup(G)
    one = identity(spec)
    route_a = all(m == one or not _is_diagonalisable(spec, m) for m in H.elements)

    ext = quadratic_extension(spec)
    emb = embedding_table(spec, ext)
    gens = generating_set(G)
    gens_e = [tuple(emb[x] for x in g.e) for g in gens]
    base = next((m for m in G.sorted_elements() if is_scalar(m) is None), None)
    witness = None
    if base is None:
        # every element scalar: already upper triangular
        route_b = True
        witness = identity(ext)
    else:
        route_b = False
        for v in _eigenlines(ext, tuple(emb[x] for x in base.e)):
            stable = True
            for a, b, c, d in gens_e:
                w0 = ext.add_i(ext.mul_i(a, v[0]), ext.mul_i(b, v[1]))
                w1 = ext.add_i(ext.mul_i(c, v[0]), ext.mul_i(d, v[1]))
                if ext.sub_i(ext.mul_i(w0, v[1]), ext.mul_i(w1, v[0])) != 0:
                    stable = False
                    break
            if stable:
                route_b = True
                u = (0, 1) if v[0] != 0 else (1, 0)
                witness = Mat2(ext, (v[0], u[0], v[1], u[1]))
                break
    assert route_a == route_b, "Borel criteria disagree"
    if route_b and witness is not None and base is not None:
        pi = witness.inv()
        for ge in gens_e:
            conj = pi * Mat2(ext, ge) * witness
            assert conj.e[2] == 0
    return route_a, witness


# ---- abstract family tests -------------------------------------------------


def proj_order_stats(P: ProjGroup) -> dict[int, int]:
    c = Counter(P.proj_order(m) for m in P.classes)
    return dict(c)


def _cyclic_n(P: ProjGroup) -> int | None:
    for m in P.classes:
        if P.proj_order(m) == P.order:
            return P.order
    return None


def _dihedral_n(P: ProjGroup) -> int | None:
    """n >= 2 when P is abstractly dihedral of order 2n (D_2 = C2 x C2)."""
    N = P.order
    if N < 4 or N % 2:
        return None
    n = N // 2
    for c in P.sorted_classes():
        if P.proj_order(c) != n:
            continue
        cyc = P.subgroup_closure([c])
        if len(cyc) != n:
            continue
        if all(P.proj_order(s) == 2 for s in P.classes - cyc):
            return n
    return None


def _element_degree(spec: FieldSpec, x: int) -> int:
    """Degree over the prime field of the element with encoding x."""
    d = 1
    y = spec._pow_i(x, spec.p)
    while y != x:
        d += 1
        y = spec._pow_i(y, spec.p)
    return d


def _trace_field_size(spec: FieldSpec, H: MatGroup) -> int:
    s = 1
    for m in H.elements:
        s = lcm(s, _element_degree(spec, m.trace_i()))
    return spec.p**s


def _reference_stats(kind: str, qsub: int, p: int) -> dict[int, int] | None:
    if qsub > _REF_MAX_Q:
        return None
    key = (kind, qsub)
    if key not in _REF_STATS:
        r = 1
        while p**r < qsub:
            r += 1
        spec = make_field(p, r)
        G = gl2(spec) if kind == "PGL2" else sl2(spec)
        _REF_STATS[key] = proj_order_stats(projectivize(G))
    return _REF_STATS[key]


def _subfield_matches(P: ProjGroup) -> list[tuple[str, int]]:
    """(kind, q') pairs with P abstractly the subfield group over F_q'."""
    p = P.spec.p
    out = []
    own_stats = None
    qsub = p
    while qsub**3 - qsub <= 2 * P.order:
        full = qsub**3 - qsub
        half = full // 2 if qsub % 2 else full
        if P.order in (half, full):
            if own_stats is None:
                own_stats = proj_order_stats(P)
            if P.order == half:
                stats = _reference_stats("PSL2", qsub, p)
                if stats is None or stats == own_stats:
                    out.append(("PSL2", qsub))
                    if qsub % 2 == 0:
                        out.append(("PGL2", qsub))
            if P.order == full and qsub % 2:
                stats = _reference_stats("PGL2", qsub, p)
                if stats is None or stats == own_stats:
                    out.append(("PGL2", qsub))
        qsub *= p
    return out


def _exceptional_match(P: ProjGroup) -> str | None:
    stats = proj_order_stats(P)
    if P.order == 12 and stats == _A4_STATS:
        return "A4"
    if P.order == 24 and stats == _S4_STATS:
        return "S4"
    if P.order == 60 and stats == _A5_STATS:
        return "A5"
    return None


def classify_projective(P: ProjGroup) -> DicksonClass:
    """Primary family of P under the precedence Borel > Cyclic > Dihedral >
    subfield PSL2/PGL2 (only for q' > 3) > exceptional, with all applicable
    families recorded."""
    G = P.base
    H = commutator_subgroup(G)
    borel_flag, witness = is_borel_conjugable(G, _commutator=H)
    cyc_n = _cyclic_n(P)
    dih_n = _dihedral_n(P)
    subfields = _subfield_matches(P)
    exc = _exceptional_match(P)

    applicable = []
    if borel_flag:
        applicable.append("BorelConjugable")
    if cyc_n is not None:
        applicable.append(f"Cyclic({cyc_n})")
    if dih_n is not None:
        applicable.append(f"Dihedral({dih_n})")
    for kind, qsub in subfields:
        applicable.append(f"{kind}({qsub})")
    if exc is not None:
        applicable.append(exc)

    if borel_flag:
        return DicksonClass("BorelConjugable", all_applicable=tuple(applicable),
                            witness=witness)
    if cyc_n is not None:
        # a cyclic projective image forces an abelian matrix group, which is
        # always Borel conjugable, so this branch should be unreachable
        return DicksonClass("Cyclic", n=cyc_n, all_applicable=tuple(applicable))
    if dih_n is not None:
        return DicksonClass("Dihedral", n=dih_n, all_applicable=tuple(applicable))
    big = [(kind, qsub) for kind, qsub in subfields if qsub > 3]
    if big:
        # a PSL2 = PGL2 coincidence (even q') is reported as PSL2
        kind, qsub = min(big, key=lambda kq: (kq[1], kq[0] != "PSL2"))
        tf = _trace_field_size(G.spec, H)
        if tf != qsub:
            raise ClassificationError(
                f"commutator trace field F_{tf} does not match subfield q'={qsub}")
        return DicksonClass(kind, subfield_q=qsub, all_applicable=tuple(applicable))
    if exc is not None:
        return DicksonClass(exc, all_applicable=tuple(applicable))
    raise ClassificationError(
        f"projective group of order {P.order} fits no classical family")


def classify_group(G: MatGroup) -> DicksonClass:
    return classify_projective(projectivize(G))


# ---- helpers used throughout the classification ----------------------------


def traceless_count(P: ProjGroup) -> int:
    return len(P.traceless_classes())


def commutator_trace_set(G: MatGroup) -> set[int]:
    """Integer-encoded traces occurring on the commutator subgroup of G."""
    H = commutator_subgroup(G)
    return {m.trace_i() for m in H.elements}


def expected_exceptional_traces(spec: FieldSpec, label: str) -> set[int]:
    """Commutator trace sets forced by an exceptional projective image.

    For A4 the set is {0, 2, -2}; S4 adds 1 and -1; A5 consists of 0, 1, 2,
    the golden ratio phi (a root of x^2 - x - 1) and phi - 1, each with its
    negative.  The A5 set does not depend on the choice of root.
    """
    neg = spec.neg_i
    two = 2 % spec.p
    if label == "A4":
        return {0, two, neg(two)}
    if label == "S4":
        return {0, 1, neg(1), two, neg(two)}
    if label == "A5":
        phi = None
        for x in range(spec.q):
            if spec.sub_i(spec.sub_i(spec.mul_i(x, x), x), 1 % spec.p) == 0:
                phi = x
                break
        if phi is None:
            raise ValueError("golden ratio does not exist over this field")
        phim1 = spec.sub_i(phi, 1)
        return {0, 1, neg(1), two, neg(two), phi, neg(phi), phim1, neg(phim1)}
    raise ValueError(f"unknown exceptional label {label!r}")
