"""Finite models of semigroup rings and their fractional-ideal lattices.

The ring R = K[[S]] (or any residually rational subalgebra with value
semigroup S) is modelled inside the truncated algebra A_N = K[t]/(t^N) with
working truncation N = 2*(g+1), g the Frobenius number of S. Every fractional
ideal between the conductor and the integral closure contains the conductor
block span{t^{g+1}, ..., t^{N-1}}, so it is a subspace of A_N determined by
its head (coefficients 0..g), and the chosen truncation keeps translation by
t^k (k <= g+1) followed by division by a minimal-valuation element exact.

F_0(R) is the set of ideals I with R <= I <= V; it is enumerated by lifting
subspaces of the gap-coordinate quotient and filtering for stability under
the semigroup generators.
"""

from __future__ import annotations

from .errors import BudgetError, InputError, InvariantError
from .fq_linear import (
    Subspace,
    count_subspaces,
    series_inv,
    series_mul,
    series_shift,
    unit_generators,
    unit_image_map,
)
from .numsgp import NumericalSemigroup


class RingModel:
    """A subalgebra of A_N = K[t]/(t^N) standing in for R (or an overring)."""

    def __init__(self, field, sgp: NumericalSemigroup, trunc: int, basis: Subspace):
        self.field = field
        self.sgp = sgp
        self.trunc = trunc
        self.basis = basis
        self.head_dim = sgp.frobenius + 1
        self._cache = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def semigroup_ring(cls, sgp: NumericalSemigroup, field) -> "RingModel":
        if sgp.frobenius < 1:
            raise InputError("value semigroup must have at least one gap")
        g = sgp.frobenius
        n = 2 * (g + 1)
        rows = []
        for s in range(n):
            if sgp.contains(s):
                row = [0] * n
                row[s] = 1
                rows.append(tuple(row))
        basis = Subspace(field, n, tuple(rows))
        return cls(field, sgp, n, basis)

    @classmethod
    def from_basis(cls, field, vectors, trunc: int | None = None) -> "RingModel":
        """Generic subalgebra input: explicit basis vectors of a subalgebra
        of A_N. Validates multiplicative closure, the presence of 1 and of
        the full conductor block, and that the truncation is 2*(g+1) for the
        value semigroup read off the pivots."""
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            raise InputError("empty basis")
        n = trunc if trunc is not None else len(vectors[0])
        sub = Subspace.span(field, n, vectors)
        pivots = set(sub.pivots)
        one = (1,) + (0,) * (n - 1)
        if not sub.contains(one):
            raise InputError("subalgebra must contain 1")
        gap_candidates = [x for x in range(n) if x not in pivots]
        if not gap_candidates:
            raise InputError("subalgebra equals the full algebra; no gaps")
        g = max(gap_candidates)
        if n != 2 * (g + 1):
            raise InputError(
                f"truncation {n} must equal 2*(Frobenius+1) = {2 * (g + 1)}"
            )
        sgp = NumericalSemigroup.from_gaps(gap_candidates)
        for i, u in enumerate(sub.rows):
            for v in sub.rows[i:]:
                if not sub.contains(series_mul(u, v, field)):
                    raise InputError("basis does not span a multiplicatively closed space")
        return cls(field, sgp, n, sub)

    # -- basic objects -----------------------------------------------------

    def one(self):
        return (1,) + (0,) * (self.trunc - 1)

    def monomial(self, k, c=1):
        row = [0] * self.trunc
        row[k] = c
        return tuple(row)

    def ring_ideal(self) -> "RingIdeal":
        return RingIdeal(self, self.basis)

    def full_ideal(self) -> "RingIdeal":
        return RingIdeal(self, Subspace.full(self.field, self.trunc))

    def maximal_ideal_subspace(self) -> Subspace:
        rows = tuple(r for r, p in zip(self.basis.rows, self.basis.pivots) if p > 0)
        return Subspace(self.field, self.trunc, rows)

    def conductor_rows(self):
        g = self.sgp.frobenius
        return tuple(self.monomial(k) for k in range(g + 1, self.trunc))

    def unit_gens(self):
        """Generators of the unit action: the action of valuation-0 units on
        conductor-containing ideals factors through units mod t^(g+1)."""
        gens = self._cache.get("unit_gens")
        if gens is None:
            gens = unit_generators(self.field, self.trunc, self.sgp.frobenius)
            self._cache["unit_gens"] = gens
        return gens

    def span_ideal(self, vectors) -> "RingIdeal":
        """Smallest conductor-containing R-submodule spanning the vectors."""
        rows = list(vectors) + list(self.conductor_rows())
        sub = Subspace.span(self.field, self.trunc, rows)
        while True:
            extra = []
            for b in self.basis.rows:
                for r in sub.rows:
                    prod = series_mul(b, r, self.field)
                    if not sub.contains(prod):
                        extra.append(prod)
            if not extra:
                break
            sub = Subspace.span(self.field, self.trunc, sub.rows + tuple(extra))
        return RingIdeal(self, sub)

    def __repr__(self):
        return f"RingModel(S={self.sgp.generators}, q={self.field.q}, N={self.trunc})"


def semigroup_ring_model(sgp, field) -> RingModel:
    return RingModel.semigroup_ring(sgp, field)


def subalgebra_model(field, vectors, trunc=None) -> RingModel:
    return RingModel.from_basis(field, vectors, trunc)


class RingIdeal:
    """A fractional ideal of the model, as a canonical subspace of A_N that
    contains the conductor block and is stable under the ring basis."""

    __slots__ = ("model", "sub")

    def __init__(self, model: RingModel, sub: Subspace):
        self.model = model
        self.sub = sub

    @property
    def rows(self):
        return self.sub.rows

    @property
    def dim(self):
        return self.sub.dim

    @property
    def value_set(self):
        """Valuations realized below the truncation (the pivot columns)."""
        return self.sub.pivots

    def min_valuation(self):
        return self.sub.pivots[0] if self.sub.rows else None

    def contains(self, other: "RingIdeal") -> bool:
        if other.dim > self.dim:
            return False
        if not set(other.value_set) <= set(self.value_set):
            return False
        return self.sub.contains_subspace(other.sub)

    def contains_vector(self, vec) -> bool:
        return self.sub.contains(vec)

    def in_f0(self) -> bool:
        """R <= I <= V, i.e. the subspace contains 1 (stability is built in)."""
        return self.sub.contains(self.model.one())

    # -- arithmetic --------------------------------------------------------

    def intersect(self, other: "RingIdeal") -> "RingIdeal":
        self._same_model(other)
        return RingIdeal(self.model, self.sub.intersect(other.sub))

    def plus(self, other: "RingIdeal") -> "RingIdeal":
        self._same_model(other)
        return RingIdeal(self.model, self.sub.plus(other.sub))

    def product(self, other: "RingIdeal") -> "RingIdeal":
        self._same_model(other)
        field = self.model.field
        rows = [
            series_mul(u, v, field) for u in self.sub.rows for v in other.sub.rows
        ]
        return RingIdeal(self.model, Subspace.span(field, self.model.trunc, rows))

    def colon(self, other: "RingIdeal") -> "RingIdeal":
        """(self : other) computed inside V: all a in A_N with a*other <= self.

        For the ideals this engine manipulates (operands containing the
        conductor, quotients landing between the conductor and V) this is the
        exact fractional colon. Only the head coefficients a_0..a_g of the
        unknown are constrained (the tail multiplies everything into the
        conductor), and the pure conductor rows of the divisor impose
        nothing, which keeps the linear system small.
        """
        self._same_model(other)
        model = self.model
        field = model.field
        n = model.trunc
        g = model.sgp.frobenius
        h = g + 1
        constraints = []
        for b, p in zip(other.sub.rows, other.sub.pivots):
            if p > g:
                continue
            residuals = [self.sub.reduce(series_shift(b, i)) for i in range(h)]
            for coord in range(n):
                row = tuple(residuals[i][coord] for i in range(h))
                if any(row):
                    constraints.append(row)
        kernel = _kernel(constraints, h, field)
        rows = [vec + (0,) * (n - h) for vec in kernel]
        rows.extend(model.conductor_rows())
        return RingIdeal(model, Subspace.span(field, n, rows))

    def v_closure(self) -> "RingIdeal":
        memo = self.model._cache.setdefault("v_closure", {})
        cached = memo.get(self.sub.rows)
        if cached is None:
            R = self.model.ring_ideal()
            cached = R.colon(R.colon(self))
            memo[self.sub.rows] = cached
        return cached

    def is_divisorial(self) -> bool:
        return self.v_closure() == self

    def translate(self, k: int, unit=None) -> Subspace:
        """The subspace of u * t^k * I; exact for 0 <= k <= g+1.

        The result is generally not a RingIdeal (its conductor block starts
        at t^(k+g+1)), so it is returned as a raw subspace.
        """
        g = self.model.sgp.frobenius
        if not 0 <= k <= g + 1:
            raise InputError(f"shift {k} outside [0, {g + 1}]")
        field = self.model.field
        rows = self.sub.rows
        if unit is not None:
            rows = [series_mul(unit, r, field) for r in rows]
        rows = [series_shift(r, k) for r in rows]
        return Subspace.span(field, self.model.trunc, rows)

    def unit_image(self, unit) -> "RingIdeal":
        field = self.model.field
        sub = Subspace.span(
            field, self.model.trunc, [series_mul(unit, r, field) for r in self.sub.rows]
        )
        return RingIdeal(self.model, sub)

    def normalize(self) -> "RingIdeal":
        return normalize_subspace(self.model, self.sub)

    def __eq__(self, other):
        return (
            isinstance(other, RingIdeal)
            and self.model is other.model
            and self.sub == other.sub
        )

    def __hash__(self):
        return hash(self.sub)

    def __repr__(self):
        vs = [p for p in self.value_set if p <= self.model.sgp.frobenius]
        return f"RingIdeal(values<=g:{vs}, dim={self.dim})"

    def _same_model(self, other):
        if self.model is not other.model:
            raise InputError("ideals belong to different models")


def _kernel(constraint_rows, n, field):
    """Basis of {a in F^n : M a = 0} for the matrix with the given rows."""
    from .fq_linear import rref

    reduced = rref(constraint_rows, field)
    pivots = set()
    for r in reduced:
        pivots.add(next(j for j, x in enumerate(r) if x))
    free = [j for j in range(n) if j not in pivots]
    basis = []
    neg = field.neg
    for f in free:
        vec = [0] * n
        vec[f] = 1
        for r in reduced:
            p = next(j for j, x in enumerate(r) if x)
            vec[p] = neg[r[f]]
        basis.append(tuple(vec))
    return basis


def normalize_subspace(model: RingModel, sub: Subspace) -> RingIdeal:
    """Divide by a minimal-valuation element, landing in F_0.

    The divisor is the canonical echelon row with the least pivot, so the
    result is deterministic; any other minimal-valuation divisor gives a
    unit-equivalent ideal.
    """
    if not sub.rows:
        raise InputError("cannot normalize the zero ideal")
    g = model.sgp.frobenius
    m = sub.pivots[0]
    if m > g + 1:
        raise InvariantError(f"minimal valuation {m} exceeds g+1; precision lost")
    field = model.field
    n = model.trunc
    alpha_unit = series_shift_down(sub.rows[0], m)
    inv = series_inv(alpha_unit, field)
    rows = [series_shift_down(series_mul(inv, r, field), m) for r in sub.rows]
    rows.extend(model.conductor_rows())
    return RingIdeal(model, Subspace.span(field, n, rows))


def series_shift_down(coeffs, m):
    """Divide by t^m: drop the first m coefficients, pad with zeros."""
    return coeffs[m:] + (0,) * m


def normalized_translate_intersection(
    ideal: RingIdeal, shifted: Subspace, k: int, base: Subspace
) -> RingIdeal:
    """normalize(ideal meet (t^k * base)) where shifted = t^k * base.

    When the intersection has minimal valuation m <= g+1 the division is
    exact in A_N directly. When m > g+1 every element of the intersection
    lies inside the conductor, the intersection equals t^k * (base cut at
    m-k), and normalizing that cut of base stays exact.
    """
    model = ideal.model
    g = model.sgp.frobenius
    meet = ideal.sub.intersect(shifted)
    if not meet.rows:
        raise InvariantError("ideal intersection collapsed to zero")
    m = meet.pivots[0]
    if m <= g + 1:
        return normalize_subspace(model, meet)
    return normalize_subspace(model, base.cut(m - k))


# ---------------------------------------------------------------------------
# the ideal lattice F_0


def enumerate_ideals(model: RingModel, max_count: int | None = 100000):
    """All of F_0: subspaces between the ring and V, stable under the ring.

    Ideals correspond to subspaces of the gap-coordinate quotient; each
    candidate is lifted and kept when stable under every minimal generator.
    Returned sorted by (dimension, canonical matrix).
    """
    from .fq_linear import enumerate_subspaces

    sgp = model.sgp
    field = model.field
    g = sgp.frobenius
    gaps = sgp.gaps
    total = count_subspaces(len(gaps), field.q)
    if max_count is not None and total > max_count:
        raise BudgetError(
            f"{total} candidate subspaces over {len(gaps)} gaps exceed budget {max_count}"
        )
    n = model.trunc
    base_rows = model.basis.rows
    low_gens = [a for a in sgp.generators if a <= g]
    out = []
    for u_sub in enumerate_subspaces(len(gaps), field):
        lifted = []
        for urow in u_sub.rows:
            vec = [0] * n
            for coord, val in zip(gaps, urow):
                vec[coord] = val
            lifted.append(tuple(vec))
        sub = Subspace.span(field, n, list(base_rows) + lifted)
        ok = True
        for a in low_gens:
            for w in lifted:
                if not sub.contains(series_shift(w, a)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(RingIdeal(model, sub))
    out.sort(key=lambda ideal: (ideal.dim, ideal.rows))
    return tuple(out)


def module_length(J: RingIdeal, I: RingIdeal) -> int:
    """Length of J/I for I <= J, computed two ways: dimension difference and
    value-set difference. The two must agree; disagreement is an engine bug."""
    if not J.contains(I):
        raise InputError("length requires I <= J")
    by_dim = J.dim - I.dim
    by_values = len(set(J.value_set) - set(I.value_set))
    if by_dim != by_values:
        raise InvariantError(
            f"length mismatch: dim difference {by_dim}, value difference {by_values}"
        )
    return by_dim


# ---------------------------------------------------------------------------
# the distinguished overring T (adjoin one element of valuation g)


def frobenius_overring_ideal(model: RingModel) -> RingIdeal:
    """T = R + y*R for any y of valuation g, as an ideal inside the model.

    T is independent of the chosen y; this is verified across every unit
    representative, and length(T/R) = 1 is checked.
    """
    cached = model._cache.get("overring_ideal")
    if cached is not None:
        return cached
    sgp = model.sgp
    g = sgp.frobenius
    if sgp.contains(g):
        raise InputError("Frobenius number already belongs to the value semigroup")
    field = model.field
    t_ideal = model.span_ideal(list(model.basis.rows) + [model.monomial(g)])
    from .fq_linear import unit_representatives

    # R[y] = R + K*y here: y*R lands in R beyond the constant term because
    # v(y*r) > g for v(r) > 0, so a plain span suffices for the sweep.
    for u in unit_representatives(field, model.trunc, g):
        y = series_mul(u, model.monomial(g), field)
        other = Subspace.span(field, model.trunc, list(model.basis.rows) + [y])
        if other != t_ideal.sub:
            raise InvariantError("overring depends on the valuation-g element chosen")
    if module_length(t_ideal, model.ring_ideal()) != 1:
        raise InvariantError("length of T/R is not 1")
    model._cache["overring_ideal"] = t_ideal
    return t_ideal


def frobenius_overring_model(model: RingModel) -> RingModel:
    """T as a ring model in its own right, with its own (smaller) truncation."""
    cached = model._cache.get("overring_model")
    if cached is not None:
        return cached
    t_ideal = frobenius_overring_ideal(model)
    sgp_t = model.sgp.adjoin_frobenius()
    if sgp_t.frobenius < 1:
        raise InputError("overring has no gaps; nothing to model")
    n_t = 2 * (sgp_t.frobenius + 1)
    rows = [r[:n_t] for r in t_ideal.rows if any(r[:n_t])]
    t_model = RingModel.from_basis(model.field, rows, n_t)
    if t_model.sgp != sgp_t:
        raise InvariantError("overring value semigroup mismatch")
    model._cache["overring_model"] = t_model
    return t_model


def convert_to_overring(ideal: RingIdeal, t_model: RingModel) -> RingIdeal:
    """Reinterpret a T-stable ideal of the base model inside the T model.

    T-stable ideals contain every element of valuation above T's Frobenius
    number, so truncating the canonical rows to T's working precision is
    lossless.
    """
    n_t = t_model.trunc
    rows = [r[:n_t] for r in ideal.rows if any(r[:n_t])]
    rows += list(t_model.conductor_rows())
    sub = Subspace.span(t_model.field, n_t, rows)
    converted = RingIdeal(t_model, sub)
    if converted.product(t_model.ring_ideal()) != converted:
        raise InvariantError("converted ideal is not stable over the overring")
    return converted


def is_overring_stable(ideal: RingIdeal, t_ideal: RingIdeal | None = None) -> bool:
    """Whether I * T = I inside the base model."""
    if t_ideal is None:
        t_ideal = frobenius_overring_ideal(ideal.model)
    return ideal.product(t_ideal) == ideal


def canonical_ideals(model: RingModel, ideals=None, verify: bool = True):
    """All I in F_0 other than R that T does not stabilize.

    Each returned ideal is checked to carry the canonical-ideal signature:
    value set S with g/2 adjoined, no element of valuation g, and biduality
    (I:(I:J)) = J across all of F_0.
    """
    from .numsgp import is_pseudo_symmetric

    if not is_pseudo_symmetric(model.sgp):
        raise InputError("canonical-ideal detection requires a pseudo-symmetric value semigroup")
    if ideals is None:
        ideals = enumerate_ideals(model)
    R = model.ring_ideal()
    t_ideal = frobenius_overring_ideal(model)
    found = tuple(
        I for I in ideals if I != R and not is_overring_stable(I, t_ideal)
    )
    if verify:
        g = model.sgp.frobenius
        tau = model.sgp.tau
        expected_low = tuple(
            sorted(set(x for x in model.sgp.small_members()) | {tau})
        )
        for I in found:
            low = tuple(p for p in I.value_set if p <= g)
            if low != expected_low:
                raise InvariantError(f"canonical candidate has value set {low}")
            if g in I.value_set:
                raise InvariantError("canonical candidate contains a valuation-g element")
            for J in ideals:
                if I.colon(I.colon(J)) != J:
                    raise InvariantError("biduality failed for a canonical candidate")
    return found


# ---------------------------------------------------------------------------
# unit orbits


class OrbitPartition:
    """Partition of a family of ideals under the valuation-0 unit action.

    Representatives are the lexicographically least canonical forms. The
    image map of each orbit records every subspace (inside F_0 or not) that
    any unit sends the representative to, with a witness unit for each.
    """

    __slots__ = ("ideals", "orbit_ids", "reps", "members", "image_maps", "_index")

    def __init__(self, ideals, orbit_ids, reps, members, image_maps):
        self.ideals = ideals
        self.orbit_ids = orbit_ids
        self.reps = reps
        self.members = members
        self.image_maps = image_maps
        self._index = {ideal.sub: i for i, ideal in enumerate(ideals)}

    @property
    def orbit_count(self):
        return len(self.reps)

    def orbit_of(self, ideal: RingIdeal):
        idx = self._index.get(ideal.sub)
        if idx is None:
            raise InputError("ideal not part of the partitioned family")
        return self.orbit_ids[idx]

    def orbit_sizes(self):
        return tuple(len(m) for m in self.members)

    def class_ids_by_dim(self, dim):
        return tuple(i for i, rep in enumerate(self.reps) if rep.dim == dim)


def unit_orbits(ideals) -> OrbitPartition:
    """Exact orbits of the given ideals under multiplication by units."""
    ideals = list(ideals)
    if not ideals:
        return OrbitPartition((), (), (), (), ())
    model = ideals[0].model
    field = model.field
    gens = model.unit_gens()
    index = {ideal.sub: i for i, ideal in enumerate(ideals)}
    assigned = [None] * len(ideals)
    raw = []
    for i in sorted(range(len(ideals)), key=lambda i: ideals[i].rows):
        if assigned[i] is not None:
            continue
        images = unit_image_map(ideals[i].sub, gens)
        member_idx = sorted(
            (index[s] for s in images if s in index),
            key=lambda j: ideals[j].rows,
        )
        rep_i = member_idx[0]
        if rep_i != i:
            w_rep = images[ideals[rep_i].sub]
            w_inv = series_inv(w_rep, field)
            images = {s: series_mul(w, w_inv, field) for s, w in images.items()}
        for j in member_idx:
            assigned[j] = len(raw)
        raw.append((rep_i, member_idx, images))
    order = sorted(range(len(raw)), key=lambda k: ideals[raw[k][0]].rows)
    remap = {old: new for new, old in enumerate(order)}
    reps = tuple(ideals[raw[k][0]] for k in order)
    members = tuple(tuple(raw[k][1]) for k in order)
    image_maps = tuple(raw[k][2] for k in order)
    orbit_ids = tuple(remap[a] for a in assigned)
    return OrbitPartition(tuple(ideals), orbit_ids, reps, members, image_maps)
