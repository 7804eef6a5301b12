"""Star operations on a ring model, represented by their closed families.

A star operation on the finite lattice F_0 is determined by the set of its
closed ideals, and the sets that arise this way are exactly the families that
contain every divisorial ideal, are saturated under unit equivalence, and are
stable under normalized translate-intersections: for closed I, J, every
normalize(I meet u*t^k*J) is closed again. Enumerating star operations
therefore means enumerating the elements of a closure system over orbit ids,
which is done by seeded closure expansion from the divisorial base family
(never by iterating all subsets).

The closure data is tabulated once per model: for each ordered pair of orbit
representatives (I, J) and every distinct translate u*t^k*J (units taken from
the precomputed orbit image maps, shifts up to g+1, both reductions of a
general translate difference), the orbit id of the normalized intersection.
"""

from __future__ import annotations

from .errors import BudgetError, InputError, InvariantError
from .fq_linear import unit_representatives
from .ring_model import (
    RingIdeal,
    RingModel,
    enumerate_ideals,
    frobenius_overring_ideal,
    frobenius_overring_model,
    convert_to_overring,
    is_overring_stable,
    normalized_translate_intersection,
    unit_orbits,
)

DEFAULT_MAX_ORBITS = 512
DEFAULT_MAX_IDEALS = 100000


class RingWorkspace:
    """Shared per-model state: the ideal lattice, its orbit partition, the
    divisorial base family, and (lazily) the closure table."""

    def __init__(self, model: RingModel, max_ideals=DEFAULT_MAX_IDEALS):
        self.model = model
        self.ideals = enumerate_ideals(model, max_ideals)
        self.index = {ideal.sub: i for i, ideal in enumerate(self.ideals)}
        self.partition = unit_orbits(self.ideals)
        self.divisorial_ids = frozenset(
            oid
            for oid, rep in enumerate(self.partition.reps)
            if rep.is_divisorial()
        )
        self._table = None
        self._stars = None
        self._unit_action = None

    def ideal_id(self, ideal: RingIdeal) -> int:
        idx = self.index.get(ideal.sub)
        if idx is None:
            raise InvariantError("ideal escaped the enumerated lattice")
        return idx

    def orbit_id(self, ideal: RingIdeal) -> int:
        return self.partition.orbit_ids[self.ideal_id(ideal)]

    def closed_lift(self, orbit_ids):
        """All ideals whose orbit lies in the family."""
        return [
            ideal
            for ideal, oid in zip(self.ideals, self.partition.orbit_ids)
            if oid in orbit_ids
        ]

    # -- closure table ------------------------------------------------------

    def table(self) -> "ClosureTable":
        if self._table is None:
            self._table = ClosureTable.build(self)
        return self._table

    def close(self, orbit_ids) -> frozenset:
        """Smallest valid closed family containing the given orbit ids."""
        pair = self.table().pair_classes
        fam = set(orbit_ids) | self.divisorial_ids
        changed = True
        while changed:
            changed = False
            current = list(fam)
            for i in current:
                for j in current:
                    extra = pair[(i, j)] - fam
                    if extra:
                        fam |= extra
                        changed = True
        return frozenset(fam)

    # -- unit action --------------------------------------------------------

    def unit_action(self):
        """(unit index, ideal index) -> ideal index of u*I when u*I stays in
        F_0, else None; used by the exhaustive equivariance check."""
        if self._unit_action is None:
            model = self.model
            units = unit_representatives(
                model.field, model.trunc, model.sgp.frobenius
            )
            table = []
            for u in units:
                row = []
                for ideal in self.ideals:
                    img = ideal.unit_image(u)
                    row.append(self.index.get(img.sub))
                table.append(tuple(row))
            self._unit_action = (units, tuple(table))
        return self._unit_action


def workspace(model: RingModel) -> RingWorkspace:
    ws = model._cache.get("workspace")
    if ws is None:
        ws = RingWorkspace(model)
        model._cache["workspace"] = ws
    return ws


class ClosureTable:
    """pair (orbit i, orbit j) -> frozenset of orbit ids hit by normalized
    translate-intersections normalize(rep_i meet u*t^k*rep_j)."""

    __slots__ = ("pair_classes", "entry_count")

    def __init__(self, pair_classes, entry_count):
        self.pair_classes = pair_classes
        self.entry_count = entry_count

    @classmethod
    def build(cls, ws: RingWorkspace) -> "ClosureTable":
        model = ws.model
        g = model.sgp.frobenius
        part = ws.partition
        n_orbits = part.orbit_count
        # distinct translates t^k * (u * rep_j), with provenance for the
        # deep-normalization path
        translates = []
        for j in range(n_orbits):
            seen = {}
            for image_sub in part.image_maps[j]:
                base_ideal = RingIdeal(model, image_sub)
                for k in range(0, g + 2):
                    shifted = base_ideal.translate(k)
                    if shifted.rows and shifted not in seen:
                        seen[shifted] = (k, image_sub)
            translates.append(seen)
        pair = {}
        entries = 0
        orbit_of = {}
        for i in range(n_orbits):
            rep = part.reps[i]
            for j in range(n_orbits):
                hits = set()
                for shifted, (k, base_sub) in translates[j].items():
                    key = (i, shifted)
                    oid = orbit_of.get(key)
                    if oid is None:
                        res = normalized_translate_intersection(
                            rep, shifted, k, base_sub
                        )
                        oid = ws.orbit_id(res)
                        orbit_of[key] = oid
                    hits.add(oid)
                    entries += 1
                pair[(i, j)] = frozenset(hits)
        return cls(pair, entries)


class StarOperation:
    """A star operation on the model, canonically the set of orbit ids of
    its closed ideals. Equality is set equality over the same model."""

    __slots__ = ("ws", "closed", "_apply_cache")

    def __init__(self, ws: RingWorkspace, closed):
        self.ws = ws
        self.closed = frozenset(closed)
        self._apply_cache = {}

    @property
    def model(self):
        return self.ws.model

    def key(self):
        return tuple(sorted(self.closed))

    def is_closed(self, ideal: RingIdeal) -> bool:
        return self.ws.orbit_id(ideal) in self.closed

    def closed_ideals(self):
        return self.ws.closed_lift(self.closed)

    def apply(self, ideal: RingIdeal) -> RingIdeal:
        """Closure map: the smallest closed member of F_0 containing the
        ideal (the closed ideals of F_0 are intersection-stable, so the
        minimum exists and equals the star image)."""
        idx = self.ws.ideal_id(ideal)
        cached = self._apply_cache.get(idx)
        if cached is not None:
            return self.ws.ideals[cached]
        result = None
        for candidate, oid in zip(self.ws.ideals, self.ws.partition.orbit_ids):
            if oid in self.closed and candidate.contains(ideal):
                result = candidate if result is None else result.intersect(candidate)
        if result is None:
            raise InvariantError("no closed ideal contains the argument")
        ridx = self.ws.ideal_id(result)
        if self.ws.partition.orbit_ids[ridx] not in self.closed:
            raise InvariantError("closure map left the closed family")
        self._apply_cache[idx] = ridx
        return self.ws.ideals[ridx]

    def __eq__(self, other):
        return (
            isinstance(other, StarOperation)
            and self.ws is other.ws
            and self.closed == other.closed
        )

    def __hash__(self):
        return hash((id(self.ws), self.closed))

    def __repr__(self):
        return f"StarOperation(closed_orbits={sorted(self.closed)})"


def identity_star(model: RingModel) -> StarOperation:
    """d: every ideal is closed."""
    ws = workspace(model)
    return StarOperation(ws, range(ws.partition.orbit_count))


def divisorial_star(model: RingModel) -> StarOperation:
    """v: exactly the divisorial ideals are closed."""
    ws = workspace(model)
    return StarOperation(ws, ws.divisorial_ids)


def star_d(model):
    return identity_star(model)


def star_v(model):
    return divisorial_star(model)


def generated_star(ideal: RingIdeal) -> StarOperation:
    """The star operation generated by one ideal: J maps to
    (I:(I:J)) meet J^v. Its closed family is computed pointwise and then
    validated against the closure system; a failure indicates an engine bug
    rather than bad input."""
    ws = workspace(ideal.model)
    closed_ideals = []
    for J in ws.ideals:
        image = ideal.colon(ideal.colon(J)).intersect(J.v_closure())
        if image == J:
            closed_ideals.append(J)
    family = frozenset(ws.orbit_id(J) for J in closed_ideals)
    # saturation: every orbit member of a closed ideal must be closed
    lift = {J.sub for J in ws.closed_lift(family)}
    if {J.sub for J in closed_ideals} != lift:
        raise InvariantError("generated star has an unsaturated closed family")
    if ws.close(family) != family:
        raise InvariantError("generated star family is not closure stable")
    return StarOperation(ws, family)


def star_gen(ideal):
    return generated_star(ideal)


def induced_star(model: RingModel, ideals) -> StarOperation:
    """The star operation induced by a set of ideals (the meet of their
    generated stars): its closed family is the closure of theirs together
    with the base. An empty set yields the divisorial closure."""
    ws = workspace(model)
    ids = frozenset(ws.orbit_id(I) for I in ideals)
    return StarOperation(ws, ws.close(ids))


def star_from_set(model, ideals):
    return induced_star(model, ideals)


def enumerate_stars(model: RingModel, max_orbits: int | None = DEFAULT_MAX_ORBITS):
    """Every star operation on the model, by breadth-first seeded closure.

    Starting from the divisorial family, repeatedly add one absent orbit and
    re-close; every closed family is reached this way because the closure
    operator is monotone. Results are deduplicated by canonical family
    encoding and returned sorted by (size, ids).
    """
    ws = workspace(model)
    if ws._stars is not None:
        return ws._stars
    if max_orbits is not None and ws.partition.orbit_count > max_orbits:
        raise BudgetError(
            f"{ws.partition.orbit_count} orbits exceed the cap {max_orbits}"
        )
    base = ws.close(frozenset())
    if base != ws.divisorial_ids:
        raise InvariantError("closure of the empty family is not the divisorial family")
    seen = {base}
    frontier = [base]
    while frontier:
        nxt = []
        for fam in frontier:
            for oid in range(ws.partition.orbit_count):
                if oid not in fam:
                    bigger = ws.close(fam | {oid})
                    if bigger not in seen:
                        seen.add(bigger)
                        nxt.append(bigger)
        frontier = nxt
    families = sorted(seen, key=lambda f: (len(f), tuple(sorted(f))))
    stars = tuple(StarOperation(ws, fam) for fam in families)
    ws._stars = stars
    return stars


def restrict_star(star: StarOperation, t_model: RingModel | None = None) -> StarOperation:
    """Restriction of a star operation to the distinguished overring T.

    Defined away from the identity and the divisorial closure (those two are
    exactly the operations that may fail to close T). The closed family of
    the restriction consists of the closed ideals that are T-stable,
    re-normalized over T's unit orbits.
    """
    ws = star.ws
    model = ws.model
    all_ids = frozenset(range(ws.partition.orbit_count))
    if star.closed == all_ids or star.closed == ws.divisorial_ids:
        raise InputError("restriction is defined away from d and v")
    if t_model is None:
        t_model = frobenius_overring_model(model)
    t_ws = workspace(t_model)
    t_ideal = frobenius_overring_ideal(model)
    t_family = set()
    for ideal in star.closed_ideals():
        if is_overring_stable(ideal, t_ideal):
            t_family.add(t_ws.orbit_id(convert_to_overring(ideal, t_model)))
    family = frozenset(t_family)
    if t_ws.close(family) != family:
        raise InvariantError("restricted family is not a valid star operation on T")
    return StarOperation(t_ws, family)


# ---------------------------------------------------------------------------
# verification


def verify_star_axioms(star: StarOperation, full_unit_sweep: bool = False):
    """Exhaustively checks, on F_0: extensivity, monotonicity, idempotence,
    fixedness of R, the closed-family consistency, domination by the
    divisorial closure, and unit-translate equivariance (via orbit witnesses,
    or across every unit representative when full_unit_sweep is set).
    Raises InvariantError on the first violation."""
    ws = star.ws
    model = ws.model
    R = model.ring_ideal()
    if star.apply(R) != R:
        raise InvariantError("star does not fix the ring")
    images = [star.apply(J) for J in ws.ideals]
    for J, image in zip(ws.ideals, images):
        if not image.contains(J):
            raise InvariantError("star is not extensive")
        if star.apply(image) != image:
            raise InvariantError("star is not idempotent")
        if (star.is_closed(J)) != (image == J):
            raise InvariantError("closed family disagrees with the closure map")
        if not J.v_closure().contains(image):
            raise InvariantError("star is not dominated by the divisorial closure")
    for a, I in enumerate(ws.ideals):
        for b, J in enumerate(ws.ideals):
            if a != b and J.contains(I) and not images[b].contains(images[a]):
                raise InvariantError("star is not monotone")
    part = ws.partition
    if full_unit_sweep:
        units, action = ws.unit_action()
        image_idx = [ws.ideal_id(img) for img in images]
        for u_i in range(len(units)):
            row = action[u_i]
            for j in range(len(ws.ideals)):
                tj = row[j]
                if tj is None:
                    continue
                lhs = image_idx[tj]
                rhs = row[image_idx[j]]
                if rhs is None or lhs != rhs:
                    raise InvariantError("star is not unit-translate equivariant")
    else:
        for oid in range(part.orbit_count):
            rep = part.reps[oid]
            rep_image = star.apply(rep)
            for member_idx in part.members[oid]:
                member = part.ideals[member_idx]
                w = part.image_maps[oid][member.sub]
                if star.apply(member) != rep_image.unit_image(w):
                    raise InvariantError("star is not equivariant on orbit witnesses")


def _unit_image_in_f0(ws, ideal, unit):
    img = ideal.unit_image(unit)
    return img if img.sub in ws.index else None


# ---------------------------------------------------------------------------
# classification of closed families for the n = 4 shape


def classify_family(ws: RingWorkspace, family: frozenset) -> str:
    """Human-readable tag for a closed family: the identity, the divisorial
    closure, everything-but-the-canonical-class, or a union of unit classes
    of 1-dim-over-T ideals together with T."""
    all_ids = frozenset(range(ws.partition.orbit_count))
    if family == all_ids:
        return "identity"
    if family == ws.divisorial_ids:
        return "divisorial"
    model = ws.model
    t_ideal = frobenius_overring_ideal(model)
    canonical_ids = frozenset(
        oid
        for oid, rep in enumerate(ws.partition.reps)
        if rep != model.ring_ideal() and not is_overring_stable(rep, t_ideal)
    )
    if family == all_ids - canonical_ids:
        return "all_but_canonical_class"
    t_oid = ws.orbit_id(t_ideal)
    dim2 = frozenset(
        oid
        for oid, rep in enumerate(ws.partition.reps)
        if rep.dim == t_ideal.dim + 1
        and is_overring_stable(rep, t_ideal)
        and not rep.is_divisorial()
    )
    extra = family - ws.divisorial_ids
    if t_oid in extra and extra - {t_oid} <= dim2:
        return "unit_class_union_with_overring"
    return "other"
