"""Finite fields, canonical subspaces, and truncated power-series arithmetic.

Fields are table driven: elements are integer codes 0..q-1 (base-p digits of
the residue polynomial for extension fields) and the add/mul tables are built
once on construction, so everything downstream is pure table lookup.
Subspaces of K^n are kept in reduced row echelon form, which makes equality,
hashing and orbit bookkeeping structural.

The same vectors double as the truncated algebra A_N = K[t]/(t^N): an element
is a coefficient tuple (c_0, ..., c_{N-1}) and its valuation is the index of
the first nonzero coefficient (the valuation of zero is the +infinity
sentinel, never used in arithmetic).
"""

from __future__ import annotations

import itertools
import math

from .errors import BudgetError, InputError, InvariantError

MAX_FIELD_ORDER = 512

INFINITY = math.inf


# ---------------------------------------------------------------------------
# polynomial helpers over the prime field (coefficient lists, index = degree)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        if c:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return _poly_trim(a)


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        inv_lead = pow(b[-1], p - 2, p) if p > 2 else 1
        monic_b = [(c * inv_lead) % p for c in b]
        a, b = b, _poly_mod(a, monic_b, p)
    return a


def _poly_pow_p(h, m, p):
    # h^p mod m, by square and multiply on the exponent p
    result = [1]
    base = list(h)
    exp = p
    while exp:
        if exp & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        exp >>= 1
    return result


def _is_irreducible(f, p):
    """Monic f of degree >= 1 over F_p, coefficient list, index = degree."""
    e = len(f) - 1
    if e == 1:
        return True
    # f is irreducible iff it has no irreducible factor of degree <= e/2,
    # detected through gcd(f, x^(p^d) - x).
    h = [0, 1]
    for _ in range(e // 2):
        h = _poly_pow_p(h, f, p)
        diff = list(h)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(f, _poly_trim(diff), p)
        if len(g) - 1 >= 1:
            return False
    return True


# ---------------------------------------------------------------------------
# fields


class Field:
    """Finite field F_{p^e} with precomputed operation tables.

    Elements are integer codes 0..q-1. For e > 1 the code's base-p digits,
    least significant first, are the coefficients of the residue polynomial
    modulo the (monic, irreducible) modulus.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not _is_prime(p):
            raise InputError(f"characteristic {p} is not prime")
        if e < 1:
            raise InputError(f"extension degree {e} must be >= 1")
        q = p**e
        if q > MAX_FIELD_ORDER:
            raise InputError(f"field order {q} exceeds supported maximum {MAX_FIELD_ORDER}")
        self.p = p
        self.e = e
        self.q = q
        if e == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = self._smallest_irreducible(p, e)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise InputError("modulus must be monic of degree e")
            if not _is_irreducible(list(modulus), p):
                raise InputError(f"modulus {modulus} is not irreducible over F_{p}")
            self.modulus = modulus
        self._build_tables()

    @staticmethod
    def _smallest_irreducible(p, e):
        # Smallest integer code, digits little-endian, constant term first.
        for m in range(p**e):
            digits = []
            x = m
            for _ in range(e):
                digits.append(x % p)
                x //= p
            f = digits + [1]
            if _is_irreducible(list(f), p):
                return tuple(f)
        raise InvariantError(f"no irreducible polynomial of degree {e} over F_{p}")

    def _code_to_poly(self, code):
        digits = []
        for _ in range(self.e):
            digits.append(code % self.p)
            code //= self.p
        return digits

    def _poly_to_code(self, poly):
        code = 0
        for c in reversed(poly):
            code = code * self.p + c
        return code

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.sub = [[(a - b) % p for b in range(p)] for a in range(p)]
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
            self.neg = [(-a) % p for a in range(p)]
            self.inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
            return
        polys = [self._code_to_poly(c) for c in range(q)]
        add = [[0] * q for _ in range(q)]
        sub = [[0] * q for _ in range(q)]
        for a in range(q):
            pa = polys[a]
            for b in range(q):
                pb = polys[b]
                add[a][b] = self._poly_to_code([(x + y) % p for x, y in zip(pa, pb)])
                sub[a][b] = self._poly_to_code([(x - y) % p for x, y in zip(pa, pb)])
        self.add = add
        self.sub = sub
        self.neg = [sub[0][a] for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        mod = list(self.modulus)
        for a in range(q):
            pa = _poly_trim(list(polys[a]))
            for b in range(a, q):
                pb = _poly_trim(list(polys[b]))
                code = self._poly_to_code(_poly_mod(_poly_mul(pa, pb, p), mod, p))
                mul[a][b] = code
                mul[b][a] = code
        self.mul = mul
        inv = [0] * q
        for a in range(1, q):
            row = mul[a]
            for b in range(1, q):
                if row[b] == 1:
                    inv[a] = b
                    break
            else:
                raise InvariantError(f"no inverse for code {a}; modulus not irreducible?")
        self.inv = inv

    def nonzero(self):
        return range(1, self.q)

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.q}(mod={self.modulus})"


_FIELD_CACHE: dict = {}


def field(p: int, e: int = 1, modulus=None) -> Field:
    """Return the finite field F_{p^e}; instances are cached and shared."""
    key = (p, e, tuple(modulus) if modulus is not None else None)
    f = _FIELD_CACHE.get(key)
    if f is None:
        f = Field(p, e, modulus)
        _FIELD_CACHE[key] = f
    return f


def field_from_order(q: int, modulus=None) -> Field:
    """Return the field of order q, factoring q as a prime power."""
    if q < 2:
        raise InputError(f"field order {q} must be >= 2")
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise InputError(f"{q} is not a prime power")
            return field(p, e, modulus)
    raise InputError(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# truncated power series K[t]/(t^N) over a Field, coefficient tuples


def series_mul(a, b, fld):
    """Product of coefficient tuples, truncated to len(a) terms."""
    n = len(a)
    out = [0] * n
    mul = fld.mul
    add = fld.add
    for i, ai in enumerate(a):
        if ai:
            mi = mul[ai]
            top = n - i
            for j in range(min(len(b), top)):
                bj = b[j]
                if bj:
                    k = i + j
                    out[k] = add[out[k]][mi[bj]]
    return tuple(out)


def series_shift(a, k):
    """Multiply by t^k (k >= 0), truncating at the original length."""
    n = len(a)
    return tuple(0 for _ in range(min(k, n))) + a[: max(n - k, 0)]


def series_valuation(a):
    for i, c in enumerate(a):
        if c:
            return i
    return INFINITY


def series_inv(a, fld):
    """Inverse of a unit (valuation 0) in K[t]/(t^N).

    Coefficients come from the first-order recurrence
    b_k = -b_0 * sum_{i=1..k} a_i b_{k-i}.
    """
    if not a or a[0] == 0:
        raise InputError("series has positive valuation, not a unit")
    n = len(a)
    mul, add, neg = fld.mul, fld.add, fld.neg
    b = [0] * n
    b0 = fld.inv[a[0]]
    b[0] = b0
    for k in range(1, n):
        acc = 0
        for i in range(1, k + 1):
            ai = a[i]
            if ai:
                acc = add[acc][mul[ai][b[k - i]]]
        b[k] = mul[neg[b0]][acc] if acc else 0
    return tuple(b)


class AlgElem:
    """Element of A_N = K[t]/(t^N) as a coefficient tuple c_0..c_{N-1}."""

    __slots__ = ("field", "coeffs")

    def __init__(self, fld: Field, coeffs):
        self.field = fld
        self.coeffs = tuple(c % fld.q if not 0 <= c < fld.q else c for c in coeffs)

    @classmethod
    def monomial(cls, fld, n, k, c=1):
        coeffs = [0] * n
        if k < n:
            coeffs[k] = c
        return cls(fld, coeffs)

    def valuation(self):
        return series_valuation(self.coeffs)

    def __mul__(self, other):
        return AlgElem(self.field, series_mul(self.coeffs, other.coeffs, self.field))

    def __add__(self, other):
        add = self.field.add
        return AlgElem(self.field, tuple(add[a][b] for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        sub = self.field.sub
        return AlgElem(self.field, tuple(sub[a][b] for a, b in zip(self.coeffs, other.coeffs)))

    def inverse(self):
        return AlgElem(self.field, series_inv(self.coeffs, self.field))

    def __eq__(self, other):
        return (
            isinstance(other, AlgElem)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"AlgElem{self.coeffs}"


def alg_mul(a: AlgElem, b: AlgElem) -> AlgElem:
    if a.field != b.field or len(a.coeffs) != len(b.coeffs):
        raise InputError("operands live in different truncated algebras")
    return a * b


def alg_inv(a: AlgElem) -> AlgElem:
    return a.inverse()


# ---------------------------------------------------------------------------
# canonical subspaces


def rref(vectors, fld):
    """Reduced row echelon form; returns a tuple of nonzero rows, pivots
    strictly increasing, pivot entries 1, pivot columns elsewhere zero."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return ()
    mul, sub, inv = fld.mul, fld.sub, fld.inv
    ncols = len(rows[0])
    out = []
    col = 0
    while rows and col < ncols:
        pivot_row = None
        for r in rows:
            if r[col]:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        rows.remove(pivot_row)
        c = pivot_row[col]
        if c != 1:
            ci = inv[c]
            mi = mul[ci]
            pivot_row = [mi[x] for x in pivot_row]
        for r in rows:
            f = r[col]
            if f:
                mf = mul[f]
                for j in range(col, ncols):
                    pj = pivot_row[j]
                    if pj:
                        r[j] = sub[r[j]][mf[pj]]
        out.append(pivot_row)
        col += 1
        rows = [r for r in rows if any(r)]
    # eliminate above pivots
    for i in range(len(out) - 1, -1, -1):
        prow = out[i]
        pcol = next(j for j, x in enumerate(prow) if x)
        mul_ = mul
        for k in range(i):
            f = out[k][pcol]
            if f:
                mf = mul_[f]
                row = out[k]
                for j in range(pcol, ncols):
                    pj = prow[j]
                    if pj:
                        row[j] = sub[row[j]][mf[pj]]
    return tuple(tuple(r) for r in out)


class Subspace:
    """A subspace of K^ambient in canonical (reduced row echelon) form."""

    __slots__ = ("field", "ambient", "rows")

    def __init__(self, fld, ambient, rows):
        self.field = fld
        self.ambient = ambient
        self.rows = rows

    @classmethod
    def span(cls, fld, ambient, vectors):
        vectors = list(vectors)
        for v in vectors:
            if len(v) != ambient:
                raise InputError(f"vector length {len(v)} != ambient {ambient}")
        return cls(fld, ambient, rref(vectors, fld))

    @classmethod
    def zero(cls, fld, ambient):
        return cls(fld, ambient, ())

    @classmethod
    def full(cls, fld, ambient):
        rows = tuple(
            tuple(1 if j == i else 0 for j in range(ambient)) for i in range(ambient)
        )
        return cls(fld, ambient, rows)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def pivots(self):
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.rows)

    def reduce(self, vec):
        """Residual of vec after eliminating along this subspace's rows."""
        v = list(vec)
        sub, mul = self.field.sub, self.field.mul
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                mc = mul[c]
                for j in range(p, self.ambient):
                    rj = row[j]
                    if rj:
                        v[j] = sub[v[j]][mc[rj]]
        return tuple(v)

    def contains(self, vec):
        return not any(self.reduce(vec))

    def contains_subspace(self, other):
        return all(self.contains(r) for r in other.rows)

    def intersect(self, other):
        """Lattice meet, by the Zassenhaus double-block reduction."""
        if self.ambient != other.ambient:
            raise InputError("ambient dimension mismatch")
        n = self.ambient
        zero = (0,) * n
        block = [tuple(r) + tuple(r) for r in self.rows]
        block += [tuple(r) + zero for r in other.rows]
        reduced = rref(block, self.field)
        inter = [r[n:] for r in reduced if not any(r[:n])]
        return Subspace(self.field, n, rref(inter, self.field))

    def plus(self, other):
        """Lattice join (sum of subspaces)."""
        if self.ambient != other.ambient:
            raise InputError("ambient dimension mismatch")
        return Subspace.span(self.field, self.ambient, self.rows + other.rows)

    def cut(self, c):
        """Subspace of elements of valuation >= c (rows with pivot >= c)."""
        keep = tuple(r for r, p in zip(self.rows, self.pivots) if p >= c)
        return Subspace(self.field, self.ambient, keep)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient, self.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, pivots={self.pivots})"


def subspace_canon(fld, ambient, vectors) -> Subspace:
    return Subspace.span(fld, ambient, vectors)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.plus(b)


def subspace_contains(a: Subspace, vec) -> bool:
    return a.contains(vec)


# ---------------------------------------------------------------------------
# counting and enumeration


def gaussian_binomial(m, k, q):
    """Number of k-dimensional subspaces of F_q^m."""
    if k < 0 or k > m:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def count_subspaces(m, q):
    """Total number of subspaces of F_q^m (the Galois number)."""
    return sum(gaussian_binomial(m, k, q) for k in range(m + 1))


def enumerate_subspaces(ambient, fld, *, dimension=None, predicate=None, max_count=None):
    """All subspaces of F_q^ambient, optionally of fixed dimension, filtered
    by a predicate, in a deterministic order.

    Subspaces are generated directly in canonical form: dimensions ascending,
    pivot columns in lexicographic order, free entries counted row-major.
    The budget guard fires before any subspace is materialized.
    """
    q = fld.q
    dims = [dimension] if dimension is not None else list(range(ambient + 1))
    total = sum(gaussian_binomial(ambient, d, q) for d in dims)
    if max_count is not None and total > max_count:
        raise BudgetError(f"{total} subspaces exceed budget {max_count}")
    out = []
    for d in dims:
        if d == 0:
            s = Subspace.zero(fld, ambient)
            if predicate is None or predicate(s):
                out.append(s)
            continue
        for pivots in itertools.combinations(range(ambient), d):
            pivot_set = set(pivots)
            free = [
                (i, j)
                for i in range(d)
                for j in range(pivots[i] + 1, ambient)
                if j not in pivot_set
            ]
            for values in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * ambient for _ in range(d)]
                for i in range(d):
                    rows[i][pivots[i]] = 1
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                s = Subspace(fld, ambient, tuple(tuple(r) for r in rows))
                if predicate is None or predicate(s):
                    out.append(s)
    return out


# ---------------------------------------------------------------------------
# orbits of subspaces under multiplication by valuation-zero units


def unit_generators(fld, length, max_exponent=None):
    """Coefficient tuples 1 + c*t^j generating the unit group of
    K[t]/(t^length) modulo scalars (j <= max_exponent)."""
    top = length - 1 if max_exponent is None else min(max_exponent, length - 1)
    gens = []
    for j in range(1, top + 1):
        for c in fld.nonzero():
            coeffs = [0] * length
            coeffs[0] = 1
            coeffs[j] = c
            gens.append(tuple(coeffs))
    return gens


def unit_representatives(fld, length, max_exponent=None):
    """All valuation-zero elements of K[t]/(t^length) with constant term 1
    and support bounded by max_exponent (scalar multiples act trivially on
    subspaces, so these represent the unit action)."""
    top = length - 1 if max_exponent is None else min(max_exponent, length - 1)
    reps = []
    for tail in itertools.product(range(fld.q), repeat=top):
        coeffs = (1,) + tail + (0,) * (length - 1 - top)
        reps.append(coeffs)
    return reps


def subspace_unit_image(sub: Subspace, unit_coeffs) -> Subspace:
    fld = sub.field
    return Subspace.span(
        fld, sub.ambient, [series_mul(unit_coeffs, r, fld) for r in sub.rows]
    )


def unit_image_map(sub: Subspace, gens):
    """BFS closure of {sub} under the unit generators.

    Returns {subspace: witness} where witness is a unit coefficient tuple
    with witness * sub == subspace.
    """
    fld = sub.field
    one = (1,) + (0,) * (sub.ambient - 1)
    images = {sub: one}
    frontier = [sub]
    while frontier:
        nxt = []
        for current in frontier:
            w = images[current]
            for g in gens:
                img = subspace_unit_image(current, g)
                if img not in images:
                    images[img] = series_mul(g, w, fld)
                    nxt.append(img)
        frontier = nxt
    return images


class SubspacePartition:
    """Partition of a list of subspaces into orbits under the valuation-zero
    unit action, with deterministic representatives (lexicographically least
    canonical matrix) and per-orbit unit-image maps."""

    __slots__ = ("subspaces", "orbit_ids", "reps", "orbit_members", "image_maps")

    def __init__(self, subspaces, orbit_ids, reps, orbit_members, image_maps):
        self.subspaces = subspaces
        self.orbit_ids = orbit_ids
        self.reps = reps
        self.orbit_members = orbit_members
        self.image_maps = image_maps

    @property
    def orbit_count(self):
        return len(self.reps)

    def orbit_sizes(self):
        return tuple(len(m) for m in self.orbit_members)

    def witness(self, orbit_id, member: Subspace):
        """Unit u with u * rep == member (member must lie in the orbit)."""
        return self.image_maps[orbit_id][member]


def partition_subspaces(subspaces, fld, *, max_exponent=None) -> SubspacePartition:
    """Orbit partition under multiplication by units of K[t]/(t^ambient).

    max_exponent restricts unit supports to t^1..t^max_exponent; pass it when
    the action on the given subspaces factors through that quotient.
    """
    subspaces = list(subspaces)
    if not subspaces:
        return SubspacePartition((), (), (), (), ())
    ambient = subspaces[0].ambient
    gens = unit_generators(fld, ambient, max_exponent)
    index = {s: i for i, s in enumerate(subspaces)}
    assigned = [None] * len(subspaces)
    orbits = []
    for i in sorted(range(len(subspaces)), key=lambda i: subspaces[i].rows):
        if assigned[i] is not None:
            continue
        images = unit_image_map(subspaces[i], gens)
        members = sorted(
            (index[s] for s in images if s in index),
            key=lambda j: subspaces[j].rows,
        )
        rep_idx = members[0]
        rep = subspaces[rep_idx]
        if rep is not subspaces[i]:
            # rebase witnesses so they map the canonical representative
            w_rep = images[rep]
            w_inv = series_inv(w_rep, fld)
            images = {s: series_mul(w, w_inv, fld) for s, w in images.items()}
        for j in members:
            assigned[j] = len(orbits)
        orbits.append((rep_idx, members, images))
    order = sorted(range(len(orbits)), key=lambda k: subspaces[orbits[k][0]].rows)
    remap = {old: new for new, old in enumerate(order)}
    reps = tuple(subspaces[orbits[k][0]] for k in order)
    members = tuple(tuple(orbits[k][1]) for k in order)
    image_maps = tuple(orbits[k][2] for k in order)
    orbit_ids = tuple(remap[a] for a in assigned)
    return SubspacePartition(tuple(subspaces), orbit_ids, reps, members, image_maps)
