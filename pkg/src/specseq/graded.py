"""Finite-dimensional graded quotient algebras and their homological toolkit.

Algebras are quotients k[x_1..x_n]/I by homogeneous relations, built one
degree at a time by echelonizing the relation span inside the monomial
basis; construction fails unless some degree empties out, which certifies
finite dimensionality.  On top of that sit free modules with twisted
generators, module maps with homogeneous polynomial entries, Koszul
complexes, minimal free resolutions, tensor products of graded complexes,
and the expansion of all of this into plain vector-space chain complexes
whose basis labels remember generator, monomial, and internal degree.

Monomials are exponent tuples ordered by descending lexicographic order
within each degree, so the leading term of a reduced polynomial is its
first monomial.
"""

from collections import namedtuple
from math import comb

from .complexes import ChainComplex
from .errors import NotFiniteDimensional, ParseError
from .filtration import from_basis_levels
from .linalg import Matrix, Subspace, apply_to_subspace, kernel, quotient, subspace_sum


def monomials(num_vars, degree):
    """Exponent tuples of the given total degree, descending lexicographic."""
    if degree < 0:
        return []
    if num_vars == 0:
        return [()] if degree == 0 else []
    out = []
    for e in range(degree, -1, -1):
        for rest in monomials(num_vars - 1, degree - e):
            out.append((e,) + rest)
    return out


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def poly_mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = monomial_mul(ma, mb)
            cur = out.get(key)
            val = ca * cb if cur is None else cur + ca * cb
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def poly_degree(poly):
    """Common total degree of a homogeneous polynomial; None for zero."""
    degs = {sum(m) for m in poly}
    if not degs:
        return None
    if len(degs) != 1:
        raise ValueError("polynomial is not homogeneous")
    return degs.pop()


def parse_poly(field, num_vars, text, names=None):
    """Parse "c*x^a*y^b + ..." into a monomial-keyed coefficient dict."""
    names = list(names) if names else [f"x{i + 1}" for i in range(num_vars)]
    if len(names) != num_vars:
        raise ValueError("need one name per variable")
    index = {nm: i for i, nm in enumerate(names)}
    s = text.replace("−", "-").strip()
    if not s:
        raise ParseError("empty polynomial")
    out = {}
    pos = 0
    while pos < len(s):
        sign = field.one
        seen = False
        while pos < len(s) and (s[pos] in "+-" or s[pos].isspace()):
            if s[pos] == "-":
                sign = -sign
                seen = True
            elif s[pos] == "+":
                seen = True
            pos += 1
        end = pos
        last = ""
        while end < len(s):
            ch = s[end]
            # a sign directly after '^' belongs to the exponent, not a new term
            if ch in "+-" and last != "^":
                break
            if not ch.isspace():
                last = ch
            end += 1
        term = s[pos:end].strip()
        pos = end
        if not term:
            raise ParseError(f"dangling sign in polynomial {text!r}")
        coef = sign
        expo = [0] * num_vars
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                raise ParseError(f"empty factor in term {term!r}")
            if factor[0].isdigit():
                coef = coef * field.parse(factor)
                continue
            name, sep, power = factor.partition("^")
            name = name.strip()
            if name not in index:
                raise ParseError(f"unknown variable {name!r}")
            if sep and not power.strip():
                raise ParseError(f"missing exponent in {factor!r}")
            try:
                e = int(power) if power else 1
            except ValueError:
                raise ParseError(f"bad exponent in {factor!r}") from None
            if e < 0:
                raise ParseError(f"negative exponent in {factor!r}")
            expo[index[name]] += e
        mono = tuple(expo)
        cur = out.get(mono)
        val = coef if cur is None else cur + coef
        if val:
            out[mono] = val
        else:
            out.pop(mono, None)
    return out


def render_poly(poly, names):
    if not poly:
        return "0"
    parts = []
    for mono in sorted(poly, key=lambda m: (sum(m),) + tuple(-e for e in m)):
        c = poly[mono]
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        cs = str(c)
        if factors and cs == "1":
            cs = ""
        elif factors and cs == "-1":
            cs = "-"
        body = "*".join(factors)
        if cs and body:
            parts.append(f"{cs}{'' if cs == '-' else '*'}{body}")
        else:
            parts.append(cs or body)
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


class GradedAlgebra:
    """Standard-graded quotient k[x_1..x_n]/I with a finite monomial basis."""

    __slots__ = (
        "field",
        "num_vars",
        "names",
        "relations",
        "top_degree",
        "_basis",
        "_basis_index",
        "_reducers",
        "_mult",
    )

    def __init__(self, field, num_vars, names, relations, basis, reducers, top_degree):
        self.field = field
        self.num_vars = num_vars
        self.names = tuple(names)
        self.relations = tuple(relations)
        self.top_degree = top_degree
        self._basis = basis
        self._basis_index = {
            d: {m: i for i, m in enumerate(mons)} for d, mons in basis.items()
        }
        self._reducers = reducers
        self._mult = {}

    def basis(self, d):
        return self._basis.get(d, ())

    def dimension(self, d):
        return len(self.basis(d))

    def total_dim(self):
        return sum(len(v) for v in self._basis.values())

    def dims(self):
        return tuple(len(self._basis[d]) for d in range(self.top_degree + 1))

    def reduce(self, poly):
        """Canonical representative supported on standard monomials."""
        by_degree = {}
        for mono, c in poly.items():
            by_degree.setdefault(sum(mono), {})[mono] = c
        out = {}
        for d, part in by_degree.items():
            if d > self.top_degree:
                continue
            reducer, all_monos, mono_pos = self._reducers[d]
            if reducer.is_zero:
                out.update(part)
                continue
            vec = {mono_pos[m]: c for m, c in part.items()}
            _, res = reducer.reduce(vec)
            for i, c in res.items():
                out[all_monos[i]] = c
        return out

    def mult(self, i, d):
        """Matrix of multiplication by the i-th variable, basis(d) -> basis(d+1)."""
        key = (i, d)
        cached = self._mult.get(key)
        if cached is not None:
            return cached
        src = self.basis(d)
        tgt_index = self._basis_index.get(d + 1, {})
        unit = tuple(1 if k == i else 0 for k in range(self.num_vars))
        entries = {}
        for j, mono in enumerate(src):
            prod = self.reduce({monomial_mul(mono, unit): self.field.one})
            for m2, c in prod.items():
                entries[(tgt_index[m2], j)] = c
        m = Matrix(self.field, len(tgt_index), len(src), entries)
        self._mult[key] = m
        return m

    def __repr__(self):
        return (
            f"<GradedAlgebra {self.num_vars} vars dims {self.dims()} "
            f"over {self.field}>"
        )


def build_quotient_algebra(field, num_vars, gens, top_bound=64, names=None):
    """Quotient by homogeneous relations, degree by degree.

    Stops at the first degree whose basis is empty; since the relation span
    is an ideal slice, every higher degree is then empty too.  Raises
    NotFiniteDimensional if no degree up to top_bound empties out.
    """
    names = list(names) if names else [f"x{i + 1}" for i in range(num_vars)]
    relations = []
    for g in gens:
        poly = (
            parse_poly(field, num_vars, g, names)
            if isinstance(g, str)
            else {tuple(m): field.element(c) for m, c in g.items() if field.element(c)}
        )
        if not poly:
            raise ValueError("zero relation")
        deg = poly_degree(poly)
        if deg == 0:
            raise ValueError("constant relation collapses the algebra")
        relations.append(poly)
    by_degree = {}
    for poly in relations:
        by_degree.setdefault(poly_degree(poly), []).append(poly)
    basis = {}
    reducers = {}
    d = 0
    while True:
        if d > top_bound:
            raise NotFiniteDimensional(
                f"no vanishing degree found up to degree {top_bound}"
            )
        all_monos = monomials(num_vars, d)
        mono_pos = {m: i for i, m in enumerate(all_monos)}
        cols = []
        for e, polys in by_degree.items():
            if e > d:
                continue
            for shift in monomials(num_vars, d - e):
                for poly in polys:
                    cols.append(
                        {mono_pos[monomial_mul(shift, m)]: c for m, c in poly.items()}
                    )
        reducer = Subspace.spanned_by_columns(field, len(all_monos), cols)
        standard = [
            m for i, m in enumerate(all_monos) if i not in set(reducer.pivots)
        ]
        if not standard:
            top_degree = d - 1
            break
        basis[d] = tuple(standard)
        reducers[d] = (reducer, all_monos, mono_pos)
        d += 1
    return GradedAlgebra(field, num_vars, names, relations, basis, reducers, top_degree)


class GradedFreeModule:
    """Free module with generators in prescribed internal degrees."""

    __slots__ = ("algebra", "gen_degrees", "gen_labels", "_pieces")

    def __init__(self, algebra, gen_degrees, gen_labels=None):
        self.algebra = algebra
        self.gen_degrees = tuple(gen_degrees)
        if gen_labels is None:
            gen_labels = tuple(range(len(self.gen_degrees)))
        self.gen_labels = tuple(gen_labels)
        if len(self.gen_labels) != len(self.gen_degrees):
            raise ValueError("need one label per generator")
        if len(set(self.gen_labels)) != len(self.gen_labels):
            raise ValueError("generator labels must be distinct")
        self._pieces = {}

    @property
    def rank(self):
        return len(self.gen_degrees)

    def piece_basis(self, d):
        """Pairs (generator index, monomial) spanning the degree-d piece."""
        cached = self._pieces.get(d)
        if cached is not None:
            return cached
        out = []
        for j, g in enumerate(self.gen_degrees):
            for mono in self.algebra.basis(d - g):
                out.append((j, mono))
        out = tuple(out)
        self._pieces[d] = out
        return out

    def dimension(self, d):
        return len(self.piece_basis(d))

    def degree_span(self):
        """Smallest window of internal degrees containing all pieces."""
        if not self.gen_degrees:
            return range(0)
        lo = min(self.gen_degrees)
        hi = max(self.gen_degrees) + self.algebra.top_degree
        return range(lo, hi + 1)

    def twist_signature(self):
        counts = {}
        for g in self.gen_degrees:
            counts[g] = counts.get(g, 0) + 1
        return tuple(sorted(counts.items()))

    def mult_matrix(self, i, d):
        """Multiplication by variable i on the module, piece(d) -> piece(d+1)."""
        src = self.piece_basis(d)
        tgt_pos = {lab: k for k, lab in enumerate(self.piece_basis(d + 1))}
        entries = {}
        for col, (j, mono) in enumerate(src):
            block = self.algebra.mult(i, sum(mono))
            mcol = block.column_dict(
                self.algebra._basis_index[sum(mono)][mono]
            )
            tgt_basis = self.algebra.basis(sum(mono) + 1)
            for row, c in mcol.items():
                entries[(tgt_pos[(j, tgt_basis[row])], col)] = c
        return Matrix(self.algebra.field, len(tgt_pos), len(src), entries)

    def __repr__(self):
        sig = " ".join(f"k^{c}({-g})" if g else f"k^{c}" for g, c in self.twist_signature())
        return f"<GradedFreeModule {sig or '0'}>"


class GradedModuleMap:
    """Module map given by homogeneous polynomial entries.

    entries[(a, b)] is the coefficient of target generator a in the image
    of source generator b; its degree must equal the generator degree gap.
    """

    __slots__ = ("source", "target", "entries", "_expanded")

    def __init__(self, source, target, entries, validate=True):
        if source.algebra is not target.algebra:
            raise ValueError("source and target over different algebras")
        self.source = source
        self.target = target
        alg = source.algebra
        cleaned = {}
        for (a, b), poly in entries.items():
            reduced = alg.reduce(
                {tuple(m): alg.field.element(c) for m, c in poly.items()}
            )
            if not reduced:
                continue
            if validate:
                want = source.gen_degrees[b] - target.gen_degrees[a]
                if poly_degree(reduced) != want:
                    raise ValueError(
                        f"entry ({a}, {b}) has degree {poly_degree(reduced)}, "
                        f"expected {want}"
                    )
            cleaned[(a, b)] = reduced
        self.entries = cleaned
        self._expanded = {}

    def expanded_matrix(self, d):
        """The degree-d piece of the map as a plain matrix."""
        cached = self._expanded.get(d)
        if cached is not None:
            return cached
        alg = self.source.algebra
        src = self.source.piece_basis(d)
        tgt_pos = {lab: k for k, lab in enumerate(self.target.piece_basis(d))}
        by_src_gen = {}
        for (a, b), poly in self.entries.items():
            by_src_gen.setdefault(b, []).append((a, poly))
        entries = {}
        for col, (b, mono) in enumerate(src):
            for a, poly in by_src_gen.get(b, ()):
                prod = alg.reduce(poly_mul(poly, {mono: alg.field.one}))
                for m2, c in prod.items():
                    key = (tgt_pos[(a, m2)], col)
                    cur = entries.get(key)
                    val = c if cur is None else cur + c
                    if val:
                        entries[key] = val
                    else:
                        entries.pop(key, None)
        m = Matrix(alg.field, len(tgt_pos), len(src), entries)
        self._expanded[d] = m
        return m

    def is_minimal(self):
        """True when no entry has a degree-zero (unit) component."""
        return all(poly_degree(poly) >= 1 for poly in self.entries.values())

    def __repr__(self):
        return f"<GradedModuleMap {len(self.entries)} entries>"


class GradedComplex:
    """Complex of graded free modules over one algebra."""

    __slots__ = ("algebra", "modules", "maps", "lo", "hi")

    def __init__(self, algebra, modules, maps):
        self.algebra = algebra
        self.modules = dict(modules)
        self.maps = dict(maps)
        degrees = [n for n, m in self.modules.items() if m.rank]
        self.lo = min(degrees) if degrees else 0
        self.hi = max(degrees) if degrees else -1
        for n, f in self.maps.items():
            if f.source is not self.modules.get(n) or f.target is not self.modules.get(n - 1):
                raise ValueError(f"map at {n} does not connect adjacent modules")

    def module(self, n):
        mod = self.modules.get(n)
        if mod is None:
            return GradedFreeModule(self.algebra, ())
        return mod

    def map(self, n):
        return self.maps.get(n)

    def __repr__(self):
        ranks = " ".join(f"{n}:{self.module(n).rank}" for n in range(self.lo, self.hi + 1))
        return f"<GradedComplex ranks [{ranks}]>"


def koszul_complex(algebra):
    """Koszul complex on the variables, with alternating-sign differential."""
    n = algebra.num_vars
    from itertools import combinations

    modules = {}
    gens = {}
    for q in range(n + 1):
        subsets = list(combinations(range(n), q))
        gens[q] = subsets
        modules[q] = GradedFreeModule(
            algebra, (q,) * len(subsets), tuple(subsets)
        )
    maps = {}
    field = algebra.field
    for q in range(1, n + 1):
        tgt_pos = {s: k for k, s in enumerate(gens[q - 1])}
        entries = {}
        for b, subset in enumerate(gens[q]):
            for l, var in enumerate(subset):
                rest = subset[:l] + subset[l + 1 :]
                unit = tuple(1 if k == var else 0 for k in range(n))
                sign = field.element(-1 if l % 2 else 1)
                entries[(tgt_pos[rest], b)] = {unit: sign}
        maps[q] = GradedModuleMap(modules[q], modules[q - 1], entries)
    return GradedComplex(algebra, modules, maps)


def minimal_free_resolution(algebra, length_limit):
    """Minimal free resolution of the residue field, to the given length.

    Generators of each syzygy module are chosen degreewise, lowest internal
    degree first, as representatives of the kernel modulo the maximal ideal
    times the kernel; echelon order breaks ties, so the output is
    deterministic.
    """
    field = algebra.field
    modules = {0: GradedFreeModule(algebra, (0,), ((0, 0),))}
    maps = {}
    current = modules[0]
    # the augmentation kernel is everything in positive internal degree
    ker = {}
    for d in current.degree_span():
        dim = current.dimension(d)
        if d >= 1 and dim:
            ker[d] = Subspace.full(field, dim)
    for p in range(1, length_limit + 1):
        chosen = []
        prev_kernel = {}
        for d in sorted(ker):
            k_d = ker[d]
            if k_d.is_zero:
                continue
            mk = Subspace.zero(field, k_d.ambient_dim)
            below = prev_kernel.get(d - 1)
            if below is not None and not below.is_zero:
                for i in range(algebra.num_vars):
                    step = apply_to_subspace(current.mult_matrix(i, d - 1), below)
                    if not step.is_zero:
                        mk = subspace_sum(mk, step)
            pres = quotient(k_d, mk)
            for rep in pres.rep_columns:
                chosen.append((d, rep))
            prev_kernel[d] = k_d
        degrees = tuple(d for d, _ in chosen)
        labels = tuple((p, k) for k in range(len(chosen)))
        new_module = GradedFreeModule(algebra, degrees, labels)
        entries = {}
        for k, (d, rep) in enumerate(chosen):
            basis = current.piece_basis(d)
            for idx, c in rep.items():
                b, mono = basis[idx]
                entries.setdefault((b, k), {})[mono] = c
        diff = GradedModuleMap(new_module, current, entries)
        modules[p] = new_module
        maps[p] = diff
        ker = {}
        for d in new_module.degree_span():
            if new_module.dimension(d):
                ker[d] = kernel(diff.expanded_matrix(d))
        current = new_module
    return GradedComplex(algebra, modules, maps)


def tensor_complex(cf, ck):
    """Tensor product over the common algebra, with the Koszul sign on the
    second factor's differential."""
    if cf.algebra is not ck.algebra:
        raise ValueError("tensor factors over different algebras")
    algebra = cf.algebra
    field = algebra.field
    positions = {}
    modules = {}
    for n in range(cf.lo + ck.lo, cf.hi + ck.hi + 1):
        degs = []
        labels = []
        pos = {}
        for i in range(cf.lo, cf.hi + 1):
            j = n - i
            mf, mk = cf.module(i), ck.module(j)
            for a in range(mf.rank):
                for b in range(mk.rank):
                    pos[(i, a, b)] = len(degs)
                    degs.append(mf.gen_degrees[a] + mk.gen_degrees[b])
                    labels.append((i, mf.gen_labels[a], mk.gen_labels[b]))
        positions[n] = pos
        modules[n] = GradedFreeModule(algebra, tuple(degs), tuple(labels))
    maps = {}
    for n in sorted(modules):
        if n - 1 not in positions:
            continue
        prev = positions[n - 1]
        entries = {}
        for (i, a, b), src in positions[n].items():
            j = n - i
            df = cf.map(i)
            if df is not None:
                for (a2, aa), poly in df.entries.items():
                    if aa != a:
                        continue
                    key = (prev[(i - 1, a2, b)], src)
                    entries[key] = dict(poly)
            dk = ck.map(j)
            if dk is not None:
                sign = field.element(-1 if i % 2 else 1)
                for (b2, bb), poly in dk.entries.items():
                    if bb != b:
                        continue
                    key = (prev[(i, a, b2)], src)
                    entries[key] = {m: sign * c for m, c in poly.items()}
        if entries:
            maps[n] = GradedModuleMap(modules[n], modules[n - 1], entries)
    return GradedComplex(algebra, modules, maps)


ExpLabel = namedtuple("ExpLabel", ["gen", "monomial", "degree"])


def expand(gc):
    """Flatten a graded complex into a vector-space chain complex.

    Term bases are ordered by internal degree, then generator index, then
    monomial order; labels carry (generator label, monomial, degree), and
    the assembled differentials are block diagonal over internal degree.
    """
    field = gc.algebra.field
    labels = {}
    offsets = {}
    for n in range(gc.lo, gc.hi + 1):
        mod = gc.module(n)
        labs = []
        offs = {}
        for d in mod.degree_span():
            piece = mod.piece_basis(d)
            if not piece:
                continue
            offs[d] = len(labs)
            for j, mono in piece:
                labs.append(ExpLabel(mod.gen_labels[j], mono, d))
        labels[n] = tuple(labs)
        offsets[n] = offs
    diffs = {}
    for n in range(gc.lo + 1, gc.hi + 1):
        f = gc.map(n)
        if f is None:
            continue
        entries = {}
        for d, col_base in offsets[n].items():
            row_base = offsets.get(n - 1, {}).get(d)
            if row_base is None:
                continue
            block = f.expanded_matrix(d)
            for (i, j), c in block.entries.items():
                entries[(row_base + i, col_base + j)] = c
        rows = len(labels.get(n - 1, ()))
        diffs[n] = Matrix(field, rows, len(labels[n]), entries)
    return ChainComplex(field, labels, diffs)


def factor_filtration(expanded, factor):
    """Filtration of an expanded tensor complex by one homological factor.

    Labels produced by tensor_complex start with the first factor's
    homological index i; factor 0 filters by i, factor 1 by n - i.
    """
    if factor not in (0, 1):
        raise ValueError("factor must be 0 or 1")
    levels = {}
    for n in expanded.degrees():
        per = []
        for lab in expanded.term_labels(n):
            i = lab.gen[0]
            per.append(i if factor == 0 else n - i)
        levels[n] = per
    return from_basis_levels(expanded, levels)


# ---------------------------------------------------------------------------
# internal-degree bookkeeping on expanded complexes


def internal_degrees(expanded, n):
    return tuple(lab.degree for lab in expanded.term_labels(n))


def class_degrees(pres, degrees):
    """Internal degree of each quotient class; classes must be homogeneous."""
    out = []
    for col in pres.rep_columns:
        degs = {degrees[i] for i in col}
        if len(degs) != 1:
            raise ValueError("inhomogeneous quotient class")
        out.append(degs.pop())
    return out


def degree_breakdown(pres, degrees):
    """Dimension of a page entry split by internal degree."""
    counts = {}
    for d in class_degrees(pres, degrees):
        counts[d] = counts.get(d, 0) + 1
    return dict(sorted(counts.items()))


def image_degree_breakdown(matrix, target_class_degrees):
    """Total dimension of a page map's image with its degree decomposition."""
    from .linalg import image

    img = image(matrix)
    counts = {}
    for col in img.basis_columns:
        degs = {target_class_degrees[i] for i in col}
        if len(degs) != 1:
            raise ValueError("inhomogeneous image vector")
        d = degs.pop()
        counts[d] = counts.get(d, 0) + 1
    return img.dim, dict(sorted(counts.items()))
