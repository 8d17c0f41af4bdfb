"""Bounded increasing filtrations of chain complexes.

A filtration assigns to each index p in [p_min, p_max] and each degree n a
subspace of the ambient term, increasing in p, exhaustive at p_max, and
closed under the differential.  Queries outside the index window clamp to
the zero and full subspaces, which keeps boundary arithmetic in the
spectral sequence uniform.
"""

from .complexes import ChainComplex, hom_complex, tensor
from .errors import MixedFields, NotNested, ParseError
from .linalg import Matrix, Subspace, image, parse_matrix_machine, render_matrix_machine


class FilteredComplex:
    __slots__ = ("ambient", "p_min", "p_max", "_layers")

    def __init__(self, ambient, layers, validate=True):
        self.ambient = ambient
        if not layers:
            raise ValueError("a filtration needs at least one level")
        self.p_min = min(layers)
        self.p_max = max(layers)
        if set(layers) != set(range(self.p_min, self.p_max + 1)):
            raise ValueError("filtration indices must form an integer interval")
        self._layers = {}
        for p, per_degree in layers.items():
            for n, sub in per_degree.items():
                if sub.field != ambient.field:
                    raise MixedFields(f"layer ({p}, {n}) over the wrong field")
                if sub.ambient_dim != ambient.dim(n):
                    raise ValueError(f"layer ({p}, {n}) has the wrong ambient dimension")
                self._layers[(p, n)] = sub
        if validate:
            self.validate()

    @property
    def p_range(self):
        return range(self.p_min, self.p_max + 1)

    def layer(self, p, n):
        dim_n = self.ambient.dim(n)
        if p > self.p_max:
            return Subspace.full(self.ambient.field, dim_n)
        if p < self.p_min:
            return Subspace.zero(self.ambient.field, dim_n)
        sub = self._layers.get((p, n))
        if sub is None:
            return Subspace.zero(self.ambient.field, dim_n)
        return sub

    def validate(self):
        amb = self.ambient
        for n in amb.degrees():
            if not self.layer(self.p_max, n).is_full:
                raise ValueError(f"top layer is not the full term in degree {n}")
            for p in range(self.p_min, self.p_max + 1):
                if not self.layer(p, n).contains(self.layer(p - 1, n)):
                    raise NotNested(f"layer ({p - 1}, {n}) not inside layer ({p}, {n})")
            d = amb.diff(n)
            if d.is_zero:
                continue
            for p in range(self.p_min, self.p_max + 1):
                lay = self.layer(p, n)
                below = self.layer(p, n - 1)
                if lay.is_zero or below.is_full:
                    continue
                for col in lay.basis_columns:
                    if not below.contains_vector(d.apply(col)):
                        raise ValueError(
                            f"layer ({p}, {n}) is not closed under the differential"
                        )

    def __eq__(self, other):
        return (
            isinstance(other, FilteredComplex)
            and self.ambient == other.ambient
            and self.p_min == other.p_min
            and self.p_max == other.p_max
            and all(
                self.layer(p, n) == other.layer(p, n)
                for p in self.p_range
                for n in self.ambient.degrees()
            )
        )

    def __repr__(self):
        return (
            f"<FilteredComplex p in [{self.p_min}, {self.p_max}] "
            f"over {self.ambient.field}>"
        )


def from_chain_maps(maps, shift=0):
    """Filtration whose layers are the images of chain maps into one target.

    The largest image gets the top index; listing the maps largest first is
    the expected usage and keeps the listed order.  Images must be totally
    ordered by inclusion.  If the top image misses part of the target, an
    extra full level is appended above it so the result is exhaustive.
    """
    if not maps:
        raise ValueError("need at least one chain map")
    ambient = maps[0].target
    for f in maps:
        if f.source.field != ambient.field:
            raise MixedFields("chain maps over different fields")
        if f.target != ambient:
            raise ValueError("all chain maps must share one target")
    degrees = list(ambient.degrees())
    images = []
    for f in maps:
        images.append({n: image(f.component(n)) for n in degrees})
    order = sorted(
        range(len(maps)),
        key=lambda k: -sum(images[k][n].dim for n in degrees),
    )
    images = [images[k] for k in order]
    for k in range(len(images) - 1):
        big, small = images[k], images[k + 1]
        for n in degrees:
            if not big[n].contains(small[n]):
                raise NotNested("images are not totally ordered by inclusion")
    top_full = all(images[0][n].is_full for n in degrees)
    layers = {}
    if not top_full:
        layers[len(images) + shift] = {
            n: Subspace.full(ambient.field, ambient.dim(n)) for n in degrees
        }
    for k, img in enumerate(images):
        layers[len(images) - 1 - k + shift] = img
    return FilteredComplex(ambient, layers)


def from_simplicial(complexes, field, reduced=True):
    """Filtration by a descending list of subcomplexes of the first entry."""
    from .simplicial import inclusion_map, reduced_chain_complex

    if not complexes:
        raise ValueError("need at least one simplicial complex")
    top = complexes[0]
    ambient = reduced_chain_complex(top, field, reduced=reduced)
    maps = [inclusion_map(s, top, field, reduced=reduced) for s in complexes]
    # re-target every inclusion at the one ambient complex object
    maps = [
        type(f)(f.source, ambient, f.components, validate=False) for f in maps
    ]
    return from_chain_maps(maps)


def truncation_filtration(c):
    """Brutal truncation from above: layer p keeps the terms in degrees <= p."""
    field = c.field
    if c.is_zero:
        return FilteredComplex(
            c, {0: {}}, validate=False
        )
    layers = {}
    for p in range(c.lo, c.hi + 1):
        per = {}
        for n in c.degrees():
            if n <= p:
                per[n] = Subspace.full(field, c.dim(n))
            else:
                per[n] = Subspace.zero(field, c.dim(n))
        layers[p] = per
    return FilteredComplex(c, layers, validate=False)


def _block_embed(columns, offset):
    return [{offset + r: v for r, v in col.items()} for col in columns]


def tensor_filtration(a, b):
    """Filter a tensor product through whichever factor is filtered.

    With the second argument filtered, layer(p, n) = sum_j a_{n-j} (x)
    layer_b(p, j); with the first filtered, layer(p, n) = sum_i
    layer_a(p, i) (x) b_{n-i}.  Exactly one argument may be filtered.
    """
    if isinstance(a, FilteredComplex) == isinstance(b, FilteredComplex):
        raise TypeError("exactly one tensor factor must be filtered")
    mirrored = isinstance(a, FilteredComplex)
    fd = a if mirrored else b
    plain = b if mirrored else a
    if plain.field != fd.ambient.field:
        raise MixedFields("tensor factors over different fields")
    field = plain.field
    c, d = (fd.ambient, plain) if mirrored else (plain, fd.ambient)
    ambient = tensor(c, d)
    layers = {}
    for p in fd.p_range:
        per = {}
        for n in ambient.degrees():
            cols = []
            base = 0
            for i in range(c.lo, c.hi + 1):
                j = n - i
                di, dj = c.dim(i), d.dim(j)
                if not (di and dj):
                    continue
                if mirrored:
                    sub = fd.layer(p, i)
                    for w in sub.basis_columns:
                        for bidx in range(dj):
                            cols.append(
                                {base + r * dj + bidx: v for r, v in w.items()}
                            )
                else:
                    sub = fd.layer(p, j)
                    for aidx in range(di):
                        cols.extend(
                            _block_embed(sub.basis_columns, base + aidx * dj)
                        )
                base += di * dj
            per[n] = Subspace.spanned_by_columns(field, ambient.dim(n), cols)
        layers[p] = per
    return FilteredComplex(ambient, layers)


def hom_filtration(c, fd):
    """Filter Hom(c, target of fd) by layer(p, n) = sum_i Hom(c_i, layer(p, i+n))."""
    if not isinstance(fd, FilteredComplex):
        raise TypeError("second argument must be filtered")
    if c.field != fd.ambient.field:
        raise MixedFields("Hom arguments over different fields")
    field = c.field
    d = fd.ambient
    ambient = hom_complex(c, d)
    layers = {}
    for p in fd.p_range:
        per = {}
        for n in ambient.degrees():
            cols = []
            base = 0
            for i in range(c.lo, c.hi + 1):
                di, dj = c.dim(i), d.dim(i + n)
                if not (di and dj):
                    continue
                sub = fd.layer(p, i + n)
                for aidx in range(di):
                    cols.extend(_block_embed(sub.basis_columns, base + aidx * dj))
                base += di * dj
            per[n] = Subspace.spanned_by_columns(field, ambient.dim(n), cols)
        layers[p] = per
    return FilteredComplex(ambient, layers)


def from_basis_levels(ambient, levels, validate=True):
    """Coordinate filtration: basis vector k of term n enters at levels[n][k]."""
    field = ambient.field
    all_levels = [lv for per in levels.values() for lv in per]
    if not all_levels:
        raise ValueError("no basis vectors to filter")
    layers = {}
    for p in range(min(all_levels), max(all_levels) + 1):
        per = {}
        for n in ambient.degrees():
            lvls = levels.get(n, [])
            if len(lvls) != ambient.dim(n):
                raise ValueError(f"need one level per basis vector in degree {n}")
            cols = [{k: field.one} for k, lv in enumerate(lvls) if lv <= p]
            per[n] = Subspace.spanned_by_columns(field, ambient.dim(n), cols)
        layers[p] = per
    return FilteredComplex(ambient, layers, validate=validate)


# ---------------------------------------------------------------------------
# plain-text format


def render_filtered(fc):
    from .complexes import render_complex

    lines = [f"filtered {fc.p_min} {fc.p_max}"]
    lines.append(render_complex(fc.ambient))
    for p in fc.p_range:
        for n in fc.ambient.degrees():
            sub = fc.layer(p, n)
            if sub.is_full:
                lines.append(f"layer {p} {n} full")
            elif sub.is_zero:
                lines.append(f"layer {p} {n} zero")
            else:
                lines.append(f"layer {p} {n}")
                lines.append(render_matrix_machine(sub.basis_matrix()))
    lines.append("end-filtered")
    return "\n".join(lines)


def parse_filtered(lines, start=0):
    from .complexes import parse_complex

    head = lines[start].split()
    if len(head) != 3 or head[0] != "filtered":
        raise ParseError(f"bad filtered header {lines[start]!r}", line=start + 1)
    p_min, p_max = int(head[1]), int(head[2])
    ambient, i = parse_complex(lines, start + 1)
    field = ambient.field
    layers = {p: {} for p in range(p_min, p_max + 1)}
    while True:
        if i >= len(lines):
            raise ParseError("filtered block not closed", line=len(lines))
        text = lines[i].strip()
        if text == "end-filtered":
            i += 1
            break
        if text.startswith("layer "):
            parts = text.split()
            p, n = int(parts[1]), int(parts[2])
            if p < p_min or p > p_max:
                raise ParseError(f"layer index {p} outside the window", line=i + 1)
            if len(parts) == 4 and parts[3] == "full":
                layers[p][n] = Subspace.full(field, ambient.dim(n))
                i += 1
            elif len(parts) == 4 and parts[3] == "zero":
                layers[p][n] = Subspace.zero(field, ambient.dim(n))
                i += 1
            elif len(parts) == 3:
                m, i = parse_matrix_machine(lines, i + 1)
                if m.rows != ambient.dim(n):
                    raise ParseError(f"layer ({p}, {n}) has the wrong height", line=i)
                layers[p][n] = Subspace.spanned_by(m)
            else:
                raise ParseError(f"bad layer line {text!r}", line=i + 1)
        elif not text or text.startswith("#"):
            i += 1
        else:
            raise ParseError(f"unexpected line {text!r}", line=i + 1)
    try:
        return FilteredComplex(ambient, layers), i
    except (NotNested, ValueError, MixedFields) as exc:
        raise ParseError(str(exc), line=start + 1) from None
