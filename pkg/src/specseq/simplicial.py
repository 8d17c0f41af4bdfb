"""Simplicial complexes on ordered vertex sets and their reduced chains.

Vertices carry the order in which they are listed; faces are stored as
tuples in that order.  The empty face is always present, so the reduced
chain complex has a degree -1 term and the boundary of a vertex is the
empty face.
"""

from itertools import combinations

from .complexes import ChainComplex, ChainMap
from .errors import NotASubcomplex, ParseError
from .linalg import Matrix


class SimplicialComplex:
    __slots__ = ("vertices", "_index", "_faces")

    def __init__(self, vertices, facets):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("repeated vertex")
        self._index = {v: k for k, v in enumerate(self.vertices)}
        face_set = {()}
        for facet in facets:
            for v in facet:
                if v not in self._index:
                    raise ValueError(f"facet uses unknown vertex {v!r}")
            fv = tuple(sorted(set(facet), key=self._index.__getitem__))
            for size in range(1, len(fv) + 1):
                face_set.update(combinations(fv, size))
        by_dim = {}
        for face in face_set:
            by_dim.setdefault(len(face) - 1, []).append(face)
        self._faces = {
            k: tuple(sorted(faces, key=lambda f: tuple(self._index[v] for v in f)))
            for k, faces in by_dim.items()
        }

    @property
    def dim(self):
        return max(self._faces)

    def faces(self, k):
        return self._faces.get(k, ())

    def all_faces(self):
        out = set()
        for faces in self._faces.values():
            out.update(faces)
        return out

    def has_face(self, face):
        return tuple(face) in self._faces.get(len(face) - 1, ())

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialComplex)
            and self.vertices == other.vertices
            and self._faces == other._faces
        )

    def __repr__(self):
        counts = " ".join(f"{k}:{len(v)}" for k, v in sorted(self._faces.items()))
        return f"<SimplicialComplex [{counts}]>"


def _boundary_matrix(s, field, k):
    """Boundary from k-faces to (k-1)-faces, alternating vertex deletion."""
    rows = {f: i for i, f in enumerate(s.faces(k - 1))}
    cols = s.faces(k)
    entries = {}
    for j, face in enumerate(cols):
        for l in range(len(face)):
            sub = face[:l] + face[l + 1 :]
            sign = field.element(-1 if l % 2 else 1)
            entries[(rows[sub], j)] = sign
    return Matrix(field, len(rows), len(cols), entries)


def reduced_chain_complex(s, field, reduced=True):
    """Chain complex of s; with reduced=True the empty face spans degree -1."""
    lo = -1 if reduced else 0
    labels = {k: s.faces(k) for k in range(lo, s.dim + 1) if s.faces(k)}
    diffs = {}
    for k in range(lo + 1, s.dim + 1):
        if s.faces(k):
            diffs[k] = _boundary_matrix(s, field, k)
    return ChainComplex(field, labels, diffs, validate=False)


def inclusion_map(sub, sup, field, reduced=True):
    """Basis-to-basis chain map of a subcomplex into its host."""
    order = {v: k for k, v in enumerate(sup.vertices)}
    positions = [order.get(v) for v in sub.vertices]
    if None in positions or positions != sorted(positions):
        raise NotASubcomplex("vertex orders are incompatible")
    sup_faces = sup.all_faces()
    for face in sub.all_faces():
        if face not in sup_faces:
            raise NotASubcomplex(f"face {face!r} is missing from the host complex")
    src = reduced_chain_complex(sub, field, reduced=reduced)
    tgt = reduced_chain_complex(sup, field, reduced=reduced)
    comps = {}
    lo = -1 if reduced else 0
    for k in range(lo, sub.dim + 1):
        rows = {f: i for i, f in enumerate(sup.faces(k))}
        entries = {}
        for j, face in enumerate(sub.faces(k)):
            entries[(rows[face], j)] = field.one
        comps[k] = Matrix(field, len(rows), len(sub.faces(k)), entries)
    return ChainMap(src, tgt, comps, validate=False)


# ---------------------------------------------------------------------------
# plain-text format


def render_simplicial(s):
    lines = ["simplicial " + " ".join(str(v) for v in s.vertices)]
    facets = _facets(s)
    for f in facets:
        lines.append("facet " + " ".join(str(v) for v in f))
    lines.append("end-simplicial")
    return "\n".join(lines)


def _facets(s):
    faces = s.all_faces() - {()}
    out = []
    for f in sorted(faces, key=lambda f: (-len(f), f)):
        if not any(set(f) < set(g) for g in out):
            out.append(f)
    return out


def parse_simplicial(lines, start=0):
    head = lines[start].split()
    if not head or head[0] != "simplicial":
        raise ParseError(f"bad simplicial header {lines[start]!r}", line=start + 1)
    vertices = head[1:]
    facets = []
    i = start + 1
    while True:
        if i >= len(lines):
            raise ParseError("simplicial block not closed", line=len(lines))
        text = lines[i].strip()
        if text == "end-simplicial":
            i += 1
            break
        if text.startswith("facet"):
            facets.append(text.split()[1:])
            i += 1
        elif not text or text.startswith("#"):
            i += 1
        else:
            raise ParseError(f"unexpected line {text!r}", line=i + 1)
    try:
        return SimplicialComplex(vertices, facets), i
    except ValueError as exc:
        raise ParseError(str(exc), line=start + 1) from None
