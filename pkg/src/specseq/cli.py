"""Command line front end.

A scenario file names a field, describes one filtered complex, and lists
queries against its spectral sequence.  Output is plain deterministic text:
the same scenario and flags always produce byte-identical bytes on stdout.

Exit status: 0 on success, 1 when a comparison or invariant check fails on a
successfully built object, 2 on unreadable input or malformed scenarios.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field

from .complexes import parse_complex
from .errors import (
    ComparisonFailure,
    NotWellDefined,
    ParseError,
    SpecseqError,
)
from .fields import parse_field_token
from .filtration import (
    from_simplicial,
    hom_filtration,
    parse_filtered,
    tensor_filtration,
    truncation_filtration,
)
from .graded import (
    build_quotient_algebra,
    class_degrees,
    degree_breakdown,
    expand,
    factor_filtration,
    image_degree_breakdown,
    koszul_complex,
    minimal_free_resolution,
    tensor_complex,
)
from .linalg import image, render_matrix_machine
from .simplicial import parse_simplicial
from .spectral import SpectralSequence

BUILD_KINDS = (
    "simplicial",
    "filtered",
    "truncation",
    "tensor",
    "tensor-mirrored",
    "hom",
    "graded",
)


@dataclass
class Query:
    kind: str
    r: int = 0
    p: int = 0
    q: int = 0


@dataclass
class Scenario:
    field_token: str
    build_kind: str
    build_opts: tuple
    build_lines: list
    queries: list = dataclass_field(default_factory=list)


def _section_end(lines, start, marker):
    for j in range(start, len(lines)):
        if lines[j].strip() == marker:
            return j
    raise ParseError(f"missing {marker!r}", line=len(lines))


def parse_scenario(text):
    lines = text.splitlines()
    field_token = None
    build = None
    queries = None
    i = 0
    while i < len(lines):
        t = lines[i].strip()
        if not t or t.startswith("#"):
            i += 1
        elif t.startswith("field"):
            parts = t.split()
            if len(parts) != 2:
                raise ParseError(f"bad field line {t!r}", line=i + 1)
            if field_token is not None:
                raise ParseError("field named twice", line=i + 1)
            field_token = parts[1]
            i += 1
        elif t.startswith("build"):
            if build is not None:
                raise ParseError("more than one build section", line=i + 1)
            parts = t.split()
            if len(parts) < 2 or parts[1] not in BUILD_KINDS:
                raise ParseError(f"bad build line {t!r}", line=i + 1)
            j = _section_end(lines, i + 1, "end-build")
            build = (parts[1], tuple(parts[2:]), lines[i + 1 : j])
            i = j + 1
        elif t == "queries":
            if queries is not None:
                raise ParseError("more than one queries section", line=i + 1)
            j = _section_end(lines, i + 1, "end-queries")
            queries = []
            for k in range(i + 1, j):
                q = lines[k].strip()
                if not q or q.startswith("#"):
                    continue
                queries.append(_parse_query(q, k + 1))
            i = j + 1
        else:
            raise ParseError(f"unexpected line {t!r}", line=i + 1)
    if build is None:
        raise ParseError("scenario has no build section", line=len(lines))
    if queries is None:
        raise ParseError("scenario has no queries section", line=len(lines))
    kind, opts, body = build
    return Scenario(field_token, kind, opts, body, queries)


def _parse_query(text, lineno):
    parts = text.split()
    kind = parts[0]
    if kind in ("infinity", "compare"):
        if len(parts) != 1:
            raise ParseError(f"{kind} takes no arguments", line=lineno)
        return Query(kind)
    if kind == "page":
        if len(parts) != 2:
            raise ParseError(f"bad page query {text!r}", line=lineno)
        r = _int(parts[1], lineno)
        if r < 0:
            raise ParseError("page index must be nonnegative", line=lineno)
        return Query("page", r=r)
    if kind in ("differential", "image-length"):
        if len(parts) != 4:
            raise ParseError(f"bad {kind} query {text!r}", line=lineno)
        r, p, q = (_int(x, lineno) for x in parts[1:])
        if r < 1:
            raise ParseError(f"{kind} needs a page index of at least 1", line=lineno)
        return Query(kind, r=r, p=p, q=q)
    raise ParseError(f"unknown query {text!r}", line=lineno)


def _int(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", line=lineno) from None


def _skip_blank(lines, i):
    while i < len(lines) and (not lines[i].strip() or lines[i].strip().startswith("#")):
        i += 1
    return i


def _check_trailing(lines, i):
    i = _skip_blank(lines, i)
    if i < len(lines):
        raise ParseError(f"unexpected line {lines[i].strip()!r}", line=i + 1)


def _need_field(token):
    if token is None:
        raise ParseError("no field named in the scenario or on the command line")
    return parse_field_token(token)


def _match_field(embedded, token):
    if token is not None and parse_field_token(token) != embedded:
        raise ParseError(
            f"scenario names field {token} but the block is over {embedded.token()}"
        )


def build_filtration(scenario, field_token):
    kind = scenario.build_kind
    opts = scenario.build_opts
    lines = scenario.build_lines
    if kind == "simplicial":
        field = _need_field(field_token)
        reduced = "non-reduced" not in opts
        complexes = []
        i = _skip_blank(lines, 0)
        while i < len(lines):
            s, i = parse_simplicial(lines, i)
            complexes.append(s)
            i = _skip_blank(lines, i)
        if not complexes:
            raise ParseError("build simplicial lists no complexes")
        return from_simplicial(complexes, field, reduced=reduced)
    if kind == "filtered":
        fc, i = parse_filtered(lines, _skip_blank(lines, 0))
        _check_trailing(lines, i)
        _match_field(fc.ambient.field, field_token)
        return fc
    if kind == "truncation":
        c, i = parse_complex(lines, _skip_blank(lines, 0))
        _check_trailing(lines, i)
        _match_field(c.field, field_token)
        return truncation_filtration(c)
    if kind == "tensor":
        c, i = parse_complex(lines, _skip_blank(lines, 0))
        fd, i = parse_filtered(lines, _skip_blank(lines, i))
        _check_trailing(lines, i)
        _match_field(c.field, field_token)
        return tensor_filtration(c, fd)
    if kind == "tensor-mirrored":
        fd, i = parse_filtered(lines, _skip_blank(lines, 0))
        c, i = parse_complex(lines, _skip_blank(lines, i))
        _check_trailing(lines, i)
        _match_field(c.field, field_token)
        return tensor_filtration(fd, c)
    if kind == "hom":
        c, i = parse_complex(lines, _skip_blank(lines, 0))
        fd, i = parse_filtered(lines, _skip_blank(lines, i))
        _check_trailing(lines, i)
        _match_field(c.field, field_token)
        return hom_filtration(c, fd)
    if kind == "graded":
        return _build_graded(lines, _need_field(field_token))
    raise ParseError(f"unknown build kind {kind!r}")


def _build_graded(lines, field):
    names = None
    relations = []
    length = None
    factor = 0
    top_bound = 64
    for i, raw in enumerate(lines):
        t = raw.strip()
        if not t or t.startswith("#"):
            continue
        parts = t.split()
        if parts[0] == "vars":
            names = parts[1:]
            if not names:
                raise ParseError("vars names no variables", line=i + 1)
        elif parts[0] == "relation":
            relations.append(" ".join(parts[1:]))
        elif parts[0] == "length" and len(parts) == 2:
            length = _int(parts[1], i + 1)
        elif parts[0] == "factor" and len(parts) == 2:
            factor = _int(parts[1], i + 1)
            if factor not in (0, 1):
                raise ParseError("factor must be 0 or 1", line=i + 1)
        elif parts[0] == "top-bound" and len(parts) == 2:
            top_bound = _int(parts[1], i + 1)
        else:
            raise ParseError(f"bad graded directive {t!r}", line=i + 1)
    if names is None:
        raise ParseError("build graded needs a vars line")
    if not relations:
        raise ParseError("build graded needs at least one relation")
    if length is None:
        raise ParseError("build graded needs a length line")
    algebra = build_quotient_algebra(
        field, len(names), relations, top_bound=top_bound, names=names
    )
    resolution = minimal_free_resolution(algebra, length)
    expanded = expand(tensor_complex(resolution, koszul_complex(algebra)))
    return factor_filtration(expanded, factor)


def _degree_table(fc, n):
    labels = fc.ambient.term_labels(n)
    if labels and all(hasattr(lab, "degree") for lab in labels):
        return tuple(lab.degree for lab in labels)
    return None


def _page_entries(ss, r, threads):
    fc = ss.source
    positions = [
        (p, n - p) for p in fc.p_range for n in fc.ambient.degrees()
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda pq: ss.entry(r, pq[0], pq[1]), positions))
    out = {}
    for p, q in positions:
        pres = ss.entry(r, p, q)
        if pres.dim:
            out[(p, q)] = pres
    return out


def _cell_text(ss, pres, p, q):
    table = _degree_table(ss.source, p + q)
    if table is None:
        return str(pres.dim)
    parts = ",".join(
        f"{d}:{c}" for d, c in sorted(degree_breakdown(pres, table).items())
    )
    return f"{pres.dim}({parts})"


def render_page_grid(ss, r, entries, header):
    lines = [header]
    if not entries:
        lines.append("(empty)")
        return lines
    qs = sorted({q for (_, q) in entries}, reverse=True)
    ps = sorted({p for (p, _) in entries})
    cells = {pq: _cell_text(ss, pres, *pq) for pq, pres in entries.items()}
    widths = {
        p: max(len(f"p={p}"), max(len(cells.get((p, q), ".")) for q in qs))
        for p in ps
    }
    lead = max(len(f"q={q}") for q in qs)
    head = " " * lead + "  " + "  ".join(f"p={p}".ljust(widths[p]) for p in ps)
    lines.append(head.rstrip())
    for q in qs:
        row = f"q={q}".ljust(lead) + "  " + "  ".join(
            cells.get((p, q), ".").ljust(widths[p]) for p in ps
        )
        lines.append(row.rstrip())
    return lines


def render_page_machine(ss, r, entries):
    lines = []
    for (p, q) in sorted(entries):
        pres = entries[(p, q)]
        table = _degree_table(ss.source, p + q)
        line = f"{r} {p} {q} {pres.dim}"
        if table is not None:
            br = degree_breakdown(pres, table)
            line += "".join(f" {d}:{c}" for d, c in sorted(br.items()))
        lines.append(line)
    return lines


def parse_machine_page(text):
    """Inverse of render_page_machine over its own output."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        t = raw.strip()
        if not t or t.startswith("#"):
            continue
        parts = t.split()
        if len(parts) < 4:
            raise ParseError(f"bad page line {raw!r}", line=lineno)
        try:
            r, p, q, dim = (int(x) for x in parts[:4])
        except ValueError:
            raise ParseError(f"bad page line {raw!r}", line=lineno) from None
        degrees = {}
        for token in parts[4:]:
            d, sep, c = token.partition(":")
            if not sep:
                raise ParseError(f"bad degree token {token!r}", line=lineno)
            try:
                degrees[int(d)] = int(c)
            except ValueError:
                raise ParseError(f"bad degree token {token!r}", line=lineno) from None
        if degrees and sum(degrees.values()) != dim:
            raise ParseError(f"degree counts do not sum to {dim}", line=lineno)
        out[(r, p, q)] = (dim, degrees or None)
    return out


def _run_query(ss, query, machine, threads, out):
    if query.kind == "page" or query.kind == "infinity":
        r = ss.r_star if query.kind == "infinity" else query.r
        entries = _page_entries(ss, r, threads)
        if machine:
            lines = render_page_machine(ss, r, entries)
        else:
            header = (
                f"infinity (r={ss.r_star})"
                if query.kind == "infinity"
                else f"page {r}"
            )
            lines = render_page_grid(ss, r, entries, header)
        for line in lines:
            print(line, file=out)
        return 0
    if query.kind == "differential":
        m = ss.differential(query.r, query.p, query.q)
        print(
            f"differential {query.r} {query.p} {query.q} : {m.rows} x {m.cols}",
            file=out,
        )
        if machine:
            print(render_matrix_machine(m), file=out)
        elif m.rows:
            print(m.render_text(), file=out)
        return 0
    if query.kind == "image-length":
        m = ss.differential(query.r, query.p, query.q)
        img = image(m)
        line = f"image-length {query.r} {query.p} {query.q} {img.dim}"
        table = _degree_table(ss.source, query.p + query.q - 1)
        if table is not None and img.dim:
            target = ss.entry(query.r, query.p - query.r, query.q + query.r - 1)
            _, br = image_degree_breakdown(m, class_degrees(target, table))
            line += "".join(f" {d}:{c}" for d, c in sorted(br.items()))
        print(line, file=out)
        return 0
    if query.kind == "compare":
        report = ss.limit_comparison(strict=False)
        for line in report.render().splitlines():
            print(line, file=out)
        print("compare ok" if report.ok else "compare FAIL", file=out)
        return 0 if report.ok else 1
    raise ParseError(f"unknown query kind {query.kind!r}")


def run(text, field_override=None, threads=1, machine=False, check=False, out=None):
    if out is None:
        out = sys.stdout
    scenario = parse_scenario(text)
    token = field_override if field_override is not None else scenario.field_token
    try:
        fc = build_filtration(scenario, token)
    except ParseError:
        raise
    except (SpecseqError, ValueError) as exc:
        print(f"build error: {exc}", file=sys.stderr)
        return 2
    if check:
        try:
            fc.validate()
        except (SpecseqError, ValueError) as exc:
            print(f"check failed: {exc}", file=sys.stderr)
            return 1
        print("check ok", file=out)
    ss = SpectralSequence(fc)
    code = 0
    try:
        for query in scenario.queries:
            code = max(code, _run_query(ss, query, machine, threads, out))
    except (ComparisonFailure, NotWellDefined) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    return code


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="specseq",
        description="Run spectral sequence queries from a scenario file.",
    )
    parser.add_argument("scenario", help="path to a scenario file")
    parser.add_argument("--field", default=None, help="override the scenario's field")
    parser.add_argument(
        "--threads", type=int, default=1, help="worker threads for page queries"
    )
    parser.add_argument(
        "--machine", action="store_true", help="machine readable output"
    )
    parser.add_argument(
        "--check", action="store_true", help="re-validate the built filtration"
    )
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("--threads must be at least 1", file=sys.stderr)
        return 2
    try:
        with open(args.scenario, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return 2
    try:
        return run(
            text,
            field_override=args.field,
            threads=args.threads,
            machine=args.machine,
            check=args.check,
        )
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
