"""Command-line front end.

Subcommands: chamber (edge-walk exploration), vinberg (batch enumeration),
batch0 (local simple system at a vertex), shortvec (2D searches), pell,
table1 (the rank-2 slowness table), diagram (classify / extend a diagram
file), compare (edgewalk vs batch enumeration benchmark).

All numbers in JSON output are decimal strings so arbitrary precision
survives the round trip; reports written with --out are byte-deterministic
for a fixed input and tool version (timings are printed to stdout only).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from ._linalg import as_fraction, vec_int
from .dynkin import Bond, NormedDynkinDiagram, cuspidal_extensions, spherical_extensions
from .edgewalk import (
    Chamber,
    EdgewalkError,
    InfiniteVolumeEdge,
    explore,
    initial_corner,
)
from .lattice import Lattice, lattice_from_json
from .shortvec import (
    PlaneFrame,
    anisotropic_period,
    canonical_supplement,
    make_supplement,
    not_promised,
    promised,
)
from .vinberg import (
    DEFAULT_TABLE_ROWS,
    pell_fundamental,
    priority_sq,
    rank2_second_root,
    vinberg_run,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2
EXIT_INFINITE = 3


def _num(x) -> str:
    f = as_fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _vec(v):
    return [_num(x) for x in v]


def _parse_vec(text):
    return tuple(Fraction(part) for part in text.split(","))


def _threads() -> int:
    raw = os.environ.get("CHAMBERWALK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load_lattice(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    lattice = lattice_from_json(raw.decode("utf-8"))
    return lattice, hashlib.sha256(raw).hexdigest()


def _auto_control(lattice: Lattice, bound: int = 6):
    """Deterministic small timelike vector: minimal |norm|, then lexicographic."""
    best = None
    rank = lattice.rank

    def rec(i, cur):
        nonlocal best
        if i == rank:
            v = tuple(cur)
            nn = lattice.norm(v)
            if nn < 0:
                key = (-nn, v)
                if best is None or key < best[0]:
                    from math import gcd

                    if gcd(*vec_int(v)) == 1:
                        best = (key, v)
            return
        for x in range(-bound, bound + 1):
            cur.append(x)
            rec(i + 1, cur)
            cur.pop()

    rec(0, [])
    if best is None:
        raise ValueError("no timelike control vector within the search bound")
    return best[1]


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _chamber_report(lattice: Lattice, control, chamber: Chamber, input_hash):
    roots = list(chamber.simple_roots)
    corners = []
    for c in chamber.corners:
        corners.append(
            {
                "vector": _vec(c.k),
                "kind": c.kind,
                "root_indices": sorted(roots.index(v) for v in c.local_roots),
            }
        )
    return {
        "tool_version": __version__,
        "input_sha256": input_hash,
        "control": _vec(control),
        "finite_volume": chamber.finite_volume,
        "simple_roots": [_vec(v) for v in roots],
        "corners": corners,
        "walks": chamber.walks,
        "notes": list(chamber.notes),
    }


def _cmd_chamber(args) -> int:
    lattice, input_hash = _load_lattice(args.lattice)
    control = _auto_control(lattice) if args.control == "auto" else vec_int(_parse_vec(args.control))
    t0 = time.perf_counter()
    corner = initial_corner(lattice, control)
    chamber = explore(
        lattice,
        corner,
        max_walks=args.max_walks,
        max_corners=args.max_corners,
        threads=_threads(),
    )
    elapsed = (time.perf_counter() - t0) * 1000.0
    report = _chamber_report(lattice, control, chamber, input_hash)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_dump(report) + "\n")
    full = dict(report)
    full["timings_ms"] = {"explore": round(elapsed, 3)}
    if args.compare_vinberg:
        full["comparison"] = _comparison(lattice, control, corner, chamber)
    print(_dump(full))
    if chamber.finite_volume is True:
        return EXIT_OK
    if chamber.finite_volume is False:
        return EXIT_INFINITE
    return EXIT_BUDGET


def _comparison(lattice, control, corner, chamber):
    t0 = time.perf_counter()
    bound = Fraction(0)
    for v in chamber.simple_roots:
        if lattice.inner(control, v) < 0:
            bound = max(bound, priority_sq(lattice, control, v))
    result = vinberg_run(lattice, control, corner.local_roots, max_priority_sq=bound)
    elapsed = (time.perf_counter() - t0) * 1000.0
    vin_roots = set(corner.local_roots) | set(result.roots)
    return {
        "vinberg_batches": result.batches_examined,
        "edgewalk_walks": chamber.walks,
        "vinberg_ms": round(elapsed, 3),
        "same_roots": vin_roots == set(chamber.simple_roots),
    }


def _cmd_vinberg(args) -> int:
    lattice, input_hash = _load_lattice(args.lattice)
    control = _auto_control(lattice) if args.control == "auto" else vec_int(_parse_vec(args.control))
    if args.batch0 == "auto":
        b0 = initial_corner(lattice, control).local_roots
    else:
        with open(args.batch0, "r", encoding="utf-8") as fh:
            b0 = [vec_int(v) for v in json.loads(fh.read())]
    bound = None
    if args.max_priority is not None:
        p = Fraction(args.max_priority)
        bound = p * p
    result = vinberg_run(
        lattice,
        control,
        b0,
        max_batches=args.max_batches,
        max_priority_sq=bound,
        norms=[int(x) for x in args.norms.split(",")] if args.norms else None,
    )
    report = {
        "tool_version": __version__,
        "input_sha256": input_hash,
        "control": _vec(control),
        "batch0": [_vec(v) for v in b0],
        "roots": [_vec(v) for v in result.roots],
        "batches_examined": result.batches_examined,
        "exhausted": result.exhausted,
    }
    print(_dump(report))
    return EXIT_BUDGET if result.exhausted else EXIT_OK


def _cmd_batch0(args) -> int:
    lattice, input_hash = _load_lattice(args.lattice)
    control = vec_int(_parse_vec(args.control))
    corner = initial_corner(lattice, control)
    report = {
        "tool_version": __version__,
        "input_sha256": input_hash,
        "control": _vec(control),
        "kind": corner.kind,
        "simple_roots": [_vec(v) for v in corner.local_roots],
    }
    print(_dump(report))
    return EXIT_OK


def _cmd_shortvec(args) -> int:
    a, b, c = (int(x) for x in args.gram.split(","))
    lattice = Lattice([[a, b], [b, c]])
    frame = PlaneFrame(lattice, _parse_vec(args.k), _parse_vec(args.half))
    M = Fraction(args.M)
    r = vec_int(_parse_vec(args.r))
    if args.l:
        l = vec_int(_parse_vec(args.l))
    elif args.mode == "promised":
        l = make_supplement(frame, M, r)
    else:
        l = canonical_supplement(frame, frame.norm(r), r, make_supplement(frame, frame.norm(r), r))
    if args.mode == "promised":
        r2, l2 = promised(frame, M, r, l, grouped=args.grouped)
        out = {"r": _vec(r2), "l": _vec(l2)}
    elif args.mode == "notpromised":
        got = not_promised(frame, M, r, l)
        out = {"result": None} if got is None else {"r": _vec(got[0]), "l": _vec(got[1])}
    else:
        got = anisotropic_period(frame, M, r, l)
        if got is None:
            out = {"result": None}
        else:
            iso, period = got
            out = {
                "generator": [[str(x) for x in row] for row in iso.rows],
                "period": [_vec(v) for v in period],
            }
    print(_dump(out))
    return EXIT_OK


def _cmd_pell(args) -> int:
    x, y = pell_fundamental(args.n)
    print(f"{x} {y}")
    return EXIT_OK


def _table_lines(rows):
    lines = ["n\tnorm\tcoeff_1\tcoeff_sqrt\tbatch"]
    for n in rows:
        r = rank2_second_root(n)
        lines.append(
            f"{r.n}\t{_num(r.alpha_norm)}\t{_num(r.alpha[0])}\t{_num(r.alpha[1])}\t{r.batch_number}"
        )
    return lines


def _cmd_table1(args) -> int:
    rows = DEFAULT_TABLE_ROWS if not args.rows else tuple(int(x) for x in args.rows.split(","))
    lines = _table_lines(rows)
    text = "\n".join(lines) + "\n"
    if args.check:
        with open(args.check, "r", encoding="utf-8") as fh:
            golden = fh.read()
        if golden != text:
            sys.stderr.write("table differs from the golden file\n")
            return EXIT_ERROR
        print("table matches the golden file")
        return EXIT_OK
    sys.stdout.write(text)
    return EXIT_OK


def _parse_diagram(data):
    norms = [Fraction(x) for x in data["norms"]]
    bonds = {}
    for item in data.get("bonds", []):
        i, j, kind = int(item["i"]), int(item["j"]), item["type"]
        direction = item.get("dir")
        if direction is None:
            bonds[(i, j)] = Bond(kind)
        elif direction == "ij":
            bonds[(i, j)] = Bond(kind, i, j)
        elif direction == "ji":
            bonds[(i, j)] = Bond(kind, j, i)
        else:
            raise ValueError(f"bad bond direction {direction!r}")
    return NormedDynkinDiagram(norms, bonds)


def _bond_json(i, j, bond):
    out = {"i": i, "j": j, "type": bond.kind, "dir": None}
    if bond.tail is not None:
        out["dir"] = "ij" if bond.tail == i else "ji"
    return out


def _diagram_json(diagram):
    return {
        "norms": [_num(x) for x in diagram.norms],
        "bonds": [_bond_json(i, j, b) for (i, j), b in diagram.bonds.items()],
    }


def _cmd_diagram(args) -> int:
    with open(args.diagram, "r", encoding="utf-8") as fh:
        diagram = _parse_diagram(json.loads(fh.read()))
    out = {
        "classification": diagram.classify().value,
        "gram": [[_num(x) for x in row] for row in diagram.gram()],
    }
    if args.spherical_extensions:
        exts = spherical_extensions(diagram, Fraction(args.spherical_extensions))
        out["spherical_extensions"] = [_diagram_json(e.extended()) for e in exts]
    if args.cuspidal_extensions:
        exts = cuspidal_extensions(diagram, Fraction(args.cuspidal_extensions))
        out["cuspidal_extensions"] = [_diagram_json(e.extended()) for e in exts]
    print(_dump(out))
    return EXIT_OK


def _cmd_compare(args) -> int:
    lattice, input_hash = _load_lattice(args.lattice)
    control = _auto_control(lattice) if args.control == "auto" else vec_int(_parse_vec(args.control))
    t0 = time.perf_counter()
    corner = initial_corner(lattice, control)
    chamber = explore(lattice, corner, max_walks=args.max_walks, threads=_threads())
    walk_ms = (time.perf_counter() - t0) * 1000.0
    report = {
        "tool_version": __version__,
        "input_sha256": input_hash,
        "control": _vec(control),
        "finite_volume": chamber.finite_volume,
        "edgewalk_walks": chamber.walks,
        "edgewalk_ms": round(walk_ms, 3),
    }
    if chamber.finite_volume is True:
        report.update(_comparison(lattice, control, corner, chamber))
        print(_dump(report))
        return EXIT_OK
    t0 = time.perf_counter()
    result = vinberg_run(lattice, control, corner.local_roots, max_batches=args.max_batches)
    report["vinberg_batches"] = result.batches_examined
    report["vinberg_exhausted"] = result.exhausted
    report["vinberg_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    print(_dump(report))
    return EXIT_BUDGET if result.exhausted else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chamberwalk",
        description=(
            "Exact-arithmetic Weyl chambers of Lorentzian lattices: batch "
            "enumeration and edge walking.  The CHAMBERWALK_THREADS "
            "environment variable caps the worker pool."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chamber", help="explore a chamber by walking its edges")
    p.add_argument("lattice", help="lattice JSON file: {\"gram\": [[...]]}")
    p.add_argument("--control", default="auto", help="vertex coordinates x,y,... or 'auto'")
    p.add_argument("--max-walks", type=int, default=200)
    p.add_argument("--max-corners", type=int, default=None)
    p.add_argument("--out", default=None, help="write the deterministic report here")
    p.add_argument("--compare-vinberg", action="store_true")
    p.set_defaults(func=_cmd_chamber)

    p = sub.add_parser("vinberg", help="run the batch enumeration")
    p.add_argument("lattice")
    p.add_argument("--control", required=True, help="coordinates x,y,... or 'auto'")
    p.add_argument("--batch0", default="auto", help="'auto' or a JSON file of roots")
    p.add_argument("--max-batches", type=int, default=None)
    p.add_argument("--max-priority", default=None, help="stop past this priority (p/q)")
    p.add_argument("--norms", default=None, help="restrict root norms, e.g. 1,2")
    p.set_defaults(func=_cmd_vinberg)

    p = sub.add_parser("batch0", help="simple system at a vertex")
    p.add_argument("lattice")
    p.add_argument("--control", required=True)
    p.set_defaults(func=_cmd_batch0)

    p = sub.add_parser("shortvec", help="2D short-vector searches")
    p.add_argument("mode", choices=["promised", "notpromised", "anisotropic"])
    p.add_argument("--gram", required=True, help="a,b,c for [[a,b],[b,c]]")
    p.add_argument("--k", required=True)
    p.add_argument("--half", required=True, help="half-plane witness x,y")
    p.add_argument("--M", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--l", default=None)
    p.add_argument("--grouped", action="store_true", help="grouped fast path")
    p.set_defaults(func=_cmd_shortvec)

    p = sub.add_parser("pell", help="least solution of x^2 - n y^2 = 1")
    p.add_argument("n", type=int)
    p.set_defaults(func=_cmd_pell)

    p = sub.add_parser("table1", help="rank-2 slowness table as TSV")
    p.add_argument("--rows", default=None, help="comma-separated n values")
    p.add_argument("--check", default=None, help="diff against a golden file")
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("diagram", help="classify a diagram JSON file")
    p.add_argument("diagram")
    p.add_argument("--spherical-extensions", default=None, metavar="N")
    p.add_argument("--cuspidal-extensions", default=None, metavar="N")
    p.set_defaults(func=_cmd_diagram)

    p = sub.add_parser("compare", help="edgewalk vs batch enumeration")
    p.add_argument("lattice")
    p.add_argument("--control", default="auto")
    p.add_argument("--max-walks", type=int, default=200)
    p.add_argument("--max-batches", type=int, default=100000)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, EdgewalkError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
