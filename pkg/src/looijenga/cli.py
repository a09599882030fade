"""Command-line driver.

Subcommands::

    open        connected open series per edge class
    log         log generating functions (open series pushed through the bridge)
    bps         BPS invariants with integrality verdicts
    verify-dp3  vertex pipeline against the dP3(0,2) closed form
    expand      hbar-expansion of a serialized q-rational

Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .bps import DivisibilityKey, bps_transform, check_integrality, result_row
from .correspondence import (ContactData, ParityViolation, extract_genus_invariants,
                             log_from_open)
from .oracle import dp3_closed_form
from .qalgebra import Phased, QRational
from .schur import DEFAULT_CONVENTION, SpecializationConvention
from .strip import GeometryError, StripGeometry, box, connected_open_series, load_geometry

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


class InputError(ValueError):
    pass


# ------------------------------------------------------------ configuration


@dataclass(frozen=True)
class RunConfig:
    geometry: StripGeometry
    bound: tuple | None = None
    total_degree: int | None = None
    winding: int = 1
    interior_markings: int = 1
    tangencies: tuple | None = None
    genus_cap: int = 2
    output_format: str = "json"
    convention: SpecializationConvention = DEFAULT_CONVENTION
    jobs: int = 1

    def __post_init__(self):
        if (self.bound is None) == (self.total_degree is None):
            raise InputError("give exactly one of --bound and --total-degree")
        if self.bound is not None and any(b < 0 for b in self.bound):
            raise InputError("bound coordinates must be nonnegative")
        if self.total_degree is not None and self.total_degree < 0:
            raise InputError("total degree must be nonnegative")
        if self.winding < 1:
            raise InputError("winding must be positive")
        if self.genus_cap < 0:
            raise InputError("genus cap must be nonnegative")
        if self.jobs < 1:
            raise InputError("--jobs must be positive")
        if self.interior_markings not in (0, 1):
            raise InputError("a single boundary admits m = 0 or m = 1 interior markings")

    def classes(self, width: int) -> list[tuple[int, ...]]:
        """Lattice points in the requested box or simplex, lexicographically."""
        if self.bound is not None:
            if len(self.bound) != width:
                raise InputError(f"bound needs {width} coordinates, got {len(self.bound)}")
            return box(self.bound)
        n = self.total_degree
        return [c for c in itertools.product(range(n + 1), repeat=width) if sum(c) <= n]


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _parse_contact(text: str) -> tuple[int, tuple | None]:
    head, sep, tail = text.partition(":")
    try:
        m = int(head)
    except ValueError:
        raise InputError(f"contact must look like m:c1,...,cn, got {text!r}") from None
    tangencies = _int_list(tail) if sep and tail else None
    if tangencies is not None and len(tangencies) != 1:
        raise InputError("strip geometries carry a single boundary: give one tangency")
    return m, tangencies


def _config(args, default_total: int | None = None) -> RunConfig:
    geometry = load_geometry(args.geometry)
    bound = _int_list(args.bound) if args.bound is not None else None
    total = args.total_degree
    if bound is None and total is None:
        total = default_total
    m, tangencies = _parse_contact(args.contact) if args.contact else (1, None)
    winding = args.winding
    if tangencies is not None and args.command in ("open", "log"):
        if winding is not None and winding != tangencies[0]:
            raise InputError("--contact tangency disagrees with --winding")
        winding = tangencies[0]
    return RunConfig(
        geometry=geometry,
        bound=bound,
        total_degree=total,
        winding=winding if winding is not None else 1,
        interior_markings=m,
        tangencies=tangencies,
        genus_cap=args.genus,
        output_format=args.format,
        convention=SpecializationConvention.parse(args.convention),
        jobs=args.jobs,
    )


def _run(fn: Callable, tasks: Sequence, jobs: int) -> list:
    """Map ``fn`` over ``tasks`` keeping the input order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


# ------------------------------------------------------------------ pipeline


def _phased_json(p: Phased) -> dict:
    return {"i_power": p.i_power, "value": p.value.to_json_obj(), "text": str(p.value)}


def _contact_json(contact: ContactData) -> dict:
    return {"m": contact.m, "tangencies": list(contact.tangencies)}


def _open_task(task) -> Phased:
    geometry, winding, c, convention = task
    return connected_open_series(geometry, winding, c, convention)


def log_series(geometry: StripGeometry, d: Sequence[int], m: int = 1,
               convention: SpecializationConvention = DEFAULT_CONVENTION):
    """Log generating function of surface class ``d``.

    Returns ``(contact, value)``; ``contact`` is ``None`` when the class has
    no admissible contact datum.
    """
    d = tuple(d)
    sol = geometry.open_class(d)
    if sol is None:
        return None, None
    winding, c = sol
    d2 = geometry.d2_dot(d)
    if winding < 1 or d2 < 1:
        return None, None
    contact = ContactData(m, (winding,), winding, d2)
    if any(x < 0 for x in c):
        return contact, Phased(0, QRational(0))
    open_series = connected_open_series(geometry, winding, c, convention)
    return contact, log_from_open(open_series, contact)


def _log_task(task):
    geometry, d, m, convention = task
    return log_series(geometry, d, m, convention)


def _genus_list(series: Phased, g_max: int, shift: int) -> list[Fraction]:
    return extract_genus_invariants(series, g_max, shift=shift)


def _emit(rows_json, csv_header, csv_rows, fmt: str, out) -> None:
    if out is None:
        out = sys.stdout
    if fmt == "json":
        out.write(json.dumps(rows_json, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header)
    writer.writerows(csv_rows)
    out.write(buf.getvalue())


def _fmt_class(c: Iterable[int]) -> str:
    return " ".join(str(x) for x in c)


def cmd_open(cfg: RunConfig, out=None) -> int:
    g = cfg.geometry
    classes = cfg.classes(g.num_edges)
    values = _run(_open_task, [(g, cfg.winding, c, cfg.convention) for c in classes], cfg.jobs)
    status = EXIT_OK
    rows, csv_rows = [], []
    for c, v in zip(classes, values):
        rows.append({"class": list(c), "winding": cfg.winding, "series": _phased_json(v)})
        if cfg.output_format == "csv":
            try:
                genera = _genus_list(v, cfg.genus_cap, -1)
            except ParityViolation as exc:
                print(f"class {list(c)}: {exc}", file=sys.stderr)
                status = EXIT_FAILURE
                continue
            csv_rows.extend((_fmt_class(c), cfg.winding, k, str(n)) for k, n in enumerate(genera))
    _emit(rows, ("class", "winding", "g", "value"), csv_rows, cfg.output_format, out)
    return status


def cmd_log(cfg: RunConfig, out=None) -> int:
    g = cfg.geometry
    if g.d2_covector is None:
        raise InputError("geometry has no d2_covector; the log side needs D2.beta")
    classes = cfg.classes(g.num_edges)
    tasks = [(g, cfg.winding, c, cfg.convention) for c in classes]
    values = _run(_open_task, tasks, cfg.jobs)
    status = EXIT_OK
    rows, skipped, csv_rows = [], [], []
    for c, open_series in zip(classes, values):
        d = g.surface_class(cfg.winding, c)
        d2 = g.d2_dot(d)
        if d2 < 1:
            skipped.append({"class": list(d), "open_class": list(c), "reason": "D2.beta < 1"})
            continue
        contact = ContactData(cfg.interior_markings, (cfg.winding,), cfg.winding, d2)
        v = log_from_open(open_series, contact)
        rows.append({
            "class": list(d),
            "open_class": list(c),
            "winding": cfg.winding,
            "contact": _contact_json(contact),
            "d1_dot_beta": contact.d1_dot_beta,
            "d2_dot_beta": d2,
            "ks_dot_beta": -(contact.d1_dot_beta + d2),
            "series": _phased_json(v),
        })
        if cfg.output_format == "csv":
            try:
                genera = _genus_list(v, cfg.genus_cap, contact.n - 1)
            except ParityViolation as exc:
                print(f"class {list(d)}: {exc}", file=sys.stderr)
                status = EXIT_FAILURE
                continue
            csv_rows.extend((_fmt_class(d), cfg.winding, k, str(n)) for k, n in enumerate(genera))
    _emit({"rows": rows, "skipped": skipped}, ("class", "winding", "g", "value"),
          csv_rows, cfg.output_format, out)
    return status


def _surface_classes(cfg: RunConfig) -> list[tuple[int, ...]]:
    g = cfg.geometry
    if g.d1_covector is None or g.d2_covector is None:
        raise InputError("geometry needs d1_covector and d2_covector for surface-class runs")
    out = []
    for d in cfg.classes(len(g.class_map)):
        if g.d1_dot(d) < 1 or g.d2_dot(d) < 1:
            continue
        if cfg.tangencies is not None and g.d1_dot(d) != cfg.tangencies[0]:
            continue
        out.append(d)
    return out


def _log_table(cfg: RunConfig, classes: Sequence[tuple]) -> dict:
    g = cfg.geometry
    wanted = set(classes)
    # multiple-cover sums need every k-th root of a class as well
    for d in classes:
        for k in range(2, max(d) + 1):
            if all(x % k == 0 for x in d):
                wanted.add(tuple(x // k for x in d))
    ordered = sorted(wanted)
    results = _run(_log_task, [(g, d, cfg.interior_markings, cfg.convention) for d in ordered],
                   cfg.jobs)
    return dict(zip(ordered, results))


def cmd_bps(cfg: RunConfig, out=None) -> int:
    classes = _surface_classes(cfg)
    table = _log_table(cfg, classes)
    series_by_key = {}
    for d, (contact, v) in table.items():
        if contact is not None:
            series_by_key[DivisibilityKey(contact.tangencies, d)] = v
    rows, csv_rows = [], []
    status = EXIT_OK
    for d in classes:
        contact, _ = table[d]
        if contact is None:
            continue
        key = DivisibilityKey(contact.tangencies, d)
        ks = -(contact.d1_dot_beta + contact.d2_dot_beta)
        value = bps_transform(series_by_key, key, contact, ks)
        row = result_row(key, value)
        verdict = check_integrality(value)
        if not verdict:
            row["witness"] = verdict.witness
            status = EXIT_FAILURE
        rows.append(row)
        csv_rows.append((_fmt_class(d), _fmt_class(key.tangencies), str(value),
                         "true" if verdict else "false"))
    _emit(rows, ("class", "tangencies", "value", "verdict"), csv_rows, cfg.output_format, out)
    return status


def bps_from_table(entries: Sequence[dict], out=None, fmt: str = "json") -> int:
    """BPS invariants of a serialized log table (the rows of ``log --format json``)."""
    series_by_key, meta = {}, []
    try:
        for row in entries:
            contact = ContactData(row["contact"]["m"], tuple(row["contact"]["tangencies"]),
                                  row["d1_dot_beta"], row["d2_dot_beta"])
            key = DivisibilityKey(contact.tangencies, tuple(row["class"]))
            series = row["series"]
            series_by_key[key] = Phased.make(series["i_power"],
                                             QRational.from_json_obj(series["value"]))
            meta.append((key, contact, row["ks_dot_beta"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed log table: {exc}") from None
    rows, csv_rows = [], []
    status = EXIT_OK
    for key, contact, ks in meta:
        value = bps_transform(series_by_key, key, contact, ks)
        row = result_row(key, value)
        verdict = check_integrality(value)
        if not verdict:
            row["witness"] = verdict.witness
            status = EXIT_FAILURE
        rows.append(row)
        csv_rows.append((_fmt_class(key.curve_class), _fmt_class(key.tangencies), str(value),
                         "true" if verdict else "false"))
    _emit(rows, ("class", "tangencies", "value", "verdict"), csv_rows, fmt, out)
    return status


def _in_hypothesis(d: tuple) -> str | None:
    d0, d1, d2, d3 = d
    if d1 < 1 or d2 + d3 < 1:
        return "needs d1 >= 1 and d2 + d3 >= 1"
    if d0 < 1:
        return "zero denominator [d0]"
    if d1 + d2 + d3 - d0 == 0:
        return "zero denominator [d1 + d2 + d3 - d0]"
    return None


def verify_dp3(cfg: RunConfig) -> dict:
    """Comparison report; ``report["summary"]["mismatch"]`` counts failures."""
    g = cfg.geometry
    if len(g.class_map) != 4:
        raise InputError("verify-dp3 needs a geometry with four surface coordinates")
    candidates = cfg.classes(4)
    runnable = [d for d in candidates if _in_hypothesis(d) is None]
    results = dict(zip(runnable, _run(
        _log_task, [(g, d, cfg.interior_markings, cfg.convention) for d in runnable], cfg.jobs)))
    entries = []
    counts = {"equal": 0, "mismatch": 0, "skipped": 0}
    for d in candidates:
        reason = _in_hypothesis(d)
        if reason is None and results[d][0] is None:
            reason = "class outside the image of the strip"
        if reason is not None:
            counts["skipped"] += 1
            entries.append({"class": list(d), "status": "skipped", "reason": reason})
            continue
        _, series = results[d]
        expected = dp3_closed_form(*d)
        equal = series.i_power == 0 and series.value == expected
        if series.value.is_zero() and expected.is_zero():
            equal = True
        counts["equal" if equal else "mismatch"] += 1
        entries.append({
            "class": list(d),
            "status": "equal" if equal else "mismatch",
            "pipeline": _phased_json(series),
            "closed_form": {"value": expected.to_json_obj(), "text": str(expected)},
        })
    return {"classes": entries, "summary": counts}


def cmd_verify_dp3(cfg: RunConfig, out=None) -> int:
    report = verify_dp3(cfg)
    csv_rows = []
    for e in report["classes"]:
        csv_rows.append((_fmt_class(e["class"]), e["status"],
                         e.get("pipeline", {}).get("text", ""),
                         e.get("closed_form", {}).get("text", ""),
                         e.get("reason", "")))
    _emit(report, ("class", "status", "pipeline", "closed_form", "reason"), csv_rows,
          cfg.output_format, out)
    return EXIT_FAILURE if report["summary"]["mismatch"] else EXIT_OK


def _read_value(text: str):
    path = Path(text)
    if not text.lstrip().startswith("{") and path.exists():
        text = path.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"value is not valid JSON: {exc.msg}") from None
    try:
        if "i_power" in obj:
            return int(obj["i_power"]), QRational.from_json_obj(obj["value"])
        return None, QRational.from_json_obj(obj)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"cannot read q-rational: {exc}") from None


def cmd_expand(args, out=None) -> int:
    i_power, value = _read_value(args.value)
    if i_power is None:
        i_power = args.i_power
    order = args.order
    if args.genus_cap is not None:
        order = max(order, 2 * args.genus_cap + args.shift)
    series = Phased.make(i_power, value).expand(order)
    terms = [{"exponent": e, "re": str(c.re), "im": str(c.im)}
             for e, c in sorted(series.terms.items())]
    result = {"order": order, "terms": terms}
    status = EXIT_OK
    if args.genus_cap is not None:
        try:
            genera = extract_genus_invariants(Phased.make(i_power, value), args.genus_cap,
                                              shift=args.shift)
            result["genus"] = [str(x) for x in genera]
        except ParityViolation as exc:
            result["parity_violation"] = {"exponent": exc.exponent, "coefficient": str(exc.coefficient)}
            status = EXIT_FAILURE
    _emit(result, ("exponent", "re", "im"), [(t["exponent"], t["re"], t["im"]) for t in terms],
          args.format, out)
    return status


# ----------------------------------------------------------------- argparse


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--geometry", default="dp3-0-2", help="preset name or geometry JSON file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--bound", help="componentwise class bound v1,v2,...")
    group.add_argument("--total-degree", type=int, help="bound on the sum of class coordinates")
    p.add_argument("--winding", type=int, default=None)
    p.add_argument("--contact", help="m:c1,...,cn (interior markings and tangency)")
    p.add_argument("--genus", type=int, default=2, help="highest genus in CSV expansions")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--convention", choices=("plus", "minus"), default="plus")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="looijenga", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("open", "connected open series"), ("log", "log generating functions"),
                       ("bps", "BPS invariants and integrality"),
                       ("verify-dp3", "compare with the dP3(0,2) closed form")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        if name == "bps":
            p.add_argument("--from-log", help="log table JSON (output of the log subcommand)")
    p = sub.add_parser("expand", help="hbar expansion of a q-rational")
    p.add_argument("value", help="JSON object or file: {num, den} or {i_power, value}")
    p.add_argument("--i-power", type=int, default=0)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--genus", dest="genus_cap", type=int, default=None)
    p.add_argument("--shift", type=int, default=-1, help="genus g sits at hbar^(2g+shift)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "expand":
            return cmd_expand(args)
        if args.command == "bps" and args.from_log:
            try:
                obj = json.loads(Path(args.from_log).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"{args.from_log}: {exc}") from None
            entries = obj["rows"] if isinstance(obj, dict) and "rows" in obj else obj
            return bps_from_table(entries, fmt=args.format)
        default_total = 6 if args.command in ("bps", "verify-dp3") else None
        cfg = _config(args, default_total=default_total)
        handler = {"open": cmd_open, "log": cmd_log, "bps": cmd_bps,
                   "verify-dp3": cmd_verify_dp3}[args.command]
        return handler(cfg)
    except (InputError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
