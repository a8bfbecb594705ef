"""Golden-data loading, catalog comparison, worked identities and output formatting."""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .codes import (
    CodeContext,
    CodeReport,
    CyclicCode,
    build,
    code_dual,
    code_meet,
    code_sum,
)
from .cyclotomic import CycPartition
from .errors import InputError

CSV_COLUMNS = ("partition", "type", "rank", "cardinality", "bch_bound", "min_weight",
               "self_dual", "self_orthogonal", "free")

# the bundled table describes Z_4 codes of length 7
BUNDLED_CONTEXT = (2, 1, 2, 7, "galois-ring")


@dataclass(frozen=True)
class GoldenRow:
    label: str
    partition: str
    type: tuple[int, ...]
    cardinality: int
    bch_bound: int


def bundled_catalog() -> Path:
    return Path(str(resources.files("chaincodes") / "data" / "z4_length7.csv"))


def _parse_power(text: str) -> int:
    text = text.strip()
    if "^" in text:
        base, _, exp = text.partition("^")
        return int(base) ** int(exp)
    return int(text)


def load_golden(path: str | Path, ctx: CodeContext | None = None) -> dict[str, GoldenRow]:
    """Rows keyed by canonical partition string.

    With ``ctx`` the partition strings are re-parsed and normalized so that
    files listing representatives in another order still match.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read golden file {path}: {exc.strerror}") from None
    out: dict[str, GoldenRow] = {}
    reader = csv.DictReader(io.StringIO(text))
    need = {"label", "partition", "type", "cardinality", "bch_bound"}
    if reader.fieldnames is None or not need <= set(reader.fieldnames):
        raise InputError(f"{path}: header must contain {sorted(need)}")
    for lineno, row in enumerate(reader, start=2):
        try:
            key = row["partition"].strip()
            if ctx is not None:
                key = CycPartition.parse(key, ctx.cyc).to_string()
            type_vec = tuple(int(x) for x in row["type"].strip().strip("()").split(","))
            rec = GoldenRow(row["label"].strip(), key, type_vec,
                            _parse_power(row["cardinality"]), int(row["bch_bound"]))
        except (ValueError, AttributeError) as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
        if key in out:
            raise InputError(f"{path}:{lineno}: duplicate partition {key}")
        out[key] = rec
    return out


def labels_for(ctx: CodeContext) -> dict[str, str]:
    """Display labels from the bundled table when the context matches it."""
    if (ctx.p, ctx.n, ctx.s, ctx.ell, ctx.family) != BUNDLED_CONTEXT:
        return {}
    return {k: r.label for k, r in load_golden(bundled_catalog(), ctx).items()}


def compare_golden(reports: Sequence[CodeReport],
                   golden: dict[str, GoldenRow]) -> list[tuple[str, str]]:
    """(partition, message) per disagreement in type, cardinality or BCH bound.

    Empty on a full match.
    """
    diffs = []
    seen = set()
    for r in reports:
        g = golden.get(r.partition)
        if g is None:
            diffs.append((r.partition, f"{r.partition}: missing from golden data"))
            continue
        seen.add(r.partition)
        for name, got, want in (("type", r.type, g.type),
                                ("cardinality", r.cardinality, g.cardinality),
                                ("bch_bound", r.bch_bound, g.bch_bound)):
            if got != want:
                diffs.append((r.partition, f"{g.label} [{r.partition}] {name}: "
                                           f"computed {_fmt(got)}, golden {_fmt(want)}"))
    for key in sorted(set(golden) - seen):
        diffs.append((key, f"{golden[key].label} [{key}]: no such code in the catalog"))
    return diffs


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(map(str, v)) + ")"
    return str(v)


# worked lattice identities, stated with table labels
IDENTITIES = (
    ("C_8+C_12=C_15", "sum", ("C_8", "C_12"), "C_15"),
    ("C_19+C_12=C_20", "sum", ("C_19", "C_12"), "C_20"),
    ("C_8^perp=C_19", "dual", ("C_8",), "C_19"),
    ("C_12^perp=C_12", "dual", ("C_12",), "C_12"),
    ("C_8&C_12=C_6", "meet", ("C_8", "C_12"), "C_6"),
)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    partition_ok: bool
    words_ok: bool | None

    @property
    def ok(self) -> bool:
        return self.partition_ok and self.words_ok is not False


def apply_op(op: str, codes: Sequence[CyclicCode]) -> CyclicCode:
    arity = {"sum": 2, "meet": 2, "dual": 1}
    if op not in arity:
        raise InputError(f"unknown operation {op!r}")
    if len(codes) != arity[op]:
        raise InputError(f"{op} takes {arity[op]} partition(s), got {len(codes)}")
    if op == "sum":
        return code_sum(*codes)
    if op == "meet":
        return code_meet(*codes)
    return code_dual(codes[0])


def words_of_op(op: str, codes: Sequence[CyclicCode], max_enum: int) -> frozenset[bytes]:
    """The same operation computed on enumerated codeword sets or by the kernel oracle."""
    if op == "sum":
        a, b = codes
        return frozenset(_sumset(a.words(max_enum), b.words(max_enum), a.context.ring.coeff_mod))
    if op == "meet":
        a, b = codes
        return a.words(max_enum) & b.words(max_enum)
    return linalg.codeword_set(linalg.kernel(codes[0].generator), max_enum)


def _sumset(A: frozenset[bytes], B: frozenset[bytes], mod: int) -> set[bytes]:
    a = np.array([np.frombuffer(w, dtype=np.int32) for w in A])
    b = np.array([np.frombuffer(w, dtype=np.int32) for w in B])
    sums = (a[:, None, :] + b[None, :, :]) % mod
    return {w.tobytes() for w in sums.reshape(-1, a.shape[1]).astype(np.int32)}


def check_identities(ctx: CodeContext, golden: dict[str, GoldenRow], with_words: bool = True,
                     max_enum: int = linalg.DEFAULT_MAX_SPAN_ENUM) -> list[IdentityResult]:
    by_label = {r.label: key for key, r in golden.items()}
    results = []
    for name, op, args, want in IDENTITIES:
        missing = [x for x in (*args, want) if x not in by_label]
        if missing:
            raise InputError(f"golden data lacks labels {missing}")
        operands = [build(ctx, by_label[x]) for x in args]
        expected = build(ctx, by_label[want])
        got = apply_op(op, operands)
        words_ok = None
        if with_words:
            words_ok = words_of_op(op, operands, max_enum) == expected.words(max_enum)
        results.append(IdentityResult(name, got.partition == expected.partition, words_ok))
    return results


def random_partition(ctx: CodeContext, rng: random.Random) -> CycPartition:
    return CycPartition(ctx.cyc, tuple(rng.randrange(ctx.s + 1) for _ in ctx.cyc.reps))


def dual_spot_checks(ctx: CodeContext, count: int, seed: int,
                     max_enum: int = linalg.DEFAULT_MAX_SPAN_ENUM) -> list[tuple[str, bool]]:
    """Partition dual against the kernel oracle on seeded random codes."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        c = CyclicCode(ctx, random_partition(ctx, rng))
        oracle = linalg.codeword_set(linalg.kernel(c.generator), max_enum)
        out.append((c.partition.to_string(), oracle == code_dual(c).words(max_enum)))
    return out


# -- formatting ----------------------------------------------------------------

def report_row(r: CodeReport) -> dict[str, str]:
    return {
        "partition": r.partition,
        "type": _fmt(r.type),
        "rank": str(r.rank),
        "cardinality": str(r.cardinality),
        "bch_bound": str(r.bch_bound),
        "min_weight": "" if r.min_weight is None else str(r.min_weight),
        "self_dual": str(r.self_dual).lower(),
        "self_orthogonal": str(r.self_orthogonal).lower(),
        "free": str(r.free).lower(),
    }


def format_rows(rows: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    """Render dict rows as table, csv, json or markdown."""
    if fmt == "json":
        return json.dumps(list(rows), indent=2) + "\n"
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(cells)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(columns) + " |",
                 "|" + "|".join("---" for _ in columns) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in cells]
        return "\n".join(lines) + "\n"
    if fmt == "table":
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells]
        return "\n".join(lines) + "\n"
    raise InputError(f"unknown format {fmt!r}")


def format_reports(reports: Sequence[CodeReport], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    rows = [report_row(r) for r in reports]
    columns = list(CSV_COLUMNS)
    if fmt in ("table", "markdown"):
        # human-facing output also shows labels and the power form of |C|
        for row, r in zip(rows, reports):
            row["label"] = r.label or ""
            row["cardinality"] = f"{r.cardinality} ({r.cardinality_power})"
        columns = ["label"] + columns
    return format_rows(rows, columns, fmt)
