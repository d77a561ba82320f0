"""Structure documents (the JSON wire format), the builtin example
registry, and report emission.

Documents carry exact rational strings only; serialization uses a fixed
key order so a given input and engine version always produce the very
same report bytes.
"""

from __future__ import annotations

import hashlib
import json
import re

from . import __version__
from .connections import canonical_connection, levi_civita, torsion
from .curvature import CurvatureReport, curvature_report, hermitian_curvature
from .errors import (
    DocumentError,
    EngineError,
    NotApplicable,
    NotAntisymmetric,
    OddDimension,
    UnknownExample,
)
from .fixtures import BUILTIN_NAMES, builtin_raw_document
from .lie import LieAlgebra
from .scalars import GaussianRational, parse_rational, rat_str
from .structures import (
    AlmostComplexStructure,
    HermitianTriple,
    InvariantForm,
    InvariantMetric,
    classify,
    metric_from_taming,
)
from .tensors import Tensor
from .theorems import all_verdicts, taming_obstruction

_BRACKET_KEY = re.compile(r"^\[(\d+),(\d+)\]$")


class StructureDocument:
    """A parsed and fully validated structure document."""

    __slots__ = ("name", "dim", "brackets", "alg", "J", "g", "omega", "triple")

    def __init__(self, name, dim, brackets, alg, J, g, omega, triple):
        self.name = name
        self.dim = dim
        self.brackets = brackets
        self.alg = alg
        self.J = J
        self.g = g
        self.omega = omega
        self.triple = triple


def parse_document(data) -> StructureDocument:
    """Parse bytes/str/dict into a validated StructureDocument.

    Every failure carries the offending field's path.
    """
    if isinstance(data, (bytes, str)):
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}", path="<document>") from exc
    else:
        obj = data
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object", path="<document>")

    name = obj.get("name", "unnamed")
    if not isinstance(name, str):
        raise DocumentError("name must be a string", path="name")
    dim = obj.get("dim")
    if not isinstance(dim, int) or dim < 2:
        raise DocumentError("dim must be an integer >= 2", path="dim")
    if dim % 2:
        raise OddDimension(f"dimension {dim} is odd", path="dim")

    raw_brackets = obj.get("brackets", {})
    if not isinstance(raw_brackets, dict):
        raise DocumentError("brackets must be an object", path="brackets")
    sparse: dict = {}
    for key, comps in raw_brackets.items():
        m = _BRACKET_KEY.match(key)
        if not m:
            raise DocumentError(
                f"bracket key {key!r} is not of the form \"[a,b]\"",
                path=f"brackets.{key}",
            )
        a, b = int(m.group(1)), int(m.group(2))
        if not (1 <= a <= dim and 1 <= b <= dim):
            raise DocumentError("bracket index out of range", path=f"brackets.{key}")
        if not isinstance(comps, dict):
            raise DocumentError("bracket value must be an object", path=f"brackets.{key}")
        parsed = {}
        for k, v in comps.items():
            try:
                kk = int(k)
            except ValueError:
                raise DocumentError(
                    f"component key {k!r} is not an index", path=f"brackets.{key}.{k}"
                ) from None
            if not 1 <= kk <= dim:
                raise DocumentError("component index out of range", path=f"brackets.{key}.{k}")
            try:
                parsed[kk - 1] = parse_rational(v)
            except ValueError as exc:
                raise DocumentError(str(exc), path=f"brackets.{key}.{k}") from None
        if a == b:
            if any(parsed.values()):
                raise NotAntisymmetric(
                    f"bracket [{a},{a}] must vanish", path=f"brackets.{key}"
                )
            continue
        lo, hi = (a, b) if a < b else (b, a)
        entry = {k: (v if a < b else -v) for k, v in parsed.items()}
        if (lo - 1, hi - 1) in sparse:
            if sparse[(lo - 1, hi - 1)] != entry:
                raise NotAntisymmetric(
                    f"brackets [{lo},{hi}] and [{hi},{lo}] disagree",
                    path=f"brackets.{key}",
                )
        sparse[(lo - 1, hi - 1)] = entry

    alg = LieAlgebra.from_brackets(dim, sparse)

    jm = obj.get("J")
    j_tensor = _parse_matrix(jm, dim, "J")
    J = AlmostComplexStructure(j_tensor)

    has_g = "g" in obj
    has_omega = "omega" in obj
    if has_g == has_omega:
        raise DocumentError("exactly one of g, omega is required", path="<document>")
    omega_tensor = None
    if has_g:
        graw = obj["g"]
        if graw == "identity":
            g_tensor = Tensor.from_function(
                (dim, dim), lambda a, b: _ONE_G if a == b else _ZERO_G
            )
        else:
            g_tensor = _parse_matrix(graw, dim, "g")
        metric = InvariantMetric(g_tensor)
        triple = HermitianTriple(alg, J, metric)
    else:
        omega_tensor = _parse_matrix(obj["omega"], dim, "omega")
        for a in range(dim):
            for b in range(dim):
                if omega_tensor[(a, b)] != -omega_tensor[(b, a)]:
                    raise NotAntisymmetric(
                        f"omega[{a + 1}][{b + 1}] != -omega[{b + 1}][{a + 1}]",
                        path="omega",
                    )
        metric = metric_from_taming(alg, J, InvariantForm(omega_tensor))
        triple = HermitianTriple(alg, J, metric)
    return StructureDocument(
        name, dim, sparse, alg, J, metric, omega_tensor, triple
    )


_ZERO_G = GaussianRational(0, 0)
_ONE_G = GaussianRational(1, 0)


def _parse_matrix(raw, dim: int, path: str) -> Tensor:
    if not isinstance(raw, list) or len(raw) != dim:
        raise DocumentError(f"{dim} rows required", path=path)
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError(f"row must have {dim} entries", path=f"{path}[{i}]")
        parsed = []
        for j, v in enumerate(row):
            try:
                parsed.append(GaussianRational(parse_rational(v), 0))
            except ValueError as exc:
                raise DocumentError(str(exc), path=f"{path}[{i}][{j}]") from None
        rows.append(parsed)
    return Tensor.from_nested(rows)


def builtin_example(name: str) -> StructureDocument:
    """Parse a builtin example document through the normal path."""
    return parse_document(builtin_raw_document(name))


def document_from_triple(triple: HermitianTriple, name: str) -> dict:
    """Serialize a triple back to the document wire format."""
    dim = triple.alg.dim
    brackets = {}
    for a in range(dim):
        for b in range(a + 1, dim):
            comps = {
                str(k + 1): _real_str(v)
                for k, v in enumerate(triple.alg.bracket_basis(a, b))
                if v
            }
            if comps:
                brackets[f"[{a + 1},{b + 1}]"] = comps
    doc = {
        "name": name,
        "dim": dim,
        "brackets": brackets,
        "J": _matrix_strings(triple.J.J),
    }
    g_rows = triple.g.rows
    if all(
        g_rows[a][b] == (_ONE_G if a == b else _ZERO_G)
        for a in range(dim)
        for b in range(dim)
    ):
        doc["g"] = "identity"
    else:
        doc["g"] = _matrix_strings(triple.g.g)
    return doc


def _real_str(z: GaussianRational) -> str:
    if z.im:
        raise EngineError("document scalars must be real")
    return rat_str(z.re)


def _matrix_strings(t: Tensor) -> list:
    return [[_real_str(x) for x in row] for row in t.nested()]


def canonical_json(obj) -> str:
    """Deterministic JSON: canonical ordering is produced at build time,
    so dumping without re-sorting keeps it stable."""
    return json.dumps(_canonicalize(obj), indent=2, sort_keys=False)


def _canonicalize(obj):
    if isinstance(obj, dict):
        def keyfn(k):
            m = _BRACKET_KEY.match(k) if isinstance(k, str) else None
            if m:
                return (0, int(m.group(1)), int(m.group(2)), k)
            if isinstance(k, str) and k.isdigit():
                return (0, int(k), 0, k)
            return (1, 0, 0, str(k))

        keys = list(obj.keys())
        if all(isinstance(k, str) and (k.isdigit() or _BRACKET_KEY.match(k)) for k in keys):
            keys = sorted(keys, key=keyfn)
        return {k: _canonicalize(obj[k]) for k in keys}
    if isinstance(obj, (list, tuple)):
        return [_canonicalize(x) for x in obj]
    return obj


def input_digest(doc_dict: dict) -> str:
    return hashlib.sha256(canonical_json(doc_dict).encode()).hexdigest()


def _gauss_json(z: GaussianRational) -> dict | str:
    if not z.im:
        return rat_str(z.re)
    return {"re": rat_str(z.re), "im": rat_str(z.im)}


def _sparse_rank3(table: dict) -> dict:
    out = {}
    for (a, b), comps in sorted(table.items()):
        out[f"({a + 1},{b + 1})"] = {
            str(c + 1): _gauss_json(v) for c, v in sorted(comps.items())
        }
    return out


def _sparse_tensor(t: Tensor) -> dict:
    out = {}
    for idx, v in t.nonzero_items():
        key = "(" + ",".join(str(i + 1) for i in idx) + ")"
        out[key] = _gauss_json(v)
    return out


def report_document(doc: StructureDocument) -> dict:
    """The full machine-readable report for one parsed structure."""
    triple = doc.triple
    flags = classify(triple)
    lc = levi_civita(triple)
    can = canonical_connection(triple, lc)
    _, t11 = torsion(can, triple.alg, triple.frame())
    rep: CurvatureReport = curvature_report(triple)
    verdicts = all_verdicts(triple)
    rt = hermitian_curvature(triple)

    report = {
        "engine": {"name": "hermlie", "version": __version__},
        "input_digest": input_digest(document_from_triple(triple, doc.name)),
        "name": doc.name,
        "dim": doc.dim,
        "classification": {
            "integrable": flags["integrable"],
            "kahler": flags["kahler"],
            "almost_kahler": flags["almost_kahler"],
            "quasi_kahler": flags["quasi_kahler"],
        },
        "connections": {
            "levi_civita": _sparse_rank3(lc.sparse_table()),
            "canonical": _sparse_rank3(can.sparse_table()),
            "canonical_certified": can.canonical_certified,
            "canonical_torsion_11_zero": t11.is_zero(),
        },
        "curvature": {
            "s": rat_str(rep.s),
            "s_star": rat_str(rep.s_star),
            "nabla_omega_sq": rat_str(rep.nabla_omega_sq),
            "w4": None if rep.w4 is None else rat_str(rep.w4),
            "ricci": [[_gauss_json(x) for x in row] for row in rep.ricci.nested()],
            "ricci_star": [
                [_gauss_json(x) for x in row] for row in rep.ricci_star.nested()
            ],
            "gray": rep.gray,
            "bianchi_defect_zero": rep.bianchi_defect_zero,
            "hermitian_curvature_zero": rep.hermitian_curvature_zero,
            "hermitian_curvature_nonzero": _sparse_tensor(rt.tensor),
            "tosatti": {
                "zero": rep.tosatti_zero,
                "positivity": rep.tosatti_positivity,
                "positivity_convention_dependent": True,
            },
        },
        "theorems": [
            {
                "statement": v.statement,
                "hypotheses_met": v.hypotheses_met,
                "conclusion_holds": v.conclusion_holds,
                "consistent": v.consistent,
                "witness": v.witness,
            }
            for v in verdicts
        ],
    }
    if doc.dim == 6 and flags["quasi_kahler"]:
        res = taming_obstruction(triple)
        entry = {"solvable": res.solvable}
        if res.solvable:
            entry["coefficients"] = [_gauss_json(c) for c in res.coefficients]
        else:
            entry["certificate"] = [_gauss_json(c) for c in res.certificate]
        report["taming_obstruction"] = entry
    else:
        report["taming_obstruction"] = None
    if doc.dim == 6:
        from .theorems import heisenberg_normalize

        try:
            f = heisenberg_normalize(triple.alg, triple.J)
            report["heisenberg_normalization"] = {
                "applicable": True,
                "frame_columns": [
                    [_gauss_json(f.matrix[(i, j)]) for i in range(6)]
                    for j in range(6)
                ],
            }
        except NotApplicable as exc:
            report["heisenberg_normalization"] = {
                "applicable": False,
                "reason": str(exc),
            }
    else:
        report["heisenberg_normalization"] = None
    return report


def report_text(report: dict) -> str:
    """Human-readable rendering of a report document."""
    lines = []
    lines.append(f"structure {report['name']} (dim {report['dim']})")
    cls = report["classification"]
    lines.append(
        "classification: "
        + ", ".join(k for k, v in cls.items() if v)
        if any(cls.values())
        else "classification: none"
    )
    cur = report["curvature"]
    lines.append(
        f"scalars: s = {cur['s']}, s* = {cur['s_star']}, "
        f"|D omega|^2 = {cur['nabla_omega_sq']}, w4 = {cur['w4']}"
    )
    lines.append(
        f"gray (riemann): G1={cur['gray']['riemann']['G1']} "
        f"G2={cur['gray']['riemann']['G2']} G3={cur['gray']['riemann']['G3']}"
    )
    lines.append(
        f"hermitian curvature zero: {cur['hermitian_curvature_zero']}; "
        f"bianchi defect zero (hermitian): {cur['bianchi_defect_zero']['hermitian']}"
    )
    lines.append(
        f"tosatti tensor: zero={cur['tosatti']['zero']} "
        f"positivity={cur['tosatti']['positivity']}"
    )
    conn = report["connections"]
    lines.append(
        f"canonical connection certified: {conn['canonical_certified']}; "
        f"(1,1)-torsion zero: {conn['canonical_torsion_11_zero']}"
    )
    for v in report["theorems"]:
        lines.append(
            f"theorem {v['statement']}: hypotheses={v['hypotheses_met']} "
            f"conclusion={v['conclusion_holds']} consistent={v['consistent']}"
        )
    if report.get("taming_obstruction") is not None:
        t = report["taming_obstruction"]
        lines.append(
            "taming correction: "
            + ("solvable" if t["solvable"] else "no solution (certificate attached)")
        )
    hn = report.get("heisenberg_normalization")
    if hn is not None:
        lines.append(
            "heisenberg normalization: "
            + ("applicable" if hn["applicable"] else f"not applicable ({hn['reason']})")
        )
    return "\n".join(lines)
