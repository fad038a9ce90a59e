"""JSON problem files and report serialization.

A problem file is a single JSON object::

    {
      "name": "star",
      "field": "Q" | {"Fp": 7},
      "algebra": {"quiver": {"vertices": [0, 1, 2], "arrows": [["a", 0, 1], ...]}}
               | {"structure": {"dim": d, "constants": [[i, j, k, "c"], ...],
                                "unit": [...], "labels": [...],
                                "vertex_idempotents": [[label, [...]], ...]}}
               | {"quaternion": {"a": "-1", "b": "-1"}}
               | {"wreath": {"base": <algebra>, "n": 2}},
      "group": "S3" | {"degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]},
      "action": "trivial"
              | {"vertex_perms": [[...], ...], "arrow_matrices": [[[...]], ...]}
              | {"basis_matrices": [[[...]], ...]},
      "options": {"seed": 0, "max_samples": 64, "degree_ceiling": 64,
                  "block_order": [[vertex labels], ...]}
    }

Scalars are written as strings (``"3/2"``) or integers.  A wreath algebra
carries its own symmetric-group action, so ``group`` and ``action`` are
omitted for it.
"""
import json
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .algebra import Algebra, AlgebraError, Quiver, path_algebra, quaternion_algebra
from .equivariant import AlgebraAction
from .groups import FiniteGroup, GroupError, named_group
from .grouprep import check_coprime
from .modules import ModuleRep
from .scalars import QQ, GF, Field, is_prime
from .theorems import ExceptionalSetup, Options, wreath_build


class ProblemError(ValueError):
    """Malformed problem file; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


# ------------------------------------------------------------------ scalars

def field_to_json(F):
    return "Q" if F.p == 0 else {"Fp": F.p}


def field_from_json(obj, path="field"):
    if obj in ("Q", "QQ"):
        return QQ
    if isinstance(obj, dict) and set(obj) == {"Fp"}:
        p = obj["Fp"]
        if not isinstance(p, int) or not is_prime(p):
            raise ProblemError(path, f"{p!r} is not a prime")
        return GF(p)
    raise ProblemError(path, 'expected "Q" or {"Fp": p}')


def matrix_to_json(F, M):
    M = np.asarray(M)
    if M.ndim == 1:
        return [F.to_str(x) for x in M]
    return [[F.to_str(x) for x in row] for row in M]


def matrix_from_json(F, obj, path, shape=None):
    try:
        M = F.array(obj) if len(obj) else F.zeros((0,) * (1 if shape is None else len(shape)))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProblemError(path, f"bad scalar entry ({exc})") from None
    if shape is not None:
        if len(obj) == 0:
            M = F.zeros(shape)
        if M.shape != tuple(shape):
            raise ProblemError(path, f"expected shape {tuple(shape)}, got {M.shape}")
    return M


# ----------------------------------------------------------------- algebras

def _label_json(lab):
    if isinstance(lab, tuple):
        return [_label_json(x) for x in lab]
    if isinstance(lab, (int, np.integer)):
        return int(lab)
    return str(lab)


def _label_from_json(obj):
    return tuple(_label_from_json(x) for x in obj) if isinstance(obj, list) else obj


def algebra_to_json(A):
    """Structure-constant form (sparse triples)."""
    F = A.field
    c = A.structure
    consts = []
    for i, j, k in zip(*np.nonzero(c != 0)):
        consts.append([int(i), int(j), int(k), F.to_str(c[i, j, k])])
    out = {"structure": {"dim": A.dim, "constants": consts,
                         "unit": matrix_to_json(F, A.unit),
                         "labels": [str(x) for x in A.labels]}}
    if A.vertex_idempotents is not None:
        out["structure"]["vertex_idempotents"] = [
            [_label_json(lab), matrix_to_json(F, e)] for lab, e in A.vertex_idempotents]
    return out


def algebra_from_json(F, obj, path="algebra"):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ProblemError(path, "expected exactly one of quiver, structure, quaternion, wreath")
    (kind, body), = obj.items()
    sub = f"{path}.{kind}"
    try:
        if kind == "quiver":
            verts = body["vertices"]
            arrows = [tuple(a) for a in body.get("arrows", [])]
            return path_algebra(Quiver(verts, arrows), F)
        if kind == "structure":
            d = int(body["dim"])
            c = F.zeros((d, d, d))
            for t, entry in enumerate(body.get("constants", [])):
                i, j, k, val = entry
                c[i, j, k] = F(val)
            unit = matrix_from_json(F, body["unit"], f"{sub}.unit", (d,))
            idems = body.get("vertex_idempotents")
            if idems is not None:
                idems = [(_label_from_json(lab), matrix_from_json(F, v, f"{sub}.vertex_idempotents",
                                                                  (d,))) for lab, v in idems]
            return Algebra(F, c, unit, body.get("labels"), vertex_idempotents=idems)
        if kind == "quaternion":
            return quaternion_algebra(F, body.get("a", "-1"), body.get("b", "-1"))
    except ProblemError:
        raise
    except KeyError as exc:
        raise ProblemError(sub, f"missing key {exc}") from None
    except (AlgebraError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProblemError(sub, str(exc)) from None
    raise ProblemError(path, f"unknown algebra kind {kind!r}")


def module_to_json(M):
    F = M.field
    return {"field": field_to_json(F), "dim": M.dim,
            "action": [matrix_to_json(F, X) for X in M.action]}


def module_from_json(A, obj):
    F = A.field
    if field_from_json(obj["field"]) != F:
        raise ProblemError("module.field", "field differs from the algebra's")
    n = int(obj["dim"])
    T = F.zeros((A.dim, n, n))
    for k, X in enumerate(obj["action"]):
        T[k] = matrix_from_json(F, X, f"module.action[{k}]", (n, n))
    return ModuleRep(A, T)


# ------------------------------------------------------------------- groups

def group_to_json(G):
    return {"degree": G.degree, "generators": [list(g) for g in G.generators]}


def group_from_json(obj, path="group"):
    try:
        if isinstance(obj, str):
            return named_group(obj)
        if isinstance(obj, dict):
            return FiniteGroup([tuple(g) for g in obj.get("generators", [])],
                               degree=obj.get("degree"))
    except GroupError as exc:
        raise ProblemError(path, str(exc)) from None
    raise ProblemError(path, "expected a group name or {degree, generators}")


# ------------------------------------------------------------------ actions

def _path_action_matrix(A, vperm, arrow_mat):
    """Automorphism of a path algebra from a vertex permutation and arrow-span images."""
    F = A.field
    pb = A.path_basis
    Q = pb.quiver
    arrow_idx = [pb.arrow_index(name) for name, _, _ in Q.arrows]
    R = F.zeros((A.dim, A.dim))
    for k, (src, arrs) in enumerate(pb.paths):
        if not arrs:
            R[k] = A.basis(pb.trivial_index(Q.vertices[vperm[Q.vertices.index(src)]]))
            continue
        img = None
        for ai in arrs:
            row = F.zeros(A.dim)
            for t, coef in enumerate(arrow_mat[ai]):
                if coef != 0:
                    row[arrow_idx[t]] = coef
            img = row if img is None else A.multiply(img, row)
        R[k] = img
    return R


def action_from_json(G, A, obj, path="action"):
    F = A.field
    ngen = len(G.generators)
    try:
        if obj == "trivial":
            return AlgebraAction.trivial(G, A)
        if not isinstance(obj, dict):
            raise ProblemError(path, "expected \"trivial\" or an object")
        if "basis_matrices" in obj:
            mats = [matrix_from_json(F, X, f"{path}.basis_matrices[{s}]", (A.dim, A.dim))
                    for s, X in enumerate(obj["basis_matrices"])]
        elif "vertex_perms" in obj:
            if A.path_basis is None:
                raise ProblemError(path, "vertex_perms needs a quiver algebra")
            Q = A.path_basis.quiver
            na = len(Q.arrows)
            vps = obj["vertex_perms"]
            ams = obj.get("arrow_matrices", [[] for _ in vps])
            if len(vps) != ngen or len(ams) != ngen:
                raise ProblemError(path, f"one vertex permutation and arrow matrix per generator "
                                         f"({ngen}) is required")
            mats = []
            for s, (vp, am) in enumerate(zip(vps, ams)):
                perm = [Q.vertices.index(v) for v in vp]
                if sorted(perm) != list(range(len(Q.vertices))):
                    raise ProblemError(f"{path}.vertex_perms[{s}]", "not a permutation of the vertices")
                M = matrix_from_json(F, am, f"{path}.arrow_matrices[{s}]", (na, na))
                mats.append(_path_action_matrix(A, perm, M))
        else:
            raise ProblemError(path, "expected basis_matrices or vertex_perms")
        if len(mats) != ngen:
            raise ProblemError(path, f"one matrix per group generator ({ngen}) is required")
        return AlgebraAction.from_generators(G, A, mats)
    except ProblemError:
        raise
    except (AlgebraError, GroupError, ValueError, TypeError) as exc:
        raise ProblemError(path, str(exc)) from None


# ------------------------------------------------------------------ problems

@dataclass
class Problem:
    name: str
    field: Field
    setup: ExceptionalSetup
    options: Options
    raw: dict = dc_field(default_factory=dict)

    @property
    def action(self):
        return self.setup.action

    @property
    def algebra(self):
        return self.setup.algebra

    @property
    def group(self):
        return self.setup.group


def _ensure_vertices(A):
    if A.vertex_idempotents is None:
        A.vertex_idempotents = ((0, A.unit.copy()),)
    return A


def problem_from_json(obj, overrides=None):
    if not isinstance(obj, dict):
        raise ProblemError("<root>", "expected a JSON object")
    F = field_from_json(obj.get("field"), "field")
    opts_raw = dict(obj.get("options", {}))
    opts_raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    opts = Options(seed=int(opts_raw.get("seed", 0)),
                   budget=int(opts_raw.get("max_samples", Options.budget)),
                   degree_ceiling=int(opts_raw.get("degree_ceiling", Options.degree_ceiling)))
    alg = obj.get("algebra")
    if alg is None:
        raise ProblemError("algebra", "missing")
    name = obj.get("name", "problem")
    try:
        if isinstance(alg, dict) and "wreath" in alg:
            body = alg["wreath"]
            base = _ensure_vertices(algebra_from_json(F, body.get("base"), "algebra.wreath.base"))
            G = None
            setup = wreath_build(base, int(body.get("n", 1)), name=name)
            check_coprime(F, setup.group.order)
        else:
            A = _ensure_vertices(algebra_from_json(F, alg, "algebra"))
            G = group_from_json(obj.get("group"), "group")
            check_coprime(F, G.order)
            action = action_from_json(G, A, obj.get("action", "trivial"), "action")
            order = opts_raw.get("block_order")
            if order is not None:
                labels = [lab for lab, _ in A.vertex_idempotents]
                try:
                    order = [[labels.index(_label_from_json(v)) for v in blk] for blk in order]
                except ValueError:
                    raise ProblemError("options.block_order", "unknown vertex label") from None
            setup = ExceptionalSetup(action, order, name=name)
    except ProblemError:
        raise
    except (AlgebraError, GroupError, ValueError) as exc:
        where = "field" if "characteristic" in str(exc) else "setup"
        raise ProblemError(where, str(exc)) from None
    return Problem(name, F, setup, opts, obj)


def load_problem(path, overrides=None):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemError(f"line {exc.lineno}", exc.msg) from None
    return problem_from_json(obj, overrides)


def problem_to_json(problem):
    """Normalized problem: structure-form algebra, explicit generators and basis matrices."""
    A, G, F = problem.algebra, problem.group, problem.field
    act = problem.action
    order = [[_label_json(problem.setup.vertex_label(v)) for v in b.vertices]
             for b in problem.setup.blocks]
    return {"name": problem.name, "field": field_to_json(F), "algebra": algebra_to_json(A),
            "group": group_to_json(G),
            "action": {"basis_matrices": [matrix_to_json(F, act.matrices[g])
                                          for g in G.generator_indices()]},
            "options": {"seed": problem.options.seed, "max_samples": problem.options.budget,
                        "degree_ceiling": problem.options.degree_ceiling,
                        "block_order": order}}


def dumps(obj):
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


# ------------------------------------------------------------- bundled data

def bundled_names():
    return sorted(p.name[:-5] for p in resources.files("skewalg.data").iterdir()
                  if p.name.endswith(".json"))


def bundled_path(name):
    """Filesystem path of a bundled example (``name`` with or without ``.json``)."""
    fname = name if name.endswith(".json") else name + ".json"
    ref = resources.files("skewalg.data") / fname
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled example {name!r}; available: {bundled_names()}")
    return str(ref)


def resolve_path(arg):
    """A file path, or ``bundled:<name>`` for a shipped example."""
    if arg.startswith("bundled:"):
        return bundled_path(arg[len("bundled:"):])
    return arg
