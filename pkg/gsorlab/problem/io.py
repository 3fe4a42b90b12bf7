"""
Matrix Market bundles: one .mtx file per block and rhs vector plus a JSON
manifest, e.g.

    {
      "n": 12, "m": 4, "p": 4,
      "files": {"A": "A.mtx", "B": "B.mtx", "C": "C.mtx", "D": "D.mtx", "P": "P.mtx"},
      "rhs": {"f": "f.mtx", "g": "g.mtx", "h": "h.mtx"},
      "p_defaulted": false,
      "provenance": {"family": "lc-like", "seed": 0, "N": 4}
    }

File names are relative to the manifest. "P" and "rhs" are optional; without
"rhs" the right-hand side is planted from the all-ones solution.
"""

import json
import logging
import os

import numpy as np

from gsorlab.errors import ManifestError
from gsorlab.linalg.matrix_market import read_matrix, read_vector, write_matrix, write_vector
from gsorlab.linalg.sparse import spmv
from gsorlab.problem.model import DoubleSaddleProblem

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
BLOCKS = ("A", "B", "C", "D")
RHS = ("f", "g", "h")


def export_mm(problem: DoubleSaddleProblem, out_dir, manifest_name=MANIFEST_NAME):
    """
    Writes a problem as Matrix Market files plus manifest.

    Returns:
        str: Path of the written manifest.
    """
    os.makedirs(out_dir, exist_ok=True)
    files = {}
    for name in BLOCKS + ("P",):
        files[name] = f"{name}.mtx"
        write_matrix(os.path.join(out_dir, files[name]), getattr(problem, name))
    rhs = {}
    for name in RHS:
        rhs[name] = f"{name}.mtx"
        write_vector(os.path.join(out_dir, rhs[name]), getattr(problem, name))

    manifest = {
        "n": problem.n,
        "m": problem.m,
        "p": problem.p,
        "files": files,
        "rhs": rhs,
        "p_defaulted": problem.p_defaulted,
        "provenance": problem.provenance,
    }
    if problem.solution is not None:
        manifest["solution"] = "solution.mtx"
        write_vector(os.path.join(out_dir, "solution.mtx"), problem.solution)

    manifest_path = os.path.join(out_dir, manifest_name)
    with open(manifest_path, "w") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True))
    logger.info("Exported problem %s to %s", problem.dims, out_dir)
    return manifest_path


def _load_manifest(manifest_path):
    try:
        with open(manifest_path) as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ManifestError(f"cannot read manifest {manifest_path}: {e}") from e
    missing = [k for k in ("n", "m", "p", "files") if k not in manifest]
    missing += [f"files.{b}" for b in BLOCKS if b not in manifest.get("files", {})]
    if missing:
        raise ManifestError(f"manifest {manifest_path} lacks {', '.join(missing)}")
    return manifest


def import_mm(manifest_path) -> DoubleSaddleProblem:
    """
    Reads a Matrix Market bundle.

    Args:
        manifest_path (str): Path of the JSON manifest.

    Returns:
        DoubleSaddleProblem: P is defaulted (and flagged) when the manifest names none
        or marks it "p_defaulted".

    Raises:
        ManifestError: Unreadable manifest, an incomplete rhs mapping, or blocks that
            disagree with n, m, p.
    """
    manifest = _load_manifest(manifest_path)
    base = os.path.dirname(os.path.abspath(manifest_path))
    n, m, p = int(manifest["n"]), int(manifest["m"]), int(manifest["p"])
    expected = {"A": (n, n), "B": (m, n), "C": (p, n), "D": (p, p), "P": (m, m)}

    blocks = {}
    for name, file_name in manifest["files"].items():
        if name not in expected:
            raise ManifestError(f"unknown block {name!r} in manifest")
        blocks[name] = read_matrix(os.path.join(base, file_name))
        if blocks[name].shape != expected[name]:
            raise ManifestError(
                f"block {name} is {blocks[name].shape}, manifest says {expected[name]}"
            )

    if manifest.get("p_defaulted") and "P" in blocks:
        # rebuilt from A and B so the problem keeps its defaulted flag
        del blocks["P"]

    provenance = dict(manifest.get("provenance") or {})
    if "rhs" in manifest:
        absent = [name for name in RHS if name not in (manifest["rhs"] or {})]
        if absent:
            raise ManifestError(f"manifest rhs lacks {', '.join(absent)}")
        vectors = {
            name: read_vector(os.path.join(base, manifest["rhs"][name])) for name in RHS
        }
        for name, size in zip(RHS, (n, m, p)):
            if vectors[name].shape != (size,):
                raise ManifestError(f"rhs {name} has length {vectors[name].size}, expected {size}")
    else:
        logger.warning("Manifest has no rhs; planting the all-ones solution")
        x, y, z = np.ones(n), np.ones(m), np.ones(p)
        A, B, C, D = (blocks[k] for k in BLOCKS)
        vectors = {
            "f": spmv(A, x) + spmv(B.T, y) + spmv(C.T, z),
            "g": spmv(B, x),
            "h": spmv(C, x) - spmv(D, z),
        }
        provenance["planted_rhs"] = True

    solution = None
    if "solution" in manifest:
        solution = read_vector(os.path.join(base, manifest["solution"]))
    elif provenance.get("planted_rhs"):
        solution = np.ones(n + m + p)

    problem = DoubleSaddleProblem(
        blocks["A"],
        blocks["B"],
        blocks["C"],
        blocks["D"],
        vectors["f"],
        vectors["g"],
        vectors["h"],
        P=blocks.get("P"),
        provenance=provenance,
        solution=solution,
    )
    logger.info("Imported problem %s from %s", problem.dims, manifest_path)
    return problem
