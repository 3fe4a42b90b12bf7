import json
import os

import numpy as np
import pytest

from gsorlab.errors import ManifestError
from gsorlab.problem.io import export_mm, import_mm
from gsorlab.problem.model import DoubleSaddleProblem, relative_residual


def _rewrite_manifest(path, **changes):
    with open(path) as fh:
        manifest = json.load(fh)
    for key, value in changes.items():
        if value is None:
            manifest.pop(key, None)
        else:
            manifest[key] = value
    with open(path, "w") as fh:
        json.dump(manifest, fh)


def test_export_import_preserves_problem(tmp_path, lc_problem):
    manifest = export_mm(lc_problem, str(tmp_path))
    assert os.path.basename(manifest) == "manifest.json"
    loaded = import_mm(manifest)

    assert loaded.dims == lc_problem.dims
    for name in ("A", "B", "C", "D", "P"):
        np.testing.assert_array_equal(getattr(loaded, name).toarray(), getattr(lc_problem, name).toarray())
    np.testing.assert_array_equal(loaded.rhs, lc_problem.rhs)
    np.testing.assert_array_equal(loaded.solution, lc_problem.solution)
    assert loaded.provenance == {"family": "lc-like", "seed": 0, "N": 4}


def test_manifest_contents(tmp_path, scalar_problem):
    with open(export_mm(scalar_problem, str(tmp_path))) as fh:
        manifest = json.load(fh)
    assert (manifest["n"], manifest["m"], manifest["p"]) == (1, 1, 1)
    assert manifest["files"]["P"] == "P.mtx"
    assert manifest["rhs"] == {"f": "f.mtx", "g": "g.mtx", "h": "h.mtx"}
    assert manifest["p_defaulted"] is False
    assert "solution" not in manifest


def test_missing_rhs_plants_ones(tmp_path, synthetic_problem):
    manifest = export_mm(synthetic_problem, str(tmp_path))
    _rewrite_manifest(manifest, rhs=None, solution=None)
    loaded = import_mm(manifest)
    assert loaded.provenance["planted_rhs"] is True
    np.testing.assert_array_equal(loaded.solution, np.ones(loaded.order))
    value, _ = relative_residual(loaded, loaded.solution)
    assert value < 1e-13


def test_missing_p_is_defaulted(tmp_path, scalar_problem):
    manifest = export_mm(scalar_problem, str(tmp_path))
    _rewrite_manifest(manifest, files={"A": "A.mtx", "B": "B.mtx", "C": "C.mtx", "D": "D.mtx"})
    loaded = import_mm(manifest)
    assert loaded.p_defaulted
    np.testing.assert_allclose(loaded.P.toarray(), [[0.5]])


def test_missing_block_is_rejected(tmp_path, scalar_problem):
    manifest = export_mm(scalar_problem, str(tmp_path))
    _rewrite_manifest(manifest, files={"B": "B.mtx", "C": "C.mtx", "D": "D.mtx"})
    with pytest.raises(ManifestError, match="files.A"):
        import_mm(manifest)


def test_shape_disagreement_is_rejected(tmp_path, synthetic_problem):
    manifest = export_mm(synthetic_problem, str(tmp_path))
    _rewrite_manifest(manifest, n=synthetic_problem.n + 1)
    with pytest.raises(ManifestError):
        import_mm(manifest)


def test_unknown_block_is_rejected(tmp_path, scalar_problem):
    manifest = export_mm(scalar_problem, str(tmp_path))
    _rewrite_manifest(
        manifest, files={"A": "A.mtx", "B": "B.mtx", "C": "C.mtx", "D": "D.mtx", "Q": "P.mtx"}
    )
    with pytest.raises(ManifestError, match="unknown block"):
        import_mm(manifest)


def test_unreadable_manifest(tmp_path):
    bad = tmp_path / "manifest.json"
    bad.write_text("{not json")
    with pytest.raises(ManifestError):
        import_mm(str(bad))
    with pytest.raises(ManifestError):
        import_mm(str(tmp_path / "absent.json"))


def test_defaulted_p_survives_round_trip(tmp_path):
    problem = DoubleSaddleProblem(
        A=[[4.0, 1.0], [1.0, 3.0]],
        B=[[1.0, 2.0]],
        C=[[0.5, -1.0]],
        D=[[2.0]],
        f=[1.0, 2.0],
        g=[0.5],
        h=[-1.0],
    )
    assert problem.p_defaulted
    loaded = import_mm(export_mm(problem, str(tmp_path)))
    assert loaded.p_defaulted
    np.testing.assert_allclose(loaded.P.toarray(), problem.P.toarray(), rtol=1e-14)


def test_given_p_stays_given(tmp_path, scalar_problem):
    loaded = import_mm(export_mm(scalar_problem, str(tmp_path)))
    assert not loaded.p_defaulted
    np.testing.assert_array_equal(loaded.P.toarray(), [[1.0]])


@pytest.mark.parametrize("kept", [{"f": "f.mtx", "g": "g.mtx"}, {"g": "g.mtx"}])
def test_incomplete_rhs_is_rejected(tmp_path, scalar_problem, kept):
    manifest = export_mm(scalar_problem, str(tmp_path))
    _rewrite_manifest(manifest, rhs=kept)
    with pytest.raises(ManifestError, match="rhs lacks"):
        import_mm(manifest)
