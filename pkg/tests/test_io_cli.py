import os

import numpy as np
import pytest
from click.testing import CliRunner

from weakhopf import fileio
from weakhopf.algebra import MultiMatrixAlgebra
from weakhopf.cli import EXAMPLES, main
from weakhopf.hopf import cyclic_group_table, group_algebra
from weakhopf.sectors import fibonacci_ring
from weakhopf.towers import make_inclusion


@pytest.fixture(scope="module")
def example_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("examples")
    runner = CliRunner()
    result = runner.invoke(main, ["example", "all", "-d", str(d)])
    assert result.exit_code == 0, result.output
    return d


def _run(args):
    return CliRunner().invoke(main, args)


# -- file formats ------------------------------------------------------------


def test_whopf_round_trip_exact():
    W = group_algebra(cyclic_group_table(3))
    text = fileio.dump_whopf(W, "z3")
    W2, name = fileio.load_whopf(text)
    assert name == "z3"
    assert np.array_equal(W.D, W2.D)
    assert np.array_equal(W.eps, W2.eps)
    assert np.array_equal(W.S, W2.S)


def test_algebra_elements_round_trip():
    A = MultiMatrixAlgebra((2, 1))
    x = A.from_coords(np.array([0.1, 0, 2 - 1j, np.pi, 1e-300]))
    text = fileio.dump_algebra(A, "B", {"x": x})
    A2, _, els = fileio.load_algebra(text)
    assert A == A2
    assert np.array_equal(els["x"].coords, x.coords)


def test_extreme_floats_round_trip():
    P = np.array([[1e308 + 1e-308j, -1e308 - 5e-324j]])
    P2, _ = fileio.load_pairing(fileio.dump_pairing(P))
    assert np.array_equal(P, P2)


def test_inclusion_round_trip():
    emb = np.zeros((4, 2))
    emb[0, 0] = 1.0
    emb[3, 1] = 1.0
    inc = make_inclusion(MultiMatrixAlgebra((1, 1)), MultiMatrixAlgebra((2,)), emb)
    inc2, _ = fileio.load_inclusion(fileio.dump_inclusion(inc))
    assert np.array_equal(inc.embed.matrix, inc2.embed.matrix)


def test_fusion_ring_round_trip():
    fr = fibonacci_ring()
    fr2, _ = fileio.load_fusion_ring(fileio.dump_fusion_ring(fr))
    assert fr2.labels == fr.labels
    assert np.array_equal(fr2.N, fr.N)


def test_parse_error_reports_line_number():
    with pytest.raises(fileio.ParseError, match="line 3"):
        fileio.load_whopf("algebra A\nblocks 2\nnot-a-section\n")


def test_truncated_file_is_rejected():
    W = group_algebra(cyclic_group_table(2))
    text = fileio.dump_whopf(W)
    with pytest.raises(fileio.ParseError):
        fileio.load_whopf(text[: len(text) // 2])


def test_malformed_dimensions_rejected():
    with pytest.raises(fileio.ParseError):
        fileio.load_algebra("algebra A\nblocks 0\n")
    with pytest.raises(fileio.ParseError):
        fileio.load_fusion_ring("fusion F\nlabels a b\ndual 0 5\n")


# -- CLI ---------------------------------------------------------------------


def test_example_files_verify(example_dir):
    for name, (_, ext) in EXAMPLES.items():
        path = example_dir / (name + ext)
        assert path.exists()
        if ext == ".whopf":
            result = _run(["verify", str(path)])
            assert result.exit_code == 0, (name, result.output)


def test_verify_verdicts(example_dir):
    out = _run(["--machine", "verify", str(example_dir / "group_z2.whopf")])
    assert "verdict True" in out.output
    out = _run(["--machine", "verify", str(example_dir / "groupoid_pair2.whopf")])
    assert "verdict Weak" in out.output


def test_classify_command(example_dir):
    out = _run(["--machine", "classify", str(example_dir / "groupoid_pair3.whopf")])
    assert out.exit_code == 0
    assert "verdict Weak" in out.output


def test_corrupted_file_exit_2(example_dir, tmp_path):
    src = (example_dir / "group_z2.whopf").read_text()
    bad = tmp_path / "bad.whopf"
    bad.write_text(src[:120])
    result = _run(["verify", str(bad)])
    assert result.exit_code == 2
    assert "line" in result.output


def test_missing_file_exit_2():
    assert _run(["verify", "/nonexistent.whopf"]).exit_code == 2


def test_dualize_command(example_dir, tmp_path):
    out_path = tmp_path / "dual.whopf"
    result = _run(["--machine", "dualize", str(example_dir / "group_z2.whopf"),
                   "-o", str(out_path)])
    assert result.exit_code == 0, result.output
    assert "dual_blocks 1 1" in result.output
    assert out_path.exists()
    assert _run(["verify", str(out_path)]).exit_code == 0
    assert os.path.exists(str(out_path) + ".pairing")


def test_tower_extract_command(example_dir, tmp_path):
    result = _run(["--machine", "tower", str(example_dir / "c2_in_mat2.incl"),
                   "--extract", "-o", str(tmp_path / "c2"),
                   "--figures", str(tmp_path / "figs")])
    assert result.exit_code == 0, result.output
    assert "depth 2" in result.output
    assert "dim_q 4" in result.output
    assert "verdict Weak" in result.output
    assert (tmp_path / "c2.q.whopf").exists()
    assert (tmp_path / "c2.qhat.whopf").exists()
    assert list((tmp_path / "figs").glob("*.png"))
    # the written symmetry verifies
    assert _run(["verify", str(tmp_path / "c2.q.whopf")]).exit_code == 0


def test_sectors_command(example_dir, tmp_path):
    result = _run(["--machine", "sectors", str(example_dir / "fibonacci.fr"),
                   "--figures", str(tmp_path / "figs")])
    assert result.exit_code == 0, result.output
    assert "dim_q 13" in result.output
    assert list((tmp_path / "figs").glob("*.png"))
    result = _run(["--machine", "sectors", str(example_dir / "z2_ring.fr"),
                   "--sigma", "reg"])
    assert "z_weights 1.0 1.0" in result.output
    assert "regular_equals_oplus true" in result.output


def test_sectors_locality_notice(example_dir):
    result = _run(["--machine", "sectors", str(example_dir / "ising.fr"),
                   "--locality"])
    assert "locality_notice" in result.output


def test_roundtrip_command(example_dir):
    paths = [str(p) for p in sorted(example_dir.iterdir())]
    result = _run(["roundtrip"] + paths)
    assert result.exit_code == 0, result.output


def test_machine_reports_deterministic(example_dir):
    args = ["--machine", "--seed", "11", "tower",
            str(example_dir / "c2_in_mat2.incl"), "--extract",
            "-o", "/tmp/weakhopf_det"]
    a = _run(args)
    b = _run(args)
    assert a.exit_code == 0
    assert a.output.encode() == b.output.encode()


def test_bad_tolerance_exit_2():
    assert _run(["--tol", "1.0", "classify", "x.whopf"]).exit_code == 2
