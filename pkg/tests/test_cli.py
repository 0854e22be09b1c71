import json
import subprocess
import sys

import pytest

from tensorbounds import __version__
from tensorbounds.cli import main

from conftest import DATA

GOLDEN = DATA.parent / "golden"
FIXTURES = ("section4", "example51", "example52")
COMMANDS = ("spectrum", "bounds", "compare", "certify")


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "tensorbounds", *map(str, args)], capture_output=True, text=True)


def body(text):
    """Everything after the version banner."""
    first, _, rest = text.partition("\n")
    assert first.startswith("tensorbounds ")
    return rest


@pytest.mark.parametrize("fixture", FIXTURES)
@pytest.mark.parametrize("command", COMMANDS)
def test_golden_output(fixture, command):
    result = run_cli(command, DATA / f"{fixture}.tensor")
    assert result.returncode == 0, result.stderr
    expected = (GOLDEN / f"{fixture}.{command}.txt").read_text()
    assert body(result.stdout) == body(expected)


def test_banner_carries_version(capsys):
    assert main(["spectrum", str(DATA / "section4.tensor")]) == 0
    assert capsys.readouterr().out.splitlines()[0] == f"tensorbounds {__version__}"


def test_output_is_deterministic(capsys):
    outputs = []
    for _ in range(2):
        main(["certify", str(DATA / "example51.tensor"), "--samples", "200", "--seed", "9"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def write(tmp_path, text, name="t.tensor"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_exit_parse_error(tmp_path, capsys):
    path = write(tmp_path, "tensor m=4 n=2\na 1 1 1 = 2\n")
    assert main(["spectrum", str(path)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_exit_missing_file(tmp_path):
    assert main(["spectrum", str(tmp_path / "absent.tensor")]) == 2


def test_exit_validation_error(tmp_path, capsys):
    path = write(tmp_path, "tensor m=4 n=2\na 1 1 2 2 = 1\na 1 1 2 2 = 2\n")
    assert main(["bounds", str(path)]) == 3
    assert "(1, 1, 2, 2)" in capsys.readouterr().err


def test_exit_unsupported(tmp_path, capsys):
    path = write(tmp_path, "tensor m=4 n=3\na 1 1 1 1 = 1\n")
    assert main(["spectrum", str(path)]) == 4
    assert main(["bounds", str(path)]) == 4
    assert "det=" in capsys.readouterr().err


def test_bounds_with_external_determinant(tmp_path, capsys):
    path = write(tmp_path, "tensor m=4 n=3 det=1\na 1 1 1 1 = 1\na 2 2 2 2 = 1\na 3 3 3 3 = 1\n")
    assert main(["bounds", str(path)]) == 0
    out = capsys.readouterr().out
    assert "(external)" in out and "positivity hypothesis: assumed" in out


def test_exit_not_pd(tmp_path):
    path = write(tmp_path, "tensor m=3 n=2\na 1 1 1 = 1\n")
    assert main(["certify", str(path)]) == 1
    path = write(tmp_path, "tensor m=4 n=2\n", "zero.tensor")
    assert main(["certify", str(path)]) == 1


def test_exit_inconclusive(tmp_path):
    text = "tensor m=4 n=3\na 1 1 1 1 = 1\na 2 2 2 2 = 1\na 3 3 3 3 = 1\na 1 1 2 2 = 0.3333333333\na 1 2 3 3 = 0.2\n"
    assert main(["certify", str(write(tmp_path, text)), "--samples", "100"]) == 5


def test_json_output(capsys):
    assert main(["--json", "spectrum", str(DATA / "example51.tensor")]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["command"] == "spectrum" and data["d"] == 6
    h = [r["value"] for r in data["real_roots"] if r["h_eigenvalue"]]
    assert h == pytest.approx([12.0, 10.0, 4.9172], abs=1e-3)


def test_json_flag_after_subcommand(capsys):
    assert main(["certify", "--json", str(DATA / "section4.tensor")]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["certificate"]["verdict"] == "certified_pd"
    assert data["lyapunov"]["stable"] is True


def test_compare_csv_schema(tmp_path):
    assert main(["compare", str(DATA / "example51.tensor"), "--csv", str(tmp_path)]) == 0
    hierarchy = (tmp_path / "hierarchy.csv").read_text().splitlines()
    assert hierarchy[0] == "label,value,kind"
    assert [r.split(",")[0] for r in hierarchy[1:]] == [
        "Actual", "T1_sum_upper", "T4_prod_upper", "T6_sum_upper", "Reference", "Gershgorin",
    ]
    assert (tmp_path / "distribution.csv").read_text().splitlines()[0] == "label,value,kind"
    intervals = (tmp_path / "intervals.csv").read_text().splitlines()
    assert intervals[0] == "method,lower,upper"
    assert intervals[2] == "gershgorin,4.0,18.0"
    gersh = dict(r.split(",", 1) for r in hierarchy[1:])
    assert gersh["Gershgorin"] == "18.0,gershgorin"


def test_compare_csv_full_precision(tmp_path):
    main(["compare", str(DATA / "section4.tensor"), "--csv", str(tmp_path)])
    rows = (tmp_path / "intervals.csv").read_text().splitlines()
    lower = float(rows[1].split(",")[1])
    assert lower == pytest.approx((5 / 6.3) ** 5 * 1.331, rel=1e-12)


def test_compare_svg(tmp_path):
    assert main(["compare", str(DATA / "example52.tensor"), "--svg", str(tmp_path)]) == 0
    for name in ("hierarchy", "distribution", "intervals"):
        text = (tmp_path / f"{name}.svg").read_text()
        assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    first = (tmp_path / "hierarchy.svg").read_text()
    main(["compare", str(DATA / "example52.tensor"), "--svg", str(tmp_path)])
    assert (tmp_path / "hierarchy.svg").read_text() == first


def test_bounds_k_and_l(capsys):
    assert main(["bounds", str(DATA / "example51.tensor"), "--k", "2", "--l", "3"]) == 0
    out = capsys.readouterr().out
    assert "T4_tail_prod_lower" in out and "2,3" in out


def test_console_script_help():
    result = run_cli("--help")
    assert result.returncode == 0
    for command in COMMANDS:
        assert command in result.stdout
