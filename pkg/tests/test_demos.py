import runpy
from pathlib import Path

import pytest

DEMOS = sorted((Path(__file__).resolve().parents[1] / "demos").glob("0*.py"))


@pytest.mark.parametrize("path", DEMOS, ids=lambda p: p.stem)
def test_demo_runs(path, capsys, tmp_path):
    main = runpy.run_path(str(path))["main"]
    if path.stem.endswith("property_suites"):
        main(3)
    elif path.stem.endswith("encoding_a_rule"):
        main(str(tmp_path))
        assert (tmp_path / "Rp.dot").exists()
    else:
        main()
    assert capsys.readouterr().out.strip()
