import json

import pytest

from src.app import run


@pytest.fixture
def cli(capsys):
    """Run the tool in-process; returns (exit code, parsed stdout or None, stderr)."""

    def invoke(*argv):
        capsys.readouterr()
        code = run([str(a) for a in argv])
        captured = capsys.readouterr()
        out = json.loads(captured.out) if captured.out.strip() else None
        return code, out, captured.err

    return invoke


@pytest.fixture
def write_instance(tmp_path):
    def write(payload, name="instance.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return write
