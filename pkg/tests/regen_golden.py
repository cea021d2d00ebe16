"""Rewrite tests/golden from the current CLI. Run by hand after an intended output change."""

import contextlib
import io
from pathlib import Path

from torifan.cli import run

HERE = Path(__file__).parent
DATA = HERE / "data"

CASES = {
    "validate_p2": ["validate", "p2.json"],
    "validate_overlap": ["validate", "overlap.json"],
    "info_wps112": ["info", "wps112.json"],
    "mori_wps112": ["mori", "wps112.json"],
    "mori_f1": ["mori", "f1.json"],
    "length_p1xp1": ["length", "--fan", "p1xp1.json", "--foliation", "span-e2.json"],
    "classify_f1_0": ["classify", "--fan", "f1.json", "--ray", "0"],
    "verify_p1xp1": ["verify", "--fan", "p1xp1.json", "--foliation", "span-e2.json"],
    "verify_f1": ["verify", "--fan", "f1.json", "--foliation", "span-e1.json"],
    "verify_flip": ["verify", "--fan", "flip3fold.json", "--foliation", "full3.json"],
    "verify_nonprojective": ["verify", "--fan", "nonprojective3fold.json", "--foliation", "full3.json"],
    "corpus_gen_42": ["corpus-gen", "--seed", "42", "--rank", "2", "--steps", "2", "--base", "Pn:2"],
}


def resolve(argv):
    return [str(DATA / a) if a.endswith(".json") else a for a in argv]


def capture(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = run(resolve(argv))
    return code, buf.getvalue()


if __name__ == "__main__":
    for name, argv in CASES.items():
        code, out = capture(argv)
        (HERE / "golden" / f"{name}.json").write_text(out)
        (HERE / "golden" / f"{name}.code").write_text(f"{code}\n")
        print(name, code)
