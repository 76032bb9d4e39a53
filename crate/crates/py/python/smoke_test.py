"""Smoke test for the compiled `hedonic` module: python smoke_test.py"""

import json
import pathlib
from fractions import Fraction

import hedonic

FIXTURES = pathlib.Path(__file__).resolve().parents[3] / "fixtures"


def main():
    story = hedonic.Game.story("AL")
    abcd, everyone = ["a", "b", "c", "d"], ["a", "b", "c", "d", "e"]
    assert story.utility("a", abcd) == Fraction(46890)
    assert story.utility("a", everyone) == Fraction(34395)
    assert story.compare("a", abcd, everyone) == 1

    fo = story.with_model("FO")
    assert fo.compare("a", abcd, everyone) == -1
    assert story.with_model("EQ").utility("a", everyone) == Fraction(64, 5)

    singletons = [[p] for p in story.players]
    assert fo.find_blocking_coalition(singletons) == ["a", "b"]
    report = fo.certify(singletons, ["core", "ir"])
    assert report["all_stable"] is False
    assert report["verdicts"][0]["witness"] == {"kind": "coalition", "coalition": ["a", "b"]}

    from_file = hedonic.Game.from_json((FIXTURES / "story.game").read_text())
    assert from_file.to_json() == (FIXTURES / "story.game").read_text()
    assert sorted(from_file.core()) == sorted([[everyone], [abcd, ["e"]]])

    assert [len(list(hedonic.enumerate_partitions(n))) for n in range(6)] == [1, 1, 2, 5, 15, 52]
    hunt = hedonic.hunt_empty_core("EQ", 4)
    assert hunt["games_scanned"] == 1 + 2 + 8 + 64 and hunt["counterexamples"] == []

    try:
        story.utility("a", ["b"])
    except ValueError:
        pass
    else:
        raise AssertionError("utility outside own coalition must raise")

    print(json.dumps({"hedonic": hedonic.__version__, "story": repr(story), "ok": True}))


if __name__ == "__main__":
    main()
