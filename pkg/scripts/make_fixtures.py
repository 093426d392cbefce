#!/usr/bin/env python3
"""Write the bundled demo fixtures (lexicon, gold costs, gold tree) to disk.

Usage: python scripts/make_fixtures.py [outdir]   (default: ./fixtures)
"""

import sys
from pathlib import Path

from amparse import fileformats as ff
from amparse.demo import demo_costs, demo_gold_tree, demo_lexicon
from amparse.lexicon import augment_closure


def main() -> int:
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    outdir.mkdir(parents=True, exist_ok=True)
    lex = demo_lexicon()
    (outdir / "demo.lexicon").write_text(ff.write_lexicon_text(lex), encoding="utf-8")
    (outdir / "demo-closed.lexicon").write_text(
        ff.write_lexicon_text(augment_closure(lex)), encoding="utf-8"
    )
    (outdir / "demo.costs").write_text(ff.write_cost_text([demo_costs()]), encoding="utf-8")
    (outdir / "demo.trees").write_text(ff.write_trees_text([demo_gold_tree()]), encoding="utf-8")
    print(f"wrote 4 files to {outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
