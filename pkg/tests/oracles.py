"""Frozen reference tables, transcribed by hand and parsed without the library."""

from ptacl4.lattice import ALLOW, BOT, DENY, TOP

SYM = {"⊥": BOT, "0": DENY, "1": ALLOW, "⊤": TOP}


def grid(text):
    """Parse a printed operator grid: header row of column values, then one row per left operand."""
    lines = [ln.split() for ln in text.strip().splitlines()]
    cols = [SYM[t] for t in lines[0]]
    out = {}
    for row in lines[1:]:
        x = SYM[row[0]]
        for y, v in zip(cols, row[1:]):
            out[(x, y)] = SYM[v]
    return out


TAND = grid("""
  0 ⊥ ⊤ 1
0 0 0 0 0
⊥ 0 ⊥ 0 ⊥
⊤ 0 0 ⊤ ⊤
1 0 ⊥ ⊤ 1
""")

TOR = grid("""
  0 ⊥ ⊤ 1
0 0 ⊥ ⊤ 1
⊥ ⊥ ⊥ 1 1
⊤ ⊤ 1 ⊤ 1
1 1 1 1 1
""")

KAND = grid("""
  ⊥ 0 1 ⊤
⊥ ⊥ ⊥ ⊥ ⊥
0 ⊥ 0 ⊥ 0
1 ⊥ ⊥ 1 1
⊤ ⊥ 0 1 ⊤
""")

KOR = grid("""
  ⊥ 0 1 ⊤
⊥ ⊥ 0 1 ⊤
0 0 0 ⊤ ⊤
1 1 ⊤ 1 ⊤
⊤ ⊤ ⊤ ⊤ ⊤
""")

IMP = grid("""
  0 ⊥ ⊤ 1
0 1 1 1 1
⊥ 1 1 1 1
⊤ 0 ⊥ ⊤ 1
1 0 ⊥ ⊤ 1
""")

NOT = {DENY: ALLOW, BOT: BOT, TOP: TOP, ALLOW: DENY}

OOA = grid("""
  ⊥ 0 1 ⊤
⊥ ⊥ 0 1 ⊤
0 0 ⊤ ⊤ ⊤
1 1 ⊤ ⊤ ⊤
⊤ ⊤ ⊤ ⊤ ⊤
""")

UN = grid("""
  ⊥ 0 1 ⊤
⊥ ⊥ ⊤ ⊤ ⊤
0 ⊤ 0 ⊤ ⊤
1 ⊤ ⊤ 1 ⊤
⊤ ⊤ ⊤ ⊤ ⊤
""")

# columns: d, d', -d, -d', -d kand -d', -(-d kand -d'), d kor d'
KOR_ENCODING = [
    tuple(SYM[t] for t in row.split())
    for row in """
⊥ ⊥ ⊤ ⊤ ⊤ ⊥ ⊥
⊥ 0 ⊤ 0 0 0 0
⊥ 1 ⊤ 1 1 1 1
⊥ ⊤ ⊤ ⊥ ⊥ ⊤ ⊤
0 ⊥ 0 ⊤ 0 0 0
0 0 0 0 0 0 0
0 1 0 1 ⊥ ⊤ ⊤
0 ⊤ 0 ⊥ ⊥ ⊤ ⊤
1 ⊥ 1 ⊤ 1 1 1
1 0 1 0 ⊥ ⊤ ⊤
1 1 1 1 1 1 1
1 ⊤ 1 ⊥ ⊥ ⊤ ⊤
⊤ ⊥ ⊥ ⊤ ⊥ ⊤ ⊤
⊤ 0 ⊥ 0 ⊥ ⊤ ⊤
⊤ 1 ⊥ 1 ⊥ ⊤ ⊤
⊤ ⊤ ⊥ ⊥ ⊥ ⊤ ⊤
""".strip().splitlines()
]

# Jobe's logic over 0 < 1 < 2
JOBE_T1 = {0: 1, 1: 0, 2: 2}
JOBE_T2 = {0: 2, 1: 1, 2: 0}

# selection operator (anchor, output) -> meet of words; a word lists operators outermost first
JOBE_NORMAL_FORMS = {
    ("i", 0): [(), ("j1",), ("j2",)],
    (0, 1): [("j1",), ("j2", "j1")],
    (1, 1): [(), ("j2",)],
    (2, 1): [("j1", "j2"), ("j2", "j1", "j2")],
    (0, 2): [("j2",), ("j1", "j2")],
    (1, 2): [("j2", "j1"), ("j2", "j1", "j2")],
    (2, 2): [(), ("j1",)],
}

WORKED_TABLE = """\
p1 p2 p3 -> p
bot 0 0 -> 0
0 0 0 -> 0
1 0 0 -> top
1 1 0 -> 1
1 1 1 -> 1
"""
