from hypothesis import strategies as st

from eberhard.counts import make_round


@st.composite
def physical_rounds(draw, lo=1_000, hi=2_000_000):
    """Rounds with 0 <= cOO <= min(sA, sB) in every block."""
    rows = []
    for _ in range(4):
        sa = draw(st.integers(lo, hi))
        sb = draw(st.integers(lo, hi))
        c = draw(st.integers(0, min(sa, sb)))
        rows.append((sa, sb, c))
    return make_round(rows)
