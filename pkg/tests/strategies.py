from hypothesis import strategies as st
from sympy import QQ

from hochschild.algebra import QuiverSpec

COEFFICIENTS = [1, -1, 2, -3, QQ(1, 2), QQ(-2, 3)]


@st.composite
def linear_component(draw, branches):
    """
    Independent rows tying ``branches`` into one connected component.

    Row i owns the private branch ``branches[i]`` and reaches into a non-empty
    subset of the shared tail, so no combination of rows has a single entry.
    """
    k = draw(st.integers(1, len(branches) - 1))
    private, shared = branches[:k], branches[k:]
    rows = []
    covered = set()
    for b in private:
        reach = draw(st.sets(st.sampled_from(shared), min_size=1, max_size=len(shared)))
        covered |= reach
        row = {b: draw(st.sampled_from(COEFFICIENTS))}
        for s in sorted(reach):
            row[s] = draw(st.sampled_from(COEFFICIENTS))
        rows.append(row)
    for s in shared:
        if s not in covered:
            rows[-1][s] = draw(st.sampled_from(COEFFICIENTS))
    return rows


@st.composite
def toupie_specs(draw, max_branches=8, max_length=10):
    """Valid toupie descriptions: nested-free windows and linear relations over one or more components."""
    lengths = draw(st.lists(st.integers(1, max_length), min_size=1, max_size=max_branches))
    roles = {
        b: draw(st.sampled_from(["l", "m", "n"]))
        for b, length in enumerate(lengths, start=1)
        if length >= 2
    }

    monomial = []
    for b, role in roles.items():
        if role != "m":
            continue
        total = lengths[b - 1]
        starts = sorted(draw(st.sets(st.integers(0, total - 2), min_size=1, max_size=total - 1)))
        end = 0
        for s in starts:
            lo = max(s + 2, end + 1)
            if lo > total:
                break
            e = draw(st.integers(lo, total))
            monomial.append((b, s, e - s))
            end = e

    linear = []
    rest = draw(st.permutations([b for b, role in roles.items() if role == "n"]))
    while len(rest) >= 2:
        size = draw(st.integers(2, len(rest)))
        linear += draw(linear_component(rest[:size]))
        rest = rest[size:]
    # a lone leftover branch stays relation-free
    return QuiverSpec.build(lengths, monomial, linear)
