from fractions import Fraction

from hypothesis import settings, strategies as st

from rcsiegel.exactpoly import SLOT_R, SLOT_RP, Poly, U, matvar

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# filled by test_acceptance; printed at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


def variables(n=2, with_u=False):
    out = [matvar(s, i, j) for s in (SLOT_R, SLOT_RP) for i in range(1, n + 1) for j in range(i, n + 1)]
    if with_u:
        out += [U(i) for i in range(1, n + 1)]
    return out


rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))


@st.composite
def polys(draw, n=2, max_terms=4, max_exp=2, with_u=False):
    vs = variables(n, with_u)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(0, max_exp), min_size=len(vs), max_size=len(vs)))
        mono = tuple((v, e) for v, e in zip(vs, exps) if e)
        terms[tuple(sorted(mono))] = draw(rationals)
    return Poly(terms)


@st.composite
def points(draw, n=2, with_u=False):
    return {v: draw(rationals) for v in variables(n, with_u)}
