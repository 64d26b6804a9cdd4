import sys

from hypothesis import HealthCheck, settings, strategies as st

from bcd.syntax import Arrow, Atom, Meet

sys.setrecursionlimit(20000)

settings.register_profile(
    "bcd",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=60,
)
settings.load_profile("bcd")

ATOMS = ("a", "b", "c", "@")


def atom_strategy(atoms=ATOMS):
    return st.sampled_from(atoms).map(Atom)


def expr_strategy(atoms=ATOMS, max_leaves=25):
    return st.recursive(
        atom_strategy(atoms),
        lambda children: st.builds(Arrow, children, children)
        | st.builds(Meet, children, children),
        max_leaves=max_leaves,
    )


def big_expr_strategy(atoms=ATOMS):
    # up to 199 nodes
    return expr_strategy(atoms, max_leaves=100)
