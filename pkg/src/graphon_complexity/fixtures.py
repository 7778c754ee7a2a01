"""Named graphon fixtures shared by experiments, tests and the CLI."""
from .errors import InvalidArgument
from .model import SBM, ErdosRenyi, GeometricGraph, GraphonSpec, HolderCube, lower_bound_sbm

_THIRD = 1.0 / 3.0

FIXTURES = {
    # three equal communities, pairwise r_W = 0.8 * sqrt(2/3) ~ 0.653
    "sbm3": lambda: SBM([_THIRD, _THIRD, 1.0 - 2 * _THIRD],
                        [[0.9, 0.1, 0.1], [0.1, 0.9, 0.1], [0.1, 0.1, 0.9]]),
    "sbm2": lambda: SBM([0.5, 0.5], [[0.9, 0.1], [0.1, 0.9]]),
    # two communities at r_W = 0.6
    "sbm2_r06": lambda: SBM([0.5, 0.5], [[0.8, 0.2], [0.2, 0.8]]),
    # two disjoint cliques, the largest separation a graphon allows
    "sbm2_cliques": lambda: SBM([0.5, 0.5], [[1.0, 0.0], [0.0, 1.0]]),
    "sbm5": lambda: SBM([0.2] * 5, [[0.9 if a == b else 0.1 for b in range(5)] for a in range(5)]),
    "er": lambda: ErdosRenyi(0.5),
    "geometric1": lambda: GeometricGraph(1, 0.1),
    "geometric2": lambda: GeometricGraph(2, 0.2),
    "holder2": lambda: HolderCube(2, "inner_product", 1.0),
    "lower_bound": lambda: lower_bound_sbm(802, 0.02),
}


def get_fixture(name: str) -> GraphonSpec:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise InvalidArgument(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None
