"""File formats: golden parses, round trips, network conversion."""

import math
import random
from fractions import Fraction
from pathlib import Path

import pytest

from polycone.errors import (
    EmptyCone,
    EmptyNetwork,
    ParseError,
    SemanticError,
    UndeclaredSpecies,
)
from polycone.linalg import Mat
from polycone.model import (
    ClassCone,
    ClassPartition,
    GenSystem,
    SimplexChoice,
    param_vec,
    validate,
)
from polycone.reduction import reduce_system
from polycone.solve import lift, solve_on_slice
from polycone.sysfile import (
    NetworkFile,
    Reaction,
    SystemFile,
    network_to_system,
    parse_network,
    parse_system,
    serialize_system,
)
from test_reduction import (
    BISTABLE_SIMPLEX,
    TWO_COMPONENT_SIMPLEX,
    bistable_system,
    two_component_system,
)

F = Fraction
DATA = Path(__file__).resolve().parent.parent


def read(relpath: str) -> str:
    return (DATA / relpath).read_text()


class TestSystemFormat:
    def test_two_component_file_matches_fixture(self):
        sf = parse_system(read("systems/two_component.sys"))
        assert sf.system == two_component_system()
        assert sf.simplex == TWO_COMPONENT_SIMPLEX

    def test_multistationarity_file_matches_fixture(self):
        sf = parse_system(read("systems/multistationarity.sys"))
        assert sf.system == bistable_system()
        assert sf.simplex == BISTABLE_SIMPLEX

    def test_trinomial_file_solves_to_golden_root(self):
        sf = parse_system(read("systems/trinomial_2_1.sys"))
        red = reduce_system(sf.system, sf.simplex)
        sol = solve_on_slice(red)
        (branch,) = sol.branches
        y = tuple(
            f.eval(dict(branch.fixed)) for f in red.coefficients.coordinates
        )
        x = lift(red, y, tol=1e-8)
        assert abs(float(x[0]) - (math.sqrt(5) - 1) / 2) <= 1e-10

    def test_round_trip_identity_on_data_files(self):
        for rel in (
            "systems/two_component.sys",
            "systems/trinomial_2_1.sys",
            "systems/multistationarity.sys",
        ):
            sf = parse_system(read(rel))
            assert parse_system(serialize_system(sf)) == sf

    def test_round_trip_with_floats_defines_closed(self):
        text = """
        variables a b
        define rho 3/7
        class
          monomial 1 0
          monomial ~0.5 2
          monomial 0 rho
          params 5/3 ~2.25 gamma
          nonstrict 1 -1 0
          strict 0 1 -1
          generator 1 0 0 closed
          generator 1 1 0 open
          generator 0 0 1 open
          simplex 1 2 1 level 5/2
        end
        """
        sf = parse_system(text)
        # one float exponent puts the whole matrix in float mode
        assert sf.system.B.mode == "float"
        assert sf.system.B.entries[0][1] == 0.5
        assert sf.system.B.entries[1][2] == pytest.approx(3 / 7)
        assert sf.system.params[0] == F(5, 3)
        assert sf.system.params[1] == 2.25
        assert sf.system.params[2] == "gamma"
        assert sf.system.cones[0].open_flags == (False, True, True)
        assert parse_system(serialize_system(sf)) == sf

    def test_define_stays_exact_without_floats(self):
        text = """
        variables a
        define rho 3/7
        class
          monomial rho
          params rho
          generator 1 open
        end
        """
        sf = parse_system(text)
        assert sf.system.B.entries[0][0] == F(3, 7)
        assert sf.system.params[0] == F(3, 7)

    def test_round_trip_identity_random(self):
        rng = random.Random(5)
        for _ in range(20):
            n = rng.randint(1, 3)
            sizes = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 2)))
            m = sum(sizes)
            B = Mat.from_rows(
                [tuple(F(rng.randint(-2, 3)) for _ in range(m)) for _ in range(n)],
                ncols=m,
            )
            cones = tuple(
                ClassCone(
                    size=s,
                    generators=tuple(
                        tuple(
                            F(rng.randint(0, 2)) + (1 if j == g else 0)
                            for j in range(s)
                        )
                        for g in range(s)
                    ),
                    open_flags=tuple(rng.random() < 0.7 for _ in range(s)),
                )
                for s in sizes
            )
            sysm = GenSystem(
                variables=tuple(f"x{i}" for i in range(n)),
                B=B,
                partition=ClassPartition(sizes),
                cones=cones,
                params=param_vec(
                    [
                        rng.choice([F(rng.randint(1, 5)), f"p{j}"])
                        for j in range(m)
                    ]
                ),
            )
            simplex = None
            if rng.random() < 0.5:
                simplex = SimplexChoice(
                    tuple(tuple(F(1) for _ in range(s)) for s in sizes),
                    tuple(F(rng.randint(1, 3)) for _ in sizes),
                )
            sf = SystemFile(sysm, simplex)
            assert parse_system(serialize_system(sf)) == sf

    def test_parse_errors_carry_line_numbers(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_system("variables a\nbogus 1 2\n")
        with pytest.raises(ParseError, match="line 3"):
            parse_system("variables a\nclass\n  monomial 1/0\n  params 1\nend\n")
        with pytest.raises(ParseError, match="never ends"):
            parse_system("variables a\nclass\n  monomial 1\n  params 1\n")
        with pytest.raises(ParseError, match="variables"):
            parse_system("class\nend\n")
        with pytest.raises(ParseError, match="params given twice"):
            parse_system(
                "variables a\nclass\n  monomial 1\n  params 1\n  params 2\nend\n"
            )

    def test_semantic_errors(self):
        with pytest.raises(SemanticError, match="exponents"):
            parse_system("variables a b\nclass\n  monomial 1\n  params 1\nend\n")
        with pytest.raises(SemanticError, match="params"):
            parse_system("variables a\nclass\n  monomial 1\n  params 1 2\nend\n")
        with pytest.raises(SemanticError, match="row length"):
            parse_system(
                "variables a\nclass\n  monomial 1\n  params 1\n  eq 1 -1\nend\n"
            )
        with pytest.raises(SemanticError, match="duplicate"):
            parse_system("variables a a\nclass\n  monomial 1 1\n  params 1\nend\n")


class TestNetworkFormat:
    def test_two_component_network_matches_known_system(self):
        net = parse_network(read("networks/two_component.net"))
        assert net.species == ("X", "Xp", "Y", "Yp")
        assert len(net.reactions) == 4
        sysm = network_to_system(net)
        assert sysm.params.entries == ("k3", "k2", "k1", "k4")
        assert sysm.B.entries == (
            (1, 0, 1, 0),
            (0, 1, 0, 0),
            (0, 1, 0, 0),
            (1, 0, 0, 1),
        )
        assert sysm.cones[0].eq == ((-1, 1, -1, 0), (1, -1, 0, 1))

    def test_two_component_network_spans_fixture_rows(self):
        # the equation rows match the fixture's after permuting columns
        # into the canonical order (k3, k2, k1, k4)
        sysm = network_to_system(parse_network(read("networks/two_component.net")))
        fixture = two_component_system()
        perm = (2, 1, 0, 3)
        permuted = [tuple(row[p] for p in perm) for row in fixture.cones[0].eq]
        got = Mat.from_rows(sysm.cones[0].eq)
        want = Mat.from_rows(permuted)
        from polycone.linalg import rank

        stacked = Mat.from_rows(list(got.entries) + list(want.entries))
        assert rank(stacked) == rank(got) == rank(want)

    def test_autocatalytic_network_matches_known_system(self):
        sysm = network_to_system(parse_network(read("networks/autocatalytic.net")))
        assert sysm.params.entries == ("k3", "k1", "k2")
        assert sysm.B.entries == ((2, 1, 0), (1, 0, 1))
        assert sysm.cones[0].eq == ((1, -1, 1),)

    def test_decay_network_has_empty_cone(self):
        sysm = network_to_system(parse_network("species X\nX -> 0 : k\n"))
        assert sysm.m == 1
        with pytest.raises(EmptyCone):
            validate(sysm)

    def test_kinetic_order_override(self):
        net = parse_network("species X Y\n2X -> Y : k | X=3/2\n")
        sysm = network_to_system(net)
        assert sysm.B.col(0) == (F(3, 2), 0)

    def test_duplicate_monomial_rate_columns_merge(self):
        net = NetworkFile(
            species=("x", "y", "z"),
            reactions=(
                Reaction(((1, "x"),), ((1, "y"),), "k"),
                Reaction(((1, "x"),), ((1, "z"),), "k"),
            ),
        )
        sysm = network_to_system(net)
        assert sysm.m == 1
        assert sysm.B.col(0) == (1, 0, 0)
        assert sysm.cones[0].eq == ((-2,),)

    def test_network_errors(self):
        with pytest.raises(UndeclaredSpecies):
            parse_network("species X\nX -> Q : k\n")
        with pytest.raises(SemanticError, match="twice"):
            parse_network("species X Y\nX -> Y : k\nY -> X : k\n")
        with pytest.raises(EmptyNetwork):
            network_to_system(parse_network("species X\n"))
        with pytest.raises(ParseError, match="ambiguous"):
            parse_network("species X Y\nX <-> Y : a b | X=2\n")
        with pytest.raises(ParseError, match="complex term"):
            parse_network("species X\nX + -> X : k\n")
        with pytest.raises(ParseError, match="rate name"):
            parse_network("species X Y\nX <-> Y : k\n")

    def test_import_round_trip(self):
        sysm = network_to_system(parse_network(read("networks/autocatalytic.net")))
        sf = SystemFile(sysm, None)
        assert parse_system(serialize_system(sf)) == sf
