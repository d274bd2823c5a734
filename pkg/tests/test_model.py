"""Model layer: cones, validation, coefficient-set parametrization."""

import random
from fractions import Fraction

import pytest

from polycone.cones import member_of_vrep
from polycone.errors import EmptyCone, IncompatibleSimplex, SemanticError
from polycone.linalg import Mat, SubspaceBasis
from polycone.model import (
    ClassCone,
    ClassPartition,
    GenSystem,
    SimplexChoice,
    coefficient_set,
    convert_h_to_v,
    param_vec,
    validate,
)
from polycone.regions import constraint, equivalent

F = Fraction


def two_component_system(generators=None, open_flags=None):
    # monomials over (x, xp, y, yp): x, xp*y, x*yp, yp
    B = Mat.from_rows(
        [
            (1, 0, 1, 0),
            (0, 1, 0, 0),
            (0, 1, 0, 0),
            (0, 0, 1, 1),
        ]
    )
    cone = ClassCone(
        size=4,
        eq=((-1, 1, -1, 0), (0, -1, 1, 1)),
        generators=generators,
        open_flags=open_flags,
    )
    return GenSystem(
        variables=("x", "xp", "y", "yp"),
        B=B,
        partition=ClassPartition((4,)),
        cones=(cone,),
        params=param_vec(["k1", "k2", "k3", "k4"]),
    )


def bistable_cones():
    first = ClassCone(size=3, eq=((1, -1, 1),))
    second = ClassCone(size=4, strict=((-1, 1, -1, -1),))
    return first, second


class TestValidate:
    def test_two_component_witness(self):
        rep = validate(two_component_system())
        assert rep.witnesses == ((1, 2, 1, 1),)

    def test_explicit_generators_checked_against_rows(self):
        with pytest.raises(SemanticError):
            validate(two_component_system(generators=((1, 1, 1, 1),)))

    def test_contradictory_strict_rows_empty(self):
        cone = ClassCone(size=2, strict=((1, -1), (-1, 1)))
        sysm = GenSystem(
            variables=("x",),
            B=Mat.from_rows([(1, 2)]),
            partition=ClassPartition((2,)),
            cones=(cone,),
            params=param_vec([1, 1]),
        )
        with pytest.raises(EmptyCone) as exc:
            validate(sysm)
        assert exc.value.class_index == 0

    def test_zero_coordinate_everywhere_empty(self):
        # y2 = 0 forced: closure rays never cover coordinate 2
        cone = ClassCone(size=2, eq=((0, 1),))
        sysm = GenSystem(
            variables=("x",),
            B=Mat.from_rows([(1, 2)]),
            partition=ClassPartition((2,)),
            cones=(cone,),
            params=param_vec([1, 1]),
        )
        with pytest.raises(EmptyCone):
            validate(sysm)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(SemanticError):
            GenSystem(
                variables=("x",),
                B=Mat.from_rows([(1, 2)]),
                partition=ClassPartition((2,)),
                cones=(ClassCone(size=3),),
                params=param_vec([1, 1]),
            )

    def test_negative_parameter_rejected(self):
        with pytest.raises(SemanticError):
            param_vec([1, -2])


class TestConvert:
    def test_two_component_rays(self):
        cone = convert_h_to_v(two_component_system().cones[0])
        assert cone.generators == ((1, 1, 0, 1), (0, 1, 1, 0))
        assert cone.open_flags == (True, True)
        assert cone.relint_exact is True

    def test_bistable_strict_rays(self):
        _, second = bistable_cones()
        cone = convert_h_to_v(second)
        assert cone.generators == (
            (1, 1, 0, 0),
            (0, 1, 1, 0),
            (0, 1, 0, 1),
            (0, 1, 0, 0),
        )
        assert cone.relint_exact is True

    def test_nonstrict_face_not_flag_representable(self):
        # y1 >= y2 keeps the facet through (1,1); open flags cannot keep it
        cone = convert_h_to_v(ClassCone(size=2, nonstrict=((1, -1),)))
        assert cone.generators == ((1, 1), (1, 0))
        assert cone.relint_exact is False

    def test_membership_agreement_on_samples(self):
        rng = random.Random(11)
        cone = two_component_system().cones[0]
        conv = convert_h_to_v(cone)
        for _ in range(200):
            a, b = (F(rng.randint(1, 9)), F(rng.randint(1, 9)))
            y = tuple(
                a * g1 + b * g2 for g1, g2 in zip(conv.generators[0], conv.generators[1])
            )
            assert member_of_vrep(conv.generators, conv.open_flags, y)
            assert sum(r * v for r, v in zip(cone.eq[0], y)) == 0
            assert sum(r * v for r, v in zip(cone.eq[1], y)) == 0
        # off-cone points rejected
        assert not member_of_vrep(conv.generators, conv.open_flags, (1, 1, 1, 1))

    def test_derived_h_rows_match_span(self):
        sysm = two_component_system(
            generators=((0, 1, 1, 0), (1, 1, 0, 1)), open_flags=(True, True)
        )
        cone = ClassCone(size=4, generators=sysm.cones[0].generators)
        assert not cone.has_h
        eq, strict, nonstrict = cone.h_rows()
        span = SubspaceBasis(4, list(eq))
        assert span.contains((-1, 1, -1, 0))
        assert span.contains((0, -1, 1, 1))
        given = SubspaceBasis(4, [(-1, 1, -1, 0), (0, -1, 1, 1)])
        assert all(given.contains(r) for r in eq)
        assert nonstrict == ()
        for r in strict:
            assert sum(a * b for a, b in zip(r, (1, 2, 1, 1))) > 0


class TestCoefficientSet:
    def test_two_component_line_segment(self):
        # generators pinned in the order that names lambda = t1_1
        sysm = two_component_system(
            generators=((0, 1, 1, 0), (1, 1, 0, 1)), open_flags=(True, True)
        )
        simplex = SimplexChoice(((F(1), F(1), F(2), F(1)),), (F(3),))
        cs = coefficient_set(sysm, simplex)
        cc = cs.classes[0]
        assert cc.symbols == ("t1_1",)
        assert cc.dim == 1
        assert [str(f) for f in cc.coordinates] == [
            "1 - t1_1",
            "1",
            "t1_1",
            "1 - t1_1",
        ]
        assert equivalent(
            cc.constraints,
            [constraint(0, {"t1_1": 1}), constraint(1, {"t1_1": -1})],
        )

    def test_bistable_classes(self):
        first, second = bistable_cones()
        sysm = GenSystem(
            variables=("x1", "x2", "k1", "k2", "k3"),
            B=Mat.from_rows(
                [
                    (2, 1, 0, 2, 1, 0, 0),
                    (1, 0, 1, 0, 1, 0, 0),
                    (0, 1, 0, 0, 0, 1, 0),
                    (0, 0, 1, 0, 0, 0, 1),
                    (1, 0, 0, 1, 1, 0, 0),
                ]
            ),
            partition=ClassPartition((3, 4)),
            cones=(first, second),
            params=param_vec([1, 1, 1, 1, 2, 1, 1]),
        )
        simplex = SimplexChoice(
            ((F(1), F(1), F(1)), (F(0), F(1), F(0), F(0))),
            (F(2), F(1)),
        )
        cs = coefficient_set(sysm, simplex)
        eq_class, ineq_class = cs.classes
        assert eq_class.symbols == ("t1_1",)
        assert [str(f) for f in eq_class.coordinates] == ["t1_1", "1", "1 - t1_1"]
        assert ineq_class.symbols == ("t2_1", "t2_2", "t2_3")
        assert ineq_class.dim == 3
        assert [str(f) for f in ineq_class.coordinates] == [
            "t2_1",
            "1",
            "t2_2",
            "t2_3",
        ]
        assert equivalent(
            ineq_class.constraints,
            [
                constraint(0, {"t2_1": 1}),
                constraint(0, {"t2_2": 1}),
                constraint(0, {"t2_3": 1}),
                constraint(1, {"t2_1": -1, "t2_2": -1, "t2_3": -1}),
            ],
        )
        assert cs.dim == 4

    def test_incompatible_simplex(self):
        cone = ClassCone(size=2, generators=((1, 0), (0, 1)))
        sysm = GenSystem(
            variables=("x",),
            B=Mat.from_rows([(1, 2)]),
            partition=ClassPartition((2,)),
            cones=(cone,),
            params=param_vec([1, 1]),
        )
        with pytest.raises(IncompatibleSimplex):
            coefficient_set(sysm, SimplexChoice(((F(0), F(1)),), (F(1),)))

    def test_closed_generator_keeps_positivity(self):
        cone = ClassCone(
            size=2, generators=((1, 0), (0, 1)), open_flags=(False, True)
        )
        sysm = GenSystem(
            variables=("x",),
            B=Mat.from_rows([(1, 2)]),
            partition=ClassPartition((2,)),
            cones=(cone,),
            params=param_vec([1, 1]),
        )
        cs = coefficient_set(sysm)
        cc = cs.classes[0]
        assert equivalent(
            cc.constraints,
            [constraint(0, {"t1_1": 1}), constraint(1, {"t1_1": -1})],
        )

    def test_default_simplex_single_generator(self):
        cone = ClassCone(size=2, generators=((1, 2),))
        sysm = GenSystem(
            variables=("x",),
            B=Mat.from_rows([(1, 2)]),
            partition=ClassPartition((2,)),
            cones=(cone,),
            params=param_vec([1, 1]),
        )
        cs = coefficient_set(sysm)
        cc = cs.classes[0]
        assert cc.symbols == ()
        assert cc.dim == 0
        assert [str(f) for f in cc.coordinates] == ["1/3", "2/3"]
        assert cc.constraints == ()
