import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import broken_density, random_partition, unity_density
from spectrapair.density import (
    NOT_ORTHONORMAL,
    ORTHONORMAL_AND_COMPLETE,
    ORTHONORMAL_INCOMPLETE,
    CongruencePartition,
    StepDensity,
    build_from_partition,
    c_phi,
    c_phi_poisson,
    check_translation_congruent,
    F_phi,
    fold_to_cube,
    fourier_transform,
    fourier_transform_many,
    has_spectrum_Zd,
    moment,
    refine_to_grid,
    same_measure,
    translation_equivalent_density,
    verify_partition_of_unity,
)
from spectrapair.errors import InvalidPartitionError, PreconditionError
from spectrapair.exactnum import RationalBox


def step(*cells):
    return StepDensity([([iv], v) for iv, v in cells])


CHI_Q = StepDensity.unit_cube(1)
TWO_STEP = step(((0, 1), F(2, 3)), ((1, 2), F(1, 3)))
HALF_02 = step(((0, 2), F(1, 2)))
CONGRUENT = StepDensity.indicator([[(0, F(1, 2))], [(F(3, 2), 2)]])


def quad_transform(phi: StepDensity, t: float, n: int = 200_000) -> complex:
    """Midpoint-rule oracle for a 1-d step density's Fourier transform."""
    total = 0j
    for box, v in phi.cells:
        (a, b), = box.intervals
        x = np.linspace(float(a), float(b), n, endpoint=False) + (float(b) - float(a)) / (2 * n)
        total += float(v) * (float(b) - float(a)) * np.mean(np.exp(2j * np.pi * t * x))
    return complex(total)


# ---------------------------------------------------------------- refine


def test_refine_examples():
    assert refine_to_grid(CHI_Q) == CHI_Q
    assert refine_to_grid(TWO_STEP) == TWO_STEP
    phi = step(((0, F(3, 2)), F(1, 2)), ((F(3, 2), 2), F(1, 2)))
    assert refine_to_grid(phi) == phi
    periodic = refine_to_grid(phi, periodic=True)
    breaks = {e for b, _ in periodic.cells for e in b.intervals[0]}
    assert breaks == {0, F(1, 2), 1, F(3, 2), 2}
    assert same_measure(periodic, phi)


def test_refine_idempotent_2d():
    phi = StepDensity(
        [
            ([(0, F(1, 2)), (0, 1)], F(1, 2)),
            ([(F(1, 2), 1), (F(1, 3), 1)], F(3, 4)),
            ([(F(1, 4), F(1, 2)), (1, 2)], 2),
        ]
    )
    once = refine_to_grid(phi)
    assert refine_to_grid(once) == once
    assert same_measure(once, phi)
    assert once.mass == phi.mass


# ---------------------------------------------------------------- unity


def test_partition_of_unity_examples():
    assert verify_partition_of_unity(CHI_Q)
    assert verify_partition_of_unity(TWO_STEP)
    assert verify_partition_of_unity(HALF_02)
    res = verify_partition_of_unity(step(((0, F(1, 2)), 1)))
    assert not res
    assert res.witness == RationalBox([(F(1, 2), 1)])
    assert res.witness_sum == 0


def test_partition_of_unity_2d():
    phi = StepDensity.indicator([[(0, F(1, 2)), (0, 1)], [(F(1, 2), 1), (3, 4)]])
    assert verify_partition_of_unity(phi)
    bad = StepDensity([([(0, 1), (0, F(1, 2))], 1), ([(0, 1), (F(1, 2), 1)], F(1, 2))])
    assert not verify_partition_of_unity(bad)


# ---------------------------------------------------------------- transforms


def test_moment_examples():
    assert abs(moment(TWO_STEP, 0) - 1) < 1e-15
    assert abs(moment(TWO_STEP, 3)) < 1e-12
    z = moment(step(((0, F(1, 2)), 2)), 1)
    assert abs(z - 2j / math.pi) < 1e-12


def test_fourier_transform_examples():
    assert abs(fourier_transform(TWO_STEP, 0) - 1) < 1e-15
    assert abs(fourier_transform(TWO_STEP, 1)) < 1e-15
    want = 2 / (3 * math.pi) * (1 + 3j)
    z = fourier_transform(TWO_STEP, F(1, 4))
    assert abs(z - want) < 1e-14
    assert abs(fourier_transform(TWO_STEP, 0.25) - want) < 1e-14
    assert abs(quad_transform(TWO_STEP, 0.25) - want) < 1e-9


@pytest.mark.parametrize("t", [0.37, -2.5, 11.125])
def test_fourier_transform_against_quadrature(t):
    phi = step(((F(-1, 3), F(1, 4)), F(1, 2)), ((F(1, 4), F(7, 5)), F(5, 13)))
    assert abs(fourier_transform(phi, t) - quad_transform(phi, t)) < 1e-8


def test_F_phi_examples():
    for t in (0.0, 0.3, F(1, 2), 7.25):
        assert F_phi(CHI_Q, t, F(1, 3)) == 1
    t = 0.3
    for x in (0, F(1, 2), 0.99):
        want = 2 / 3 + (1 / 3) * np.exp(2j * np.pi * t)
        assert abs(F_phi(TWO_STEP, t, x) - want) < 1e-15
    rng = random.Random(5)
    for _ in range(20):
        phi = unity_density(rng)
        assert abs(F_phi(phi, 0, F(rng.randint(0, 99), 100)) - 1) < 1e-12


def test_F_phi_bound():
    rng = random.Random(11)
    for _ in range(30):
        phi = unity_density(rng, dim=rng.choice([1, 2]), max_den=16)
        for _ in range(10):
            t = tuple(rng.uniform(-5, 5) for _ in range(phi.dim))
            x = tuple(F(rng.randint(0, 999), 1000) for _ in range(phi.dim))
            assert abs(F_phi(phi, t, x)) <= 1 + 1e-12


def test_F_phi_needs_x_in_cube():
    with pytest.raises(PreconditionError):
        F_phi(TWO_STEP, 0.1, 1)


def c_phi_oracle(phi: StepDensity, t: float, n: int = 4000) -> float:
    """Midpoint rule in x of |F_phi(t, x)|^2, evaluated pointwise."""
    xs = (np.arange(n) + 0.5) / n
    return float(np.mean([abs(F_phi(phi, t, float(x))) ** 2 for x in xs]))


def test_c_phi_examples():
    assert c_phi(CHI_Q, 0.77) == pytest.approx(1, abs=1e-15)
    assert c_phi(TWO_STEP, F(1, 2)) == pytest.approx(1 / 9, abs=1e-15)
    assert c_phi(TWO_STEP, 0) == pytest.approx(1, abs=1e-15)
    assert abs(c_phi(TWO_STEP, 0.5) - c_phi_oracle(TWO_STEP, 0.5)) < 1e-9


def test_c_phi_against_pointwise_oracle():
    phi = step(((0, F(1, 2)), F(2, 3)), ((F(1, 2), 1), F(1, 4)), ((F(3, 2), 2), F(3, 4)), ((-1, F(-1, 2)), F(1, 3)))
    assert verify_partition_of_unity(phi)
    for t in (0.1, 0.45, 2.3):
        assert abs(c_phi(phi, t) - c_phi_oracle(phi, t)) < 1e-9


def test_c_phi_requires_unity():
    with pytest.raises(PreconditionError):
        c_phi(step(((0, F(1, 2)), 2)), 0.3)


def test_c_phi_range_and_congruent_sets():
    rng = random.Random(2)
    for _ in range(20):
        phi = unity_density(rng, dim=rng.choice([1, 2]), max_den=16)
        for _ in range(5):
            t = tuple(rng.uniform(-3, 3) for _ in range(phi.dim))
            assert -1e-15 <= c_phi(phi, t) <= 1 + 1e-9
    for _ in range(10):
        chi = build_from_partition(random_partition(rng, dim=rng.choice([1, 2])))
        for _ in range(100):
            t = tuple(rng.uniform(-10, 10) for _ in range(chi.dim))
            assert abs(c_phi(chi, t) - 1) < 1e-10


def test_c_phi_poisson_examples():
    assert c_phi_poisson(CHI_Q, 0, 0) == pytest.approx(1, abs=1e-15)
    assert abs(c_phi_poisson(TWO_STEP, 0.5, 50) - 1 / 9) < 1e-3
    # tail of sum 1/(4 pi^2 (n + 1/4)^2) beyond N is about 1/(2 pi^2 N)
    assert abs(c_phi_poisson(HALF_02, 0.25, 200_000) - c_phi(HALF_02, F(1, 4))) < 1e-6
    assert c_phi(HALF_02, F(1, 4)) == pytest.approx(0.5, abs=1e-15)


def test_c_phi_poisson_monotone_and_convergent():
    rng = random.Random(8)
    for dim in (1, 2):
        phi = unity_density(rng, dim=dim, max_den=8)
        t = tuple(rng.uniform(-1, 1) for _ in range(dim))
        Ns = [0, 1, 2, 5, 10, 50, 200] if dim == 1 else [0, 1, 2, 5, 10, 40]
        vals = [c_phi_poisson(phi, t, N) for N in Ns]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        if dim == 1:
            assert abs(vals[-1] - c_phi(phi, t)) < 1e-3
        assert vals[-1] <= c_phi(phi, t) + 1e-9


# ---------------------------------------------------------------- spectrum verdicts


def test_has_spectrum_examples():
    v = has_spectrum_Zd(CHI_Q)
    assert v.status == ORTHONORMAL_AND_COMPLETE
    assert v.certificate == CongruencePartition.trivial(1)
    v = has_spectrum_Zd(TWO_STEP)
    assert v.status == ORTHONORMAL_INCOMPLETE
    assert c_phi(TWO_STEP, v.witness) < 1
    v = has_spectrum_Zd(CONGRUENT)
    assert v.status == ORTHONORMAL_AND_COMPLETE
    assert v.certificate == CongruencePartition(
        [((0,), [RationalBox([(0, F(1, 2))])]), ((1,), [RationalBox([(F(1, 2), 1)])])]
    )
    v = has_spectrum_Zd(step(((0, F(1, 2)), 1)))
    assert v.status == NOT_ORTHONORMAL and v.witness is not None


def test_half_interval_is_orthonormal_but_incomplete():
    v = has_spectrum_Zd(HALF_02)
    assert v.status == ORTHONORMAL_INCOMPLETE
    assert c_phi(HALF_02, F(1, 2)) == pytest.approx(0, abs=1e-15)


def test_check_translation_congruent_examples():
    assert check_translation_congruent([[(0, 1)]]) == CongruencePartition.trivial(1)
    Q5 = RationalBox.cube(2).shift((5, 5))
    p = check_translation_congruent([Q5])
    assert p.pieces == (((5, 5), (RationalBox.cube(2),)),)
    p = check_translation_congruent([[(0, F(3, 4))], [(F(7, 4), 2)]])
    assert p == CongruencePartition([((0,), [[(0, F(3, 4))]]), ((1,), [[(F(3, 4), 1)]])])
    with pytest.raises(PreconditionError):
        check_translation_congruent([[(0, F(1, 2))], [(F(3, 2), 2)], [(F(5, 2), 3)]])


def test_check_translation_congruent_rejects_overlapping_translates():
    assert check_translation_congruent([[(0, F(1, 2))], [(2, F(5, 2))]]) is None


def test_build_from_partition_examples():
    assert build_from_partition(CongruencePartition.trivial(1)) == CHI_Q
    p = CongruencePartition([((0,), [[(0, F(1, 2))]]), ((1,), [[(F(1, 2), 1)]])])
    assert build_from_partition(p) == CONGRUENT
    p = CongruencePartition([((-1,), [[(0, F(1, 3))]]), ((0,), [[(F(1, 3), 1)]])])
    assert build_from_partition(p) == StepDensity.indicator([[(-1, F(-2, 3))], [(F(1, 3), 1)]])


@pytest.mark.parametrize(
    "pieces,invariant",
    [
        ([((0,), [[(0, F(2, 3))]]), ((3,), [[(F(1, 2), 1)]])], "pieces pairwise disjoint"),
        ([((0,), [[(0, F(1, 2))]])], "pieces cover Q"),
        ([((0,), [[(0, F(3, 2))]])], "pieces inside Q"),
    ],
)
def test_invalid_partitions_name_the_invariant(pieces, invariant):
    with pytest.raises(InvalidPartitionError) as exc:
        CongruencePartition(pieces)
    assert exc.value.invariant == invariant


def test_partition_round_trip():
    rng = random.Random(4)
    for _ in range(40):
        p = random_partition(rng, dim=rng.choice([1, 2]))
        chi = build_from_partition(p)
        q = check_translation_congruent([b for b, _ in chi.cells])
        assert q.volumes() == p.volumes()
        assert has_spectrum_Zd(chi).certificate.volumes() == p.volumes()


def test_fold_to_cube_examples():
    assert fold_to_cube(TWO_STEP) == CHI_Q
    assert fold_to_cube(CONGRUENT) == CHI_Q
    sub = fold_to_cube(step(((0, F(1, 2)), 1)))
    assert sub == step(((0, F(1, 2)), 1))
    assert sub.mass == F(1, 2) and not sub.is_probability


def test_fold_to_cube_unity_gives_lebesgue():
    rng = random.Random(9)
    for _ in range(20):
        phi = unity_density(rng, dim=rng.choice([1, 2]), max_den=16)
        assert same_measure(fold_to_cube(phi), StepDensity.unit_cube(phi.dim))


def test_fold_to_cube_idempotent_on_cube_supported():
    phi = StepDensity([([(0, F(1, 3))], F(3, 2)), ([(F(1, 3), 1)], F(3, 4))])
    assert same_measure(fold_to_cube(fold_to_cube(phi)), fold_to_cube(phi))
    assert same_measure(fold_to_cube(phi), phi)


def test_translation_equivalent_examples():
    assert translation_equivalent_density(CONGRUENT, CHI_Q)
    res = translation_equivalent_density(TWO_STEP, CHI_Q)
    assert not res and res.witness is not None
    assert translation_equivalent_density(TWO_STEP, TWO_STEP.shift((-7,)))
    moves = translation_equivalent_density(TWO_STEP, TWO_STEP.shift((2,))).moves
    assert {(k1[0], k2[0]) for _, k1, k2 in moves} == {(0, 2), (1, 3)}


def test_equivalence_transports_completeness():
    rng = random.Random(13)
    for _ in range(20):
        p1 = random_partition(rng)
        chi1 = build_from_partition(p1)
        # rearranging the translates inside each fiber keeps equivalence
        k = tuple(rng.randint(-3, 3) for _ in range(chi1.dim))
        chi2 = chi1.shift(k)
        eq = translation_equivalent_density(chi1, chi2)
        assert eq
        assert has_spectrum_Zd(chi1).complete and has_spectrum_Zd(chi2).complete
        other = build_from_partition(random_partition(rng))
        # any two congruent sets are equivalent (both fibers are a single 1)
        assert translation_equivalent_density(chi1, other)


def test_random_densities_agree_with_moment_test():
    rng = random.Random(21)
    for i in range(30):
        phi = unity_density(rng) if i % 2 else broken_density(rng)
        holds = bool(verify_partition_of_unity(phi))
        assert holds == (i % 2 == 1)
        ns = np.arange(-10, 11)
        vals = [moment(phi, int(n)) for n in ns]
        defect = max(abs(v - (1 if n == 0 else 0)) for n, v in zip(ns, vals))
        assert (defect < 1e-10) == holds


def test_step_density_validation():
    with pytest.raises(ValueError):
        step(((0, 1), 1), ((F(1, 2), 2), 1))
    with pytest.raises(ValueError):
        step(((0, 1), -1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.booleans(), st.sampled_from([1, 2]))
def test_unity_iff_vanishing_moments(seed, good, dim):
    rng = random.Random(seed)
    phi = unity_density(rng, dim, max_den=8) if good else broken_density(rng, dim, max_den=8)
    rng_n = np.arange(-3, 4)
    grid = np.stack([g.ravel() for g in np.meshgrid(*([rng_n] * dim), indexing="ij")], axis=1)
    vals = fourier_transform_many(phi, grid)
    target = np.all(grid == 0, axis=1).astype(float)
    assert bool(verify_partition_of_unity(phi)) == good
    assert (np.max(np.abs(vals - target)) < 1e-10) == good
