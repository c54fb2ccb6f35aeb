//! Cross-module invariants: exact facts tying the polynomial engine to the
//! combinatorial layers, and float-mode facts about the unitary action and
//! the orbit-span kernels.

use kepler_core::linalg::{random_unitary, stream_rng};
use kepler_core::minors::{
    conical_poly, diagonal_point, group_act, normal_project, vanishing_order,
};
use kepler_core::partitions::{partitions_bounded, Part, Partition};
use kepler_core::peter_weyl::span_basis;
use kepler_core::poly::{Matrix, MatrixPolynomial};
use kepler_core::scalar::ratio;
use kepler_core::{in_support, SymbolicPowerSpec, TriplePars};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn p(parts: &[Part]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Random polynomial supported in one degree block, float mode.
fn random_poly(
    degree: u32,
    rows: usize,
    cols: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> MatrixPolynomial<Complex64> {
    let mut acc = MatrixPolynomial::zero(rows, cols);
    let nvars = rows * cols;
    for _ in 0..6 {
        let mut term = MatrixPolynomial::constant(
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)),
            rows,
            cols,
        );
        let mut left = degree;
        while left > 0 {
            let v = rng.random_range(0..nvars);
            let var = MatrixPolynomial::variable(v / cols, v % cols, rows, cols).unwrap();
            term = term.try_mul(&var).unwrap();
            left -= 1;
        }
        acc = acc.try_add(&term).unwrap();
    }
    acc
}

#[test]
fn fischer_product_is_unitarily_invariant() {
    let pars = TriplePars::new(2, 3).unwrap();
    for degree in 1..=4u32 {
        for trial in 0..5u64 {
            let mut rng = stream_rng(500 + degree as u64, trial);
            let u = random_unitary(pars.rank(), &mut rng);
            let v = random_unitary(pars.cols(), &mut rng);
            let f = random_poly(degree, pars.rank(), pars.cols(), &mut rng);
            let g = random_poly(degree, pars.rank(), pars.cols(), &mut rng);
            let before = f.fischer_inner(&g).unwrap();
            let after = group_act(&f, &u, &v)
                .unwrap()
                .fischer_inner(&group_act(&g, &u, &v).unwrap())
                .unwrap();
            let scale = f.fischer_norm_sq().sqrt() * g.fischer_norm_sq().sqrt();
            assert!(
                (before - after).norm() <= 1e-10 * scale.max(1.0),
                "degree {degree}: {before} vs {after}"
            );
        }
    }
}

#[test]
fn group_action_composes() {
    let pars = TriplePars::new(2, 2).unwrap();
    let mut rng = stream_rng(600, 0);
    let f = random_poly(3, 2, 2, &mut rng);
    let u1 = random_unitary(2, &mut rng);
    let v1 = random_unitary(2, &mut rng);
    let u2 = random_unitary(2, &mut rng);
    let v2 = random_unitary(2, &mut rng);
    let step = group_act(&group_act(&f, &u2, &v2).unwrap(), &u1, &v1).unwrap();
    let composite = group_act(&f, &u1.matmul(&u2), &v1.matmul(&v2)).unwrap();
    let dev = step.try_sub(&composite).unwrap().fischer_norm_sq().sqrt();
    assert!(dev <= 1e-10 * f.fischer_norm_sq().sqrt(), "dev {dev}");
    let _ = pars;
}

/// Exact rational matrix of rank at most `rank`, built as a product of two
/// random factors.
fn random_rational_rank(
    rows: usize,
    cols: usize,
    rank: usize,
    rng: &mut rand_chacha::ChaCha12Rng,
) -> Matrix<BigRational> {
    let small = |rng: &mut rand_chacha::ChaCha12Rng| {
        ratio(rng.random_range(-3i64..=3), rng.random_range(1i64..=3))
    };
    let a = Matrix::from_fn(rows, rank, |_, _| small(rng));
    let b = Matrix::from_fn(rank, cols, |_, _| small(rng));
    if rank == 0 {
        Matrix::zero(rows, cols)
    } else {
        a.matmul(&b)
    }
}

/// The hard containment direction of the symbolic-power decomposition: at a
/// point of rank at most `j`, every conical polynomial vanishes at least to
/// its tail weight past `j`, hence members of the support meet the
/// prescribed stratum orders. Exact arithmetic throughout.
#[test]
fn conical_order_dominates_tail_weight_at_random_rational_points() {
    let pars = TriplePars::new(3, 4).unwrap();
    let nu = SymbolicPowerSpec::new(vec![4, 2, 1]).unwrap();
    for lam in partitions_bounded(3, 3, 4) {
        let conical = conical_poly::<BigRational>(&lam, pars).unwrap();
        if conical.is_zero() {
            continue;
        }
        for j in 0..=3usize {
            for trial in 0..3u64 {
                let mut rng = stream_rng(700 + j as u64, trial + 10 * lam.weight());
                let zeta = random_rational_rank(3, 4, j, &mut rng);
                let order = vanishing_order(&conical, &zeta).unwrap() as u64;
                let bound = lam.tail_weight(j);
                assert!(
                    order >= bound,
                    "lambda {lam}, rank {j}, trial {trial}: order {order} < {bound}"
                );
                if j < 3 && in_support(&lam, &nu).unwrap() {
                    assert!(order >= nu.orders()[j]);
                }
            }
        }
    }
}

/// Projecting a conical polynomial to the normal slice of a diagonal
/// tripotent gives the conical polynomial of the truncated partition, on
/// the smaller triple. Symbolic identity, no tolerance.
#[test]
fn normal_projection_truncates_conical_polynomials() {
    let pars = TriplePars::new(3, 5).unwrap();
    for lam in partitions_bounded(3, 3, 6) {
        let conical = conical_poly::<BigRational>(&lam, pars).unwrap();
        for level in 0..=2usize {
            let projected = normal_project(&conical, level).unwrap();
            let sub = pars.peirce_zero(level).unwrap();
            let expected = conical_poly::<BigRational>(&lam.truncate(level).unwrap(), sub).unwrap();
            assert_eq!(projected, expected, "lambda {lam}, level {level}");
        }
    }
}

#[test]
fn projected_conical_on_diagonals_is_a_tail_monomial() {
    let pars = TriplePars::new(3, 3).unwrap();
    let lam = p(&[3, 2, 1]);
    let conical = conical_poly::<BigRational>(&lam, pars).unwrap();
    for level in 0..=2usize {
        let projected = normal_project(&conical, level).unwrap();
        let sub = pars.peirce_zero(level).unwrap();
        let diag: Vec<BigRational> = (0..sub.rank()).map(|i| ratio(2 + i as i64, 3)).collect();
        let point = diagonal_point(&diag, sub);
        let mut expected = ratio(1, 1);
        for (i, w) in diag.iter().enumerate() {
            for _ in 0..lam.part(level + i) {
                expected *= w.clone();
            }
        }
        assert_eq!(projected.eval(&point).unwrap(), expected, "level {level}");
    }
}

/// Reproducing property across every component of weight at most 4 at
/// r = s = 2: pairing a kernel section against a random member evaluates
/// the member.
#[test]
fn kernel_sections_reproduce_members() {
    let pars = TriplePars::new(2, 2).unwrap();
    for lam in partitions_bounded(2, 4, 4) {
        let basis = span_basis(&lam, pars, 37, 1e-9).unwrap();
        let mut rng = stream_rng(800, lam.weight());
        // random member of the component
        let mut member = MatrixPolynomial::zero(2, 2);
        for phi in basis.basis() {
            let w = Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            );
            member = member.try_add(&phi.scale(&w)).unwrap();
        }
        for trial in 0..3u64 {
            let mut prng = stream_rng(801, 100 * lam.weight() + trial);
            let zeta = Matrix::from_fn(2, 2, |_, _| {
                Complex64::new(
                    StandardNormal.sample(&mut prng),
                    StandardNormal.sample(&mut prng),
                ) * 0.6
            });
            let section = basis.kernel_section(&zeta).unwrap();
            let got = section.fischer_inner(&member).unwrap();
            let want = member.eval(&zeta).unwrap();
            let scale = member.fischer_norm_sq().sqrt().max(1e-300);
            assert!(
                (got - want).norm() <= 1e-8 * scale,
                "lambda {lam}: {got} vs {want}"
            );
        }
    }
}
