use super::*;
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense Kronecker oracle: site 0 is the least significant factor.
fn kron_term(term: &OperatorTerm, d: usize, l: usize) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::identity(1, 1);
    for site in (0..l).rev() {
        let op = term
            .factors()
            .iter()
            .find(|(s, _)| *s == site)
            .map(|(_, op)| op.matrix.clone())
            .unwrap_or_else(|| DMatrix::identity(d, d));
        m = m.kronecker(&op);
    }
    m * term.coefficient
}

fn random_state(d: usize, l: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = d.pow(l as u32);
    let amps = (0..dim).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    StateVector::new(d, l, amps).unwrap().normalized().unwrap()
}

fn random_op(d: usize, rng: &mut ChaCha8Rng) -> SiteOperator {
    SiteOperator::new(
        "R",
        DMatrix::from_fn(d, d, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)),
    )
    .unwrap()
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn clock_qubit_limit() {
    let (z, x) = clock_operators(2).unwrap();
    assert!((z.matrix.clone() - DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(-1.0)]))).norm() < 1e-15);
    assert_eq!(x.matrix, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]));
}

#[test]
fn clock_commutation_phase_n3() {
    let (z, x) = clock_operators(3).unwrap();
    let xz = &x.matrix * &z.matrix;
    let zx = &z.matrix * &x.matrix;
    let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let ratio = &xz * zx.clone().try_inverse().unwrap();
    // Z = diag(ω^m), X|m⟩ = |m+1⟩ gives XZ = ω^{-1} ZX.
    assert!((ratio.clone() - DMatrix::identity(3, 3) * omega.conj()).norm() < 1e-12);
    assert!((&zx * xz.try_inverse().unwrap() - DMatrix::identity(3, 3) * omega).norm() < 1e-12);
}

#[test]
fn clock_periods() {
    for n in 2..=6 {
        let (z, x) = clock_operators(n).unwrap();
        assert!((x.pow(n).matrix - DMatrix::<C64>::identity(n, n)).norm() < 1e-12);
        assert!((z.pow(n).matrix - DMatrix::<C64>::identity(n, n)).norm() < 1e-12);
    }
    assert!(clock_operators(1).is_err());
}

#[test]
fn pauli_qudit_examples() {
    assert_eq!(pauli_qudit(2, 0, 0).unwrap().matrix, DMatrix::identity(2, 2));
    let xz = pauli_qudit(2, 1, 1).unwrap().matrix;
    let minus_i_y = DMatrix::from_row_slice(2, 2, &[c(0.0), c(-1.0), c(1.0), c(0.0)]);
    assert!((xz - minus_i_y).norm() < 1e-15);
    assert!(matches!(pauli_qudit(3, 3, 0), Err(Error::InvalidExponent { .. })));
}

#[test]
fn pauli_hilbert_schmidt_orthogonality_d6() {
    let d = 6;
    let ops: Vec<_> =
        (0..d * d).map(|k| pauli_qudit(d, k / d, k % d).unwrap().matrix).collect();
    for (u, pu) in ops.iter().enumerate() {
        assert!(SiteOperator::new("p", pu.clone()).unwrap().is_unitary(1e-12));
        for (v, pv) in ops.iter().enumerate() {
            let tr = (pu.adjoint() * pv).trace();
            let expected = if u == v { d as f64 } else { 0.0 };
            assert!((tr - c(expected)).norm() < 1e-10, "({u},{v}) -> {tr}");
        }
    }
}

#[test]
fn clock_commutation_phase_all_powers() {
    for d in 2usize..=6 {
        let omega = C64::from_polar(1.0, 2.0 * PI / d as f64);
        for k in 0..d.pow(4) {
            let (v1, v2, u1, u2) = (k % d, (k / d) % d, (k / d / d) % d, k / d / d / d);
            let pv = pauli_qudit(d, v1, v2).unwrap().matrix;
            let pu = pauli_qudit(d, u1, u2).unwrap().matrix;
            let e = (v1 * u2 + d * d - (v2 * u1) % d) as i64 % d as i64;
            let phase = omega.powi(e as i32);
            assert!((&pu * &pv - (&pv * &pu) * phase).norm() < 1e-10);
        }
    }
}

#[test]
fn apply_identity_and_single_x() {
    let psi = random_state(3, 3, 1);
    let id = OperatorTerm::identity(c(1.0));
    assert_eq!(apply_term(&id, &psi).unwrap(), psi);
    let (_, x) = clock_operators(2).unwrap();
    let zero = StateVector::basis(2, 1, 0).unwrap();
    let out = apply_term(&OperatorTerm::single(c(1.0), 0, x), &zero).unwrap();
    assert_eq!(out, StateVector::basis(2, 1, 1).unwrap());
}

#[test]
fn apply_zz_matches_dense_oracle() {
    let (z, _) = clock_operators(2).unwrap();
    let term = OperatorTerm::real(0.7, vec![(0, z.clone()), (2, z)]).unwrap();
    let psi = random_state(2, 3, 2);
    let out = apply_term(&term, &psi).unwrap();
    let dense = kron_term(&term, 2, 3) * DVector::from_column_slice(psi.amplitudes());
    assert!(max_dev(out.amplitudes(), dense.as_slice()) < 1e-14);
}

#[test]
fn random_dense_terms_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [2, 3, 6] {
        let l = if d == 6 { 2 } else { 3 };
        for _ in 0..5 {
            let s1 = rng.random_range(0..l);
            let s2 = (s1 + 1 + rng.random_range(0..l - 1)) % l;
            let term = OperatorTerm::new(
                C64::new(0.3, -1.1),
                vec![(s1, random_op(d, &mut rng)), (s2, random_op(d, &mut rng))],
            )
            .unwrap();
            let psi = random_state(d, l, rng.random());
            let out = apply_term(&term, &psi).unwrap();
            let dense = kron_term(&term, d, l) * DVector::from_column_slice(psi.amplitudes());
            assert!(max_dev(out.amplitudes(), dense.as_slice()) < 1e-12);
            let e = expectation(&psi, &term).unwrap();
            let e_dense = DVector::from_column_slice(psi.amplitudes()).dotc(&dense);
            assert!((e - e_dense).norm() < 1e-12);
        }
    }
}

#[test]
fn z3_chain_matches_dense_oracle() {
    let (z, x) = clock_operators(3).unwrap();
    let l = 3;
    let mut spec = HamiltonianSpec::new(3, l, Boundary::Periodic);
    for i in 0..l {
        let j = (i + 1) % l;
        let t = OperatorTerm::real(-0.5, vec![(i, z.dagger()), (j, z.clone())]).unwrap();
        spec.push(t.adjoint());
        spec.push(t);
        spec.push(OperatorTerm::single(C64::new(-0.25, 0.4), i, z.clone()));
        spec.push(OperatorTerm::single(C64::new(-0.25, -0.4), i, z.dagger()));
        spec.push(OperatorTerm::single(c(0.8), i, x.clone()));
        spec.push(OperatorTerm::single(c(0.8), i, x.dagger()));
    }
    let dense: DMatrix<C64> = spec.terms.iter().map(|t| kron_term(t, 3, l)).fold(DMatrix::zeros(27, 27), |a, b| a + b);
    assert!((dense.adjoint() - &dense).norm() < 1e-12);
    let psi = random_state(3, l, 4);
    let out = apply_hamiltonian(&spec, &psi).unwrap();
    let expect = &dense * DVector::from_column_slice(psi.amplitudes());
    assert!(max_dev(out.amplitudes(), expect.as_slice()) < 1e-12);
    assert!((spec.dense_matrix(4096).unwrap() - dense).norm() < 1e-12);
}

#[test]
fn empty_and_diagonal_hamiltonians() {
    let psi = random_state(2, 3, 5);
    let spec = HamiltonianSpec::new(2, 3, Boundary::Open);
    assert!(apply_hamiltonian(&spec, &psi).unwrap().norm() == 0.0);

    let (z, _) = clock_operators(2).unwrap();
    let mut spec = HamiltonianSpec::new(2, 3, Boundary::Open);
    spec.push(OperatorTerm::single(c(2.0), 1, z));
    let out = apply_hamiltonian(&spec, &psi).unwrap();
    for (i, (o, a)) in out.amplitudes().iter().zip(psi.amplitudes()).enumerate() {
        let sign = if (i >> 1) & 1 == 0 { 2.0 } else { -2.0 };
        assert!((o - a * sign).norm() < 1e-15);
    }
}

#[test]
fn diagonal_coupling_applies_table() {
    let d = 3;
    let weights = DMatrix::from_fn(d, d, |a, b| c((a * 3 + b) as f64));
    let mut spec = HamiltonianSpec::new(d, 3, Boundary::Open);
    spec.push_coupling(DiagonalCoupling { coefficient: c(0.5), sites: (0, 2), weights });
    let psi = random_state(d, 3, 6);
    let out = apply_hamiltonian(&spec, &psi).unwrap();
    for i in 0..27 {
        let (a, b) = (i % 3, i / 9);
        assert!((out.amplitudes()[i] - psi.amplitudes()[i] * 0.5 * (a * 3 + b) as f64).norm() < 1e-14);
    }
}

#[test]
fn expectation_examples() {
    let (z, _) = clock_operators(2).unwrap();
    let zt = OperatorTerm::single(c(1.0), 0, z);
    let zero = StateVector::basis(2, 1, 0).unwrap();
    assert!((expectation(&zero, &zt).unwrap() - c(1.0)).norm() < 1e-15);
    let plus = StateVector::new(2, 1, vec![c(1.0), c(1.0)]).unwrap().normalized().unwrap();
    assert!(expectation(&plus, &zt).unwrap().norm() < 1e-15);
}

#[test]
fn errors_on_mismatch() {
    let (z, _) = clock_operators(3).unwrap();
    let psi = random_state(2, 2, 7);
    assert!(apply_term(&OperatorTerm::single(c(1.0), 0, z.clone()), &psi).is_err());
    let (z2, _) = clock_operators(2).unwrap();
    assert!(matches!(
        apply_term(&OperatorTerm::single(c(1.0), 5, z2.clone()), &psi),
        Err(Error::InvalidSite { site: 5, len: 2 })
    ));
    assert!(OperatorTerm::real(1.0, vec![(0, z2.clone()), (0, z2)]).is_err());
    assert!(StateVector::new(2, 2, vec![c(1.0); 3]).is_err());
}

#[test]
fn purity_sum_is_one() {
    for (d, l) in [(2, 3), (3, 2), (3, 4), (2, 6)] {
        let psi = random_state(d, l, 8 + l as u64);
        let dim = d.pow(l as u32);
        let mut total = 0.0;
        for k in 0..dim * dim {
            let (mut r, mut s) = (k % dim, k / dim);
            let mut factors = Vec::new();
            for site in 0..l {
                let (v1, v2) = (r % d, s % d);
                r /= d;
                s /= d;
                if v1 != 0 || v2 != 0 {
                    factors.push((site, pauli_qudit(d, v1, v2).unwrap()));
                }
            }
            let t = OperatorTerm::new(c(1.0), factors).unwrap();
            total += expectation(&psi, &t).unwrap().norm_sqr();
        }
        assert!((total / dim as f64 - 1.0).abs() < 1e-8, "d={d} L={l}: {total}");
    }
}

#[test]
fn state_dump_roundtrip_and_rejects_garbage() {
    let psi = random_state(3, 2, 9);
    let mut buf = Vec::new();
    write_state(&psi, &mut buf).unwrap();
    assert_eq!(&buf[..4], b"LGTS");
    assert_eq!(buf.len(), 16 + 9 * 16);
    assert_eq!(read_state(buf.as_slice()).unwrap(), psi);
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(read_state(bad.as_slice()).is_err());
    assert!(read_state(&buf[..buf.len() - 1]).is_err());
}

proptest! {
    #[test]
    fn apply_term_is_linear(seed in 0u64..1000, alpha_re in -2.0f64..2.0, beta_im in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let term = OperatorTerm::new(C64::new(0.4, 0.2), vec![(0, random_op(3, &mut rng)), (2, random_op(3, &mut rng))]).unwrap();
        let a = random_state(3, 3, seed);
        let b = random_state(3, 3, seed + 1);
        let (alpha, beta) = (C64::new(alpha_re, 0.3), C64::new(-0.7, beta_im));
        let combo: Vec<C64> = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| alpha * x + beta * y).collect();
        let lhs = apply_term(&term, &StateVector::new(3, 3, combo).unwrap()).unwrap();
        let ta = apply_term(&term, &a).unwrap();
        let tb = apply_term(&term, &b).unwrap();
        let rhs: Vec<C64> = ta.amplitudes().iter().zip(tb.amplitudes()).map(|(x, y)| alpha * x + beta * y).collect();
        prop_assert!(max_dev(lhs.amplitudes(), &rhs) < 1e-12);
    }

    #[test]
    fn state_dump_roundtrip(seed in 0u64..10_000, d in 2usize..5, l in 1usize..4) {
        let psi = random_state(d, l, seed);
        let mut buf = Vec::new();
        write_state(&psi, &mut buf).unwrap();
        prop_assert_eq!(read_state(buf.as_slice()).unwrap(), psi);
    }
}
