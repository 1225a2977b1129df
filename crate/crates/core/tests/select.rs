mod common;

use std::sync::OnceLock;

use common::{c, gaussian_matrix, oracle_singular_values};
use kerdock_core::construct::*;
use kerdock_core::linalg::{self, Complex, ComplexMatrix};
use kerdock_core::select::*;
use proptest::prelude::*;

fn bf4() -> &'static Codebook {
    static CB: OnceLock<Codebook> = OnceLock::new();
    CB.get_or_init(|| beamforming_codebook(&kerdock_mub_mt4().unwrap(), true).unwrap())
}

fn sm4() -> &'static Codebook {
    static CB: OnceLock<Codebook> = OnceLock::new();
    CB.get_or_init(|| precoding_codebook(&kerdock_mub_mt4().unwrap(), 2, SubsetStrategy::AllSubsets).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quaternary_apply_is_bit_exact(seed in any::<u64>(), mr in 1usize..=4) {
        let h = gaussian_matrix(&mut common::rng(seed), mr, 4);
        for (w, q) in sm4().codewords().iter().zip(sm4().quaternary().unwrap()) {
            let mut counter = OpCounter::default();
            let fast = quaternary_apply(&h, q, &mut counter).unwrap();
            let generic = h.matmul(w).unwrap();
            prop_assert_eq!(fast.as_slice(), generic.as_slice());
            prop_assert_eq!(counter.complex_multiplies, 0);
            prop_assert_eq!(counter.complex_additions, (mr * 2 * 3) as u64);
        }
    }

    #[test]
    fn fast_and_generic_searches_agree(seed in any::<u64>()) {
        let h = gaussian_matrix(&mut common::rng(seed), 4, 4);
        let a = select_beamformer(&h, bf4()).unwrap();
        let b = select_beamformer_quaternary(&h, bf4()).unwrap();
        prop_assert_eq!(a.index, b.index);
        prop_assert_eq!(a.score, b.score);
        let a = select_precoder_msv(&h, sm4()).unwrap();
        let b = select_precoder_msv_quaternary(&h, sm4()).unwrap();
        prop_assert_eq!(a.index, b.index);
    }

    #[test]
    fn selection_is_scale_invariant(seed in any::<u64>(), k in 0.01f64..100.0) {
        let h = gaussian_matrix(&mut common::rng(seed), 4, 4);
        let scaled = h.scale(k);
        prop_assert_eq!(select_beamformer(&h, bf4()).unwrap().index, select_beamformer(&scaled, bf4()).unwrap().index);
        prop_assert_eq!(select_precoder_msv(&h, sm4()).unwrap().index, select_precoder_msv(&scaled, sm4()).unwrap().index);
    }

    #[test]
    fn beamforming_score_bounded_by_top_singular_value(seed in any::<u64>()) {
        let h = gaussian_matrix(&mut common::rng(seed), 4, 4);
        let r = select_beamformer(&h, bf4()).unwrap();
        let smax = oracle_singular_values(&h)[0];
        prop_assert!(r.score <= smax * smax * (1.0 + 1e-12));
        let w = bf4().codeword(r.index);
        let direct: f64 = h.matmul(w).unwrap().as_slice().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((direct - r.score).abs() < 1e-10);
    }

    #[test]
    fn optimal_precoder_dominates_codebook(seed in any::<u64>()) {
        let h = gaussian_matrix(&mut common::rng(seed), 4, 4);
        let f = optimal_precoder(&h, 2).unwrap();
        prop_assert!(f.orthonormality_error() < 1e-12);
        let best = linalg::singular_values(&h.matmul(&f).unwrap()).unwrap()[1];
        prop_assert!(best >= select_precoder_msv(&h, sm4()).unwrap().score - 1e-12);
        let v1 = optimal_precoder(&h, 1).unwrap();
        let gain = h.matmul(&v1).unwrap().frobenius_norm();
        prop_assert!((gain - oracle_singular_values(&h)[0]).abs() < 1e-10);
    }
}

#[test]
fn counters_follow_the_table() {
    let h = gaussian_matrix(&mut common::rng(5), 4, 4);
    let generic = select_beamformer(&h, bf4()).unwrap();
    let fast = select_beamformer_quaternary(&h, bf4()).unwrap();
    assert_eq!(generic.counter.complex_multiplies, 20 * 4 * 4);
    assert_eq!(generic.counter.complex_additions, 20 * 4 * 3);
    assert_eq!(fast.counter.complex_multiplies, 0);
    assert_eq!(fast.counter.complex_additions, 20 * 4 * 3);
    assert!(fast.counter.sign_or_swap_ops > 0);
    let mut merged = generic.counter;
    merged.merge(&fast.counter);
    assert_eq!(merged.complex_additions, 2 * 240);
    merged.reset();
    assert_eq!(merged, OpCounter::default());
}

#[test]
fn rank_one_channel_selects_its_own_direction() {
    let u = ComplexMatrix::column_vector(&[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5), c(0.3, 0.0)]);
    for n in 0..20 {
        let v = bf4().codeword(n);
        let h = u.matmul(&v.hermitian()).unwrap();
        let r = select_beamformer(&h, bf4()).unwrap();
        let expected = u.frobenius_norm().powi(2);
        assert!((r.score - expected).abs() < 1e-12);
        assert!(r.index <= n);
    }
}

#[test]
fn near_singular_diagonal_channel_brute_force() {
    let eps = 1e-3;
    let h = ComplexMatrix::diag(&[c(2.0, 0.0), c(1.0, 0.0), c(eps, 0.0), c(eps, 0.0)]);
    let r = select_precoder_msv(&h, sm4()).unwrap();
    let mut best = (0, f64::NEG_INFINITY);
    for (n, w) in sm4().codewords().iter().enumerate() {
        let s = *oracle_singular_values(&h.matmul(w).unwrap()).last().unwrap();
        if s > best.1 + 1e-12 {
            best = (n, s);
        }
    }
    assert_eq!(r.index, best.0);
    assert!((r.score - best.1).abs() < 1e-10);
}

#[test]
fn identity_channel_ties_go_to_first_codeword() {
    let r = select_precoder_msv(&ComplexMatrix::identity(4), sm4()).unwrap();
    assert_eq!(r.index, 0);
    assert!((r.score - 1.0).abs() < 1e-12);
    let r = select(&ComplexMatrix::identity(4), bf4(), SelectionRule::EffectiveSnr).unwrap();
    assert_eq!(r.index, 0);
}

#[test]
fn singular_vector_rule_picks_matching_codeword() {
    // Channel whose dominant right singular vector is codeword 7.
    let w = bf4().codeword(7).clone();
    let mut h = w.matmul(&w.hermitian()).unwrap().scale(5.0);
    for k in 0..4 {
        h[(k, k)] += Complex::new(0.1, 0.0);
    }
    let r = select(&h, bf4(), SelectionRule::ChordalToSingularVector).unwrap();
    assert_eq!(r.index, 7);
    assert!((r.score - 1.0).abs() < 1e-9);
}

#[test]
fn ten_thousand_channels_agree() {
    let mut rng = common::rng(2024);
    let mut h = ComplexMatrix::zeros(4, 4);
    for _ in 0..10_000 {
        kerdock_core::sim::fill_channel(&mut rng, &mut h);
        let a = select_beamformer(&h, bf4()).unwrap();
        let b = select_beamformer_quaternary(&h, bf4()).unwrap();
        assert_eq!(a.index, b.index);
        assert_eq!(b.counter.complex_multiplies, 0);
    }
}
