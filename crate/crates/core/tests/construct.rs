mod common;

use common::c;
use kerdock_core::construct::*;
use kerdock_core::linalg::{Complex, ComplexMatrix};
use kerdock_core::metrics::{spectrum, verify_mub, Metric};
use kerdock_core::quaternary::{HalfPowerScale, Quaternary};

/// Rows given as strings of `1, -1, j, -j` tokens, times `scale`.
fn symbolic(rows: &[&str], scale: f64) -> ComplexMatrix {
    let parsed: Vec<Vec<Complex>> = rows
        .iter()
        .map(|r| {
            r.split_whitespace()
                .map(|t| match t {
                    "1" => c(scale, 0.0),
                    "-1" => c(-scale, 0.0),
                    "j" => c(0.0, scale),
                    "-j" => c(0.0, -scale),
                    "0" => c(0.0, 0.0),
                    other => panic!("bad token {}", other),
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(&parsed).unwrap()
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        a[(i / b.rows(), j / b.cols())] * b[(i % b.rows(), j % b.cols())]
    })
}

#[test]
fn hadamard_four_is_kronecker_square() {
    let h2 = sylvester_hadamard(2).unwrap().to_complex();
    assert_eq!(h2, symbolic(&["1 1", "1 -1"], 1.0));
    assert_eq!(sylvester_hadamard(4).unwrap().to_complex(), kron(&h2, &h2));
    let h8 = sylvester_hadamard(8).unwrap().to_complex();
    let gram = h8.matmul(&h8.hermitian()).unwrap();
    assert_eq!(gram.max_abs_diff(&ComplexMatrix::identity(8).scale(8.0)), 0.0);
}

#[test]
fn mt2_bases_match_printed_matrices() {
    let set = kerdock_mub_mt2();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let printed = [
        symbolic(&["1 1", "1 -1"], r),
        symbolic(&["1 1", "j -j"], r),
        symbolic(&["1 0", "0 1"], 1.0),
    ];
    for (basis, want) in set.decoded().iter().zip(&printed) {
        assert!(basis.max_abs_diff(want) < 1e-15);
    }
    let s0 = set.basis(0).to_complex();
    let s1 = set.basis(1).to_complex();
    let ip: Complex = (0..2).map(|k| s0[(k, 0)].conj() * s1[(k, 1)]).sum();
    assert!((ip.norm() - r).abs() < 1e-15);
}

#[test]
fn mt4_bases_match_printed_matrices() {
    let set = kerdock_mub_mt4().unwrap();
    let printed = [
        symbolic(&["-j -j -j -j", "1 -1 1 -1", "-j -j j j", "-1 1 1 -1"], 0.5),
        symbolic(&["-1 -1 -j j", "-j -j -1 1", "-j j -1 -1", "1 -1 j j"], 0.5),
        symbolic(&["-1 j j 1", "-1 j -j -1", "j -1 -1 -j", "-j 1 -1 -j"], 0.5),
        symbolic(&["j 1 j -1", "j -1 j 1", "j 1 -j 1", "j -1 -j -1"], 0.5),
        ComplexMatrix::identity(4),
    ];
    assert_eq!(set.len(), 5);
    for (n, (basis, want)) in set.decoded().iter().zip(&printed).enumerate() {
        assert_eq!(basis.max_abs_diff(want), 0.0, "basis {}", n);
    }
    assert_eq!(set.decoded()[1][(0, 0)], c(-0.5, 0.0));
}

#[test]
fn generator_from_decomposition_differs_from_printed_row_four_only() {
    let d = kerdock_generator_mt4().to_complex();
    let printed = symbolic(&["-j -j -j -j", "1 -1 1 -1", "-j -j j j", "-1 j j -j"], 0.5);
    for i in 0..3 {
        for j in 0..4 {
            assert_eq!(d[(i, j)], printed[(i, j)]);
        }
    }
    // The decomposition (and the printed first basis, which is D itself)
    // give (-1, 1, 1, -1)/2 in the last row.
    let row4: Vec<Complex> = (0..4).map(|j| d[(3, j)]).collect();
    assert_eq!(row4, vec![c(-0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)]);
    assert_eq!(d[(0, 0)], c(0.0, -0.5));
}

#[test]
fn generator_order_is_exact() {
    let d = kerdock_generator_mt4();
    assert!(d.pow(5).unwrap().is_identity());
    for k in 1..5 {
        assert!(!d.pow(k).unwrap().is_identity());
    }
    let q = kerdock_mub_mt4().unwrap().quaternary_bases().unwrap();
    for basis in &q[..4] {
        assert_eq!(basis.scale(), HalfPowerScale(2));
        assert!(basis.codes().iter().all(|&s| s != Quaternary::Zero));
    }
    assert_eq!(q[4].scale(), HalfPowerScale(0));
}

#[test]
fn power_construction_for_two_antennas() {
    let set = kerdock_mub_mt2_power().unwrap();
    assert_eq!(set.len(), 3);
    assert!(verify_mub(&set, 1e-12).ok);
    let printed = ComplexMatrix::from_rows(&[[c(-0.5, 0.5), c(0.5, -0.5)], [c(-0.5, -0.5), c(-0.5, -0.5)]]).unwrap();
    assert_eq!(set.basis(1).to_complex().max_abs_diff(&printed), 0.0);
}

#[test]
fn every_codeword_is_quaternary_up_to_scale() {
    let cb = beamforming_codebook(&kerdock_mub_mt4().unwrap(), true).unwrap();
    for (w, q) in cb.codewords().iter().zip(cb.quaternary().unwrap()) {
        let s = q.scale().value();
        for z in w.as_slice() {
            let allowed = [c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, s), c(0.0, -s)];
            assert!(allowed.contains(z), "{:?}", z);
        }
    }
}

#[test]
fn precoding_codebooks_have_orthonormal_columns() {
    let mub = kerdock_mub_mt4().unwrap();
    for ms in 2..=4 {
        let cb = precoding_codebook(&mub, ms, SubsetStrategy::AllSubsets).unwrap();
        assert_eq!(cb.mode(), Mode::Precoding(ms));
        for w in cb.codewords() {
            assert!(w.orthonormality_error() < 1e-12);
        }
    }
}

#[test]
fn table1_is_max_min_among_eight_codeword_families() {
    let mub = kerdock_mub_mt4().unwrap();
    let table1 = precoding_codebook(&mub, 2, SubsetStrategy::Table1).unwrap();
    let pool = mub.without_identity();
    for metric in [Metric::FubiniStudy, Metric::Proj2Norm] {
        let table_min = spectrum(&table1, metric).unwrap().min_offdiag;
        let search = SubsetSearch { metric, size: 8, budget: DEFAULT_SEARCH_BUDGET };
        let best = precoding_codebook(&pool, 2, SubsetStrategy::MaxMinSearch(search)).unwrap();
        let best_min = spectrum(&best, metric).unwrap().min_offdiag;
        assert!(table_min >= best_min - 1e-12, "{}: table {} vs search {}", metric, table_min, best_min);
    }
}

#[test]
fn fourier_examples() {
    let cb = fourier_codebook(2, 1, 2, &[0, 1]).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!(cb.codeword(0).max_abs_diff(&symbolic(&["1", "1"], r)) < 1e-15);
    assert!(cb.codeword(1).max_abs_diff(&symbolic(&["1", "-1"], r)) < 1e-15);

    let cb = fourier_codebook(4, 2, 16, &[0, 3, 5, 11]).unwrap();
    for w in cb.codewords() {
        assert!(w.orthonormality_error() < 1e-12);
    }
}

#[test]
fn fourier_search_properties() {
    let found = search_fourier_generator(2, 1, 4, Metric::Chordal, DEFAULT_SEARCH_BUDGET).unwrap();
    let degenerate = spectrum(&fourier_codebook(2, 1, 4, &[0, 0]).unwrap(), Metric::Chordal).unwrap();
    assert!(found.min_distance >= degenerate.min_offdiag);
    let check = spectrum(&fourier_codebook(2, 1, 4, &found.u).unwrap(), Metric::Chordal).unwrap();
    assert!((check.min_offdiag - found.min_distance).abs() < 1e-12);

    // Brute force over all four candidates for n = 2.
    let mut best = (f64::NEG_INFINITY, vec![]);
    for u0 in 0..2 {
        for u1 in 0..2 {
            let d = spectrum(&fourier_codebook(2, 1, 2, &[u0, u1]).unwrap(), Metric::Chordal).unwrap().min_offdiag;
            if d > best.0 + 1e-12 {
                best = (d, vec![u0, u1]);
            }
        }
    }
    let found = search_fourier_generator(2, 1, 2, Metric::Chordal, 10).unwrap();
    assert_eq!(found.u, best.1);

    let a = search_fourier_generator(4, 1, 16, Metric::Chordal, DEFAULT_SEARCH_BUDGET).unwrap();
    let b = search_fourier_generator(4, 1, 16, Metric::Chordal, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(a, b);
}

#[test]
fn codebook_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("kerdock-construct-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kerdock4.txt");
    let cb = beamforming_codebook(&kerdock_mub_mt4().unwrap(), true).unwrap();
    save_codebook(&cb, &path).unwrap();
    let first = std::fs::read_to_string(&path).unwrap();
    let back = load_codebook(&path).unwrap();
    assert_eq!(back.codewords(), cb.codewords());
    assert!(back.quaternary().is_some());
    save_codebook(&back, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

    let fourier = fourier_codebook(4, 2, 7, &[0, 1, 3, 5]).unwrap();
    let mut buf = Vec::new();
    write_codebook(&fourier, &mut buf).unwrap();
    let parsed = parse_codebook(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(parsed.codewords(), fourier.codewords());
    std::fs::remove_dir_all(&dir).unwrap();
}
