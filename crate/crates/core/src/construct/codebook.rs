use std::fmt;

use super::{ConstructError, MubSet};
use crate::linalg::{ComplexMatrix, Tolerances};
use crate::metrics::Metric;
use crate::quaternary::QuaternaryMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Beamforming,
    /// Unitary precoding with the given number of streams (> 1).
    Precoding(usize),
}

impl Mode {
    pub fn for_streams(ms: usize) -> Mode {
        if ms == 1 {
            Mode::Beamforming
        } else {
            Mode::Precoding(ms)
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Beamforming => f.write_str("beamforming"),
            Mode::Precoding(ms) => write!(f, "precoding({} streams)", ms),
        }
    }
}

/// Shared set of `mt x ms` precoders with orthonormal columns.
///
/// Codewords are always available in decoded form; codebooks built from a
/// quaternary basis set additionally keep the exact symbol form used by the
/// multiplier-free search.
#[derive(Debug, Clone)]
pub struct Codebook {
    mt: usize,
    ms: usize,
    mode: Mode,
    codewords: Vec<ComplexMatrix>,
    quaternary: Option<Vec<QuaternaryMatrix>>,
    labels: Vec<String>,
}

impl Codebook {
    /// Validates shapes and column orthonormality at `1e-12`.
    pub fn new(codewords: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self, ConstructError> {
        Self::with_tolerance(codewords, labels, Tolerances::DEFAULT.unitary)
    }

    pub fn with_tolerance(codewords: Vec<ComplexMatrix>, labels: Vec<String>, tol: f64) -> Result<Self, ConstructError> {
        let first = codewords.first().ok_or(ConstructError::EmptyCodebook)?;
        let (mt, ms) = (first.rows(), first.cols());
        if ms > mt {
            return Err(ConstructError::InvalidStreams { ms, mt });
        }
        if labels.len() != codewords.len() {
            return Err(ConstructError::Invalid(format!(
                "{} labels for {} codewords",
                labels.len(),
                codewords.len()
            )));
        }
        for (index, w) in codewords.iter().enumerate() {
            if w.rows() != mt || w.cols() != ms {
                return Err(ConstructError::Shape { index, rows: w.rows(), cols: w.cols(), mt, ms });
            }
            if !w.is_finite() {
                return Err(ConstructError::NotOrthonormal { index, error: f64::NAN });
            }
            let error = w.orthonormality_error();
            if error > tol {
                return Err(ConstructError::NotOrthonormal { index, error });
            }
        }
        Ok(Codebook { mt, ms, mode: Mode::for_streams(ms), codewords, quaternary: None, labels })
    }

    pub fn from_quaternary(words: Vec<QuaternaryMatrix>, labels: Vec<String>) -> Result<Self, ConstructError> {
        let decoded = words.iter().map(QuaternaryMatrix::decode).collect();
        let mut cb = Self::new(decoded, labels)?;
        cb.quaternary = Some(words);
        Ok(cb)
    }

    /// Attaches the exact symbol form when every codeword is recognisably
    /// quaternary within `tol`.
    pub(crate) fn recognize_quaternary(&mut self, tol: f64) {
        self.quaternary = self.codewords.iter().map(|w| QuaternaryMatrix::recognize(w, tol)).collect();
    }

    pub fn mt(&self) -> usize {
        self.mt
    }

    pub fn ms(&self) -> usize {
        self.ms
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[ComplexMatrix] {
        &self.codewords
    }

    pub fn codeword(&self, i: usize) -> &ComplexMatrix {
        &self.codewords[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn quaternary(&self) -> Option<&[QuaternaryMatrix]> {
        self.quaternary.as_deref()
    }

    /// Sub-codebook with the given codeword indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Codebook {
        Codebook {
            mt: self.mt,
            ms: self.ms,
            mode: self.mode,
            codewords: indices.iter().map(|&i| self.codewords[i].clone()).collect(),
            quaternary: self.quaternary.as_ref().map(|q| indices.iter().map(|&i| q[i].clone()).collect()),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

fn subset_label(basis: usize, cols: &[usize]) -> String {
    let cols: Vec<String> = cols.iter().map(|c| (c + 1).to_string()).collect();
    format!("S{}[{}]", basis, cols.join(","))
}

/// Builds a codebook from `(basis index, column subset)` selections.
fn from_selections(mub: &MubSet, picks: &[(usize, Vec<usize>)]) -> Result<Codebook, ConstructError> {
    let labels = picks.iter().map(|(b, cols)| subset_label(*b, cols)).collect();
    match mub.quaternary_bases() {
        Some(q) => {
            let words = picks.iter().map(|(b, cols)| q[*b].select_columns(cols)).collect();
            Codebook::from_quaternary(words, labels)
        }
        None => {
            let dense = mub.decoded();
            let words = picks.iter().map(|(b, cols)| dense[*b].select_columns(cols)).collect();
            Codebook::new(words, labels)
        }
    }
}

/// Every column of every basis as a beamforming vector, basis-major.
/// With `include_identity == false` the identity basis is skipped.
pub fn beamforming_codebook(mub: &MubSet, include_identity: bool) -> Result<Codebook, ConstructError> {
    let mut picks = Vec::new();
    for (b, basis) in mub.bases().iter().enumerate() {
        if !include_identity && basis.is_identity() {
            continue;
        }
        for c in 0..mub.mt() {
            picks.push((b, vec![c]));
        }
    }
    from_selections(mub, &picks)
}

/// Two-stream selection for four antennas, as `(basis, zero-based columns)`.
pub const TABLE1_SUBSETS: [(usize, [usize; 2]); 8] = [
    (0, [0, 1]),
    (0, [2, 3]),
    (1, [0, 2]),
    (1, [1, 3]),
    (2, [0, 3]),
    (2, [1, 2]),
    (3, [0, 3]),
    (3, [1, 2]),
];

/// Exhaustive max-min subset-family search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetSearch {
    pub metric: Metric,
    /// Number of codewords in the returned family. When it equals the number
    /// of bases, exactly one column subset is taken from each basis;
    /// otherwise any `size` codewords of the all-subsets codebook may be combined.
    pub size: usize,
    /// Largest number of families the search may enumerate.
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubsetStrategy {
    /// All `C(mt, ms)` column subsets of every basis.
    AllSubsets,
    /// The fixed 8-codeword two-stream table for four antennas.
    Table1,
    MaxMinSearch(SubsetSearch),
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Spatial-multiplexing codebook with `ms` streams drawn from column subsets
/// of the bases.
pub fn precoding_codebook(mub: &MubSet, ms: usize, strategy: SubsetStrategy) -> Result<Codebook, ConstructError> {
    let mt = mub.mt();
    if ms <= 1 || ms > mt {
        return Err(ConstructError::InvalidStreams { ms, mt });
    }
    match strategy {
        SubsetStrategy::AllSubsets => {
            let subsets = combinations(mt, ms);
            let picks: Vec<(usize, Vec<usize>)> = (0..mub.len())
                .flat_map(|b| subsets.iter().map(move |s| (b, s.clone())))
                .collect();
            from_selections(mub, &picks)
        }
        SubsetStrategy::Table1 => {
            let non_identity = mub.bases().iter().take(4).filter(|b| !b.is_identity()).count();
            if mt != 4 || ms != 2 || non_identity < 4 {
                return Err(ConstructError::Table1Unsupported { mt, ms });
            }
            let picks: Vec<(usize, Vec<usize>)> = TABLE1_SUBSETS.iter().map(|(b, c)| (*b, c.to_vec())).collect();
            from_selections(mub, &picks)
        }
        SubsetStrategy::MaxMinSearch(search) => max_min_search(mub, ms, search),
    }
}

fn max_min_search(mub: &MubSet, ms: usize, search: SubsetSearch) -> Result<Codebook, ConstructError> {
    let all = precoding_codebook(mub, ms, SubsetStrategy::AllSubsets)?;
    let n = all.len();
    let per_basis = n / mub.len();
    if search.size < 2 || search.size > n {
        return Err(ConstructError::Invalid(format!(
            "family size {} must be between 2 and {}",
            search.size, n
        )));
    }
    let one_per_basis = search.size == mub.len();
    let space = if one_per_basis {
        (per_basis as u128).pow(mub.len() as u32)
    } else {
        binomial(n, search.size)
    };
    if space > search.budget as u128 {
        return Err(ConstructError::BudgetExceeded { space, budget: search.budget });
    }

    let mut dist = vec![0.0; n * n];
    for k in 0..n {
        for l in (k + 1)..n {
            let d = search.metric.distance(all.codeword(k), all.codeword(l))?;
            dist[k * n + l] = d;
            dist[l * n + k] = d;
        }
    }

    // Depth-first enumeration in lexicographic order. A branch is pruned once
    // its running minimum can no longer strictly beat the incumbent, so the
    // first maximiser found in lexicographic order is returned.
    const TIE: f64 = 1e-12;
    struct State<'a> {
        dist: &'a [f64],
        n: usize,
        size: usize,
        per_basis: usize,
        one_per_basis: bool,
        best: f64,
        best_family: Vec<usize>,
    }
    fn descend(st: &mut State<'_>, cur: &mut Vec<usize>, cur_min: f64) {
        if cur.len() == st.size {
            if cur_min > st.best + TIE {
                st.best = cur_min;
                st.best_family = cur.clone();
            }
            return;
        }
        let candidates: Vec<usize> = if st.one_per_basis {
            let b = cur.len();
            (b * st.per_basis..(b + 1) * st.per_basis).collect()
        } else {
            let start = cur.last().map(|&x| x + 1).unwrap_or(0);
            let remaining = st.size - cur.len();
            (start..=st.n - remaining).collect()
        };
        for c in candidates {
            let m = cur.iter().fold(cur_min, |m, &k| m.min(st.dist[k * st.n + c]));
            if m <= st.best + TIE {
                continue;
            }
            cur.push(c);
            descend(st, cur, m);
            cur.pop();
        }
    }
    let mut st = State {
        dist: &dist,
        n,
        size: search.size,
        per_basis,
        one_per_basis,
        best: f64::NEG_INFINITY,
        best_family: Vec::new(),
    };
    descend(&mut st, &mut Vec::with_capacity(search.size), f64::INFINITY);
    Ok(all.subset(&st.best_family))
}
