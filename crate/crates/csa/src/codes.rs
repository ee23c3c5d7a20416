//! Component erasure codes: GF(2) rank, information functions and MAP
//! erasure decoding.
//!
//! A burst is encoded by an `(n, k)` binary linear block code drawn from a
//! small candidate set. Both the asymptotic EXIT analysis and the
//! finite-frame peeling simulator reduce to two questions about such a code:
//! which coordinates are determined by a known subset (MAP erasure decoding,
//! a column-span test on the generator), and the information functions
//! `ẽ_g` — the total GF(2) rank over all `g`-column submatrices of the
//! generator — which parameterize the burst-node EXIT function.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Maximum codeword length; generator rows are packed into single `u64`s.
pub const MAX_CODE_LEN: usize = 64;

/// Length cap for exhaustive information-function enumeration. The subset
/// walk visits `2^n` nodes; 24 keeps it in the low seconds. Repetition, SPC
/// and MDS codes bypass it via closed forms.
pub const MAX_EXHAUSTIVE_LEN: usize = 24;

/// Exact binomial coefficient; fits `u64` for every `n ≤ 62`.
pub fn binomial(n: usize, k: usize) -> u64 {
    assert!(n <= 62, "binomial overflows u64 beyond n = 62");
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Dense binary matrix with rows packed as `u64` bit masks (column `j` is
/// bit `j`).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl BitMatrix {
    /// Builds a matrix from 0/1 row slices. All rows must share one length
    /// in `1..=64`.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidCode("empty matrix".into()));
        }
        let cols = rows[0].len();
        if cols > MAX_CODE_LEN {
            return Err(Error::InvalidCode(format!(
                "matrix wider than {MAX_CODE_LEN} columns"
            )));
        }
        let mut packed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != cols {
                return Err(Error::InvalidCode("ragged matrix rows".into()));
            }
            let mut bits = 0u64;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => bits |= 1 << j,
                    _ => return Err(Error::InvalidCode("matrix entries must be 0 or 1".into())),
                }
            }
            packed.push(bits);
        }
        Ok(Self { rows: packed, cols })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r] >> c) & 1 == 1
    }

    /// Column `j` as a bit mask over the rows.
    pub fn column(&self, j: usize) -> u64 {
        let mut bits = 0u64;
        for (r, &row) in self.rows.iter().enumerate() {
            bits |= ((row >> j) & 1) << r;
        }
        bits
    }

    /// All columns as row-indexed bit masks.
    pub fn columns(&self) -> Vec<u64> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|&row| (0..self.cols).map(|j| ((row >> j) & 1) as u8).collect())
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for &row in &self.rows {
            for j in 0..self.cols {
                write!(f, "{}", (row >> j) & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// GF(2) rank by Gaussian elimination on a working copy.
pub fn gf2_rank(matrix: &BitMatrix) -> usize {
    let mut rows = matrix.rows.clone();
    let mut rank = 0;
    for col in 0..matrix.cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| (rows[r] >> col) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && (*row >> col) & 1 == 1 {
                *row ^= pivot_row;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

// Reduce `v` against an independent basis kept with distinct leading bits.
// Returns the reduced vector; zero means `v` lies in the span.
fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        v = v.min(v ^ b);
    }
    v
}

/// Set of codeword coordinate indices, packed as a `u64` bit mask
/// (coordinates are 0-indexed, so this covers `n ≤ 64`).
#[derive(Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct CoordSet(u64);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    /// All coordinates `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_CODE_LEN);
        if n == 64 {
            CoordSet(u64::MAX)
        } else {
            CoordSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        indices.iter().copied().collect()
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 | other.0)
    }

    pub fn difference(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl FromIterator<usize> for CoordSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = CoordSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl fmt::Debug for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Family of a component code; the family fixes how decoding and the
/// information functions are computed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CodeFamily {
    /// `(n, 1)` repetition code; one known coordinate determines all.
    Repetition,
    /// `(k+1, k)` single parity-check code.
    Spc,
    /// Analytic MDS code: any `min(g, k)` columns are independent; no
    /// explicit generator is carried.
    MdsAnalytic,
    /// Arbitrary binary linear code given by an explicit generator matrix.
    GenericBinary,
}

/// Un-normalized information functions `ẽ_0 … ẽ_n`: the sum of GF(2) ranks
/// over all `g`-column submatrices of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InformationFunctions {
    values: Vec<u64>,
}

impl InformationFunctions {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, g: usize) -> u64 {
        self.values[g]
    }
}

/// An `(n, k)` erasure-correcting component code.
///
/// Immutable after construction; the information functions are computed once
/// on first use and cached, so shared references are cheap to evaluate from
/// concurrent workers.
#[derive(Debug)]
pub struct ComponentCode {
    family: CodeFamily,
    n: usize,
    k: usize,
    generator: Option<BitMatrix>,
    info_fns: OnceLock<InformationFunctions>,
}

impl Clone for ComponentCode {
    fn clone(&self) -> Self {
        let info_fns = OnceLock::new();
        if let Some(v) = self.info_fns.get() {
            let _ = info_fns.set(v.clone());
        }
        Self {
            family: self.family,
            n: self.n,
            k: self.k,
            generator: self.generator.clone(),
            info_fns,
        }
    }
}

impl PartialEq for ComponentCode {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.n == other.n
            && self.k == other.k
            && self.generator == other.generator
    }
}

impl ComponentCode {
    /// `(n, 1)` repetition code.
    pub fn repetition(n: usize) -> Result<Self> {
        Self::validate_dims(n, 1)?;
        Ok(Self {
            family: CodeFamily::Repetition,
            n,
            k: 1,
            generator: None,
            info_fns: OnceLock::new(),
        })
    }

    /// `(k+1, k)` single parity-check code.
    pub fn spc(k: usize) -> Result<Self> {
        Self::validate_dims(k + 1, k)?;
        Ok(Self {
            family: CodeFamily::Spc,
            n: k + 1,
            k,
            generator: None,
            info_fns: OnceLock::new(),
        })
    }

    /// Analytic `(n, k)` MDS code (rank rule `min(g, k)`), no generator.
    pub fn mds(n: usize, k: usize) -> Result<Self> {
        Self::validate_dims(n, k)?;
        Ok(Self {
            family: CodeFamily::MdsAnalytic,
            n,
            k,
            generator: None,
            info_fns: OnceLock::new(),
        })
    }

    /// Generic binary code from a `k × n` generator matrix. The matrix must
    /// have rank `k` and no all-zero column (no idle symbols).
    pub fn generic(generator: BitMatrix) -> Result<Self> {
        let k = generator.n_rows();
        let n = generator.n_cols();
        Self::validate_dims(n, k)?;
        if gf2_rank(&generator) != k {
            return Err(Error::InvalidCode(format!(
                "generator matrix must have rank {k}"
            )));
        }
        if (0..n).any(|j| generator.column(j) == 0) {
            return Err(Error::InvalidCode(
                "generator matrix has an all-zero column (idle symbol)".into(),
            ));
        }
        Ok(Self {
            family: CodeFamily::GenericBinary,
            n,
            k,
            generator: Some(generator),
            info_fns: OnceLock::new(),
        })
    }

    fn validate_dims(n: usize, k: usize) -> Result<()> {
        if k == 0 || k > n {
            return Err(Error::InvalidCode(format!(
                "need 1 <= k <= n, got (n, k) = ({n}, {k})"
            )));
        }
        if n > MAX_CODE_LEN {
            return Err(Error::InvalidCode(format!(
                "codeword length {n} exceeds {MAX_CODE_LEN}"
            )));
        }
        Ok(())
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> Option<&BitMatrix> {
        self.generator.as_ref()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// The information functions `ẽ_0 … ẽ_n`, cached after the first call.
    ///
    /// Repetition, SPC and MDS codes use closed forms (`ẽ_g = C(n,g)` for
    /// `g ≥ 1`, resp. `C(n,g)·min(g,k)`); generic codes are enumerated
    /// exhaustively, which requires `n ≤ MAX_EXHAUSTIVE_LEN`.
    pub fn information_functions(&self) -> Result<&InformationFunctions> {
        if let Some(v) = self.info_fns.get() {
            return Ok(v);
        }
        let values = match self.family {
            CodeFamily::Repetition => {
                let mut v = vec![0u64; self.n + 1];
                for (g, value) in v.iter_mut().enumerate().skip(1) {
                    *value = binomial(self.n, g);
                }
                v
            }
            CodeFamily::Spc | CodeFamily::MdsAnalytic => (0..=self.n)
                .map(|g| binomial(self.n, g) * g.min(self.k) as u64)
                .collect(),
            CodeFamily::GenericBinary => {
                if self.n > MAX_EXHAUSTIVE_LEN {
                    return Err(Error::CodeTooLong {
                        n: self.n,
                        max: MAX_EXHAUSTIVE_LEN,
                    });
                }
                let cols = self.generator.as_ref().expect("generic has generator").columns();
                info_functions_exhaustive(&cols)
            }
        };
        let _ = self.info_fns.set(InformationFunctions { values });
        Ok(self.info_fns.get().expect("just set"))
    }

    /// MAP erasure decoding: the full set of coordinates determined by the
    /// `known` ones. Always a superset of `known`; idempotent.
    pub fn map_erasure_decode(&self, known: CoordSet) -> CoordSet {
        debug_assert!(known.is_subset(CoordSet::full(self.n)));
        match self.family {
            CodeFamily::Repetition => {
                if known.is_empty() {
                    CoordSet::EMPTY
                } else {
                    CoordSet::full(self.n)
                }
            }
            CodeFamily::Spc | CodeFamily::MdsAnalytic => {
                if known.len() >= self.k {
                    CoordSet::full(self.n)
                } else {
                    known
                }
            }
            CodeFamily::GenericBinary => {
                let gen = self.generator.as_ref().expect("generic has generator");
                let mut basis: Vec<u64> = Vec::with_capacity(self.k);
                for j in known.iter() {
                    let v = reduce(&basis, gen.column(j));
                    if v != 0 {
                        basis.push(v);
                    }
                }
                let mut out = known;
                for j in 0..self.n {
                    if !known.contains(j) && reduce(&basis, gen.column(j)) == 0 {
                        out.insert(j);
                    }
                }
                out
            }
        }
    }

    /// True iff the known coordinates determine all `k` information
    /// segments (the known generator columns span the full space).
    pub fn info_recoverable(&self, known: CoordSet) -> bool {
        match self.family {
            CodeFamily::Repetition => !known.is_empty(),
            CodeFamily::Spc | CodeFamily::MdsAnalytic => known.len() >= self.k,
            CodeFamily::GenericBinary => {
                let gen = self.generator.as_ref().expect("generic has generator");
                let mut basis: Vec<u64> = Vec::with_capacity(self.k);
                for j in known.iter() {
                    let v = reduce(&basis, gen.column(j));
                    if v != 0 {
                        basis.push(v);
                        if basis.len() == self.k {
                            return true;
                        }
                    }
                }
                basis.len() == self.k
            }
        }
    }
}

impl fmt::Display for ComponentCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.family {
            CodeFamily::Repetition => "repetition",
            CodeFamily::Spc => "spc",
            CodeFamily::MdsAnalytic => "mds",
            CodeFamily::GenericBinary => "generic",
        };
        write!(f, "({}, {}) {}", self.n, self.k, tag)
    }
}

// Depth-first subset walk over generator columns carrying an incremental
// GF(2) basis: each of the 2^n leaves contributes its rank to e[subset size].
fn info_functions_exhaustive(cols: &[u64]) -> Vec<u64> {
    fn walk(cols: &[u64], j: usize, size: usize, basis: &mut Vec<u64>, e: &mut [u64]) {
        if j == cols.len() {
            e[size] += basis.len() as u64;
            return;
        }
        walk(cols, j + 1, size, basis, e);
        let v = reduce(basis, cols[j]);
        if v != 0 {
            basis.push(v);
            walk(cols, j + 1, size + 1, basis, e);
            basis.pop();
        } else {
            walk(cols, j + 1, size + 1, basis, e);
        }
    }
    let mut e = vec![0u64; cols.len() + 1];
    let mut basis = Vec::with_capacity(cols.len());
    walk(cols, 0, 0, &mut basis, &mut e);
    e
}

/// Parses a family tag used by the JSON schema.
pub fn family_from_tag(tag: &str) -> Result<CodeFamily> {
    match tag {
        "repetition" => Ok(CodeFamily::Repetition),
        "spc" => Ok(CodeFamily::Spc),
        "mds" => Ok(CodeFamily::MdsAnalytic),
        "generic" => Ok(CodeFamily::GenericBinary),
        other => Err(Error::InvalidCode(format!("unknown code family '{other}'"))),
    }
}

/// The JSON schema tag of a family.
pub fn family_tag(family: CodeFamily) -> &'static str {
    match family {
        CodeFamily::Repetition => "repetition",
        CodeFamily::Spc => "spc",
        CodeFamily::MdsAnalytic => "mds",
        CodeFamily::GenericBinary => "generic",
    }
}

/// Stable ordering helper so decode results can be reported as sorted lists.
pub fn coords_sorted(set: CoordSet) -> BTreeSet<usize> {
    set.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic(rows: &[Vec<u8>]) -> ComponentCode {
        ComponentCode::generic(BitMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn rank_identity_2x2() {
        let m = BitMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(gf2_rank(&m), 2);
    }

    #[test]
    fn rank_single_row() {
        let m = BitMatrix::from_rows(&[vec![1, 1, 1]]).unwrap();
        assert_eq!(gf2_rank(&m), 1);
    }

    #[test]
    fn rank_dependent_rows() {
        // third row is the sum of the first two
        let m = BitMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(gf2_rank(&m), 2);
    }

    #[test]
    fn info_functions_repetition_3() {
        let code = ComponentCode::repetition(3).unwrap();
        assert_eq!(code.information_functions().unwrap().values(), &[0, 3, 3, 1]);
    }

    #[test]
    fn info_functions_spc_32_matches_exhaustive() {
        let closed = ComponentCode::spc(2).unwrap();
        assert_eq!(closed.information_functions().unwrap().values(), &[0, 3, 6, 2]);
        // same code as an explicit systematic generator, enumerated
        let explicit = generic(&[vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(
            explicit.information_functions().unwrap().values(),
            &[0, 3, 6, 2]
        );
    }

    #[test]
    fn info_functions_identity_code() {
        for n in 1..=6 {
            let rows: Vec<Vec<u8>> = (0..n)
                .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
                .collect();
            let code = generic(&rows);
            let e = code.information_functions().unwrap();
            for g in 0..=n {
                assert_eq!(e.get(g), binomial(n, g) * g as u64);
            }
        }
    }

    #[test]
    fn info_functions_generic_too_long() {
        let rows: Vec<Vec<u8>> = (0..2)
            .map(|i| (0..30).map(|j| u8::from(j % 2 == i || j >= 28)).collect())
            .collect();
        let code = generic(&rows);
        assert!(matches!(
            code.information_functions(),
            Err(Error::CodeTooLong { n: 30, .. })
        ));
    }

    #[test]
    fn info_functions_last_value_is_k() {
        for code in [
            ComponentCode::repetition(7).unwrap(),
            ComponentCode::spc(4).unwrap(),
            ComponentCode::mds(9, 3).unwrap(),
            generic(&[vec![1, 1, 0, 1], vec![0, 1, 1, 1]]),
        ] {
            let e = code.information_functions().unwrap();
            assert_eq!(e.get(code.n()), code.k() as u64);
            assert_eq!(e.get(0), 0);
            // normalized form is monotone non-decreasing; raw values are
            // bounded by the MDS profile
            let norm = |g: usize| e.get(g) as f64 / binomial(code.n(), g) as f64;
            for g in 1..=code.n() {
                assert!(norm(g) >= norm(g - 1) - 1e-12);
                assert!(e.get(g) <= binomial(code.n(), g) * g.min(code.k()) as u64);
            }
        }
    }

    #[test]
    fn decode_repetition() {
        let code = ComponentCode::repetition(3).unwrap();
        assert_eq!(
            code.map_erasure_decode(CoordSet::from_indices(&[1])),
            CoordSet::full(3)
        );
        assert_eq!(code.map_erasure_decode(CoordSet::EMPTY), CoordSet::EMPTY);
        assert!(!code.info_recoverable(CoordSet::EMPTY));
        assert!(code.info_recoverable(CoordSet::from_indices(&[2])));
    }

    #[test]
    fn decode_mds_below_k_recovers_nothing() {
        let code = ComponentCode::mds(4, 2).unwrap();
        let known = CoordSet::from_indices(&[0]);
        assert_eq!(code.map_erasure_decode(known), known);
        assert!(code.info_recoverable(CoordSet::from_indices(&[2, 3])));
    }

    #[test]
    fn decode_spc_span() {
        let code = generic(&[vec![1, 0, 1], vec![0, 1, 1]]);
        // column 1 = col 0 + col 2 over GF(2)
        assert_eq!(
            code.map_erasure_decode(CoordSet::from_indices(&[0, 2])),
            CoordSet::full(3)
        );
        assert!(code.info_recoverable(CoordSet::from_indices(&[0, 1])));
    }

    #[test]
    fn generic_rejects_zero_column_and_rank_deficit() {
        assert!(ComponentCode::generic(
            BitMatrix::from_rows(&[vec![1, 0, 0], vec![0, 1, 0]]).unwrap()
        )
        .is_err());
        assert!(ComponentCode::generic(
            BitMatrix::from_rows(&[vec![1, 1, 1], vec![1, 1, 1]]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn family_shape_constraints() {
        assert!(ComponentCode::repetition(0).is_err());
        assert!(ComponentCode::mds(2, 3).is_err());
        assert_eq!(ComponentCode::spc(3).unwrap().n(), 4);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(24, 12), 2_704_156);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        // random generator matrix with no zero column and full rank, n <= 10
        fn arb_generic_code() -> impl Strategy<Value = ComponentCode> {
            (1usize..=4, 0usize..=6, any::<u64>()).prop_filter_map(
                "need full rank and no zero column",
                |(k, extra, seed)| {
                    let n = (k + extra).min(10);
                    let mut state = seed | 1;
                    let mut rows = vec![vec![0u8; n]; k];
                    // systematic part guarantees rank k; random tail columns
                    for (i, row) in rows.iter_mut().enumerate() {
                        row[i] = 1;
                    }
                    for j in k..n {
                        loop {
                            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                            let col = (state >> 33) & ((1 << k) - 1);
                            if col != 0 {
                                for (i, row) in rows.iter_mut().enumerate() {
                                    row[j] = ((col >> i) & 1) as u8;
                                }
                                break;
                            }
                        }
                    }
                    ComponentCode::generic(BitMatrix::from_rows(&rows).unwrap()).ok()
                },
            )
        }

        proptest! {
            #[test]
            fn decode_idempotent_and_monotone(code in arb_generic_code(), mask1 in any::<u64>(), mask2 in any::<u64>()) {
                let full = CoordSet::full(code.n()).bits();
                let a = CoordSet(mask1 & mask2 & full);
                let b = CoordSet(mask1 & full);
                let da = code.map_erasure_decode(a);
                let db = code.map_erasure_decode(b);
                // superset of the input, idempotent, monotone in the input
                prop_assert!(a.is_subset(da));
                prop_assert_eq!(code.map_erasure_decode(da), da);
                prop_assert!(da.is_subset(db));
            }

            #[test]
            fn info_functions_dominated_by_mds_profile(code in arb_generic_code()) {
                let e = code.information_functions().unwrap();
                for g in 0..=code.n() {
                    prop_assert!(e.get(g) <= binomial(code.n(), g) * g.min(code.k()) as u64);
                }
                prop_assert_eq!(e.get(code.n()), code.k() as u64);
            }
        }
    }
}
