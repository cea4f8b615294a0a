//! Packed binary vectors, column-major test matrices, and the Boolean-sum
//! algebra (OR, cover, weight) everything else is built on.
//!
//! A test design with `t` tests over `n` samples is a `t x n` binary matrix:
//! row j lists the samples pooled into test j. The matrix is stored as `n`
//! word-packed column bitsets so that OR, cover and weight are word-parallel;
//! the verifiers enumerate up to O(n^4) set pairs and per-pair cost must stay
//! O(t/64).
//!
//! Column indices are 1-based in the public API (sets print as `{1,3}`,
//! matching the usual c_1..c_n convention); bit positions within a
//! [`BitVector`] are 0-based.

use std::fmt;

use crate::error::{Error, ParseError, ParseErrorKind};

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length binary vector packed into 64-bit words.
///
/// Invariants: `len >= 1`; bits past `len` in the last word are zero.
/// `len` is never 0, so there is no `is_empty`.
#[allow(clippy::len_without_is_empty)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "BitVector length must be at least 1");
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// All-one vector of the given length.
    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in &mut v.words {
            *w = u64::MAX;
        }
        v.mask_tail();
        v
    }

    /// Parse a string of `0`/`1` characters.
    pub fn from_bits(s: &str) -> Result<Self, Error> {
        if s.is_empty() {
            return Err(Error::InvalidParams("empty bit string".into()));
        }
        let mut v = Self::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                _ => {
                    return Err(Error::InvalidParams(format!(
                        "invalid character {ch:?} at position {} of bit string",
                        i + 1
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Bit at 0-based position `pos`. Panics when out of range.
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "bit position {pos} out of range 0..{}", self.len);
        self.words[pos / WORD_BITS] >> (pos % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos < self.len, "bit position {pos} out of range 0..{}", self.len);
        let mask = 1u64 << (pos % WORD_BITS);
        if value {
            self.words[pos / WORD_BITS] |= mask;
        } else {
            self.words[pos / WORD_BITS] &= !mask;
        }
    }

    /// Number of 1-entries.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// 0-based positions of the 1-entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    /// Coordinatewise OR with a length check.
    pub fn union(&self, other: &Self) -> Result<Self, Error> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.or_assign(other);
        Ok(out)
    }

    /// `true` iff the support of `other` is contained in the support of
    /// `self`, i.e. `self | other == self`.
    pub fn covers(&self, other: &Self) -> Result<bool, Error> {
        self.check_len(other)?;
        Ok(self.covers_fast(other))
    }

    fn check_len(&self, other: &Self) -> Result<(), Error> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(())
    }

    pub(crate) fn covers_fast(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| b & !a == 0)
    }

    pub(crate) fn or_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    fn mask_tail(&mut self) {
        let r = self.len % WORD_BITS;
        if r != 0 {
            *self.words.last_mut().unwrap() &= (1u64 << r) - 1;
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Coordinatewise OR of any number of equal-length vectors.
///
/// The length is always supplied by the caller so the empty sum is
/// well-defined: it yields the all-zero vector of that length.
pub fn boolean_sum<'a, I>(vectors: I, length: usize) -> Result<BitVector, Error>
where
    I: IntoIterator<Item = &'a BitVector>,
{
    let mut acc = BitVector::zeros(length);
    for v in vectors {
        if v.len() != length {
            return Err(Error::LengthMismatch {
                expected: length,
                actual: v.len(),
            });
        }
        acc.or_assign(v);
    }
    Ok(acc)
}

/// A sorted set of distinct 1-based column indices (the defective samples).
///
/// May be empty; the outcome of the empty set is the all-zero vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DefectiveSet {
    indices: Vec<usize>,
}

impl DefectiveSet {
    /// Build a set from arbitrary indices; sorts and deduplicates.
    /// Panics on index 0 (columns are 1-based).
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        assert!(
            indices.first().is_none_or(|&i| i >= 1),
            "column indices are 1-based; got 0"
        );
        Self { indices }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }
}

impl FromIterator<usize> for DefectiveSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl fmt::Display for DefectiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for DefectiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DefectiveSet{self}")
    }
}

/// A `t x n` binary test matrix stored as `n` column bitsets of length `t`.
///
/// Immutable after construction; all operations are pure, so a matrix can be
/// shared freely across threads.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    t: usize,
    n: usize,
    columns: Vec<BitVector>,
}

impl CodeMatrix {
    /// Assemble a matrix from its columns. All columns must share one length.
    pub fn from_columns(columns: Vec<BitVector>) -> Result<Self, Error> {
        let first = columns
            .first()
            .ok_or_else(|| Error::InvalidParams("matrix needs at least one column".into()))?;
        let t = first.len();
        for col in &columns {
            if col.len() != t {
                return Err(Error::LengthMismatch {
                    expected: t,
                    actual: col.len(),
                });
            }
        }
        Ok(Self {
            t,
            n: columns.len(),
            columns,
        })
    }

    /// The `n x n` identity matrix: column i tests exactly sample i.
    pub fn identity(n: usize) -> Self {
        let columns = (0..n)
            .map(|i| {
                let mut c = BitVector::zeros(n);
                c.set(i, true);
                c
            })
            .collect();
        Self { t: n, n, columns }
    }

    /// Number of tests (rows).
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of samples (columns).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Column by 1-based index.
    pub fn column(&self, index: usize) -> Result<&BitVector, Error> {
        if index < 1 || index > self.n {
            return Err(Error::ColumnOutOfRange { index, n: self.n });
        }
        Ok(&self.columns[index - 1])
    }

    pub(crate) fn col(&self, index: usize) -> &BitVector {
        &self.columns[index - 1]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &BitVector> {
        self.columns.iter()
    }

    /// The outcome vector of a defective set: the Boolean sum of its columns.
    /// The empty set yields the all-zero vector.
    pub fn outcome(&self, defectives: &DefectiveSet) -> Result<BitVector, Error> {
        for i in defectives.iter() {
            if i > self.n {
                return Err(Error::ColumnOutOfRange { index: i, n: self.n });
            }
        }
        Ok(self.outcome_of(defectives.indices()))
    }

    /// Outcome of pre-validated 1-based indices.
    pub(crate) fn outcome_of(&self, indices: &[usize]) -> BitVector {
        let mut acc = BitVector::zeros(self.t);
        for &i in indices {
            acc.or_assign(self.col(i));
        }
        acc
    }

    /// All 1-based column indices covered by `outcome`, ascending.
    pub fn covered_columns(&self, outcome: &BitVector) -> Result<Vec<usize>, Error> {
        if outcome.len() != self.t {
            return Err(Error::LengthMismatch {
                expected: self.t,
                actual: outcome.len(),
            });
        }
        Ok((1..=self.n)
            .filter(|&i| outcome.covers_fast(self.col(i)))
            .collect())
    }

    /// New matrix keeping only the given 1-based columns, in order.
    pub(crate) fn select_columns(&self, keep: &[usize]) -> Self {
        debug_assert!(!keep.is_empty());
        let columns: Vec<BitVector> = keep.iter().map(|&i| self.col(i).clone()).collect();
        Self {
            t: self.t,
            n: columns.len(),
            columns,
        }
    }

    /// Serialize to the matrix text format.
    ///
    /// Line 1 is `t n`; lines 2..t+1 are the rows as strings of exactly `n`
    /// characters from {0,1}. Every line is newline-terminated and carries no
    /// trailing whitespace.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.n + 1) * (self.t + 1) + 16);
        out.push_str(&format!("{} {}\n", self.t, self.n));
        for row in 0..self.t {
            for col in 0..self.n {
                out.push(if self.columns[col].get(row) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Parse the matrix text format, reporting 1-based line/column positions
    /// on failure.
    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
            ParseError { line, column, kind }
        }

        let mut lines = text.split_inclusive('\n');
        let header = lines
            .next()
            .ok_or_else(|| err(1, 1, ParseErrorKind::MalformedHeader))?;
        let header_body = header
            .strip_suffix('\n')
            .ok_or_else(|| err(1, header.len() + 1, ParseErrorKind::MissingNewline))?;

        let parse_dim = |s: &str| -> Option<usize> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            s.parse().ok()
        };
        let (t, n) = match header_body.split_once(' ') {
            Some((a, b)) => match (parse_dim(a), parse_dim(b)) {
                (Some(t), Some(n)) => (t, n),
                _ => return Err(err(1, 1, ParseErrorKind::MalformedHeader)),
            },
            None => return Err(err(1, 1, ParseErrorKind::MalformedHeader)),
        };
        if t == 0 || n == 0 {
            return Err(err(1, 1, ParseErrorKind::ZeroDimension));
        }

        // Validate every row textually before allocating the matrix, so a
        // corrupt header claiming huge dimensions cannot trigger a giant
        // allocation: after this pass, t*n is bounded by the input size.
        let mut rows: Vec<&str> = Vec::new();
        for row in 0..t {
            let lineno = row + 2;
            let line = lines.next().ok_or_else(|| {
                err(lineno, 1, ParseErrorKind::MissingRows { expected: t, actual: row })
            })?;
            let body = line
                .strip_suffix('\n')
                .ok_or_else(|| err(lineno, line.len() + 1, ParseErrorKind::MissingNewline))?;
            let mut count = 0usize;
            for (col, ch) in body.chars().enumerate() {
                count += 1;
                if count > n {
                    break;
                }
                if ch != '0' && ch != '1' {
                    return Err(err(lineno, col + 1, ParseErrorKind::IllegalCharacter { found: ch }));
                }
            }
            if count != n {
                return Err(err(
                    lineno,
                    count.min(n) + 1,
                    ParseErrorKind::RaggedRow { expected: n, actual: count },
                ));
            }
            rows.push(body);
        }
        if lines.next().is_some() {
            return Err(err(t + 2, 1, ParseErrorKind::TrailingContent));
        }

        let mut columns = vec![BitVector::zeros(t); n];
        for (row, body) in rows.iter().enumerate() {
            for (col, ch) in body.chars().enumerate() {
                if ch == '1' {
                    columns[col].set(row, true);
                }
            }
        }
        Ok(Self { t, n, columns })
    }
}

impl fmt::Debug for CodeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodeMatrix(t={}, n={})", self.t, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        BitVector::from_bits(s).unwrap()
    }

    fn ds(indices: &[usize]) -> DefectiveSet {
        DefectiveSet::new(indices.to_vec())
    }

    #[test]
    fn boolean_sum_identity_and_zero() {
        let x = bv("1010");
        assert_eq!(boolean_sum([&x], 4).unwrap(), x);
        assert_eq!(boolean_sum([&x, &BitVector::zeros(4)], 4).unwrap(), x);
        assert_eq!(boolean_sum([], 4).unwrap(), BitVector::zeros(4));
    }

    #[test]
    fn boolean_sum_is_coordinatewise_or() {
        assert_eq!(boolean_sum([&bv("1010"), &bv("0110")], 4).unwrap(), bv("1110"));
    }

    #[test]
    fn boolean_sum_rejects_length_mismatch() {
        let e = boolean_sum([&bv("101")], 4).unwrap_err();
        assert_eq!(e, Error::LengthMismatch { expected: 4, actual: 3 });
    }

    #[test]
    fn covers_examples() {
        let x = bv("1010");
        assert!(x.covers(&x).unwrap());
        assert!(BitVector::ones(4).covers(&x).unwrap());
        assert!(x.covers(&bv("0010")).unwrap());
        assert!(!x.covers(&bv("0100")).unwrap());
        assert!(x.covers(&bv("01000")).is_err());
    }

    #[test]
    fn outcome_examples() {
        let i4 = CodeMatrix::identity(4);
        assert_eq!(i4.outcome(&ds(&[1, 2])).unwrap(), bv("1100"));
        assert_eq!(i4.outcome(&DefectiveSet::empty()).unwrap(), BitVector::zeros(4));
        assert_eq!(i4.outcome(&ds(&[3])).unwrap(), *i4.column(3).unwrap());
        assert_eq!(
            i4.outcome(&ds(&[5])).unwrap_err(),
            Error::ColumnOutOfRange { index: 5, n: 4 }
        );
    }

    #[test]
    fn covered_columns_examples() {
        let i4 = CodeMatrix::identity(4);
        assert_eq!(i4.covered_columns(&bv("1100")).unwrap(), vec![1, 2]);
        assert_eq!(i4.covered_columns(&BitVector::ones(4)).unwrap(), vec![1, 2, 3, 4]);
        // only all-zero columns are covered by the all-zero outcome
        assert_eq!(i4.covered_columns(&BitVector::zeros(4)).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn weight_counts_ones() {
        assert_eq!(bv("1010").weight(), 2);
        assert_eq!(BitVector::zeros(100).weight(), 0);
        assert_eq!(BitVector::ones(100).weight(), 100);
    }

    #[test]
    fn ones_masks_tail_words() {
        let v = BitVector::ones(65);
        assert_eq!(v.weight(), 65);
        assert_eq!(v, boolean_sum([&v, &v], 65).unwrap());
    }

    #[test]
    fn defective_set_sorts_and_dedups() {
        let d = DefectiveSet::new(vec![3, 1, 3, 2]);
        assert_eq!(d.indices(), &[1, 2, 3]);
        assert_eq!(d.to_string(), "{1,2,3}");
        assert_eq!(DefectiveSet::empty().to_string(), "{}");
    }

    #[test]
    fn text_format_round_trip() {
        let m = CodeMatrix::from_columns(vec![bv("110"), bv("011"), bv("101"), bv("111")]).unwrap();
        let text = m.to_text();
        assert_eq!(text, "3 4\n1011\n1101\n0111\n");
        let back = CodeMatrix::from_text(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_format_rejects_malformed_input() {
        let bad_header = CodeMatrix::from_text("3x4\n").unwrap_err();
        assert_eq!(bad_header.line, 1);
        assert_eq!(bad_header.kind, ParseErrorKind::MalformedHeader);

        let ragged = CodeMatrix::from_text("2 4\n10111\n0110\n").unwrap_err();
        assert_eq!((ragged.line, ragged.column), (2, 5));
        assert_eq!(ragged.kind, ParseErrorKind::RaggedRow { expected: 4, actual: 5 });

        let short = CodeMatrix::from_text("2 4\n101\n0110\n").unwrap_err();
        assert_eq!((short.line, short.column), (2, 4));

        let illegal = CodeMatrix::from_text("2 4\n1021\n0110\n").unwrap_err();
        assert_eq!((illegal.line, illegal.column), (2, 3));
        assert_eq!(illegal.kind, ParseErrorKind::IllegalCharacter { found: '2' });

        let missing = CodeMatrix::from_text("2 4\n1011\n").unwrap_err();
        assert_eq!(missing.kind, ParseErrorKind::MissingRows { expected: 2, actual: 1 });

        let trailing = CodeMatrix::from_text("1 4\n1011\n0110\n").unwrap_err();
        assert_eq!(trailing.kind, ParseErrorKind::TrailingContent);

        let no_newline = CodeMatrix::from_text("1 4\n1011").unwrap_err();
        assert_eq!(no_newline.kind, ParseErrorKind::MissingNewline);

        let zero = CodeMatrix::from_text("0 4\n").unwrap_err();
        assert_eq!(zero.kind, ParseErrorKind::ZeroDimension);

        // a tiny file claiming enormous dimensions must fail fast instead of
        // allocating by the header's say-so
        let huge = CodeMatrix::from_text("999999999 999999999\n01\n").unwrap_err();
        assert_eq!((huge.line, huge.column), (2, 3));
        assert_eq!(huge.kind, ParseErrorKind::RaggedRow { expected: 999999999, actual: 2 });
    }
}
