use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::primitives::vector::{ShVector, SignVector, MAX_ORDER};

/// A square ±1 matrix stored column by column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    columns: Vec<SignVector>,
}

/// Dense symmetric integer matrix `QᵀQ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramMatrix {
    order: usize,
    entries: Vec<i64>,
}

impl GramMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.order + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.chunks(self.order)
    }

    /// True iff every off-diagonal entry is zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.order).all(|i| (0..self.order).all(|j| i == j || self.get(i, j) == 0))
    }

    /// Sum of absolute off-diagonal entries.
    pub fn off_diagonal_abs_sum(&self) -> u64 {
        let mut sum = 0;
        for i in 0..self.order {
            for j in 0..self.order {
                if i != j {
                    sum += self.get(i, j).unsigned_abs();
                }
            }
        }
        sum
    }
}

fn gram_of(columns: &[SignVector]) -> GramMatrix {
    let n = columns.len();
    let mut entries = vec![0; n * n];
    for i in 0..n {
        for j in i..n {
            let d = columns[i].dot(&columns[j]);
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    GramMatrix { order: n, entries }
}

fn pairwise_orthogonal(columns: &[SignVector]) -> bool {
    columns
        .iter()
        .enumerate()
        .all(|(i, a)| columns[i + 1..].iter().all(|b| a.dot(b) == 0))
}

impl SignMatrix {
    pub fn from_columns(columns: Vec<SignVector>) -> Result<Self> {
        let n = columns.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::capacity(
                "matrix order",
                n,
                format!("1..={MAX_ORDER}"),
            ));
        }
        if let Some(c) = columns.iter().find(|c| c.order() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: c.order(),
            });
        }
        Ok(Self { columns })
    }

    pub fn from_rows(rows: Vec<SignVector>) -> Result<Self> {
        Ok(Self::from_columns(rows)?.transposed())
    }

    /// Builds from row-major ±1 entries.
    pub fn from_sign_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| SignVector::from_signs(r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn order(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[SignVector] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &SignVector {
        &self.columns[j]
    }

    /// Entry at row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.columns[j].get(i)
    }

    pub fn row(&self, i: usize) -> SignVector {
        let bits = self.columns.iter().enumerate().fold(0u128, |acc, (j, c)| {
            acc | (u128::from(c.is_negative(i)) << j)
        });
        SignVector::from_bits_unchecked(self.order(), bits)
    }

    pub fn transposed(&self) -> Self {
        Self {
            columns: (0..self.order()).map(|i| self.row(i)).collect(),
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in &mut self.columns {
            c.flip(i);
        }
    }

    pub fn negate_column(&mut self, j: usize) {
        self.columns[j] = self.columns[j].negated();
    }

    pub fn gram(&self) -> GramMatrix {
        gram_of(&self.columns)
    }

    /// `MᵀM = m·I`.
    pub fn is_hadamard(&self) -> bool {
        pairwise_orthogonal(&self.columns)
    }

    /// First column all-ones.
    pub fn is_seminormalized(&self) -> bool {
        self.columns[0].is_ones()
    }

    /// First row and first column all-ones.
    pub fn is_normalized(&self) -> bool {
        self.is_seminormalized() && self.row(0).is_ones()
    }

    /// Converts to a dense row-major matrix over any signed scalar.
    pub fn to_dense<T: Signed + Copy>(&self) -> Vec<Vec<T>> {
        (0..self.order())
            .map(|i| {
                (0..self.order())
                    .map(|j| {
                        if self.columns[j].is_negative(i) {
                            -T::one()
                        } else {
                            T::one()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Kronecker-doubling construction of order `2^power`.
    pub fn sylvester(power: u32) -> Result<Self> {
        if power == 0 || (1usize << power.min(63)) > MAX_ORDER {
            return Err(Error::capacity(
                "Sylvester power",
                power,
                format!("1..={}", MAX_ORDER.trailing_zeros()),
            ));
        }
        // Each doubling maps column c to (c, c) and (c, -c).
        let mut columns = vec![(1usize, 0u128)];
        for _ in 0..power {
            let mut next = Vec::with_capacity(columns.len() * 2);
            for &(n, bits) in &columns {
                next.push((2 * n, bits | bits << n));
            }
            for &(n, bits) in &columns {
                let neg = !bits & ((1u128 << n) - 1);
                next.push((2 * n, bits | neg << n));
            }
            columns = next;
        }
        let order = 1usize << power;
        Ok(Self {
            columns: columns
                .into_iter()
                .map(|(_, bits)| SignVector::from_bits_unchecked(order, bits))
                .collect(),
        })
    }

    /// Serializes in the matrix text format: a header line `order m` followed
    /// by `m` rows of `+`/`-` characters.
    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order());
        for i in 0..self.order() {
            out.push_str(&self.row(i).to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the matrix text format. Blank trailing lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let parse_err = |line: usize, column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        let (_, header) = lines
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or_else(|| parse_err(1, 1, "empty input".into()))?;
        let order: usize = header
            .trim()
            .strip_prefix("order")
            .map(str::trim)
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| parse_err(1, 1, format!("expected `order <m>`, found {header:?}")))?;
        if order == 0 || order > MAX_ORDER {
            return Err(parse_err(
                1,
                7,
                format!("order {order} outside 1..={MAX_ORDER}"),
            ));
        }
        let mut rows = Vec::with_capacity(order);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let trimmed = line.trim_end();
            if trimmed.is_empty() {
                continue;
            }
            if rows.len() == order {
                return Err(parse_err(line_no, 1, format!("more than {order} rows")));
            }
            let mut signs = Vec::with_capacity(order);
            for (col, ch) in trimmed.chars().enumerate() {
                match ch {
                    '+' => signs.push(1),
                    '-' => signs.push(-1),
                    other => {
                        return Err(parse_err(
                            line_no,
                            col + 1,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                }
            }
            if signs.len() != order {
                return Err(parse_err(
                    line_no,
                    signs.len().min(order) + 1,
                    format!("row has {} entries, expected {order}", signs.len()),
                ));
            }
            rows.push(SignVector::from_signs(&signs)?);
        }
        if rows.len() != order {
            return Err(parse_err(
                text.lines().count() + 1,
                1,
                format!("found {} rows, expected {order}", rows.len()),
            ));
        }
        Self::from_rows(rows)
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Candidate matrix of order 4k: an all-ones first column followed by
/// 4k − 1 pairwise distinct SH vectors. Not necessarily orthogonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QshMatrix {
    inner: SignMatrix,
}

impl QshMatrix {
    /// Prepends the unity column to `columns`, which must hold 4k − 1
    /// distinct SH vectors of order 4k.
    pub fn from_sh_columns(columns: &[ShVector]) -> Result<Self> {
        let order = columns.len() + 1;
        if !order.is_multiple_of(4) {
            return Err(Error::BadOrder(order));
        }
        let mut all = Vec::with_capacity(order);
        all.push(SignVector::ones(order)?);
        all.extend(columns.iter().map(|c| *c.as_signs()));
        Self::try_from(SignMatrix::from_columns(all)?)
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn k(&self) -> usize {
        self.order() / 4
    }

    pub fn as_sign_matrix(&self) -> &SignMatrix {
        &self.inner
    }

    /// Columns 1..m as SH vectors.
    pub fn sh_columns(&self) -> impl Iterator<Item = ShVector> + '_ {
        self.inner.columns[1..]
            .iter()
            .map(|c| ShVector::from_bits_unchecked(c.order(), c.bits()))
    }

    pub fn gram(&self) -> GramMatrix {
        self.inner.gram()
    }

    pub fn is_hadamard(&self) -> bool {
        self.inner.is_hadamard()
    }
}

impl TryFrom<SignMatrix> for QshMatrix {
    type Error = Error;

    fn try_from(m: SignMatrix) -> Result<Self> {
        let order = m.order();
        if !order.is_multiple_of(4) {
            return Err(Error::BadOrder(order));
        }
        if !m.is_seminormalized() {
            return Err(Error::Precondition("first column is not all-ones".into()));
        }
        let cols = &m.columns[1..];
        if let Some(c) = cols.iter().find(|c| !c.is_balanced()) {
            return Err(Error::InvalidVector(format!("column {c} is not balanced")));
        }
        let mut sorted: Vec<u128> = cols.iter().map(SignVector::bits).collect();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition(
                "columns are not pairwise distinct".into(),
            ));
        }
        Ok(Self { inner: m })
    }
}

/// A seminormalized Hadamard matrix: a [`QshMatrix`] with `QᵀQ = 4k·I`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ShMatrix {
    inner: QshMatrix,
}

impl ShMatrix {
    pub fn from_sh_columns(columns: &[ShVector]) -> Result<Self> {
        Self::try_from(QshMatrix::from_sh_columns(columns)?)
    }

    /// Sylvester matrix of order `2^power`; `power >= 2`.
    pub fn sylvester(power: u32) -> Result<Self> {
        if power < 2 {
            return Err(Error::BadOrder(1 << power));
        }
        let m = SignMatrix::sylvester(power)?;
        Self::try_from(QshMatrix::try_from(m)?)
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn as_qsh(&self) -> &QshMatrix {
        &self.inner
    }

    pub fn as_sign_matrix(&self) -> &SignMatrix {
        &self.inner.inner
    }

    pub fn into_sign_matrix(self) -> SignMatrix {
        self.inner.inner
    }

    pub fn sh_columns(&self) -> impl Iterator<Item = ShVector> + '_ {
        self.inner.sh_columns()
    }

    pub fn to_text(&self) -> String {
        self.as_sign_matrix().to_text()
    }
}

impl TryFrom<QshMatrix> for ShMatrix {
    type Error = Error;

    fn try_from(q: QshMatrix) -> Result<Self> {
        if !q.is_hadamard() {
            return Err(Error::Precondition(
                "columns are not pairwise orthogonal".into(),
            ));
        }
        Ok(Self { inner: q })
    }
}

impl TryFrom<SignMatrix> for ShMatrix {
    type Error = Error;

    fn try_from(m: SignMatrix) -> Result<Self> {
        Self::try_from(QshMatrix::try_from(m)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(s: &str) -> ShVector {
        s.parse().unwrap()
    }

    fn h4() -> QshMatrix {
        QshMatrix::from_sh_columns(&[sh("+-+-"), sh("++--"), sh("+--+")]).unwrap()
    }

    #[test]
    fn order_four_hadamard_gram_is_scaled_identity() {
        let q = h4();
        assert!(q.is_hadamard());
        let g = q.gram();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.get(i, j), if i == j { 4 } else { 0 });
            }
        }
    }

    #[test]
    fn gram_of_non_orthogonal_candidate() {
        let q = QshMatrix::from_sh_columns(&[sh("++--"), sh("--++"), sh("+-+-")]).unwrap();
        let g = q.gram();
        let expected = [[4, 0, 0, 0], [0, 4, -4, 0], [0, -4, 4, 0], [0, 0, 0, 4]];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(g.rows().nth(i).unwrap(), row);
        }
        assert!(!q.is_hadamard());
        assert!(!g.is_diagonal());
        assert_eq!(g.off_diagonal_abs_sum(), 8);
    }

    #[test]
    fn sylvester_small_orders() {
        let h2 = SignMatrix::sylvester(1).unwrap();
        assert_eq!(h2.to_dense::<i32>(), vec![vec![1, 1], vec![1, -1]]);
        let s4 = SignMatrix::sylvester(2).unwrap();
        assert_eq!(&s4, h4().as_sign_matrix());
        for p in 1..=7 {
            let h = SignMatrix::sylvester(p).unwrap();
            assert_eq!(h.order(), 1 << p);
            assert!(h.is_hadamard());
            assert!(h.is_normalized());
            let g = h.gram();
            assert!((0..h.order()).all(|i| g.get(i, i) == h.order() as i64));
        }
        assert!(SignMatrix::sylvester(0).is_err());
        assert!(matches!(
            SignMatrix::sylvester(8),
            Err(Error::Capacity { .. })
        ));
        assert!(ShMatrix::sylvester(3).is_ok());
        assert!(ShMatrix::sylvester(1).is_err());
    }

    #[test]
    fn qsh_invariants_enforced() {
        assert!(QshMatrix::from_sh_columns(&[sh("++--"), sh("++--"), sh("+-+-")]).is_err());
        let not_semi = SignMatrix::from_sign_rows(&[
            vec![1, -1, -1, -1],
            vec![-1, -1, 1, -1],
            vec![1, -1, 1, 1],
            vec![1, 1, 1, -1],
        ])
        .unwrap();
        assert!(not_semi.is_hadamard());
        assert!(QshMatrix::try_from(not_semi).is_err());
        let q = QshMatrix::from_sh_columns(&[sh("++--"), sh("--++"), sh("+-+-")]).unwrap();
        assert!(ShMatrix::try_from(q).is_err());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let text = h4().as_sign_matrix().to_text();
        assert_eq!(text, "order 4\n++++\n+-+-\n++--\n+--+\n");
        assert_eq!(
            SignMatrix::parse_text(&text).unwrap(),
            *h4().as_sign_matrix()
        );

        let err = SignMatrix::parse_text("order 4\n++++\n+-x-\n++--\n+--+\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 3,
                column: 3,
                ..
            }
        ));
        let err = SignMatrix::parse_text("order 4\n++++\n+-+\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(SignMatrix::parse_text("ord 4").is_err());
        assert!(SignMatrix::parse_text("order 4\n++++\n").is_err());
        let three = SignMatrix::parse_text("order 3\n+++\n+-+\n++-\n").unwrap();
        assert_eq!(three.order(), 3);
    }

    #[test]
    fn rows_and_columns_agree() {
        let h = SignMatrix::sylvester(3).unwrap();
        let t = h.transposed();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(h.get(i, j), t.get(j, i));
            }
        }
    }
}
