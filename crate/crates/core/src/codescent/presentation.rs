use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::padic::is_prime;

/// Default bound on `k·ℓ^n`, the rank of the level quotient lattice.
pub const DEFAULT_SIZE_CAP: usize = 2000;

/// `X = Λ^k / (columns of M)` over `Λ = Z_ℓ[[T]]`.
///
/// `matrix[i][j]` is the coefficient list (constant term first) of the entry
/// in generator row `i` and relation column `j`. Every row has the same
/// number `r ≥ k` of columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaPresentation {
    pub ell: u64,
    /// Coefficients are handled mod `ℓ^precision`.
    pub precision: u32,
    pub generators: usize,
    pub matrix: Vec<Vec<Vec<i64>>>,
    #[serde(skip, default = "default_cap")]
    size_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_SIZE_CAP
}

impl LambdaPresentation {
    pub fn new(ell: u64, precision: u32, matrix: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        let p = Self { ell, precision, generators: matrix.len(), matrix, size_cap: DEFAULT_SIZE_CAP };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.ell) {
            return invalid(format!("ℓ = {} is not prime", self.ell));
        }
        if self.precision < 2 {
            return invalid("precision must be at least 2");
        }
        if self.generators == 0 || self.matrix.len() != self.generators {
            return invalid(format!("expected {} generator rows, found {}", self.generators, self.matrix.len()));
        }
        let r = self.matrix[0].len();
        if self.matrix.iter().any(|row| row.len() != r) {
            return invalid("matrix rows have different lengths");
        }
        if r < self.generators {
            return invalid("fewer relations than generators: the module is not torsion");
        }
        Ok(())
    }

    pub fn relations(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn size_cap(&self) -> usize {
        self.size_cap
    }

    pub fn with_size_cap(mut self, cap: usize) -> Self {
        self.size_cap = cap;
        self
    }

    /// `X ⊕ Y`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ell != other.ell {
            return invalid("direct sum of presentations over different ℓ");
        }
        let (r1, r2) = (self.relations(), other.relations());
        let mut matrix = Vec::new();
        for row in &self.matrix {
            let mut row = row.clone();
            row.extend(std::iter::repeat_n(vec![0], r2));
            matrix.push(row);
        }
        for row in &other.matrix {
            let mut full = vec![vec![0]; r1];
            full.extend(row.iter().cloned());
            matrix.push(full);
        }
        Self::new(self.ell, self.precision.min(other.precision), matrix)
    }

    /// `Λ/(f)` for a single polynomial.
    pub fn cyclic(ell: u64, precision: u32, f: &[i64]) -> Result<Self> {
        Self::new(ell, precision, vec![vec![f.to_vec()]])
    }

    /// `Λ/(ℓ, T)`, i.e. `F_ℓ` with trivial action.
    pub fn residue_field(ell: u64, precision: u32) -> Result<Self> {
        Self::new(ell, precision, vec![vec![vec![ell as i64], vec![0, 1]]])
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("presentations serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("presentation: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_exact() {
        let x = LambdaPresentation::cyclic(3, 20, &[-3, 1])
            .unwrap()
            .direct_sum(&LambdaPresentation::residue_field(3, 20).unwrap())
            .unwrap();
        let text = x.to_json();
        let y = LambdaPresentation::from_json(&text).unwrap();
        assert_eq!(x, y);
        assert_eq!(y.to_json(), text);
        assert_eq!(y.generators, 2);
        assert_eq!(y.relations(), 3);
    }

    #[test]
    fn rejects_malformed() {
        assert!(LambdaPresentation::new(4, 10, vec![vec![vec![1]]]).is_err());
        assert!(LambdaPresentation::new(3, 10, vec![vec![vec![1]], vec![vec![1], vec![2]]]).is_err());
        assert!(LambdaPresentation::new(3, 10, vec![vec![vec![1]], vec![vec![1]]]).is_err());
        assert!(LambdaPresentation::from_json("{\"ell\": 3}").is_err());
        let bad = "{\"ell\":3,\"precision\":10,\"generators\":2,\"matrix\":[[[1]]]}";
        assert!(LambdaPresentation::from_json(bad).is_err());
    }
}
