use crate::error::{Error, Result};
use crate::series::{format_rational, invert_matrix, Rational, Ring};

/// Gaussian measure `exp(-(N/t) Σ C_ij Tr(M_i M_j) / 2)` on `p` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianModel {
    p: usize,
    c: Vec<Vec<Rational>>,
    c_inv: Vec<Vec<Rational>>,
}

impl GaussianModel {
    /// Only symmetry and invertibility are required of `C`.
    pub fn new(c: Vec<Vec<Rational>>) -> Result<Self> {
        let p = c.len();
        if p == 0 || p > u8::MAX as usize || c.iter().any(|r| r.len() != p) {
            return Err(Error::Precondition("C must be a nonempty square matrix".into()));
        }
        for i in 0..p {
            for j in 0..i {
                if c[i][j] != c[j][i] {
                    return Err(Error::Precondition(format!(
                        "C is not symmetric: C[{}][{}] = {} but C[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        format_rational(&c[i][j]),
                        j + 1,
                        i + 1,
                        format_rational(&c[j][i])
                    )));
                }
            }
        }
        let c_inv = invert_matrix(&c).ok_or_else(|| Error::Precondition("C is singular".into()))?;
        Ok(GaussianModel { p, c, c_inv })
    }

    /// `p = 1` with `C = (c)`.
    pub fn scalar(c: Rational) -> Result<Self> {
        Self::new(vec![vec![c]])
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Entry `C_ij` for 1-based colors.
    pub fn c(&self, i: u8, j: u8) -> &Rational {
        &self.c[i as usize - 1][j as usize - 1]
    }

    pub fn c_matrix(&self) -> &[Vec<Rational>] {
        &self.c
    }

    /// Entry `(C⁻¹)_ij` for 1-based colors.
    pub fn c_inv(&self, i: u8, j: u8) -> &Rational {
        &self.c_inv[i as usize - 1][j as usize - 1]
    }

    pub fn c_inv_matrix(&self) -> &[Vec<Rational>] {
        &self.c_inv
    }

    pub fn det(&self) -> Rational {
        let n = self.p;
        let mut a = self.c.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Rational::zero();
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det *= &a[col][col];
            for r in col + 1..n {
                let f = &a[r][col] / &a[col][col];
                for k in col..n {
                    let sub = &f * &a[col][k];
                    a[r][k] -= sub;
                }
            }
        }
        det
    }
}
