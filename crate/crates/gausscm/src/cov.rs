use serde::{Deserialize, Serialize};

use crate::mat::{self, Mat};
use crate::{GaussError, Result, SYM_TOL};

/// Quadrature layout inside each party.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureOrder {
    /// `(x₁,p₁,x₂,p₂,…)`, Ω = ⊕ [[0,1],[−1,0]] per mode.
    #[default]
    Interleaved,
    /// `(x₁,…,xₙ,p₁,…,pₙ)` per party, Ω = [[0,I],[−I,0]] per party.
    Blocked,
}

/// Real symmetric covariance matrix split into named parties.
#[derive(Clone, Debug, PartialEq)]
pub struct CovMatrix {
    mat: Mat,
    parts: Vec<(String, usize)>,
    order: QuadratureOrder,
}

#[derive(Serialize, Deserialize)]
struct CovJson {
    mat: Vec<Vec<f64>>,
    parts: Vec<(String, usize)>,
    #[serde(default)]
    order: QuadratureOrder,
}

impl CovMatrix {
    /// Checks shape, symmetry and positive definiteness.
    pub fn new(mat: Mat, parts: Vec<(String, usize)>, order: QuadratureOrder) -> Result<Self> {
        let c = Self::symmetric(mat, parts, order)?;
        mat::require_pd(&c.mat, "covariance matrix")?;
        Ok(c)
    }

    /// Like [`CovMatrix::new`] but accepts indefinite matrices.
    pub fn symmetric(mat: Mat, parts: Vec<(String, usize)>, order: QuadratureOrder) -> Result<Self> {
        let modes: usize = parts.iter().map(|p| p.1).sum();
        if mat.nrows() != mat.ncols() || mat.nrows() != 2 * modes {
            return Err(GaussError::Shape(format!(
                "{}×{} matrix for {modes} modes",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if let Some(p) = parts.iter().find(|p| p.1 == 0) {
            return Err(GaussError::Shape(format!("party {:?} has no modes", p.0)));
        }
        for (i, p) in parts.iter().enumerate() {
            if parts[..i].iter().any(|q| q.0 == p.0) {
                return Err(GaussError::Shape(format!("party {:?} listed twice", p.0)));
            }
        }
        let asym = mat::asymmetry(&mat);
        if !(asym <= SYM_TOL * mat.amax().max(1.0)) {
            return Err(GaussError::Shape(format!("asymmetric by {asym:.3e}")));
        }
        Ok(Self { mat: mat::symmetrize(&mat), parts, order })
    }

    /// One party named "A" holding every mode.
    pub fn single(mat: Mat) -> Result<Self> {
        let n = mat.nrows() / 2;
        Self::new(mat, vec![("A".into(), n)], QuadratureOrder::Interleaved)
    }

    /// Parties given by mode counts, named A, B, C, …
    pub fn with_modes(mat: Mat, modes: &[usize]) -> Result<Self> {
        let parts = modes.iter().enumerate().map(|(i, &n)| (party_name(i), n)).collect();
        Self::new(mat, parts, QuadratureOrder::Interleaved)
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn parts(&self) -> &[(String, usize)] {
        &self.parts
    }

    pub fn labels(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.0.as_str()).collect()
    }

    pub fn order(&self) -> QuadratureOrder {
        self.order
    }

    pub fn modes(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Same parties and layout, new entries.
    pub fn with_mat(&self, mat: Mat) -> Result<Self> {
        Self::symmetric(mat, self.parts.clone(), self.order)
    }

    /// `(x, p)` row indices of every mode in party order.
    pub fn quadratures(&self) -> Vec<(usize, usize)> {
        quadratures(&self.parts.iter().map(|p| p.1).collect::<Vec<_>>(), self.order)
    }

    pub fn omega(&self) -> Mat {
        let mut w = Mat::zeros(self.dim(), self.dim());
        for (x, p) in self.quadratures() {
            w[(x, p)] = 1.0;
            w[(p, x)] = -1.0;
        }
        w
    }

    fn offset(&self, label: &str) -> Result<(usize, usize)> {
        let mut off = 0;
        for (l, n) in &self.parts {
            if l == label {
                return Ok((off, 2 * n));
            }
            off += 2 * n;
        }
        Err(GaussError::UnknownParty(label.into()))
    }

    /// Row indices of the listed parties, in the order given.
    pub fn indices(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(GaussError::Argument(format!("party {l:?} repeated")));
            }
            let (off, len) = self.offset(l)?;
            out.extend(off..off + len);
        }
        Ok(out)
    }

    fn parts_of(&self, labels: &[&str]) -> Vec<(String, usize)> {
        labels.iter().map(|l| self.parts.iter().find(|p| p.0 == *l).cloned().expect("checked by indices")).collect()
    }

    pub fn block(&self, rows: &[&str], cols: &[&str]) -> Result<Mat> {
        Ok(mat::sub(&self.mat, &self.indices(rows)?, &self.indices(cols)?))
    }

    /// Reduced matrix on the listed parties, in the order given.
    pub fn marginal(&self, labels: &[&str]) -> Result<Self> {
        let idx = self.indices(labels)?;
        Self::symmetric(mat::sub(&self.mat, &idx, &idx), self.parts_of(labels), self.order)
    }

    /// `V / V_on`, a matrix on the remaining parties in their original order.
    pub fn schur(&self, on: &[&str]) -> Result<Self> {
        let on_idx = self.indices(on)?;
        let rest: Vec<&str> = self.labels().into_iter().filter(|l| !on.contains(l)).collect();
        if rest.is_empty() {
            return Err(GaussError::Argument("Schur complement over every party".into()));
        }
        let s = mat::schur(&self.mat, &on_idx, &self.indices(&rest)?)?;
        Self::symmetric(s, self.parts_of(&rest), self.order)
    }

    pub fn is_positive_definite(&self) -> bool {
        mat::min_eig(&self.mat) > crate::PD_TOL
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c = Self::from_json_unchecked(s)?;
        mat::require_pd(&c.mat, "covariance matrix")?;
        Ok(c)
    }

    /// Parses without the positivity check.
    pub fn from_json_unchecked(s: &str) -> Result<Self> {
        let j: CovJson = serde_json::from_str(s).map_err(|e| GaussError::Json(e.to_string()))?;
        let n = j.mat.len();
        if let Some((i, r)) = j.mat.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(GaussError::Shape(format!("row {} has {} entries, expected {n}", i + 1, r.len())));
        }
        let flat: Vec<f64> = j.mat.into_iter().flatten().collect();
        Self::symmetric(Mat::from_row_slice(n, n, &flat), j.parts, j.order)
    }

    pub fn to_json(&self) -> String {
        let j = CovJson {
            mat: self.mat.row_iter().map(|r| r.iter().copied().collect()).collect(),
            parts: self.parts.clone(),
            order: self.order,
        };
        serde_json::to_string(&j).expect("plain data serializes")
    }
}

pub(crate) fn party_name(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        format!("P{i}")
    }
}

pub(crate) fn quadratures(modes: &[usize], order: QuadratureOrder) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for &n in modes {
        for k in 0..n {
            out.push(match order {
                QuadratureOrder::Interleaved => (off + 2 * k, off + 2 * k + 1),
                QuadratureOrder::Blocked => (off + k, off + n + k),
            });
        }
        off += 2 * n;
    }
    out
}
