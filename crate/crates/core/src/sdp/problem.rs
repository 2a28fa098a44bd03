use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Shape of one diagonal block of the matrix variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockSpec {
    /// Dense symmetric block constrained to be positive semidefinite.
    Psd(usize),
    /// Diagonal block of nonnegative scalars (slack variables).
    Diagonal(usize),
}

impl BlockSpec {
    pub fn size(&self) -> usize {
        match *self {
            BlockSpec::Psd(n) | BlockSpec::Diagonal(n) => n,
        }
    }
}

/// One upper-triangular entry of a symmetric block matrix. An off-diagonal
/// entry stands for both (row, col) and (col, row).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl Entry {
    pub fn new(block: usize, row: usize, col: usize, value: f64) -> Self {
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        Entry {
            block,
            row,
            col,
            value,
        }
    }

    #[inline]
    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub entries: Vec<Entry>,
    pub rhs: f64,
}

/// Standard-form SDP: minimize ⟨C, X⟩ subject to ⟨Aᵢ, X⟩ = bᵢ and X ⪰ 0
/// blockwise. The dual is maximize bᵀy subject to C − Σ yᵢAᵢ ⪰ 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub blocks: Vec<BlockSpec>,
    pub objective: Vec<Entry>,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new(blocks: Vec<BlockSpec>) -> Self {
        SdpProblem {
            blocks,
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_objective(&mut self, block: usize, row: usize, col: usize, value: f64) {
        self.objective.push(Entry::new(block, row, col, value));
    }

    /// Appends a constraint and returns its index.
    pub fn add_constraint(&mut self, entries: Vec<Entry>, rhs: f64) -> usize {
        self.constraints.push(Constraint { entries, rhs });
        self.constraints.len() - 1
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn total_order(&self) -> usize {
        self.blocks.iter().map(BlockSpec::size).sum()
    }

    pub fn rhs(&self) -> Vec<f64> {
        self.constraints.iter().map(|c| c.rhs).collect()
    }

    /// Checks that every entry conforms to the block structure.
    pub fn validate(&self) -> Result<()> {
        let check = |e: &Entry| -> Result<()> {
            let spec = self.blocks.get(e.block).ok_or_else(|| {
                Error::InvalidArgument(format!("entry refers to missing block {}", e.block))
            })?;
            if e.row > e.col || e.col >= spec.size() {
                return Err(Error::InvalidArgument(format!(
                    "entry ({}, {}) out of range for block {} of size {}",
                    e.row,
                    e.col,
                    e.block,
                    spec.size()
                )));
            }
            if matches!(spec, BlockSpec::Diagonal(_)) && !e.is_diagonal() {
                return Err(Error::InvalidArgument(format!(
                    "off-diagonal entry in diagonal block {}",
                    e.block
                )));
            }
            if !e.value.is_finite() {
                return Err(Error::InvalidArgument("non-finite coefficient".into()));
            }
            Ok(())
        };
        self.objective.iter().try_for_each(check)?;
        for c in &self.constraints {
            c.entries.iter().try_for_each(check)?;
            if !c.rhs.is_finite() {
                return Err(Error::InvalidArgument("non-finite right-hand side".into()));
            }
        }
        Ok(())
    }

    pub fn objective_matrix(&self) -> BlockMatrix {
        BlockMatrix::from_entries(&self.blocks, self.objective.iter().map(|e| (e, 1.0)))
    }

    /// 𝒜(X): the vector of ⟨Aᵢ, X⟩.
    pub fn apply(&self, x: &BlockMatrix) -> Vec<f64> {
        self.constraints.iter().map(|c| x.dot_entries(&c.entries)).collect()
    }

    /// 𝒜*(y) = Σ yᵢ Aᵢ.
    pub fn adjoint(&self, y: &[f64]) -> BlockMatrix {
        BlockMatrix::from_entries(
            &self.blocks,
            self.constraints
                .iter()
                .zip(y)
                .flat_map(|(c, &yi)| c.entries.iter().map(move |e| (e, yi))),
        )
    }

    /// Dense copy of constraint `i`, mostly for tests and certificates.
    pub fn constraint_matrix(&self, i: usize) -> BlockMatrix {
        BlockMatrix::from_entries(&self.blocks, self.constraints[i].entries.iter().map(|e| (e, 1.0)))
    }
}

/// Value of one block of a block-diagonal symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockValue {
    Dense(Mat),
    Diagonal(Vec<f64>),
}

impl BlockValue {
    pub fn dot(&self, other: &BlockValue) -> f64 {
        match (self, other) {
            (BlockValue::Dense(a), BlockValue::Dense(b)) => a.dot(b),
            (BlockValue::Diagonal(a), BlockValue::Diagonal(b)) => crate::linalg::dot(a, b),
            _ => panic!("block kinds do not match"),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            BlockValue::Dense(m) => m.min_eigenvalue(),
            BlockValue::Diagonal(d) => d.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.dot(self)
    }
}

/// Block-diagonal symmetric matrix matching a list of [`BlockSpec`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    pub blocks: Vec<BlockValue>,
}

impl BlockMatrix {
    pub fn zeros(specs: &[BlockSpec]) -> Self {
        BlockMatrix {
            blocks: specs
                .iter()
                .map(|s| match *s {
                    BlockSpec::Psd(n) => BlockValue::Dense(Mat::zeros(n)),
                    BlockSpec::Diagonal(n) => BlockValue::Diagonal(vec![0.0; n]),
                })
                .collect(),
        }
    }

    pub fn scaled_identity(specs: &[BlockSpec], s: f64) -> Self {
        BlockMatrix {
            blocks: specs
                .iter()
                .map(|sp| match *sp {
                    BlockSpec::Psd(n) => BlockValue::Dense(Mat::scaled_identity(n, s)),
                    BlockSpec::Diagonal(n) => BlockValue::Diagonal(vec![s; n]),
                })
                .collect(),
        }
    }

    pub fn from_entries<'a>(specs: &[BlockSpec], entries: impl Iterator<Item = (&'a Entry, f64)>) -> Self {
        let mut m = BlockMatrix::zeros(specs);
        for (e, scale) in entries {
            let v = e.value * scale;
            match &mut m.blocks[e.block] {
                BlockValue::Dense(d) => {
                    d[(e.row, e.col)] += v;
                    if e.row != e.col {
                        d[(e.col, e.row)] += v;
                    }
                }
                BlockValue::Diagonal(d) => d[e.row] += v,
            }
        }
        m
    }

    /// ⟨A, self⟩ for A given by symmetric entries; also valid for a
    /// non-symmetric `self`, where it equals ⟨A, sym(self)⟩.
    pub fn dot_entries(&self, entries: &[Entry]) -> f64 {
        let mut s = 0.0;
        for e in entries {
            match &self.blocks[e.block] {
                BlockValue::Dense(d) => {
                    if e.row == e.col {
                        s += e.value * d[(e.row, e.row)];
                    } else {
                        s += e.value * (d[(e.row, e.col)] + d[(e.col, e.row)]);
                    }
                }
                BlockValue::Diagonal(d) => s += e.value * d[e.row],
            }
        }
        s
    }

    pub fn dot(&self, other: &BlockMatrix) -> f64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.dot(b)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn axpy(&mut self, s: f64, other: &BlockMatrix) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            match (a, b) {
                (BlockValue::Dense(a), BlockValue::Dense(b)) => a.axpy(s, b),
                (BlockValue::Diagonal(a), BlockValue::Diagonal(b)) => {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += s * y)
                }
                _ => panic!("block kinds do not match"),
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for b in &mut self.blocks {
            match b {
                BlockValue::Dense(m) => m.scale(s),
                BlockValue::Diagonal(d) => d.iter_mut().for_each(|v| *v *= s),
            }
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(BlockValue::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn dense_block(&self, k: usize) -> Option<&Mat> {
        match &self.blocks[k] {
            BlockValue::Dense(m) => Some(m),
            BlockValue::Diagonal(_) => None,
        }
    }

    pub fn diagonal_block(&self, k: usize) -> Option<&[f64]> {
        match &self.blocks[k] {
            BlockValue::Diagonal(d) => Some(d),
            BlockValue::Dense(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_identity() {
        let mut p = SdpProblem::new(vec![BlockSpec::Psd(3), BlockSpec::Diagonal(2)]);
        p.add_constraint(vec![Entry::new(0, 2, 0, 1.5), Entry::new(1, 1, 1, -2.0)], 1.0);
        p.add_constraint(vec![Entry::new(0, 1, 1, 1.0), Entry::new(0, 0, 1, 0.25)], 0.0);
        p.validate().unwrap();
        let mut x = BlockMatrix::zeros(&p.blocks);
        if let BlockValue::Dense(m) = &mut x.blocks[0] {
            *m = Mat::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 5.0, 0.5], vec![3.0, 0.5, 7.0]]);
        }
        if let BlockValue::Diagonal(d) = &mut x.blocks[1] {
            *d = vec![0.5, 4.0];
        }
        let y = [0.7, -1.3];
        let ax = p.apply(&x);
        let lhs: f64 = ax.iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs = p.adjoint(&y).dot(&x);
        assert!((lhs - rhs).abs() < 1e-13);
        assert!((ax[0] - (1.5 * 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_entries() {
        let mut p = SdpProblem::new(vec![BlockSpec::Diagonal(2)]);
        p.add_constraint(vec![Entry::new(0, 0, 1, 1.0)], 0.0);
        assert!(p.validate().is_err());
        let mut q = SdpProblem::new(vec![BlockSpec::Psd(2)]);
        q.add_constraint(vec![Entry::new(0, 0, 2, 1.0)], 0.0);
        assert!(q.validate().is_err());
    }
}
