//! Truth-table representations of functions on the hypercube `{-1,1}^n`.
//!
//! Input encoding: bit `i` of a table index set to 1 means `x_{i+1} = -1`
//! (the "True" pole), bit clear means `x_{i+1} = +1`. Variables are 0-based
//! in the API and 1-based (`x1`, `x2`, ...) in every text format.

use alloc::vec::Vec;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Largest variable count for dense tables.
pub const DENSE_LIMIT: u32 = 31;

/// Refuses dense tables above [`DENSE_LIMIT`] variables.
pub fn check_capacity(n: u32) -> Result<()> {
    if n > DENSE_LIMIT {
        Err(Error::Capacity {
            n,
            limit: DENSE_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// `χ_S(m) = (-1)^{|S ∩ m|}`.
#[inline]
pub fn character(subset: usize, input: usize) -> i64 {
    if (subset & input).count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// A Boolean function `{-1,1}^n → {-1,1}` stored as its full truth table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: u32,
    table: Vec<i8>,
}

impl BooleanFunction {
    pub fn new(n: u32, table: Vec<i8>) -> Result<Self> {
        check_capacity(n)?;
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableLength {
                expected,
                got: table.len(),
            });
        }
        if let Some((index, &v)) = table.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::NotBoolean {
                index,
                value: v as i64,
            });
        }
        Ok(BooleanFunction { n, table })
    }

    /// Builds a function from a predicate on input masks; `true` maps to `-1`.
    pub fn from_predicate(n: u32, mut pred: impl FnMut(usize) -> bool) -> Result<Self> {
        check_capacity(n)?;
        let table = (0..1usize << n)
            .map(|m| if pred(m) { -1 } else { 1 })
            .collect();
        Ok(BooleanFunction { n, table })
    }

    /// Decodes the low `2^n` bits of `bits` (bit `m` set means `f(m) = -1`).
    pub fn from_bits(n: u32, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::Capacity { n, limit: 6 });
        }
        Self::from_predicate(n, |m| bits >> m & 1 == 1)
    }

    /// Inverse of [`BooleanFunction::from_bits`]; only for `n ≤ 6`.
    pub fn to_bits(&self) -> Option<u64> {
        (self.n <= 6).then(|| {
            self.table
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == -1)
                .fold(0u64, |acc, (m, _)| acc | 1 << m)
        })
    }

    pub fn constant(n: u32, value: i8) -> Result<Self> {
        Self::from_predicate(n, |_| value == -1)
    }

    /// The dictator `x_{i+1}`.
    pub fn dictator(n: u32, i: u32) -> Result<Self> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Self::from_predicate(n, |m| m >> i & 1 == 1)
    }

    /// The character `χ_S`.
    pub fn chi(n: u32, subset: usize) -> Result<Self> {
        Self::from_predicate(n, |m| character(subset, m) == -1)
    }

    /// Parity of all `n` variables.
    pub fn parity(n: u32) -> Result<Self> {
        Self::chi(n, (1usize << n) - 1)
    }

    /// Majority of an odd number of variables.
    pub fn majority(n: u32) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::Domain(alloc::format!(
                "majority needs an odd variable count, got {n}"
            )));
        }
        Self::from_predicate(n, |m| m.count_ones() > n / 2)
    }

    /// `AND_n`: `-1` exactly when every input is `-1`.
    pub fn and(n: u32) -> Result<Self> {
        Self::from_predicate(n, |m| m == (1usize << n) - 1)
    }

    /// `OR_n`: `-1` when some input is `-1`.
    pub fn or(n: u32) -> Result<Self> {
        Self::from_predicate(n, |m| m != 0)
    }

    /// `max(x1, x2) = 1/2 + x1/2 + x2/2 - x1 x2/2`.
    pub fn max2() -> Self {
        Self::and(2).expect("n = 2 is within capacity")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    #[inline]
    pub fn value(&self, input: usize) -> i8 {
        self.table[input]
    }

    /// Number of inputs mapped to `-1`.
    pub fn count_true(&self) -> u64 {
        self.table.iter().filter(|&&v| v == -1).count() as u64
    }

    /// `E[f]`, exactly.
    pub fn mean(&self) -> Dyadic {
        let sum: i128 = self.table.iter().map(|&v| v as i128).sum();
        Dyadic::new(sum, self.n)
    }

    /// `Var(f) = 1 - E[f]^2`, exactly.
    pub fn variance(&self) -> Dyadic {
        Dyadic::ONE - self.mean().square()
    }

    /// `min(Pr[f = 1], Pr[f = -1])`, exactly.
    pub fn minority_fraction(&self) -> Dyadic {
        let t = self.count_true() as i128;
        let total = 1i128 << self.n;
        Dyadic::new(t.min(total - t), self.n)
    }

    /// `Pr_m[f(m) ≠ f(m ⊕ e_i)]`, exactly.
    pub fn variable_influence(&self, i: u32) -> Result<Dyadic> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        let bit = 1usize << i;
        let flips = (0..self.len())
            .filter(|&m| self.table[m] != self.table[m ^ bit])
            .count() as i128;
        Ok(Dyadic::new(flips, self.n))
    }

    pub fn variable_influences(&self) -> Vec<Dyadic> {
        (0..self.n)
            .map(|i| self.variable_influence(i).expect("index in range"))
            .collect()
    }

    /// `s(f, x)`: number of coordinates whose flip changes `f(x)`.
    pub fn sensitivity_at(&self, input: usize) -> u32 {
        (0..self.n)
            .filter(|&i| self.table[input] != self.table[input ^ (1 << i)])
            .count() as u32
    }

    /// `s[f] = max_x s(f, x)`.
    pub fn max_sensitivity(&self) -> u32 {
        (0..self.len())
            .map(|m| self.sensitivity_at(m))
            .max()
            .unwrap_or(0)
    }

    /// Pointwise negation `-f`.
    pub fn negate(&self) -> Self {
        BooleanFunction {
            n: self.n,
            table: self.table.iter().map(|&v| -v).collect(),
        }
    }

    /// `x ↦ f(x ⊕ flip)` (negating the inputs selected by `flip`).
    pub fn shift_inputs(&self, flip: usize) -> Self {
        BooleanFunction {
            n: self.n,
            table: (0..self.len()).map(|m| self.table[m ^ flip]).collect(),
        }
    }

    /// `g(x) = f(y)` with `y_{perm[i]} = x_i`.
    pub fn permute_variables(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n as usize {
            return Err(Error::DimensionMismatch {
                left: perm.len() as u32,
                right: self.n,
            });
        }
        let mut table = alloc::vec![0i8; self.len()];
        for (m, slot) in table.iter_mut().enumerate() {
            let mut y = 0usize;
            for (i, &p) in perm.iter().enumerate() {
                if m >> i & 1 == 1 {
                    y |= 1 << p;
                }
            }
            *slot = self.table[y];
        }
        Ok(BooleanFunction { n: self.n, table })
    }

    pub fn to_real(&self) -> RealFunction {
        RealFunction {
            n: self.n,
            table: self.table.iter().map(|&v| v as f64).collect(),
        }
    }
}

/// A real-valued function on the hypercube.
#[derive(Clone, Debug, PartialEq)]
pub struct RealFunction {
    n: u32,
    table: Vec<f64>,
}

impl RealFunction {
    pub fn new(n: u32, table: Vec<f64>) -> Result<Self> {
        check_capacity(n)?;
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableLength {
                expected,
                got: table.len(),
            });
        }
        Ok(RealFunction { n, table })
    }

    /// `(x_1 + ... + x_n) / √n`, the real-valued example on which the
    /// logarithmic factor of weak FEI is tight.
    pub fn normalized_sum(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("normalized_sum needs n ≥ 1".into()));
        }
        check_capacity(n)?;
        let scale = libm::sqrt(n as f64);
        let table = (0..1usize << n)
            .map(|m| (n as f64 - 2.0 * m.count_ones() as f64) / scale)
            .collect();
        Ok(RealFunction { n, table })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Rounds to a Boolean function if every entry is within `tol` of ±1.
    pub fn to_boolean(&self, tol: f64) -> Option<BooleanFunction> {
        let table: Option<Vec<i8>> = self
            .table
            .iter()
            .map(|&v| {
                if libm::fabs(v - 1.0) <= tol {
                    Some(1)
                } else if libm::fabs(v + 1.0) <= tol {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect();
        table.map(|table| BooleanFunction { n: self.n, table })
    }
}
