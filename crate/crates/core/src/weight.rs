//! Attachment weight functions `f(d)`.
//!
//! A node with degree `d` attracts a new edge with probability proportional
//! to `f(d)`. Polynomial weights `d^alpha` are memoized for small degrees;
//! tabulated weights cover arbitrary non-negative `f`.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Degrees below this bound have their polynomial weight precomputed.
pub const MEMO_DEGREES: usize = 1024;

/// What a table does when asked for a degree past its last entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailRule {
    /// Reuse the last tabulated value.
    #[default]
    Extend,
    /// Report an out-of-domain error.
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    Polynomial { alpha: f64 },
    /// `values[k]` is the weight of degree `k + 1`.
    Table { values: Arc<[f64]>, tail: TailRule },
}

#[derive(Debug, Clone)]
pub struct WeightFunction {
    kind: WeightKind,
    memo: Arc<[f64]>,
    non_decreasing: bool,
}

impl WeightFunction {
    /// `f(d) = d^alpha`. `alpha = 0` gives uniform attachment.
    pub fn polynomial(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidInput(format!(
                "polynomial exponent must be finite and non-negative, got {alpha}"
            )));
        }
        let memo: Arc<[f64]> = (0..MEMO_DEGREES)
            .map(|d| poly(d as u32, alpha))
            .collect();
        Ok(Self {
            kind: WeightKind::Polynomial { alpha },
            memo,
            non_decreasing: true,
        })
    }

    /// Tabulated weights for degrees `1..=values.len()`.
    pub fn table(values: Vec<f64>, tail: TailRule) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("weight table is empty".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "weight for degree {} must be finite and non-negative, got {v}",
                i + 1
            )));
        }
        let non_decreasing = values.windows(2).all(|w| w[0] <= w[1]);
        let values: Arc<[f64]> = values.into();
        Ok(Self {
            kind: WeightKind::Table {
                values: values.clone(),
                tail,
            },
            memo: values,
            non_decreasing,
        })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// The exponent, if this is a polynomial weight.
    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            WeightKind::Polynomial { alpha } => Some(alpha),
            WeightKind::Table { .. } => None,
        }
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.non_decreasing
    }

    /// `f(d)`. Tables with [`TailRule::Error`] reject degrees past their end;
    /// degree 0 of a table is treated as weight 0.
    pub fn weight(&self, d: u32) -> Result<f64> {
        match &self.kind {
            WeightKind::Polynomial { alpha } => Ok(match self.memo.get(d as usize) {
                Some(w) => *w,
                None => poly(d, *alpha),
            }),
            WeightKind::Table { values, tail } => {
                if d == 0 {
                    return Ok(0.0);
                }
                match values.get(d as usize - 1) {
                    Some(w) => Ok(*w),
                    None => match tail {
                        TailRule::Extend => Ok(values[values.len() - 1]),
                        TailRule::Error => Err(Error::OutOfDomain {
                            degree: d,
                            len: values.len(),
                        }),
                    },
                }
            }
        }
    }

    /// Infallible lookup for polynomial weights and extending tables.
    ///
    /// Panics on a strict table queried out of range; callers on that path
    /// must go through [`WeightFunction::weight`].
    #[inline]
    pub(crate) fn at(&self, d: u32) -> f64 {
        match &self.kind {
            WeightKind::Polynomial { alpha } => match self.memo.get(d as usize) {
                Some(w) => *w,
                None => poly(d, *alpha),
            },
            WeightKind::Table { .. } => self.weight(d).expect("degree within weight table"),
        }
    }
}

#[inline]
fn poly(d: u32, alpha: f64) -> f64 {
    if alpha == 1.0 {
        d as f64
    } else {
        (d as f64).powf(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_values() {
        assert_eq!(WeightFunction::polynomial(1.0).unwrap().weight(5).unwrap(), 5.0);
        assert_eq!(WeightFunction::polynomial(2.0).unwrap().weight(3).unwrap(), 9.0);
        assert_eq!(WeightFunction::polynomial(0.5).unwrap().weight(4).unwrap(), 2.0);
        assert_eq!(WeightFunction::polynomial(0.0).unwrap().weight(7).unwrap(), 1.0);
    }

    #[test]
    fn memo_matches_direct_evaluation() {
        let f = WeightFunction::polynomial(1.5).unwrap();
        for d in [1u32, 2, 17, 1023, 1024, 1025, 100_000] {
            assert_eq!(f.at(d), (d as f64).powf(1.5));
        }
    }

    #[test]
    fn negative_alpha_rejected() {
        assert!(WeightFunction::polynomial(-0.1).is_err());
        assert!(WeightFunction::polynomial(f64::NAN).is_err());
    }

    #[test]
    fn table_tail_rules() {
        let f = WeightFunction::table(vec![1.0, 2.0, 4.0], TailRule::Extend).unwrap();
        assert_eq!(f.weight(2).unwrap(), 2.0);
        assert_eq!(f.weight(9).unwrap(), 4.0);
        assert!(f.is_non_decreasing());

        let strict = WeightFunction::table(vec![1.0, 2.0, 4.0], TailRule::Error).unwrap();
        assert!(matches!(
            strict.weight(4),
            Err(Error::OutOfDomain { degree: 4, len: 3 })
        ));
    }

    #[test]
    fn table_validation() {
        assert!(WeightFunction::table(vec![], TailRule::Extend).is_err());
        assert!(WeightFunction::table(vec![1.0, -1.0], TailRule::Extend).is_err());
        let dec = WeightFunction::table(vec![3.0, 1.0], TailRule::Extend).unwrap();
        assert!(!dec.is_non_decreasing());
    }
}
